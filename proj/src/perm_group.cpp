#include "irslab/perm_group.hpp"

#include <stdexcept>

namespace irslab {

StabilizerChain::StabilizerChain(std::size_t degree, const std::vector<Perm>& generators) : degree_(degree) {
  if (degree == 0 || degree > 255) throw std::invalid_argument("StabilizerChain: degree must lie in [1, 255]");
  levels_.resize(degree > 1 ? degree - 1 : 0);
  if (levels_.empty()) return;
  for (const Perm& g : generators) {
    if (g.size() != degree) throw std::invalid_argument("StabilizerChain: generator of wrong degree");
    if (!is_identity(g)) levels_[0].generators.push_back(g);
  }
  for (std::size_t l = 0; l < levels_.size(); ++l) rebuild_transversal(l);

  // Incremental Schreier-Sims: process levels bottom-up; whenever a
  // Schreier generator fails to sift, add its residue to every level it
  // belongs to and resume from the level where it dropped out.
  std::size_t i = levels_.size();
  while (i > 0) {
    const std::size_t level = i - 1;
    bool restarted = false;
    for (std::size_t beta = 0; beta < degree_ && !restarted; ++beta) {
      const auto& u_beta = levels_[level].transversal[beta];
      if (!u_beta) continue;
      for (std::size_t gi = 0; gi < levels_[level].generators.size(); ++gi) {
        const Perm gen = levels_[level].generators[gi];
        const Perm image = compose(gen, *u_beta);
        const Perm& u_image = *levels_[level].transversal[gen[beta]];
        if (image == u_image) continue;
        auto [residue, dropped] = strip(compose(invert(u_image), image));
        if (dropped == levels_.size() && is_identity(residue)) continue;
        for (std::size_t l = level + 1; l <= dropped && l < levels_.size(); ++l) {
          levels_[l].generators.push_back(residue);
          rebuild_transversal(l);
        }
        i = dropped + 1;
        restarted = true;
        break;
      }
    }
    if (!restarted) --i;
  }
}

void StabilizerChain::rebuild_transversal(std::size_t level) {
  Level& lv = levels_[level];
  lv.transversal.assign(degree_, std::nullopt);
  Perm id(degree_);
  for (std::size_t p = 0; p < degree_; ++p) id[p] = static_cast<std::uint8_t>(p);
  lv.transversal[level] = id;
  std::vector<std::size_t> queue{level};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t p = queue[head];
    for (const Perm& g : lv.generators) {
      const std::size_t q = g[p];
      if (!lv.transversal[q]) {
        lv.transversal[q] = compose(g, *lv.transversal[p]);
        queue.push_back(q);
      }
    }
  }
}

StabilizerChain::Perm StabilizerChain::compose(const Perm& outer, const Perm& inner) const {
  Perm out(degree_);
  for (std::size_t p = 0; p < degree_; ++p) out[p] = outer[inner[p]];
  return out;
}

StabilizerChain::Perm StabilizerChain::invert(const Perm& p) const {
  Perm out(degree_);
  for (std::size_t x = 0; x < degree_; ++x) out[p[x]] = static_cast<std::uint8_t>(x);
  return out;
}

bool StabilizerChain::is_identity(const Perm& p) const {
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] != x) return false;
  }
  return true;
}

std::pair<StabilizerChain::Perm, std::size_t> StabilizerChain::strip(Perm g) const {
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const auto& u = levels_[l].transversal[g[l]];
    if (!u) return {g, l};
    g = compose(invert(*u), g);
  }
  return {g, levels_.size()};
}

std::size_t StabilizerChain::basic_orbit_size(std::size_t level) const {
  if (level >= levels_.size()) return 1;
  std::size_t count = 0;
  for (const auto& u : levels_[level].transversal) count += u ? 1 : 0;
  return count;
}

std::uint64_t StabilizerChain::order() const {
  std::uint64_t o = 1;
  for (std::size_t l = 0; l < levels_.size(); ++l) o *= basic_orbit_size(l);
  return o;
}

std::size_t StabilizerChain::transitivity_degree() const {
  std::size_t k = 0;
  while (k < degree_ && basic_orbit_size(k) == degree_ - k) ++k;
  return k;
}

bool StabilizerChain::is_symmetric() const { return transitivity_degree() == degree_; }

}  // namespace irslab
