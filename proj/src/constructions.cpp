#include "irslab/constructions.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace irslab {

namespace {

std::vector<bool> membership(std::size_t n, std::span<const Atom> atoms) {
  std::vector<bool> mask(n, false);
  for (Atom x : atoms) {
    if (x >= n) throw std::invalid_argument("atom " + std::to_string(x) + " outside the space");
    mask[x] = true;
  }
  return mask;
}

void require_lean(const Homomorphism& alpha, const char* what) {
  if (!alpha.is_lean_aperiodic()) {
    throw std::invalid_argument(std::string(what) + ": alpha(s1) must be a single N-cycle");
  }
}

// Largest m with m / N < bound.
std::size_t max_count_below(const Rational& bound, std::size_t n) {
  if (bound.num() <= 0) return 0;
  WideInt scaled = static_cast<WideInt>(bound.num()) * static_cast<WideInt>(n);
  WideInt m = (scaled - 1) / bound.den();
  return static_cast<std::size_t>(std::min<WideInt>(m, static_cast<WideInt>(n)));
}

// Extends a partial injection to a permutation by pairing the unused
// domain and range atoms in ascending order.
Permutation complete_injection(std::size_t n, const std::map<Atom, Atom>& partial) {
  std::vector<Atom> f(n);
  std::vector<bool> in_domain(n, false);
  std::vector<bool> in_range(n, false);
  for (auto [from, to] : partial) {
    f[from] = to;
    in_domain[from] = true;
    in_range[to] = true;
  }
  std::vector<Atom> free_domain;
  std::vector<Atom> free_range;
  for (Atom x = 0; x < n; ++x) {
    if (!in_domain[x]) free_domain.push_back(x);
    if (!in_range[x]) free_range.push_back(x);
  }
  for (std::size_t k = 0; k < free_domain.size(); ++k) f[free_domain[k]] = free_range[k];
  return Permutation(std::move(f));
}

}  // namespace

CycleCoordinates::CycleCoordinates(const Permutation& sigma, Atom start) : pos_(sigma.size()) {
  seq_.reserve(sigma.size());
  Atom y = start;
  do {
    pos_[y] = seq_.size();
    seq_.push_back(y);
    y = sigma(y);
  } while (y != start && seq_.size() <= sigma.size());
  if (seq_.size() != sigma.size()) throw std::invalid_argument("permutation is not a single N-cycle");
}

Atom CycleCoordinates::power(Atom x, std::int64_t k) const {
  const auto n = static_cast<std::int64_t>(seq_.size());
  std::int64_t p = (static_cast<std::int64_t>(pos_[x]) + k % n + n) % n;
  return seq_[static_cast<std::size_t>(p)];
}

Permutation splice(const FiniteSpace& space, const Permutation& sigma, std::span<const Atom> region,
                   const Permutation& target) {
  require_full_group(space, sigma);
  require_full_group(space, target);
  const std::size_t n = space.size();
  const auto in_a = membership(n, region);

  constexpr Atom unset = ~Atom{0};
  std::vector<Atom> f(n, unset);
  std::vector<bool> in_image_tau(n, false);
  std::vector<bool> in_d(n, false);
  for (Atom x = 0; x < n; ++x) {
    if (!in_a[x]) continue;
    f[x] = target(x);
    in_image_tau[target(x)] = true;
    Atom back = sigma.preimage(target(x));
    if (!in_a[back]) in_d[back] = true;
  }
  // Domain of eta: sigma^-1 tau A \ A; range: sigma A \ tau A.
  std::vector<std::vector<Atom>> domain(space.class_count());
  std::vector<std::vector<Atom>> range(space.class_count());
  for (Atom x = 0; x < n; ++x) {
    if (in_d[x]) {
      domain[space.class_of(x)].push_back(x);
    } else if (!in_a[x]) {
      f[x] = sigma(x);
    }
    if (in_a[x] && !in_image_tau[sigma(x)]) range[space.class_of(sigma(x))].push_back(sigma(x));
  }
  std::string failures;
  for (std::size_t c = 0; c < space.class_count(); ++c) {
    if (domain[c].size() != range[c].size()) {
      failures += " class " + std::to_string(c) + " (" + std::to_string(domain[c].size()) + " vs " +
                  std::to_string(range[c].size()) + ")";
    }
  }
  if (!failures.empty()) throw InfeasibleConstruction("splice correction map infeasible in" + failures);
  for (std::size_t c = 0; c < space.class_count(); ++c) {
    std::sort(range[c].begin(), range[c].end());
    for (std::size_t k = 0; k < domain[c].size(); ++k) f[domain[c][k]] = range[c][k];
  }
  return Permutation(std::move(f));
}

std::vector<AtomSet> disjoint_support_partition(std::span<const Permutation> maps) {
  if (maps.empty()) return {};
  const std::size_t n = maps.front().size();
  for (const auto& t : maps) {
    if (t.size() != n) throw std::invalid_argument("disjoint_support_partition: mismatched sizes");
  }
  std::vector<bool> in_support(n, true);
  for (const auto& t : maps) {
    for (Atom x = 0; x < n; ++x) in_support[x] = in_support[x] && t(x) != x;
  }
  constexpr std::size_t uncoloured = ~std::size_t{0};
  std::vector<std::size_t> colour(n, uncoloured);
  std::vector<AtomSet> parts;
  std::vector<bool> taken;
  for (Atom x = 0; x < n; ++x) {
    if (!in_support[x]) continue;
    taken.assign(parts.size() + 1, false);
    for (const auto& t : maps) {
      for (Atom y : {t(x), t.preimage(x)}) {
        if (in_support[y] && colour[y] != uncoloured) taken[colour[y]] = true;
      }
    }
    std::size_t c = 0;
    while (taken[c]) ++c;
    colour[x] = c;
    if (c == parts.size()) parts.emplace_back();
    parts[c].push_back(x);
  }
  return parts;
}

AtomSet rokhlin_base(const Permutation& sigma, std::size_t height, const Rational& bound, Atom start) {
  const std::size_t n = sigma.size();
  if (!cycle_structure(sigma).single_cycle) throw std::invalid_argument("rokhlin_base: sigma is not a single cycle");
  if (height == 0 || height > n) throw InfeasibleConstruction("rokhlin_base: tower height must lie in [1, N]");
  if (start >= n) throw std::invalid_argument("rokhlin_base: start atom outside the space");
  const std::size_t m = std::min(max_count_below(bound, n), n / height);
  if (m == 0) {
    throw InfeasibleConstruction("rokhlin_base: no nonempty base of measure < " + bound.str() + " on " +
                                 std::to_string(n) + " atoms");
  }
  const std::size_t stride = n / m;
  const CycleCoordinates coords(sigma, start);
  AtomSet base;
  for (std::size_t j = 0; j < m; ++j) base.push_back(coords.at(j * stride));
  std::sort(base.begin(), base.end());
  return base;
}

Permutation first_return(const Permutation& sigma, std::span<const Atom> subset) {
  const std::size_t n = sigma.size();
  const auto in_y = membership(n, subset);
  std::vector<Atom> f(n);
  std::iota(f.begin(), f.end(), Atom{0});
  std::vector<bool> seen(n, false);
  std::vector<Atom> hits;
  for (Atom x = 0; x < n; ++x) {
    if (seen[x]) continue;
    hits.clear();
    for (Atom y = x; !seen[y]; y = sigma(y)) {
      seen[y] = true;
      if (in_y[y]) hits.push_back(y);
    }
    for (std::size_t k = 0; k < hits.size(); ++k) f[hits[k]] = hits[(k + 1) % hits.size()];
  }
  return Permutation(std::move(f));
}

Homomorphism periodic_truncate(const Homomorphism& alpha, unsigned level) {
  const FiniteSpace& space = alpha.space();
  if (!space.has_filtration()) throw std::invalid_argument("periodic_truncate: space has no filtration");
  if (level > *space.filtration_levels()) throw std::invalid_argument("periodic_truncate: level above the filtration");
  std::vector<Permutation> gens;
  for (const Permutation& p : alpha.generators()) {
    std::vector<Atom> f(p.size());
    for (Atom x = 0; x < p.size(); ++x) {
      if (space.same_block(p(x), x, level)) {
        f[x] = p(x);
        continue;
      }
      // x ends its within-block segment: jump back to the segment start.
      Atom y = x;
      while (space.same_block(p.preimage(y), y, level)) y = p.preimage(y);
      f[x] = y;
    }
    gens.emplace_back(std::move(f));
  }
  return Homomorphism(alpha.space_ptr(), std::move(gens));
}

FolnerConstruction build_folner_perturbation(const Homomorphism& alpha, const Rational& epsilon,
                                             std::span<const std::size_t> sizes) {
  require_lean(alpha, "build_folner_perturbation");
  const unsigned r = alpha.rank();
  if (r < 2) throw std::invalid_argument("build_folner_perturbation: rank must be at least 2");
  const std::size_t n = alpha.size();
  std::size_t total = 0;
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("build_folner_perturbation: class sizes must be positive");
    total += s;
  }
  const Rational budget = epsilon / Rational(2 * static_cast<std::int64_t>(r));
  if (total > n || alpha.space().measure(total) >= budget) {
    throw InfeasibleConstruction("build_folner_perturbation: classes of total size " + std::to_string(total) +
                                 " do not fit in measure < " + budget.str());
  }

  const CycleCoordinates coords(alpha.generator(0));
  FolnerConstruction out{alpha, {}, {}, {}};
  std::size_t cursor = 0;
  for (std::size_t s : sizes) {
    AtomSet cls;
    for (std::size_t k = 0; k < s; ++k) cls.push_back(coords.at(cursor++));
    std::sort(cls.begin(), cls.end());
    out.transversal.push_back(cls.front());
    out.region.insert(out.region.end(), cls.begin(), cls.end());
    out.classes.push_back(std::move(cls));
  }
  std::sort(out.region.begin(), out.region.end());
  std::sort(out.transversal.begin(), out.transversal.end());

  const Permutation cycler = Permutation::from_cycles(n, out.classes);
  std::vector<Permutation> gens = alpha.generators();
  gens[r - 1] = splice(alpha.space(), alpha.generator(r - 1), out.region, cycler);

  std::vector<bool> drop(n, false);
  for (Atom x : out.region) drop[x] = true;
  for (Atom t : out.transversal) drop[t] = false;
  AtomSet keep;
  for (Atom x = 0; x < n; ++x) {
    if (!drop[x]) keep.push_back(x);
  }
  for (unsigned i = 0; i + 1 < r; ++i) gens[i] = first_return(alpha.generator(i), keep);
  out.beta = Homomorphism(alpha.space_ptr(), std::move(gens));
  return out;
}

HtConstruction build_ht_perturbation(const Homomorphism& alpha, std::size_t m, std::span<const std::size_t> tau,
                                     const Rational& epsilon) {
  require_lean(alpha, "build_ht_perturbation");
  if (alpha.rank() < 2) throw std::invalid_argument("build_ht_perturbation: rank must be at least 2");
  if (m < 1) throw std::invalid_argument("build_ht_perturbation: m must be at least 1");
  if (tau.size() != m) throw std::invalid_argument("build_ht_perturbation: tau must permute {0..m-1}");
  std::vector<bool> hit(m, false);
  for (std::size_t v : tau) {
    if (v >= m || hit[v]) throw std::invalid_argument("build_ht_perturbation: tau is not a permutation");
    hit[v] = true;
  }
  const Permutation& sigma = alpha.generator(0);
  const AtomSet base = rokhlin_base(sigma, m, epsilon / Rational(2 * static_cast<std::int64_t>(m)));
  const CycleCoordinates coords(sigma);

  std::map<Atom, Atom> realize;
  AtomSet region;
  for (Atom o : base) {
    for (std::size_t i = 0; i < m; ++i) {
      Atom from = coords.power(o, static_cast<std::int64_t>(i));
      realize[from] = coords.power(o, static_cast<std::int64_t>(tau[i]));
      region.push_back(from);
    }
  }
  std::sort(region.begin(), region.end());
  // Inside the tower the target only permutes each column, so the
  // completion is the identity elsewhere.
  const Permutation target = complete_injection(alpha.size(), realize);
  HtConstruction out{alpha.with_generator(1, splice(alpha.space(), alpha.generator(1), region, target)), base};
  return out;
}

std::vector<std::size_t> tau_for_word(const ReducedWord& g) {
  if (!g.is_cyclically_reduced()) throw std::invalid_argument("tau_for_word: word is not cyclically reduced");
  if (g.is_power_of_first_generator()) throw std::invalid_argument("tau_for_word: word is a power of s1");
  const auto& letters = g.letters();
  const std::size_t s = letters.size();
  auto w = [&](std::size_t i) { return letters[s - i]; };  // w_i, 1-based, w_1 rightmost

  struct Run {
    std::size_t start;
    std::size_t length;
    int direction;  // +1 ascending, -1 descending
  };
  std::vector<Run> runs{{0, 1, +1}};
  for (std::size_t i = 1; i <= s; ++i) {
    const Letter l = w(i);
    if (l == 1 || l == -1) {
      Run& run = runs.back();
      if (run.length > 1 && run.direction != l) throw std::logic_error("reduced word with s1 s1^-1");
      run.direction = l;
      ++run.length;
    } else {
      runs.push_back({i, 1, +1});
    }
  }
  std::stable_sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.length > b.length; });
  std::vector<std::size_t> tau(s + 1);
  std::size_t next = 0;
  for (const Run& run : runs) {
    for (std::size_t k = 0; k < run.length; ++k) {
      tau[run.start + k] = run.direction > 0 ? next + k : next + run.length - 1 - k;
    }
    next += run.length;
  }
  return tau;
}

CoreFreeConstruction build_corefree_perturbation(const Homomorphism& alpha, const ReducedWord& g,
                                                 const Rational& epsilon) {
  require_lean(alpha, "build_corefree_perturbation");
  for (Letter l : g.letters()) {
    if (static_cast<unsigned>(l < 0 ? -l : l) > alpha.rank()) {
      throw std::invalid_argument("build_corefree_perturbation: word uses a generator beyond the rank");
    }
  }
  auto [conjugator, core] = cyclic_reduce(g);
  if (core.is_power_of_first_generator()) {
    throw std::invalid_argument("build_corefree_perturbation: word is conjugate to a power of s1");
  }
  const std::size_t s = core.length();
  auto tau = tau_for_word(core);
  const Permutation& sigma = alpha.generator(0);
  const AtomSet base = rokhlin_base(sigma, s + 1, epsilon / Rational(2 * static_cast<std::int64_t>(s + 1)));
  const CycleCoordinates coords(sigma);

  // Instruction i sends sigma^tau(i-1) O to sigma^tau(i) O through w_i.
  std::vector<std::map<Atom, Atom>> instructions(alpha.rank());
  const auto& letters = core.letters();
  for (std::size_t i = 1; i <= s; ++i) {
    const Letter l = letters[s - i];
    const auto step = static_cast<std::int64_t>(tau[i]) - static_cast<std::int64_t>(tau[i - 1]);
    if (l == 1 || l == -1) {
      if (step != l) throw std::logic_error("tau does not follow s1 letters");
      continue;
    }
    auto& rule = instructions[static_cast<std::size_t>((l < 0 ? -l : l) - 1)];
    for (Atom o : base) {
      Atom from = coords.power(o, static_cast<std::int64_t>(tau[i - 1]));
      Atom to = coords.power(o, static_cast<std::int64_t>(tau[i]));
      if (l < 0) std::swap(from, to);
      auto [it, fresh] = rule.emplace(from, to);
      if (!fresh && it->second != to) throw std::logic_error("conflicting splice instructions");
    }
  }

  std::vector<Permutation> gens = alpha.generators();
  for (unsigned j = 1; j < alpha.rank(); ++j) {
    if (instructions[j].empty()) continue;
    AtomSet region;
    for (auto [from, to] : instructions[j]) region.push_back(from);
    gens[j] = splice(alpha.space(), alpha.generator(j), region, complete_injection(alpha.size(), instructions[j]));
  }
  return {Homomorphism(alpha.space_ptr(), std::move(gens)), conjugator, core, tau, base};
}

}  // namespace irslab
