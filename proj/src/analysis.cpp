#include "irslab/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "irslab/parallel.hpp"
#include "irslab/perm_group.hpp"
#include "irslab/rng.hpp"

namespace irslab {

namespace {

// Per-generator counts of y in F with g(y) outside F, maintained as F grows.
class BoundaryCounter {
 public:
  explicit BoundaryCounter(const Homomorphism& alpha) : alpha_(alpha), out_(alpha.rank(), 0) {}

  bool contains(Atom y) const { return members_.contains(y); }
  std::size_t size() const { return members_.size(); }

  // Max outgoing count over generators if c were added.
  std::size_t max_after_adding(Atom c) const {
    std::size_t worst = 0;
    for (unsigned g = 0; g < alpha_.rank(); ++g) worst = std::max(worst, count_after(g, c));
    return worst;
  }

  void add(Atom c) {
    for (unsigned g = 0; g < alpha_.rank(); ++g) out_[g] = count_after(g, c);
    members_.insert(c);
  }

  std::size_t max_count() const { return out_.empty() ? 0 : *std::max_element(out_.begin(), out_.end()); }

 private:
  std::size_t count_after(unsigned g, Atom c) const {
    const Permutation& p = alpha_.generator(g);
    std::size_t out = out_[g];
    const Atom image = p(c);
    if (image != c && !contains(image)) ++out;
    const Atom pre = p.preimage(c);
    if (pre != c && contains(pre)) --out;
    return out;
  }

  const Homomorphism& alpha_;
  std::vector<std::size_t> out_;
  std::unordered_set<Atom> members_;
};

Rational ratio_of(std::size_t max_count, std::size_t size) {
  return Rational(2 * static_cast<std::int64_t>(max_count), static_cast<std::int64_t>(size));
}

std::vector<Atom> ball_vertices(const Homomorphism& alpha, Atom x, unsigned radius) {
  std::unordered_set<Atom> seen{x};
  std::vector<Atom> frontier{x};
  std::vector<Atom> out{x};
  for (unsigned d = 0; d < radius && !frontier.empty(); ++d) {
    std::vector<Atom> next;
    for (Atom y : frontier) {
      for (std::size_t o = 0; o < 2 * alpha.rank(); ++o) {
        const Atom z = alpha.apply(letter_at(o), y);
        if (seen.insert(z).second) {
          next.push_back(z);
          out.push_back(z);
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

// Restriction of the generators to a sorted orbit, relabelled 0..n-1.
std::vector<StabilizerChain::Perm> restricted_generators(const Homomorphism& alpha, const std::vector<Atom>& orb) {
  std::vector<StabilizerChain::Perm> gens;
  for (const Permutation& g : alpha.generators()) {
    StabilizerChain::Perm p(orb.size());
    for (std::size_t i = 0; i < orb.size(); ++i) {
      const auto it = std::lower_bound(orb.begin(), orb.end(), g(orb[i]));
      p[i] = static_cast<std::uint8_t>(it - orb.begin());
    }
    gens.push_back(std::move(p));
  }
  return gens;
}

void require_permutation(std::size_t m, std::span<const std::size_t> tau) {
  if (m == 0 || tau.size() != m) throw std::invalid_argument("tau must be a permutation of {0..m-1} with m >= 1");
  std::vector<bool> hit(m, false);
  for (std::size_t t : tau) {
    if (t >= m || hit[t]) throw std::invalid_argument("tau must be a permutation of {0..m-1} with m >= 1");
    hit[t] = true;
  }
}

}  // namespace

Rational boundary_ratio(const Homomorphism& alpha, std::span<const Atom> set) {
  if (set.empty()) throw std::invalid_argument("boundary_ratio: empty set");
  BoundaryCounter counter(alpha);
  for (Atom y : set) {
    if (!counter.contains(y)) counter.add(y);
  }
  return ratio_of(counter.max_count(), counter.size());
}

FolnerSearchResult folner_search(const Homomorphism& alpha, Atom x, std::size_t l, unsigned radius) {
  if (l == 0) throw std::invalid_argument("folner_search: l must be at least 1");
  FolnerSearchResult result;
  const std::size_t limit = orbit(alpha, x).size() / 2;
  if (limit == 0) return result;

  auto consider = [&](const AtomSet& candidate, const Rational& ratio) {
    if (!result.ratio || ratio < *result.ratio) {
      result.best = candidate;
      result.ratio = ratio;
    }
  };

  const std::vector<Atom> ball = ball_vertices(alpha, x, radius);
  const std::unordered_set<Atom> in_ball(ball.begin(), ball.end());

  // Greedy growth from x inside the ball.
  {
    BoundaryCounter counter(alpha);
    AtomSet grown{x};
    counter.add(x);
    consider(grown, ratio_of(counter.max_count(), 1));
    while (counter.size() < limit) {
      std::optional<Atom> pick;
      std::size_t pick_count = 0;
      for (Atom y : grown) {
        for (std::size_t o = 0; o < 2 * alpha.rank(); ++o) {
          const Atom c = alpha.apply(letter_at(o), y);
          if (counter.contains(c) || !in_ball.contains(c)) continue;
          const std::size_t cnt = counter.max_after_adding(c);
          if (!pick || cnt < pick_count || (cnt == pick_count && c < *pick)) {
            pick = c;
            pick_count = cnt;
          }
        }
      }
      if (!pick) break;
      counter.add(*pick);
      grown.insert(std::upper_bound(grown.begin(), grown.end(), *pick), *pick);
      consider(grown, ratio_of(counter.max_count(), counter.size()));
    }
  }

  // Generator cycles through ball vertices.
  for (unsigned g = 0; g < alpha.rank(); ++g) {
    const Permutation& p = alpha.generator(g);
    std::unordered_set<Atom> done;
    for (Atom v : ball) {
      if (done.contains(v)) continue;
      AtomSet cycle{v};
      for (Atom y = p(v); y != v && cycle.size() <= limit; y = p(y)) cycle.push_back(y);
      for (Atom y : cycle) done.insert(y);
      if (cycle.size() > limit) continue;
      std::sort(cycle.begin(), cycle.end());
      consider(cycle, boundary_ratio(alpha, cycle));
    }
  }

  result.success = result.ratio && *result.ratio < Rational(1, static_cast<std::int64_t>(l));
  return result;
}

std::size_t transitivity_degree(const Homomorphism& alpha, Atom x, std::size_t k_max) {
  if (k_max == 0) throw std::invalid_argument("transitivity_degree: k_max must be at least 1");
  const std::vector<Atom> orb = orbit(alpha, x);
  if (orb.size() > kMaxDegreeOrbit) {
    throw std::invalid_argument("transitivity_degree: orbit of " + std::to_string(orb.size()) +
                                " points exceeds the limit of " + std::to_string(kMaxDegreeOrbit));
  }
  const StabilizerChain chain(orb.size(), restricted_generators(alpha, orb));
  return std::min(k_max, chain.transitivity_degree());
}

Rational realizes_tau_fraction(const Homomorphism& alpha, std::size_t m, std::span<const std::size_t> tau,
                               unsigned radius, std::size_t tuple_budget) {
  require_permutation(m, tau);
  if (!alpha.is_lean_aperiodic()) throw std::invalid_argument("realizes_tau_fraction: alpha(s1) must be an N-cycle");
  const std::size_t n = alpha.size();
  if (m > n) throw std::invalid_argument("realizes_tau_fraction: m exceeds the number of atoms");
  bool identity = true;
  for (std::size_t i = 0; i < m; ++i) identity = identity && tau[i] == i;
  if (identity) return Rational(1);

  const Permutation& sigma = alpha.generator(0);
  const CycleCoordinates coords(sigma);
  const std::size_t letters = 2 * alpha.rank();

  // good[y]: a single letter realizes tau at y.
  std::vector<char> good(n, 0);
  parallel::for_each_index(n, [&](std::size_t y) {
    for (std::size_t o = 0; o < letters && !good[y]; ++o) {
      const Letter l = letter_at(o);
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        const Atom src = coords.power(static_cast<Atom>(y), static_cast<std::int64_t>(i));
        const Atom dst = coords.power(static_cast<Atom>(y), static_cast<std::int64_t>(tau[i]));
        ok = alpha.apply(l, src) == dst;
      }
      good[y] = ok ? 1 : 0;
    }
  });

  // Conjugating by s1^k costs 2|k| letters.
  const std::int64_t reach = radius == 0 ? -1 : std::min<std::int64_t>((radius - 1) / 2, static_cast<std::int64_t>(n) - 1);

  std::uint64_t code_limit = 1;
  bool encodable = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (code_limit > (std::uint64_t{1} << 62) / n) encodable = false;
    code_limit *= n;
  }

  std::vector<char> realized(n, 0);
  parallel::for_each_index(n, [&](std::size_t xi) {
    const Atom x = static_cast<Atom>(xi);
    for (std::int64_t k = 0; k <= reach; ++k) {
      if (good[coords.power(x, k)] || good[coords.power(x, -k)]) {
        realized[xi] = 1;
        return;
      }
    }
    if (!encodable) throw std::runtime_error("realizes_tau_fraction: tuple state space too large");
    // Exact search over images of (x, sigma x, ...) by words of length <= R.
    auto encode = [&](const std::vector<Atom>& t) {
      std::uint64_t c = 0;
      for (Atom a : t) c = c * n + a;
      return c;
    };
    std::vector<Atom> start(m), target(m);
    for (std::size_t i = 0; i < m; ++i) {
      start[i] = coords.power(x, static_cast<std::int64_t>(i));
      target[i] = coords.power(x, static_cast<std::int64_t>(tau[i]));
    }
    const std::uint64_t goal = encode(target);
    std::unordered_set<std::uint64_t> seen{encode(start)};
    std::vector<std::vector<Atom>> frontier{start};
    for (unsigned d = 0; d < radius && !frontier.empty(); ++d) {
      std::vector<std::vector<Atom>> next;
      for (const auto& t : frontier) {
        for (std::size_t o = 0; o < letters; ++o) {
          std::vector<Atom> u(m);
          for (std::size_t i = 0; i < m; ++i) u[i] = alpha.apply(letter_at(o), t[i]);
          const std::uint64_t c = encode(u);
          if (c == goal) {
            realized[xi] = 1;
            return;
          }
          if (seen.insert(c).second) {
            if (seen.size() > tuple_budget) throw std::runtime_error("realizes_tau_fraction: tuple budget exceeded");
            next.push_back(std::move(u));
          }
        }
      }
      frontier = std::move(next);
    }
  });
  const auto count = static_cast<std::size_t>(std::count(realized.begin(), realized.end(), 1));
  return alpha.space().measure(count);
}

Rational core_check(const Homomorphism& alpha, const ReducedWord& g) {
  if (g.empty()) throw std::invalid_argument("core_check: g must be a non-empty word");
  const Permutation image = evaluate_permutation(alpha, g);
  const OrbitPartition part = orbit_partition(alpha);
  std::size_t fixed = 0;
  for (const auto& orb : part.orbits) {
    if (std::all_of(orb.begin(), orb.end(), [&](Atom y) { return image(y) == y; })) fixed += orb.size();
  }
  return alpha.space().measure(fixed);
}

StabilityCheck ball_stability_check(const Homomorphism& alpha, const Homomorphism& beta, unsigned radius) {
  const Rational delta = hom_metric(alpha, beta);
  const WordBall words(alpha.rank(), 2 * radius + 1);
  const auto ta = all_traces(alpha, words);
  const auto tb = all_traces(beta, words);
  std::size_t bad = 0;
  for (std::size_t x = 0; x < ta.size(); ++x) bad += ta[x] == tb[x] ? 0 : 1;
  StabilityCheck out;
  out.observed = alpha.space().measure(bad);
  out.bound = delta * Rational(static_cast<std::int64_t>(2 * radius + 1)) *
              Rational(static_cast<std::int64_t>(words.size()));
  out.holds = out.observed <= out.bound;
  return out;
}

SymmetricGeneration generates_classwise_symmetric(const Homomorphism& alpha) {
  const OrbitPartition part = orbit_partition(alpha);
  for (const auto& orb : part.orbits) {
    if (orb.size() > kMaxSymmetricOrbit) {
      throw std::invalid_argument("generates_classwise_symmetric: orbit of " + std::to_string(orb.size()) +
                                  " points exceeds the limit of " + std::to_string(kMaxSymmetricOrbit));
    }
  }
  SymmetricGeneration out;
  out.symmetric = true;
  for (const auto& orb : part.orbits) {
    if (orb.size() != alpha.space().class_members(alpha.space().class_of(orb.front())).size()) {
      out.symmetric = false;
      break;
    }
    if (!StabilizerChain(orb.size(), restricted_generators(alpha, orb)).is_symmetric()) {
      out.symmetric = false;
      break;
    }
  }
  out.ht_consistent = true;
  if (out.symmetric) {
    for (const auto& orb : part.orbits) {
      if (transitivity_degree(alpha, orb.front(), orb.size()) != orb.size()) out.ht_consistent = false;
    }
  }
  return out;
}

SweepProperty folner_property(std::size_t l, unsigned radius) {
  return {"folner", [l, radius](const Homomorphism& beta) {
            for (Atom x = 0; x < beta.size(); ++x) {
              if (!folner_search(beta, x, l, radius).success) return false;
            }
            return true;
          }};
}

SweepProperty realizes_property(std::size_t m, std::vector<std::size_t> tau, unsigned radius) {
  require_permutation(m, tau);
  return {"realizes", [m, tau = std::move(tau), radius](const Homomorphism& beta) {
            return realizes_tau_fraction(beta, m, tau, radius) == Rational(1);
          }};
}

SweepProperty corefree_property(ReducedWord g) {
  if (g.empty()) throw std::invalid_argument("corefree_property: g must be a non-empty word");
  return {"corefree", [g = std::move(g)](const Homomorphism& beta) { return core_check(beta, g) == Rational(0); }};
}

SweepProperty periodic_property(unsigned level) {
  return {"periodic", [level](const Homomorphism& beta) {
            for (const Permutation& p : beta.generators()) {
              for (Atom x = 0; x < beta.size(); ++x) {
                if (!beta.space().same_block(x, p(x), level)) return false;
              }
            }
            return true;
          }};
}

SweepProperty constant_property(bool value) {
  return {value ? "always" : "never", [value](const Homomorphism&) { return value; }};
}

Homomorphism sample_perturbation(const Homomorphism& alpha, const Rational& epsilon, Rng& rng) {
  if (epsilon < Rational(0)) throw std::invalid_argument("sample_perturbation: epsilon must be non-negative");
  const std::size_t n = alpha.size();
  // Splicing on A moves at most 2|A| atoms.
  const Rational half = epsilon * Rational(static_cast<std::int64_t>(n), 2);
  const auto cap = std::min<std::size_t>(n, static_cast<std::size_t>(half.num() / half.den()));
  std::vector<Permutation> gens = alpha.generators();
  std::vector<Atom> atoms(n);
  for (unsigned i = 1; i < alpha.rank(); ++i) {
    const std::size_t size = rng.below(cap + 1);
    std::iota(atoms.begin(), atoms.end(), Atom{0});
    for (std::size_t k = 0; k < size; ++k) std::swap(atoms[k], atoms[k + rng.below(n - k)]);
    AtomSet region(atoms.begin(), atoms.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(region.begin(), region.end());
    const Permutation target = random_full_group_element(alpha.space(), rng);
    gens[i] = splice(alpha.space(), gens[i], region, target);
  }
  return Homomorphism(alpha.space_ptr(), std::move(gens));
}

Rational genericity_sweep(const Homomorphism& alpha, const Rational& epsilon, std::size_t samples,
                          const SweepProperty& property, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("genericity_sweep: samples must be at least 1");
  std::vector<char> hits(samples, 0);
  parallel::for_each_index(samples, [&](std::size_t k) {
    Rng rng(derive_seed(seed, Stream::Sweep, k));
    hits[k] = property.holds(sample_perturbation(alpha, epsilon, rng)) ? 1 : 0;
  });
  const auto count = std::count(hits.begin(), hits.end(), 1);
  return Rational(count, static_cast<std::int64_t>(samples));
}

}  // namespace irslab
