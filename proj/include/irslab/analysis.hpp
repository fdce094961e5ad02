#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irslab/actions.hpp"
#include "irslab/constructions.hpp"
#include "irslab/rational.hpp"

namespace irslab {

class Rng;

/// max over generators s of |alpha(s) F symmetric-difference F| / |F|.
Rational boundary_ratio(const Homomorphism& alpha, std::span<const Atom> set);

struct FolnerSearchResult {
  AtomSet best;                  // empty when the orbit has no admissible subset
  std::optional<Rational> ratio; // boundary ratio of `best`
  bool success = false;          // ratio < 1/l
};

/// Searches connected subsets F of the orbit of x with 1 <= |F| <= |orbit|/2:
/// sets grown greedily from x inside the radius-R Schreier ball (adding the
/// ball neighbour that minimizes the ratio, ties to the smaller atom), plus
/// every generator cycle through a ball vertex.
FolnerSearchResult folner_search(const Homomorphism& alpha, Atom x, std::size_t l, unsigned radius);

/// Largest k <= k_max such that the group generated on the orbit of x is
/// transitive on ordered k-tuples of distinct points. Orbits above 12
/// points are rejected.
std::size_t transitivity_degree(const Homomorphism& alpha, Atom x, std::size_t k_max);

inline constexpr std::size_t kMaxDegreeOrbit = 12;
inline constexpr std::size_t kMaxSymmetricOrbit = 8;

/// Fraction of atoms x for which some word of length <= R maps
/// (x, sigma x, ..., sigma^(m-1) x) to (sigma^tau(0) x, ..., sigma^tau(m-1) x),
/// sigma = alpha(s1).
///
/// Conjugates s1^-n l s1^n of single letters are tried first; atoms they do
/// not settle are decided exactly by breadth-first search over m-tuples,
/// which throws std::runtime_error past `tuple_budget` visited states.
Rational realizes_tau_fraction(const Homomorphism& alpha, std::size_t m, std::span<const std::size_t> tau,
                               unsigned radius, std::size_t tuple_budget = std::size_t{1} << 24);

/// Fraction of atoms (orbits weighted by size) on whose orbit alpha(g) is
/// the identity.
Rational core_check(const Homomorphism& alpha, const ReducedWord& g);

struct StabilityCheck {
  Rational observed;  // fraction of x with non-isomorphic radius-R balls
  Rational bound;     // delta (2R+1) |B(2R+1)|
  bool holds = false;
};

StabilityCheck ball_stability_check(const Homomorphism& alpha, const Homomorphism& beta, unsigned radius);

struct SymmetricGeneration {
  bool symmetric = false;      // every class is one orbit acted on by its full symmetric group
  bool ht_consistent = false;  // when symmetric: degree equals orbit size on every orbit
};

/// Orbits above 8 points are rejected.
SymmetricGeneration generates_classwise_symmetric(const Homomorphism& alpha);

/// A named predicate on homomorphisms for genericity sweeps.
struct SweepProperty {
  std::string name;
  std::function<bool(const Homomorphism&)> holds;
};

/// folner_search succeeds at every atom.
SweepProperty folner_property(std::size_t l, unsigned radius);
/// realizes_tau_fraction is exactly 1.
SweepProperty realizes_property(std::size_t m, std::vector<std::size_t> tau, unsigned radius);
/// core_check is exactly 0.
SweepProperty corefree_property(ReducedWord g);
/// Every orbit lies inside one level-j filtration block.
SweepProperty periodic_property(unsigned level);
SweepProperty constant_property(bool value);

/// beta with beta(s1) = alpha(s1) and every other generator spliced against
/// a random full-group element on a random set of at most eps N / 2 atoms,
/// so hom_metric(alpha, beta) <= eps.
Homomorphism sample_perturbation(const Homomorphism& alpha, const Rational& epsilon, Rng& rng);

/// Fraction of `samples` perturbations satisfying the property. Sample k
/// draws from derive_seed(seed, Stream::Sweep, k).
Rational genericity_sweep(const Homomorphism& alpha, const Rational& epsilon, std::size_t samples,
                          const SweepProperty& property, std::uint64_t seed);

}  // namespace irslab
