#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "irslab/actions.hpp"
#include "irslab/finite_model.hpp"
#include "irslab/free_words.hpp"
#include "irslab/rational.hpp"

namespace irslab {

/// Sorted set of atoms.
using AtomSet = std::vector<Atom>;

/// A construction whose finite-scale feasibility condition fails
/// (epsilon too small for the space, per-class cardinality mismatch, ...).
class InfeasibleConstruction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Surgery on sigma so that the result agrees with target on `region`.
///
/// result = target on A, sigma off A u sigma^-1 target(A), and a
/// class-preserving correction eta from sigma^-1 target(A) \ A onto
/// sigma(A) \ target(A) elsewhere. eta pairs the two sets in ascending atom
/// order inside each class. The result differs from sigma on at most 2|A|
/// atoms.
Permutation splice(const FiniteSpace& space, const Permutation& sigma, std::span<const Atom> region,
                   const Permutation& target);

/// Partition of the common support of the given bijections into parts A_k
/// with T_i(A_k) disjoint from A_k, by greedy colouring (ascending atoms) of
/// the graph with edges {x, T_i(x)}. Uses at most 2n + 1 parts.
std::vector<AtomSet> disjoint_support_partition(std::span<const Permutation> maps);

/// O = {sigma^(j k)(start) : 0 <= j < m} with m the largest count such that
/// m/N < bound and m * height <= N, and stride k = N / m >= height. The
/// translates O, sigma O, ..., sigma^(height-1) O are pairwise disjoint.
AtomSet rokhlin_base(const Permutation& sigma, std::size_t height, const Rational& bound, Atom start = 0);

/// First return map of sigma to `subset`, extended by the identity off it.
Permutation first_return(const Permutation& sigma, std::span<const Atom> subset);

/// Cuts every generator's cycles at the level-j filtration block
/// boundaries: each maximal within-block run of a cycle becomes a cycle of
/// its own.
Homomorphism periodic_truncate(const Homomorphism& alpha, unsigned level);

struct FolnerConstruction {
  Homomorphism beta;
  std::vector<AtomSet> classes;  // one finite class per requested size, in request order
  AtomSet region;                // union of the classes
  AtomSet transversal;           // smallest atom of each class
};

/// Builds beta near alpha in which the last generator cycles each requested
/// class and the other generators are first return maps to the complement
/// of region \ transversal.
FolnerConstruction build_folner_perturbation(const Homomorphism& alpha, const Rational& epsilon,
                                             std::span<const std::size_t> sizes);

struct HtConstruction {
  Homomorphism beta;
  AtomSet base;  // O
};

/// Splices s2 so that beta(s2)(sigma^i o) = sigma^tau(i) o for o in O,
/// where sigma = alpha(s1) and O is a Rokhlin base of height m.
HtConstruction build_ht_perturbation(const Homomorphism& alpha, std::size_t m, std::span<const std::size_t> tau,
                                     const Rational& epsilon);

/// Permutation tau of {0..s} for a cyclically reduced word w_s ... w_1 with
/// tau(i) = tau(i-1) + 1 whenever w_i = s1 and tau(i) = tau(i-1) - 1 whenever
/// w_i = s1^-1. Runs of linked positions are packed into consecutive
/// intervals, longest first.
std::vector<std::size_t> tau_for_word(const ReducedWord& g);

struct CoreFreeConstruction {
  Homomorphism beta;
  ReducedWord conjugator;
  ReducedWord core;
  std::vector<std::size_t> tau;
  AtomSet base;  // O
};

/// Splices the non-s1 generators so that beta(core) carries
/// sigma^tau(0) O onto sigma^tau(s) O, with beta(s1) = alpha(s1).
CoreFreeConstruction build_corefree_perturbation(const Homomorphism& alpha, const ReducedWord& g,
                                                 const Rational& epsilon);

/// Positions along a single N-cycle: power(x, k) = sigma^k(x) in O(1).
class CycleCoordinates {
 public:
  explicit CycleCoordinates(const Permutation& sigma, Atom start = 0);

  std::size_t position(Atom x) const { return pos_[x]; }
  Atom at(std::size_t position) const { return seq_[position % seq_.size()]; }
  Atom power(Atom x, std::int64_t k) const;

 private:
  std::vector<Atom> seq_;
  std::vector<std::size_t> pos_;
};

}  // namespace irslab
