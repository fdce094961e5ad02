#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "irslab/rational.hpp"

namespace irslab {

class Rng;

using Atom = std::uint32_t;
using ClassId = std::uint32_t;

/// N atoms of mass 1/N each, a partition into classes (the equivalence
/// relation E) and an optional dyadic filtration.
///
/// Filtration level j partitions the atoms into consecutive blocks of 2^j
/// indices; level 0 is the discrete partition and the top level L must
/// refine the class partition. Blocks are addressed as x >> j.
class FiniteSpace {
 public:
  /// One class containing every atom.
  static FiniteSpace single_class(std::size_t n_atoms, std::optional<unsigned> filtration_levels = std::nullopt);

  /// Classes of `block_size` consecutive atoms.
  static FiniteSpace consecutive_blocks(std::size_t n_atoms, std::size_t block_size,
                                        std::optional<unsigned> filtration_levels = std::nullopt);

  static FiniteSpace from_classes(std::size_t n_atoms, const std::vector<std::vector<Atom>>& classes,
                                  std::optional<unsigned> filtration_levels = std::nullopt);

  std::size_t size() const { return class_of_.size(); }
  ClassId class_of(Atom x) const { return class_of_[x]; }
  std::size_t class_count() const { return classes_.size(); }
  const std::vector<Atom>& class_members(ClassId c) const { return classes_[c]; }
  const std::vector<std::vector<Atom>>& classes() const { return classes_; }
  bool is_single_class() const { return classes_.size() == 1; }

  bool has_filtration() const { return filtration_levels_.has_value(); }
  std::optional<unsigned> filtration_levels() const { return filtration_levels_; }
  std::size_t block_of(Atom x, unsigned level) const { return static_cast<std::size_t>(x) >> level; }
  bool same_block(Atom a, Atom b, unsigned level) const { return block_of(a, level) == block_of(b, level); }

  /// Uniform measure of a set with `count` atoms.
  Rational measure(std::size_t count) const { return Rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(size())); }

  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

 private:
  FiniteSpace() = default;
  void validate_filtration() const;

  std::vector<ClassId> class_of_;
  std::vector<std::vector<Atom>> classes_;
  std::optional<unsigned> filtration_levels_;
};

/// A bijection of {0..N-1} stored with its inverse.
///
/// Composition follows the left-action convention used everywhere in the
/// library: compose(a, b)(x) = a(b(x)).
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument unless `forward` is a bijection.
  explicit Permutation(std::vector<Atom> forward);

  static Permutation identity(std::size_t n);
  /// The standard odometer x -> x + 1 mod n.
  static Permutation standard_cycle(std::size_t n);
  /// Product of the given disjoint cycles; atoms not listed are fixed.
  static Permutation from_cycles(std::size_t n, const std::vector<std::vector<Atom>>& cycles);

  std::size_t size() const { return forward_.size(); }
  Atom operator()(Atom x) const { return forward_[x]; }
  Atom preimage(Atom x) const { return inverse_[x]; }
  std::span<const Atom> images() const { return forward_; }

  Permutation inverse() const;
  Permutation pow(std::int64_t k) const;
  bool is_identity() const;

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.forward_ == b.forward_; }

 private:
  std::vector<Atom> forward_;
  std::vector<Atom> inverse_;
};

/// compose(outer, inner)(x) = outer(inner(x)).
Permutation compose(const Permutation& outer, const Permutation& inner);

/// Elements of the full group [E] are class-preserving permutations.
using FullGroupElement = Permutation;

bool in_full_group(const FiniteSpace& space, const Permutation& g);
/// Throws std::invalid_argument naming the first atom moved out of its class.
void require_full_group(const FiniteSpace& space, const Permutation& g);

/// Uniformly random class-preserving permutation.
Permutation random_full_group_element(const FiniteSpace& space, Rng& rng);

/// Normalized Hamming distance |{x : a(x) != b(x)}| / N.
Rational uniform_metric(const Permutation& a, const Permutation& b);

struct CycleStructure {
  std::vector<std::size_t> lengths;  // ascending
  bool single_cycle = false;
  std::size_t min_length = 0;

  bool all_at_least(std::size_t bound) const { return min_length >= bound; }
};

CycleStructure cycle_structure(const Permutation& p);

/// Returns c with c * p * c^-1 = standard_cycle(N). c relabels the cycle of p
/// starting at atom 0, so c(p^k(0)) = k.
///
/// Requires p to be a single N-cycle and the space to be a single class.
Permutation conjugate_to_standard_cycle(const FiniteSpace& space, const Permutation& p);

}  // namespace irslab
