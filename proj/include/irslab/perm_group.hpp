#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace irslab {

/// Stabilizer chain of a permutation group on {0..n-1} with the fixed full
/// base 0, 1, ..., n-2, built by incremental Schreier-Sims. Meant for small
/// degrees (orbit-local computations).
class StabilizerChain {
 public:
  using Perm = std::vector<std::uint8_t>;

  /// Generators are image vectors of length `degree` (<= 255).
  StabilizerChain(std::size_t degree, const std::vector<Perm>& generators);

  std::size_t degree() const { return degree_; }

  /// |orbit of point i under the pointwise stabilizer of 0..i-1|.
  std::size_t basic_orbit_size(std::size_t level) const;

  /// Group order as a product of basic orbit sizes.
  std::uint64_t order() const;

  /// Largest k such that the group is transitive on ordered k-tuples of
  /// distinct points (degree for the full symmetric group).
  std::size_t transitivity_degree() const;

  bool is_symmetric() const;

 private:
  struct Level {
    std::vector<Perm> generators;
    std::vector<std::optional<Perm>> transversal;  // transversal[p] maps base point to p
  };

  void rebuild_transversal(std::size_t level);
  Perm compose(const Perm& outer, const Perm& inner) const;
  Perm invert(const Perm& p) const;
  bool is_identity(const Perm& p) const;
  /// Sifts g through the chain; returns the residue and the level where it
  /// dropped out (levels_.size() if it passed every level).
  std::pair<Perm, std::size_t> strip(Perm g) const;

  std::size_t degree_;
  std::vector<Level> levels_;
};

}  // namespace irslab
