#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "irslab/finite_model.hpp"
#include "irslab/free_words.hpp"
#include "irslab/rational.hpp"

namespace irslab {

/// A point of Hom(F_r, [E]): generator i (0-based) is the image of s_{i+1}.
class Homomorphism {
 public:
  /// Throws std::invalid_argument if there are no generators or a generator
  /// is not in the full group of `space`.
  Homomorphism(std::shared_ptr<const FiniteSpace> space, std::vector<Permutation> generators);

  const FiniteSpace& space() const { return *space_; }
  const std::shared_ptr<const FiniteSpace>& space_ptr() const { return space_; }
  unsigned rank() const { return static_cast<unsigned>(gens_.size()); }
  std::size_t size() const { return space_->size(); }
  const Permutation& generator(unsigned i) const { return gens_[i]; }
  const std::vector<Permutation>& generators() const { return gens_; }

  Atom apply(Letter l, Atom x) const { return l > 0 ? gens_[l - 1](x) : gens_[-l - 1].preimage(x); }

  /// The image of s1 is a single N-cycle.
  bool is_lean_aperiodic() const;

  Homomorphism with_generator(unsigned i, Permutation g) const;

 private:
  std::shared_ptr<const FiniteSpace> space_;
  std::vector<Permutation> gens_;
};

Atom evaluate(const Homomorphism& alpha, const ReducedWord& w, Atom x);
/// The permutation alpha(w).
Permutation evaluate_permutation(const Homomorphism& alpha, const ReducedWord& w);

/// max_i d_u(alpha(s_i), beta(s_i)).
Rational hom_metric(const Homomorphism& alpha, const Homomorphism& beta);

/// Sorted orbit of x under the generated group.
std::vector<Atom> orbit(const Homomorphism& alpha, Atom x);

struct OrbitPartition {
  std::vector<std::uint32_t> orbit_of;        // orbit id per atom
  std::vector<std::vector<Atom>> orbits;      // ordered by smallest member
};

OrbitPartition orbit_partition(const Homomorphism& alpha);

/// Orbit size -> fraction of atoms lying in orbits of that size. The
/// stabilizer of x has index |orbit(x)|.
std::map<std::size_t, Rational> index_distribution(const Homomorphism& alpha);

/// The set of ball words fixing a point, stored as a bitset over the
/// length-lex enumeration of the word ball of the given radius.
class StabilizerTrace {
 public:
  StabilizerTrace() = default;
  StabilizerTrace(unsigned radius, std::size_t word_count);

  unsigned radius() const { return radius_; }
  std::size_t word_count() const { return word_count_; }
  bool contains(std::size_t index) const { return (bits_[index / 64] >> (index % 64)) & 1U; }
  void insert(std::size_t index) { bits_[index / 64] |= std::uint64_t{1} << (index % 64); }
  std::size_t count() const;

  std::vector<ReducedWord> fixed_words(const WordBall& ball) const;

  /// Bit i lives in bit (i % 8) of byte i / 8; bytes are printed in order
  /// as two lowercase hex digits.
  std::string hex() const;

  friend bool operator==(const StabilizerTrace&, const StabilizerTrace&) = default;
  friend auto operator<=>(const StabilizerTrace& a, const StabilizerTrace& b) { return a.hex() <=> b.hex(); }

 private:
  unsigned radius_ = 0;
  std::size_t word_count_ = 0;
  std::vector<std::uint64_t> bits_;
};

StabilizerTrace stabilizer_trace(const Homomorphism& alpha, Atom x, unsigned radius);
StabilizerTrace stabilizer_trace(const Homomorphism& alpha, Atom x, const WordBall& ball);
/// Traces of every atom, computed concurrently.
std::vector<StabilizerTrace> all_traces(const Homomorphism& alpha, const WordBall& ball);

struct SchreierEdge {
  std::uint32_t from;
  Letter label;
  std::uint32_t to;
  bool internal;  // target lies in the ball
};

/// Radius-R ball of a Schreier graph. Every vertex carries one outgoing
/// edge per signed generator (in letter order); edges leaving the ball are
/// kept with internal = false.
struct SchreierBall {
  unsigned rank = 0;
  unsigned radius = 0;
  std::uint32_t root = 0;
  std::vector<std::uint32_t> vertices;  // BFS order, root first
  std::vector<unsigned> depth;          // parallel to vertices
  std::vector<SchreierEdge> edges;
  StabilizerTrace code;                 // trace at radius 2R + 1

  bool contains(std::uint32_t v) const;
};

/// Ball around x with atom ids as vertex ids.
SchreierBall schreier_ball(const Homomorphism& alpha, Atom x, unsigned radius);

/// Rebuilds the ball from its radius-(2R+1) code alone. Vertex ids are the
/// ball indices of the length-lex smallest word reaching each vertex.
SchreierBall ball_from_code(unsigned rank, unsigned radius, const StabilizerTrace& code);

/// Decided by equality of the radius-(2R+1) traces.
bool balls_isomorphic(const Homomorphism& alpha, Atom x, const Homomorphism& beta, Atom y, unsigned radius);

/// Root- and label-preserving vertex bijection between two balls, found by
/// simultaneous traversal, or nullopt if none exists.
std::optional<std::map<std::uint32_t, std::uint32_t>> match_balls(const SchreierBall& a, const SchreierBall& b);

struct EmpiricalIRS {
  unsigned radius = 0;
  std::vector<std::pair<StabilizerTrace, Rational>> weights;  // ascending by trace hex
};

EmpiricalIRS empirical_irs(const Homomorphism& alpha, unsigned radius);

/// Max over signed generators s of the total-variation distance between the
/// laws of x -> trace_R(x) and x -> {w : alpha(s^-1 w s) x = x}.
Rational invariance_defect(const Homomorphism& alpha, unsigned radius);

}  // namespace irslab
