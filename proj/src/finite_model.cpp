#include "irslab/finite_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "irslab/rng.hpp"

namespace irslab {

FiniteSpace FiniteSpace::single_class(std::size_t n_atoms, std::optional<unsigned> filtration_levels) {
  if (n_atoms == 0) throw std::invalid_argument("space needs at least one atom");
  FiniteSpace s;
  s.class_of_.assign(n_atoms, 0);
  s.classes_.resize(1);
  s.classes_[0].resize(n_atoms);
  for (std::size_t i = 0; i < n_atoms; ++i) s.classes_[0][i] = static_cast<Atom>(i);
  s.filtration_levels_ = filtration_levels;
  s.validate_filtration();
  return s;
}

FiniteSpace FiniteSpace::consecutive_blocks(std::size_t n_atoms, std::size_t block_size,
                                            std::optional<unsigned> filtration_levels) {
  if (block_size == 0 || n_atoms % block_size != 0) {
    throw std::invalid_argument("class block size must divide the number of atoms");
  }
  std::vector<std::vector<Atom>> classes(n_atoms / block_size);
  for (std::size_t i = 0; i < n_atoms; ++i) classes[i / block_size].push_back(static_cast<Atom>(i));
  return from_classes(n_atoms, classes, filtration_levels);
}

FiniteSpace FiniteSpace::from_classes(std::size_t n_atoms, const std::vector<std::vector<Atom>>& classes,
                                      std::optional<unsigned> filtration_levels) {
  if (n_atoms == 0) throw std::invalid_argument("space needs at least one atom");
  constexpr ClassId unset = ~ClassId{0};
  FiniteSpace s;
  s.class_of_.assign(n_atoms, unset);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].empty()) throw std::invalid_argument("empty class " + std::to_string(c));
    for (Atom x : classes[c]) {
      if (x >= n_atoms) throw std::invalid_argument("class atom out of range: " + std::to_string(x));
      if (s.class_of_[x] != unset) throw std::invalid_argument("atom in two classes: " + std::to_string(x));
      s.class_of_[x] = static_cast<ClassId>(c);
    }
  }
  for (std::size_t x = 0; x < n_atoms; ++x) {
    if (s.class_of_[x] == unset) throw std::invalid_argument("atom without class: " + std::to_string(x));
  }
  s.classes_ = classes;
  for (auto& members : s.classes_) std::sort(members.begin(), members.end());
  s.filtration_levels_ = filtration_levels;
  s.validate_filtration();
  return s;
}

void FiniteSpace::validate_filtration() const {
  if (!filtration_levels_) return;
  const unsigned top = *filtration_levels_;
  if (top >= 63 || (std::size_t{1} << top) > size() || size() % (std::size_t{1} << top) != 0) {
    throw std::invalid_argument("filtration blocks of size 2^" + std::to_string(top) + " do not tile " +
                                std::to_string(size()) + " atoms");
  }
  const std::size_t block = std::size_t{1} << top;
  for (std::size_t start = 0; start < size(); start += block) {
    for (std::size_t x = start + 1; x < start + block; ++x) {
      if (class_of_[x] != class_of_[start]) {
        throw std::invalid_argument("top filtration block at " + std::to_string(start) + " crosses classes");
      }
    }
  }
}

Permutation::Permutation(std::vector<Atom> forward) : forward_(std::move(forward)) {
  const std::size_t n = forward_.size();
  constexpr Atom unset = ~Atom{0};
  inverse_.assign(n, unset);
  for (std::size_t x = 0; x < n; ++x) {
    Atom y = forward_[x];
    if (y >= n || inverse_[y] != unset) throw std::invalid_argument("not a bijection at atom " + std::to_string(x));
    inverse_[y] = static_cast<Atom>(x);
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<Atom> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<Atom>(i);
  return Permutation(std::move(f));
}

Permutation Permutation::standard_cycle(std::size_t n) {
  std::vector<Atom> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<Atom>((i + 1) % n);
  return Permutation(std::move(f));
}

Permutation Permutation::from_cycles(std::size_t n, const std::vector<std::vector<Atom>>& cycles) {
  std::vector<Atom> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<Atom>(i);
  for (const auto& cycle : cycles) {
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      if (cycle[k] >= n) throw std::invalid_argument("cycle atom out of range");
      f[cycle[k]] = cycle[(k + 1) % cycle.size()];
    }
  }
  return Permutation(std::move(f));
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.forward_ = inverse_;
  p.inverse_ = forward_;
  return p;
}

Permutation Permutation::pow(std::int64_t k) const {
  Permutation base = k < 0 ? inverse() : *this;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  Permutation result = identity(size());
  while (e > 0) {
    if (e & 1) result = compose(base, result);
    base = compose(base, base);
    e >>= 1;
  }
  return result;
}

bool Permutation::is_identity() const {
  for (std::size_t x = 0; x < forward_.size(); ++x) {
    if (forward_[x] != x) return false;
  }
  return true;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) throw std::invalid_argument("composing permutations of different sizes");
  std::vector<Atom> f(inner.size());
  for (std::size_t x = 0; x < f.size(); ++x) f[x] = outer(inner(static_cast<Atom>(x)));
  return Permutation(std::move(f));
}

bool in_full_group(const FiniteSpace& space, const Permutation& g) {
  if (g.size() != space.size()) return false;
  for (Atom x = 0; x < g.size(); ++x) {
    if (space.class_of(g(x)) != space.class_of(x)) return false;
  }
  return true;
}

void require_full_group(const FiniteSpace& space, const Permutation& g) {
  if (g.size() != space.size()) {
    throw std::invalid_argument("permutation on " + std::to_string(g.size()) + " atoms, space has " +
                                std::to_string(space.size()));
  }
  for (Atom x = 0; x < g.size(); ++x) {
    if (space.class_of(g(x)) != space.class_of(x)) {
      throw std::invalid_argument("permutation moves atom " + std::to_string(x) + " out of its class");
    }
  }
}

Permutation random_full_group_element(const FiniteSpace& space, Rng& rng) {
  std::vector<Atom> f(space.size());
  for (const auto& members : space.classes()) {
    std::vector<Atom> shuffled = members;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    }
    for (std::size_t k = 0; k < members.size(); ++k) f[members[k]] = shuffled[k];
  }
  return Permutation(std::move(f));
}

Rational uniform_metric(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("uniform_metric: mismatched space sizes");
  if (a.size() == 0) return Rational(0);
  std::int64_t differ = 0;
  for (Atom x = 0; x < a.size(); ++x) differ += a(x) != b(x) ? 1 : 0;
  return Rational(differ, static_cast<std::int64_t>(a.size()));
}

CycleStructure cycle_structure(const Permutation& p) {
  CycleStructure cs;
  std::vector<bool> seen(p.size(), false);
  for (Atom x = 0; x < p.size(); ++x) {
    if (seen[x]) continue;
    std::size_t len = 0;
    for (Atom y = x; !seen[y]; y = p(y)) {
      seen[y] = true;
      ++len;
    }
    cs.lengths.push_back(len);
  }
  std::sort(cs.lengths.begin(), cs.lengths.end());
  cs.single_cycle = cs.lengths.size() == 1;
  cs.min_length = cs.lengths.empty() ? 0 : cs.lengths.front();
  return cs;
}

Permutation conjugate_to_standard_cycle(const FiniteSpace& space, const Permutation& p) {
  if (p.size() != space.size()) throw std::invalid_argument("permutation and space sizes differ");
  if (!space.is_single_class()) {
    throw std::invalid_argument("conjugation to the standard cycle needs a single-class space");
  }
  if (!cycle_structure(p).single_cycle) throw std::invalid_argument("permutation is not a single N-cycle");
  std::vector<Atom> c(p.size());
  Atom y = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    c[y] = static_cast<Atom>(k);
    y = p(y);
  }
  return Permutation(std::move(c));
}

}  // namespace irslab
