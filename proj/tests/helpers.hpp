#pragma once

#include <memory>
#include <vector>

#include "irslab/actions.hpp"
#include "irslab/rng.hpp"
#include "oracles.hpp"

namespace testing_support {

inline std::shared_ptr<const irslab::FiniteSpace> single(std::size_t n, std::optional<unsigned> levels = std::nullopt) {
  return std::make_shared<const irslab::FiniteSpace>(irslab::FiniteSpace::single_class(n, levels));
}

/// Random homomorphism; with lean = true the first generator is the odometer.
inline irslab::Homomorphism random_hom(std::shared_ptr<const irslab::FiniteSpace> space, unsigned rank,
                                       std::uint64_t seed, bool lean = true) {
  irslab::Rng rng(seed);
  std::vector<irslab::Permutation> gens;
  for (unsigned i = 0; i < rank; ++i) {
    if (i == 0 && lean) {
      gens.push_back(irslab::Permutation::standard_cycle(space->size()));
    } else {
      gens.push_back(irslab::random_full_group_element(*space, rng));
    }
  }
  return irslab::Homomorphism(std::move(space), std::move(gens));
}

inline irslab::Homomorphism hom_of(std::size_t n, const std::vector<std::vector<irslab::Atom>>& images) {
  std::vector<irslab::Permutation> gens;
  for (const auto& im : images) gens.emplace_back(im);
  return irslab::Homomorphism(single(n), std::move(gens));
}

inline std::vector<oracle::Images> images_of(const irslab::Homomorphism& alpha) {
  std::vector<oracle::Images> out;
  for (const auto& g : alpha.generators()) out.emplace_back(g.images().begin(), g.images().end());
  return out;
}

/// Random permutation of {0..n-1} with most points fixed, to get small orbits.
inline irslab::Permutation sparse_permutation(std::size_t n, std::size_t moved, irslab::Rng& rng) {
  std::vector<irslab::Atom> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<irslab::Atom>(i);
  std::vector<irslab::Atom> pick(img);
  for (std::size_t k = 0; k < moved && k < n; ++k) std::swap(pick[k], pick[k + rng.below(n - k)]);
  std::vector<irslab::Atom> chosen(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(std::min(moved, n)));
  std::vector<irslab::Atom> shuffled(chosen);
  for (std::size_t k = shuffled.size(); k > 1; --k) std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
  for (std::size_t k = 0; k < chosen.size(); ++k) img[chosen[k]] = shuffled[k];
  return irslab::Permutation(img);
}

}  // namespace testing_support
