#include <doctest.h>

#include <set>
#include <stdexcept>

#include "helpers.hpp"
#include "irslab/analysis.hpp"
#include "irslab/constructions.hpp"
#include "irslab/rng.hpp"

using namespace irslab;
using testing_support::random_hom;
using testing_support::single;

namespace {

ReducedWord w(const char* text, unsigned rank = 2) { return ReducedWord::parse(rank, text); }

AtomSet random_subset(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<Atom> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Atom>(i);
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
  AtomSet out(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.begin(), out.end());
  return out;
}

bool tau_fits(const ReducedWord& core, const std::vector<std::size_t>& tau) {
  const std::size_t s = core.length();
  if (tau.size() != s + 1) return false;
  std::set<std::size_t> values(tau.begin(), tau.end());
  if (values.size() != s + 1 || *values.rbegin() != s) return false;
  for (std::size_t i = 1; i <= s; ++i) {
    const Letter l = core.letters()[s - i];
    const auto step = static_cast<long>(tau[i]) - static_cast<long>(tau[i - 1]);
    if ((l == 1 && step != 1) || (l == -1 && step != -1)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("splice examples") {
  const auto space = FiniteSpace::single_class(4);
  const Permutation id = Permutation::identity(4);
  const Permutation swap01 = Permutation::from_cycles(4, {{0, 1}});
  CHECK(splice(space, swap01, AtomSet{}, id) == swap01);
  CHECK(splice(space, swap01, AtomSet{0, 2}, swap01) == swap01);
  const Permutation s = splice(space, id, AtomSet{0}, swap01);
  CHECK(s == swap01);
  CHECK(uniform_metric(id, s) == Rational(1, 2));
  CHECK_THROWS_AS(splice(space, id, AtomSet{7}, swap01), std::invalid_argument);
}

TEST_CASE("splice contract on random instances") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + rng.below(200);
    const std::size_t block = n % 4 == 0 ? 4 : 1;
    const auto space = block == 4 ? FiniteSpace::consecutive_blocks(n, 4) : FiniteSpace::single_class(n);
    const auto sigma = random_full_group_element(space, rng);
    const auto tau = random_full_group_element(space, rng);
    const auto region = random_subset(n, rng.below(n + 1), rng);
    const auto out = splice(space, sigma, region, tau);
    CHECK(in_full_group(space, out));
    std::vector<bool> in_region(n, false);
    for (Atom a : region) {
      in_region[a] = true;
      CHECK(out(a) == tau(a));
    }
    for (Atom x = 0; x < n; ++x) {
      const bool touched = in_region[x] || std::binary_search(region.begin(), region.end(), tau.preimage(sigma(x)));
      if (!touched) CHECK(out(x) == sigma(x));
    }
    CHECK(uniform_metric(sigma, out) <= Rational(2) * space.measure(region.size()));
  }
}

TEST_CASE("disjoint support partition examples") {
  const Permutation t = Permutation::from_cycles(4, {{0, 1}});
  const auto parts = disjoint_support_partition(std::vector<Permutation>{t});
  CHECK(parts == std::vector<AtomSet>{{0}, {1}});
  CHECK(disjoint_support_partition(std::vector<Permutation>{Permutation::identity(5)}).empty());
  const auto tri = disjoint_support_partition(std::vector<Permutation>{Permutation::from_cycles(3, {{0, 1, 2}})});
  CHECK(tri == std::vector<AtomSet>{{0}, {1}, {2}});
  CHECK(disjoint_support_partition(std::span<const Permutation>{}).empty());
}

TEST_CASE("disjoint support partition on random tuples") {
  Rng rng(111);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.below(300);
    const std::size_t count = 1 + rng.below(4);
    std::vector<Permutation> maps;
    for (std::size_t i = 0; i < count; ++i) maps.push_back(testing_support::sparse_permutation(n, rng.below(n + 1), rng));
    const auto parts = disjoint_support_partition(maps);
    CHECK(parts.size() <= 2 * count + 1);
    std::vector<int> seen(n, 0);
    for (const auto& part : parts) {
      CHECK_FALSE(part.empty());
      for (Atom a : part) {
        ++seen[a];
        for (const auto& t : maps) CHECK_FALSE(std::binary_search(part.begin(), part.end(), t(a)));
      }
    }
    for (Atom x = 0; x < n; ++x) {
      const bool in_support = std::all_of(maps.begin(), maps.end(), [&](const Permutation& t) { return t(x) != x; });
      CHECK(seen[x] == (in_support ? 1 : 0));
    }
  }
}

TEST_CASE("rokhlin base examples") {
  const auto sigma = Permutation::standard_cycle(8);
  const auto o = rokhlin_base(sigma, 2, Rational(3, 8));
  CHECK(o == AtomSet{0, 4});
  CHECK(rokhlin_base(sigma, 1, Rational(1, 4)).size() == 1);
  CHECK_THROWS(rokhlin_base(Permutation::identity(8), 2, Rational(1, 2)));
  CHECK_THROWS_AS(rokhlin_base(sigma, 2, Rational(1, 8)), InfeasibleConstruction);

  Rng rng(121);
  const auto space = FiniteSpace::single_class(500);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = random_full_group_element(space, rng);
    const auto cyc = compose(compose(c, Permutation::standard_cycle(500)), c.inverse());
    const std::size_t h = 1 + rng.below(20);
    const Rational bound(static_cast<std::int64_t>(1 + rng.below(100)), 200);
    AtomSet base;
    try {
      base = rokhlin_base(cyc, h, bound);
    } catch (const InfeasibleConstruction&) {
      CHECK(bound <= Rational(1, 500));
      continue;
    }
    CHECK_FALSE(base.empty());
    CHECK(space.measure(base.size()) < bound);
    std::set<Atom> tower;
    for (Atom b : base) {
      Atom y = b;
      for (std::size_t i = 0; i < h; ++i, y = cyc(y)) CHECK(tower.insert(y).second);
    }
  }
}

TEST_CASE("first return examples") {
  const auto sigma = Permutation::standard_cycle(8);
  CHECK(first_return(sigma, AtomSet{0, 1, 2, 3, 4, 5, 6, 7}) == sigma);
  const auto even = first_return(sigma, AtomSet{0, 2, 4, 6});
  CHECK(even == Permutation::from_cycles(8, {{0, 2, 4, 6}}));
  const auto two = Permutation::from_cycles(6, {{0, 1, 2}, {3, 4, 5}});
  CHECK(first_return(two, AtomSet{0, 2}) == Permutation::from_cycles(6, {{0, 2}}));
  CHECK(first_return(two, AtomSet{}).is_identity());
}

TEST_CASE("periodic truncation examples") {
  const auto space = single(16, 4);
  const Homomorphism alpha(space, {Permutation::standard_cycle(16), Permutation::identity(16)});
  const auto beta = periodic_truncate(alpha, 2);
  CHECK(beta.generator(0) == Permutation::from_cycles(16, {{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}, {12, 13, 14, 15}}));
  CHECK(uniform_metric(alpha.generator(0), beta.generator(0)) == Rational(1, 4));
  CHECK(beta.generator(1).is_identity());
  CHECK(periodic_truncate(alpha, 4).generators() == alpha.generators());
  CHECK_THROWS(periodic_truncate(Homomorphism(single(16), alpha.generators()), 2));
}

TEST_CASE("periodic truncation on random actions") {
  Rng rng(131);
  const auto space = single(256, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto alpha = random_hom(space, 2, rng.next(), false);
    const auto j = static_cast<unsigned>(rng.below(9));
    const auto beta = periodic_truncate(alpha, j);
    for (unsigned g = 0; g < 2; ++g) {
      std::size_t leaving = 0;
      for (Atom x = 0; x < 256; ++x) {
        CHECK(space->same_block(x, beta.generator(g)(x), j));
        leaving += space->same_block(x, alpha.generator(g)(x), j) ? 0 : 1;
        if (space->same_block(x, alpha.generator(g)(x), j)) CHECK(beta.generator(g)(x) == alpha.generator(g)(x));
      }
      CHECK(uniform_metric(alpha.generator(g), beta.generator(g)) == space->measure(leaving));
    }
  }
}

TEST_CASE("folner perturbation examples") {
  const auto alpha = random_hom(single(1024), 2, 141);
  const auto none = build_folner_perturbation(alpha, Rational(1, 4), std::vector<std::size_t>{});
  CHECK(none.beta.generators() == alpha.generators());

  const auto c = build_folner_perturbation(alpha, Rational(1, 4), std::vector<std::size_t>{4, 8});
  CHECK(hom_metric(alpha, c.beta) <= Rational(1, 4));
  REQUIRE(c.classes.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& cls = c.classes[k];
    CHECK(cls.size() == (k == 0 ? 4u : 8u));
    CHECK(cycle_structure(first_return(c.beta.generator(1), cls)).lengths.back() == cls.size());
    for (Atom a : cls) CHECK(std::binary_search(cls.begin(), cls.end(), c.beta.generator(1)(a)));
    CHECK(boundary_ratio(c.beta, cls) <= Rational(2, static_cast<std::int64_t>(cls.size())));
  }
  CHECK_THROWS_AS(build_folner_perturbation(alpha, Rational(1, 64), std::vector<std::size_t>{32}), InfeasibleConstruction);
  CHECK_THROWS(build_folner_perturbation(random_hom(single(64), 1, 1), Rational(1, 2), std::vector<std::size_t>{2}));
}

TEST_CASE("ht perturbation examples") {
  const auto alpha = random_hom(single(8), 2, 151);
  const std::vector<std::size_t> swap{1, 0};
  const auto c = build_ht_perturbation(alpha, 2, swap, Rational(3, 5));
  CHECK(c.base.size() == 1);
  const Atom o = c.base.front();
  const auto& sigma = alpha.generator(0);
  CHECK(c.beta.generator(0) == sigma);
  CHECK(c.beta.generator(1)(o) == sigma(o));
  CHECK(c.beta.generator(1)(sigma(o)) == o);
  CHECK(hom_metric(alpha, c.beta) < Rational(3, 5));
  CHECK(realizes_tau_fraction(c.beta, 2, swap, 16) == Rational(1));
  // Witness words s1^-n s2 s1^n, evaluated directly.
  for (Atom y = 0; y < 8; ++y) {
    std::size_t n = 0;
    while (sigma.pow(static_cast<std::int64_t>(n))(y) != o) ++n;
    std::vector<Letter> letters(n, -1);
    letters.push_back(2);
    letters.insert(letters.end(), n, 1);
    const auto gamma = ReducedWord::reduce(2, letters);
    CHECK(evaluate(c.beta, gamma, y) == sigma(y));
    CHECK(evaluate(c.beta, gamma, sigma(y)) == y);
  }
  CHECK_THROWS_AS(build_ht_perturbation(alpha, 6, std::vector<std::size_t>{1, 0, 2, 3, 4, 5}, Rational(1, 100)),
                  InfeasibleConstruction);
  CHECK_THROWS(build_ht_perturbation(alpha, 2, std::vector<std::size_t>{1, 1}, Rational(1, 2)));
}

TEST_CASE("tau for word examples") {
  CHECK(tau_for_word(w("s2")) == std::vector<std::size_t>{0, 1});
  CHECK(tau_for_word(w("s1 s2")) == std::vector<std::size_t>{2, 0, 1});
  CHECK_THROWS(tau_for_word(w("s1 s1 s1")));
  CHECK_THROWS(tau_for_word(w("s1^-1 s2 s1")));
}

TEST_CASE("tau for word satisfies its constraints on random cyclically reduced words") {
  Rng rng(161);
  int checked = 0;
  while (checked < 300) {
    std::vector<Letter> raw;
    for (std::size_t i = 0, len = 1 + rng.below(10); i < len; ++i) {
      const auto g = static_cast<Letter>(rng.below(3) + 1);
      raw.push_back(rng.below(2) ? g : -g);
    }
    const auto word = ReducedWord::reduce(3, raw);
    if (word.empty() || !word.is_cyclically_reduced() || word.is_power_of_first_generator()) continue;
    CHECK(tau_fits(word, tau_for_word(word)));
    ++checked;
  }
}

TEST_CASE("corefree perturbation examples") {
  const auto alpha = random_hom(single(16), 2, 171);
  const auto c = build_corefree_perturbation(alpha, w("s2"), Rational(1, 2));
  CHECK(core_check(c.beta, w("s2")) == Rational(0));
  CHECK(hom_metric(alpha, c.beta) < Rational(1, 2));
  for (Atom o : c.base) CHECK(c.beta.generator(1)(o) == alpha.generator(0)(o));

  CHECK_THROWS(build_corefree_perturbation(alpha, w("s2^-1 s1 s2"), Rational(1, 2)));

  const auto sq = build_corefree_perturbation(alpha, w("s2 s2"), Rational(1, 2));
  CHECK(core_check(sq.beta, w("s2 s2")) == Rational(0));
  CHECK(tau_fits(sq.core, sq.tau));

  const auto conj = build_corefree_perturbation(random_hom(single(256), 3, 5), w("s3 s1 s2^-1 s1 s3^-1", 3), Rational(1, 2));
  CHECK(conj.core == w("s1 s2^-1 s1", 3));
  CHECK(core_check(conj.beta, w("s3 s1 s2^-1 s1 s3^-1", 3)) == Rational(0));
}

TEST_CASE("cycle coordinates") {
  const auto sigma = Permutation::from_cycles(5, {{0, 3, 1, 4, 2}});
  const CycleCoordinates coords(sigma);
  CHECK(coords.position(3) == 1);
  CHECK(coords.power(3, 2) == 4);
  CHECK(coords.power(3, -2) == 2);
  CHECK(coords.power(0, 12) == sigma.pow(12)(0));
}
