// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "irslab/actions.hpp"
#include "irslab/analysis.hpp"
#include "irslab/cli.hpp"
#include "irslab/constructions.hpp"
#include "irslab/parallel.hpp"
#include "irslab/rng.hpp"
#include "oracles.hpp"

using namespace irslab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::shared_ptr<const FiniteSpace> single(std::size_t n, std::optional<unsigned> levels = std::nullopt) {
  return std::make_shared<const FiniteSpace>(FiniteSpace::single_class(n, levels));
}

Homomorphism lean_hom(std::shared_ptr<const FiniteSpace> space, unsigned rank, Rng& rng) {
  std::vector<Permutation> gens{Permutation::standard_cycle(space->size())};
  for (unsigned i = 1; i < rank; ++i) gens.push_back(random_full_group_element(*space, rng));
  return Homomorphism(std::move(space), std::move(gens));
}

AtomSet random_subset(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<Atom> all(n);
  std::iota(all.begin(), all.end(), Atom{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
  AtomSet out(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.begin(), out.end());
  return out;
}

Permutation with_random_transpositions(const Permutation& p, std::size_t count, Rng& rng) {
  std::vector<Atom> img(p.images().begin(), p.images().end());
  for (std::size_t k = 0; k < count; ++k) std::swap(img[rng.below(img.size())], img[rng.below(img.size())]);
  return Permutation(img);
}

// Random permutation that moves about `moved` points.
Permutation sparse_permutation(std::size_t n, std::size_t moved, Rng& rng) {
  const AtomSet chosen = random_subset(n, std::min(moved, n), rng);
  std::vector<Atom> shuffled(chosen);
  for (std::size_t k = shuffled.size(); k > 1; --k) std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
  std::vector<Atom> img(n);
  std::iota(img.begin(), img.end(), Atom{0});
  for (std::size_t k = 0; k < chosen.size(); ++k) img[chosen[k]] = shuffled[k];
  return Permutation(img);
}

std::vector<oracle::Images> raw_images(const Homomorphism& alpha) {
  std::vector<oracle::Images> out;
  for (const auto& g : alpha.generators()) out.emplace_back(g.images().begin(), g.images().end());
  return out;
}

// 1. Word-Lipschitz bound.
Outcome word_lipschitz() {
  const auto t0 = Clock::now();
  Rng rng(1001);
  const auto space = single(1 << 12);
  const WordBall words(2, 8);
  std::size_t checks = 0, violations = 0;
  for (int pair = 0; pair < 100; ++pair) {
    const Homomorphism alpha = pair % 2 == 0 ? lean_hom(space, 2, rng)
                                             : Homomorphism(space, {random_full_group_element(*space, rng),
                                                                    random_full_group_element(*space, rng)});
    std::vector<Permutation> gens;
    for (unsigned i = 0; i < 2; ++i) gens.push_back(with_random_transpositions(alpha.generator(i), rng.below(40), rng));
    const Homomorphism beta(space, gens);
    const Rational d = hom_metric(alpha, beta);
    for (int k = 0; k < 200; ++k) {
      const ReducedWord& gamma = words.word(rng.below(words.size()));
      const Rational lhs = uniform_metric(evaluate_permutation(alpha, gamma), evaluate_permutation(beta, gamma));
      ++checks;
      if (!(lhs <= Rational(static_cast<std::int64_t>(gamma.length())) * d)) ++violations;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream s;
  s << violations << " violations in " << checks << " word checks, " << secs << " s (limit 60 s)";
  return {violations == 0 && secs < 60.0, s.str()};
}

// 2. Splice contract.
Outcome splice_contract() {
  Rng rng(2002);
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(1 << 10);
    std::size_t block = 1 + rng.below(8);
    while (n % block != 0) --block;
    const auto space = rng.below(2) ? FiniteSpace::single_class(n) : FiniteSpace::consecutive_blocks(n, block);
    const auto sigma = random_full_group_element(space, rng);
    const auto tau = random_full_group_element(space, rng);
    const auto region = random_subset(n, rng.below(n + 1), rng);
    const auto out = splice(space, sigma, region, tau);
    bool ok = in_full_group(space, out) && uniform_metric(sigma, out) <= Rational(2) * space.measure(region.size());
    for (Atom a : region) ok = ok && out(a) == tau(a);
    if (!ok) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations in 1000 instances"};
}

// 3. Periodic truncation of the odometer.
Outcome periodic_truncation() {
  Rng rng(3003);
  const auto space = single(1 << 14, 14);
  const Homomorphism alpha = lean_hom(space, 2, rng);
  std::size_t failures = 0;
  for (unsigned j = 2; j <= 10; ++j) {
    const Homomorphism beta = periodic_truncate(alpha, j);
    const auto part = orbit_partition(beta);
    for (const auto& orb : part.orbits) {
      if (!space->same_block(orb.front(), orb.back(), j)) ++failures;
    }
    if (uniform_metric(alpha.generator(0), beta.generator(0)) != Rational(1, std::int64_t{1} << j)) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures over levels 2..10 at N = 2^14"};
}

// 4. Følner construction.
Outcome folner_construction() {
  Rng rng(4004);
  const auto space = single(1 << 12);
  std::size_t failures = 0, searches = 0;
  auto verify = [&](const Homomorphism& alpha, const Rational& eps, const std::vector<std::size_t>& sizes) {
    const FolnerConstruction c = build_folner_perturbation(alpha, eps, sizes);
    const auto r = static_cast<std::int64_t>(alpha.rank());
    if (!(hom_metric(alpha, c.beta) <= eps)) ++failures;
    for (std::size_t k = 0; k < c.classes.size(); ++k) {
      const auto n = static_cast<std::int64_t>(c.classes[k].size());
      if (n != static_cast<std::int64_t>(sizes[k])) ++failures;
      if (!(boundary_ratio(c.beta, c.classes[k]) <= Rational(2 * (r - 1), n))) ++failures;
      for (std::int64_t l = 1; Rational(l) < Rational(n, 2 * (r - 1)); ++l) {
        ++searches;
        if (!folner_search(c.beta, c.transversal[k], static_cast<std::size_t>(l), 1).success) ++failures;
      }
      for (Atom x : c.classes[k]) {
        const std::int64_t l_max = (n - 1) / (2 * (r - 1));
        if (l_max < 1) break;
        ++searches;
        if (!folner_search(c.beta, x, static_cast<std::size_t>(l_max), 1).success) ++failures;
      }
    }
  };
  for (unsigned r : {2u, 3u}) {
    const Homomorphism alpha = lean_hom(space, r, rng);
    for (std::size_t n = 2; n <= 32; ++n) verify(alpha, Rational(1, 4), {n});
    std::vector<std::size_t> all(31);
    std::iota(all.begin(), all.end(), std::size_t{2});
    verify(alpha, Rational(1), all);
  }
  return {failures == 0, std::to_string(failures) + " failures, " + std::to_string(searches) + " searches, r in {2,3}, sizes 2..32"};
}

// 5. HT construction over all of S_m, m <= 4.
Outcome ht_construction() {
  Rng rng(5005);
  const auto space = single(1 << 7);
  const Homomorphism alpha = lean_hom(space, 2, rng);
  const Rational eps(1, 4);
  std::size_t failures = 0, cases = 0;
  for (std::size_t m = 1; m <= 4; ++m) {
    std::vector<std::size_t> tau(m);
    std::iota(tau.begin(), tau.end(), std::size_t{0});
    do {
      ++cases;
      const HtConstruction c = build_ht_perturbation(alpha, m, tau, eps);
      if (!(hom_metric(alpha, c.beta) < eps)) ++failures;
      if (realizes_tau_fraction(c.beta, m, tau, 2 * (1 << 7)) != Rational(1)) ++failures;
    } while (std::next_permutation(tau.begin(), tau.end()));
  }
  return {failures == 0, std::to_string(failures) + " failures over " + std::to_string(cases) + " permutations, eps = 1/4"};
}

// 6. Core-free construction.
Outcome corefree_construction() {
  Rng rng(6006);
  const auto space = single(1 << 10);
  const Homomorphism alpha = lean_hom(space, 2, rng);
  const Rational eps(1, 8);
  std::size_t failures = 0, words = 0;
  std::set<ReducedWord> seen;
  while (words < 20) {
    std::vector<Letter> raw;
    for (std::size_t i = 0, len = 1 + rng.below(6); i < len; ++i) {
      const auto g = static_cast<Letter>(1 + rng.below(2));
      raw.push_back(rng.below(2) ? g : -g);
    }
    const auto g = ReducedWord::reduce(2, raw);
    if (g.empty() || !g.is_cyclically_reduced() || g.is_power_of_first_generator() || !seen.insert(g).second) continue;
    ++words;
    const CoreFreeConstruction c = build_corefree_perturbation(alpha, g, eps);
    if (core_check(c.beta, g) != Rational(0)) ++failures;
    if (!(hom_metric(alpha, c.beta) < eps)) ++failures;
    const auto tau = tau_for_word(g);
    const std::size_t s = g.length();
    std::vector<bool> hit(s + 1, false);
    bool ok = tau.size() == s + 1;
    for (std::size_t t : tau) {
      ok = ok && t <= s && !hit[t];
      if (t <= s) hit[t] = true;
    }
    for (std::size_t i = 1; ok && i <= s; ++i) {
      const Letter l = g.letters()[s - i];
      const auto step = static_cast<std::int64_t>(tau[i]) - static_cast<std::int64_t>(tau[i - 1]);
      if ((l == 1 || l == -1) && step != l) ok = false;
    }
    if (!ok) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures over 20 words, eps = 1/8"};
}

// 7. IRS invariance.
Outcome irs_invariance() {
  Rng rng(7007);
  const auto space = single(1 << 10);
  std::size_t failures = 0;
  for (int trial = 0; trial < 4; ++trial) {
    const Homomorphism alpha = trial % 2 == 0 ? lean_hom(space, 2, rng)
                                              : Homomorphism(space, {sparse_permutation(1 << 10, rng.below(1 << 10), rng),
                                                                     sparse_permutation(1 << 10, rng.below(1 << 10), rng)});
    for (unsigned R = 0; R <= 2; ++R) {
      if (invariance_defect(alpha, R) != Rational(0)) ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " nonzero defects over 4 actions, R = 0..2"};
}

// 8. Ball stability.
Outcome ball_stability() {
  Rng rng(8008);
  const std::size_t n = 1 << 14;
  const auto space = single(n);
  std::size_t failures = 0;
  Rational worst(0);
  for (int trial = 0; trial < 50; ++trial) {
    const Homomorphism alpha = lean_hom(space, 2, rng);
    std::vector<Permutation> gens = alpha.generators();
    // Splicing on k atoms moves at most 2k <= 2^-8 N atoms.
    for (auto& g : gens) {
      const auto region = random_subset(n, 1 + rng.below(n >> 9), rng);
      g = splice(*space, g, region, random_full_group_element(*space, rng));
    }
    const Homomorphism beta(space, gens);
    if (hom_metric(alpha, beta) > Rational(1, 256)) ++failures;
    const StabilityCheck s = ball_stability_check(alpha, beta, 1);
    if (!s.holds) ++failures;
    if (s.bound != hom_metric(alpha, beta) * Rational(3) * Rational(static_cast<std::int64_t>(ball_size(2, 3)))) ++failures;
    if (s.observed > worst) worst = s.observed;
  }
  return {failures == 0, std::to_string(failures) + " failures over 50 pairs, largest observed fraction " + worst.str()};
}

// 9. Disjoint-support partitions.
Outcome partition_properties() {
  Rng rng(9009);
  std::size_t failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(1 << 10);
    const std::size_t count = 1 + rng.below(4);
    std::vector<Permutation> maps;
    for (std::size_t i = 0; i < count; ++i) maps.push_back(sparse_permutation(n, n - rng.below(n / 4 + 1), rng));
    const auto parts = disjoint_support_partition(maps);
    if (parts.size() > 2 * count + 1) ++failures;
    std::vector<int> cover(n, 0);
    for (const auto& part : parts) {
      for (Atom a : part) {
        ++cover[a];
        for (const auto& t : maps) {
          if (std::binary_search(part.begin(), part.end(), t(a))) ++failures;
        }
      }
    }
    for (Atom x = 0; x < n; ++x) {
      const bool support = std::all_of(maps.begin(), maps.end(), [&](const Permutation& t) { return t(x) != x; });
      if (cover[x] != (support ? 1 : 0)) ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " failures over 200 tuples"};
}

// 10. Oracle equivalence.
Outcome oracle_equivalence() {
  Rng rng(10010);
  std::size_t failures = 0, orbit_checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 12 + rng.below(37);
    const unsigned rank = 1 + static_cast<unsigned>(rng.below(3));
    std::vector<std::size_t> cuts{0};
    while (cuts.back() < n) cuts.push_back(std::min(n, cuts.back() + 1 + rng.below(12)));
    std::vector<Permutation> gens;
    for (unsigned g = 0; g < rank; ++g) {
      std::vector<Atom> img(n);
      std::iota(img.begin(), img.end(), Atom{0});
      for (std::size_t b = 0; b + 1 < cuts.size(); ++b) {
        if (rng.below(4) == 0) continue;
        for (std::size_t k = cuts[b + 1] - cuts[b]; k > 1; --k) std::swap(img[cuts[b] + k - 1], img[cuts[b] + rng.below(k)]);
      }
      gens.emplace_back(img);
    }
    const Homomorphism alpha(single(n), gens);
    const auto raw = raw_images(alpha);

    std::map<std::size_t, Rational> expected;
    for (auto [size, count] : oracle::index_counts(raw)) expected[size] = Rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(n));
    if (index_distribution(alpha) != expected) ++failures;

    for (const auto& orb : orbit_partition(alpha).orbits) {
      const std::size_t size = orb.size();
      std::vector<oracle::Images> local;
      for (const auto& g : raw) {
        oracle::Images im(size);
        for (std::size_t i = 0; i < size; ++i) im[i] = static_cast<std::uint32_t>(std::lower_bound(orb.begin(), orb.end(), g[orb[i]]) - orb.begin());
        local.push_back(im);
      }
      const std::size_t k_max = size <= 8 ? size : 5;
      ++orbit_checks;
      if (transitivity_degree(alpha, orb.front(), k_max) != oracle::tuple_transitivity(local, size, k_max)) ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " disagreements over 100 actions, " + std::to_string(orbit_checks) + " orbits"};
}

// 11. Determinism across worker counts.
Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / ("irslab_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto p = [&](const std::string& name) { return (dir / name).string(); };
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  std::ostringstream sink;
  std::size_t mismatches = 0, compared = 0;
  bool all_ok = true;
  for (const std::string workers : {"1", "8"}) {
    const std::string w = workers;
    auto run = [&](std::vector<std::string> args) {
      args.insert(args.begin(), {"--workers", w});
      all_ok = irslab::cli::run(args, sink, sink) == 0 && all_ok;
    };
    run({"gen", "hom", "--rank", "2", "--seed", "7", "--log2", "10", "--out", p("hom_" + w + ".json")});
    const std::string hom = p("hom_" + w + ".json");
    run({"construct", "folner", "--hom", hom, "--epsilon", "1/4", "--sizes", "4 8 16", "--out", p("fol_" + w + ".json"), "--report", p("rfol_" + w + ".json")});
    run({"construct", "ht", "--hom", hom, "--m", "3", "--tau", "2 0 1", "--epsilon", "1/8", "--out", p("ht_" + w + ".json"), "--report", p("rht_" + w + ".json")});
    run({"construct", "corefree", "--hom", hom, "--word", "s1 s2 s1 s2^-1", "--epsilon", "1/8", "--report", p("rcf_" + w + ".json")});
    run({"construct", "splice", "--hom", hom, "--region-size", "40", "--seed", "3", "--report", p("rsp_" + w + ".json")});
    run({"analyze", "irs", "--hom", hom, "--radius", "2", "--report", p("rirs_" + w + ".json")});
    run({"analyze", "stability", "--hom", hom, "--other", p("ht_" + w + ".json"), "--radius", "1", "--report", p("rst_" + w + ".json")});
    run({"sweep", "--hom", hom, "--epsilon", "1/2", "--samples", "16", "--property", "corefree", "--word", "s2 s1 s2", "--seed", "11", "--report", p("rsw_" + w + ".json")});
  }
  for (const std::string stem : {"hom", "fol", "ht", "rfol", "rht", "rcf", "rsp", "rirs", "rst", "rsw"}) {
    ++compared;
    const auto a = slurp(p(stem + "_1.json"));
    if (a.empty() || a != slurp(p(stem + "_8.json"))) ++mismatches;
  }
  std::filesystem::remove_all(dir);
  return {all_ok && mismatches == 0,
          std::to_string(mismatches) + " mismatches in " + std::to_string(compared) + " outputs" + (all_ok ? "" : ", a command failed")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"word-Lipschitz bound", word_lipschitz},
      {"splice contract", splice_contract},
      {"periodic truncation", periodic_truncation},
      {"Folner construction", folner_construction},
      {"HT construction", ht_construction},
      {"core-free construction", corefree_construction},
      {"IRS invariance", irs_invariance},
      {"ball stability", ball_stability},
      {"partition properties", partition_properties},
      {"oracle equivalence", oracle_equivalence},
      {"determinism across workers", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
