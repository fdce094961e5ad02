#include "irslab/cli.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "irslab/actions.hpp"
#include "irslab/analysis.hpp"
#include "irslab/constructions.hpp"
#include "irslab/parallel.hpp"
#include "irslab/rng.hpp"
#include "irslab/serialize.hpp"

namespace irslab::cli {

namespace {

struct Options {
  unsigned workers = 0;
  std::string report_path;
  std::string out_path;
  std::string hom_path;
  std::string other_path;
  std::string space_path;

  std::optional<unsigned> log2;
  std::string classes = "single";
  std::optional<unsigned> filtration;
  std::string model = "lean-aperiodic";
  unsigned rank = 2;
  std::optional<std::uint64_t> seed;

  unsigned generator = 2;
  std::string region;
  std::size_t region_size = 0;
  unsigned level = 0;
  std::string epsilon;
  std::string sizes;
  std::size_t m = 0;
  std::string tau;
  std::string word;

  unsigned radius = 1;
  std::optional<unsigned> long_radius;
  Atom atom = 0;
  std::size_t l = 1;
  std::optional<std::size_t> k_max;
  std::size_t samples = 0;
  std::string property;
  std::string format;
  std::string table = "irs";
};

/// Report layout: {command, inputs, results, checks, passed}.
struct Report {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  Json checks = Json::array();
  bool passed = true;

  void check(const std::string& name, bool ok) {
    Json c;
    c["name"] = name;
    c["passed"] = ok;
    checks.push_back(std::move(c));
    passed = passed && ok;
  }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["results"] = results;
    j["checks"] = checks;
    j["passed"] = passed;
    return j;
  }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot write " + path);
  file << text;
}

Json read_json(const std::string& path) { return Json::parse(read_text(path)); }

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::istringstream in(text);
  std::vector<T> out;
  long long v = 0;
  while (in >> v) {
    if (v < 0) throw std::invalid_argument(std::string(what) + ": negative entry");
    out.push_back(static_cast<T>(v));
  }
  if (!in.eof()) throw std::invalid_argument(std::string(what) + ": expected whitespace-separated integers");
  return out;
}

std::shared_ptr<const FiniteSpace> load_space(const Options& o) {
  if (o.space_path.empty()) return nullptr;
  return std::make_shared<const FiniteSpace>(space_from_json(read_json(o.space_path)));
}

Homomorphism load_hom(const std::string& path, const Options& o) { return hom_from_json(read_json(path), load_space(o)); }

Rational parse_epsilon(const Options& o) {
  const Rational eps = Rational::parse(o.epsilon);
  if (eps <= Rational(0)) throw std::invalid_argument("epsilon must be positive");
  return eps;
}

Json atoms_json(std::span<const Atom> atoms) { return std::vector<Atom>(atoms.begin(), atoms.end()); }

void emit_hom(const Homomorphism& beta, const Options& o) {
  if (!o.out_path.empty()) write_text(o.out_path, dump(hom_to_json(beta)));
}

// The tau(i) - tau(i-1) = +-1 constraints of each s1^+-1 letter, read right to left.
bool tau_fits_word(const ReducedWord& core, const std::vector<std::size_t>& tau) {
  const std::size_t s = core.length();
  if (tau.size() != s + 1) return false;
  std::vector<bool> hit(s + 1, false);
  for (std::size_t t : tau) {
    if (t > s || hit[t]) return false;
    hit[t] = true;
  }
  for (std::size_t i = 1; i <= s; ++i) {
    const Letter l = core.letters()[s - i];
    const auto step = static_cast<std::int64_t>(tau[i]) - static_cast<std::int64_t>(tau[i - 1]);
    if ((l == 1 || l == -1) && step != l) return false;
  }
  return true;
}

// ---- gen ------------------------------------------------------------------

FiniteSpace make_space(const Options& o) {
  if (!o.log2) throw std::invalid_argument("--log2 or --space is required");
  if (*o.log2 > 26) throw std::invalid_argument("--log2 above 26 is not supported");
  const std::size_t n = std::size_t{1} << *o.log2;
  if (o.classes == "single") return FiniteSpace::single_class(n, o.filtration ? o.filtration : o.log2);
  if (o.classes.rfind("blocks:", 0) == 0) {
    const auto k = static_cast<std::size_t>(std::stoull(o.classes.substr(7)));
    if (k == 0 || n % k != 0) throw std::invalid_argument("--classes blocks:k needs k dividing 2^log2");
    std::optional<unsigned> levels = o.filtration;
    if (!levels && std::has_single_bit(k)) levels = static_cast<unsigned>(std::countr_zero(k));
    return FiniteSpace::consecutive_blocks(n, k, levels);
  }
  throw std::invalid_argument("--classes must be 'single' or 'blocks:<k>'");
}

int gen_space(const Options& o, std::ostream& out) {
  const std::string text = dump(space_to_json(make_space(o)));
  if (o.out_path.empty()) {
    out << text;
  } else {
    write_text(o.out_path, text);
  }
  return 0;
}

int gen_hom(const Options& o, std::ostream& out) {
  auto space = o.space_path.empty() ? std::make_shared<const FiniteSpace>(make_space(o)) : load_space(o);
  if (o.rank == 0) throw std::invalid_argument("--rank must be at least 1");
  std::vector<Permutation> gens;
  for (unsigned i = 0; i < o.rank; ++i) {
    if (i == 0 && o.model == "lean-aperiodic") {
      gens.push_back(Permutation::standard_cycle(space->size()));
      continue;
    }
    Rng rng(derive_seed(*o.seed, Stream::GenerateHomomorphism, i));
    gens.push_back(random_full_group_element(*space, rng));
  }
  const std::string text = dump(hom_to_json(Homomorphism(space, std::move(gens))));
  if (o.out_path.empty()) {
    out << text;
  } else {
    write_text(o.out_path, text);
  }
  return 0;
}

// ---- construct ------------------------------------------------------------

void construct_splice(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  if (o.generator < 1 || o.generator > alpha.rank()) throw std::invalid_argument("--generator outside 1..rank");
  const std::size_t n = alpha.size();
  Rng rng(derive_seed(*o.seed, Stream::ConstructSplice, 0));
  AtomSet region;
  if (!o.region.empty()) {
    region = parse_list<Atom>(o.region, "--region");
    std::sort(region.begin(), region.end());
    region.erase(std::unique(region.begin(), region.end()), region.end());
    if (!region.empty() && region.back() >= n) throw std::invalid_argument("--region atom outside the space");
  } else {
    if (o.region_size > n) throw std::invalid_argument("--region-size exceeds the number of atoms");
    std::vector<Atom> atoms(n);
    std::iota(atoms.begin(), atoms.end(), Atom{0});
    for (std::size_t k = 0; k < o.region_size; ++k) std::swap(atoms[k], atoms[k + rng.below(n - k)]);
    region.assign(atoms.begin(), atoms.begin() + static_cast<std::ptrdiff_t>(o.region_size));
    std::sort(region.begin(), region.end());
  }
  const Permutation target = random_full_group_element(alpha.space(), rng);
  const Permutation& sigma = alpha.generator(o.generator - 1);
  Permutation spliced = splice(alpha.space(), sigma, region, target);

  report.inputs["generator"] = o.generator;
  report.inputs["region"] = atoms_json(region);
  const Rational distance = uniform_metric(sigma, spliced);
  const Rational bound = Rational(2) * alpha.space().measure(region.size());
  report.results["distance"] = to_json(distance);
  report.results["bound"] = to_json(bound);
  report.check("agrees_with_target_on_region",
               std::all_of(region.begin(), region.end(), [&](Atom x) { return spliced(x) == target(x); }));
  report.check("distance_at_most_twice_region_measure", distance <= bound);
  report.check("in_full_group", in_full_group(alpha.space(), spliced));
  emit_hom(alpha.with_generator(o.generator - 1, std::move(spliced)), o);
}

void construct_periodic(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const Homomorphism beta = periodic_truncate(alpha, o.level);
  report.inputs["level"] = o.level;
  Json distances = Json::array();
  for (unsigned i = 0; i < alpha.rank(); ++i) distances.push_back(to_json(uniform_metric(alpha.generator(i), beta.generator(i))));
  report.results["generator_distances"] = std::move(distances);
  report.results["hom_metric"] = to_json(hom_metric(alpha, beta));
  bool inside = true;
  for (const Permutation& p : beta.generators()) {
    for (Atom x = 0; x < beta.size(); ++x) inside = inside && beta.space().same_block(x, p(x), o.level);
  }
  report.check("orbits_inside_level_blocks", inside);
  report.check("in_full_group", std::all_of(beta.generators().begin(), beta.generators().end(),
                                            [&](const Permutation& p) { return in_full_group(beta.space(), p); }));
  emit_hom(beta, o);
}

void construct_folner(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const Rational eps = parse_epsilon(o);
  const auto sizes = parse_list<std::size_t>(o.sizes, "--sizes");
  const FolnerConstruction c = build_folner_perturbation(alpha, eps, sizes);
  const auto r = static_cast<std::int64_t>(alpha.rank());
  report.inputs["epsilon"] = to_json(eps);
  report.inputs["sizes"] = sizes;
  report.inputs["radius"] = o.radius;
  const Rational metric = hom_metric(alpha, c.beta);
  report.results["hom_metric"] = to_json(metric);
  report.check("hom_metric_at_most_epsilon", metric <= eps);

  Json classes = Json::array();
  bool ratios_ok = true;
  bool search_ok = true;
  for (std::size_t k = 0; k < c.classes.size(); ++k) {
    const auto n = static_cast<std::int64_t>(c.classes[k].size());
    const Rational ratio = boundary_ratio(c.beta, c.classes[k]);
    const Rational bound(2 * (r - 1), n);
    // Largest l with l < n / (2(r-1)).
    const std::int64_t l_max = (n - 1) / (2 * (r - 1));
    Json entry;
    entry["size"] = n;
    entry["boundary_ratio"] = to_json(ratio);
    entry["bound"] = to_json(bound);
    entry["l_max"] = l_max;
    ratios_ok = ratios_ok && ratio <= bound;
    if (l_max >= 1) {
      const auto found = folner_search(c.beta, c.transversal[k], static_cast<std::size_t>(l_max), o.radius);
      entry["search_ratio"] = found.ratio ? to_json(*found.ratio) : Json(nullptr);
      entry["search_success"] = found.success;
      search_ok = search_ok && found.success;
    }
    classes.push_back(std::move(entry));
  }
  report.results["classes"] = std::move(classes);
  report.check("class_boundary_ratios_within_bound", ratios_ok);
  report.check("folner_search_succeeds_below_bound", search_ok);
  emit_hom(c.beta, o);
}

void construct_ht(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const Rational eps = parse_epsilon(o);
  const auto tau = parse_list<std::size_t>(o.tau, "--tau");
  const HtConstruction c = build_ht_perturbation(alpha, o.m, tau, eps);
  const unsigned radius = o.long_radius.value_or(static_cast<unsigned>(2 * alpha.size()));
  report.inputs["m"] = o.m;
  report.inputs["tau"] = tau;
  report.inputs["epsilon"] = to_json(eps);
  report.inputs["radius"] = radius;
  const Rational metric = hom_metric(alpha, c.beta);
  const Rational fraction = realizes_tau_fraction(c.beta, o.m, tau, radius);
  report.results["base_size"] = c.base.size();
  report.results["hom_metric"] = to_json(metric);
  report.results["realized_fraction"] = to_json(fraction);
  report.check("hom_metric_below_epsilon", metric < eps);
  report.check("tau_realized_everywhere", fraction == Rational(1));
  emit_hom(c.beta, o);
}

void construct_corefree(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const Rational eps = parse_epsilon(o);
  const ReducedWord g = ReducedWord::parse(alpha.rank(), o.word);
  const CoreFreeConstruction c = build_corefree_perturbation(alpha, g, eps);
  report.inputs["word"] = g.str();
  report.inputs["epsilon"] = to_json(eps);
  const Rational metric = hom_metric(alpha, c.beta);
  const Rational core = core_check(c.beta, g);
  report.results["conjugator"] = c.conjugator.str();
  report.results["core"] = c.core.str();
  report.results["tau"] = c.tau;
  report.results["base_size"] = c.base.size();
  report.results["hom_metric"] = to_json(metric);
  report.results["core_fraction"] = to_json(core);
  report.check("hom_metric_below_epsilon", metric < eps);
  report.check("word_nontrivial_on_every_orbit", core == Rational(0));
  report.check("tau_fits_word", tau_fits_word(c.core, c.tau));
  report.check("beta_s1_unchanged", c.beta.generator(0) == alpha.generator(0));
  emit_hom(c.beta, o);
}

// ---- analyze --------------------------------------------------------------

void analyze_index(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const auto dist = index_distribution(alpha);
  Json rows = Json::array();
  Rational total(0);
  for (const auto& [size, weight] : dist) {
    Json row;
    row["orbit_size"] = size;
    row["weight"] = to_json(weight);
    rows.push_back(std::move(row));
    total = total + weight;
  }
  report.results["distribution"] = std::move(rows);
  report.check("weights_sum_to_one", total == Rational(1));
}

void analyze_irs(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  report.inputs["radius"] = o.radius;
  const EmpiricalIRS irs = empirical_irs(alpha, o.radius);
  Json rows = Json::array();
  Rational total(0);
  for (const auto& [trace, weight] : irs.weights) {
    Json row;
    row["trace_hex"] = trace.hex();
    row["weight"] = to_json(weight);
    rows.push_back(std::move(row));
    total = total + weight;
  }
  const Rational defect = invariance_defect(alpha, o.radius);
  report.results["traces"] = std::move(rows);
  report.results["invariance_defect"] = to_json(defect);
  report.check("weights_sum_to_one", total == Rational(1));
  report.check("conjugation_invariant", defect == Rational(0));
}

void analyze_folner(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  if (o.atom >= alpha.size()) throw std::invalid_argument("--atom outside the space");
  report.inputs["atom"] = o.atom;
  report.inputs["l"] = o.l;
  report.inputs["radius"] = o.radius;
  const FolnerSearchResult found = folner_search(alpha, o.atom, o.l, o.radius);
  report.results["set"] = atoms_json(found.best);
  report.results["ratio"] = found.ratio ? to_json(*found.ratio) : Json(nullptr);
  report.results["success"] = found.success;
  if (found.ratio) report.check("ratio_matches_set", boundary_ratio(alpha, found.best) == *found.ratio);
}

void analyze_core(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const ReducedWord g = ReducedWord::parse(alpha.rank(), o.word);
  report.inputs["word"] = g.str();
  report.results["fixed_fraction"] = to_json(core_check(alpha, g));
}

void analyze_realize(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const auto tau = parse_list<std::size_t>(o.tau, "--tau");
  const std::size_t m = o.m == 0 ? tau.size() : o.m;
  const unsigned radius = o.long_radius.value_or(static_cast<unsigned>(2 * alpha.size()));
  report.inputs["m"] = m;
  report.inputs["tau"] = tau;
  report.inputs["radius"] = radius;
  report.results["fraction"] = to_json(realizes_tau_fraction(alpha, m, tau, radius));
}

void analyze_degree(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  if (o.atom >= alpha.size()) throw std::invalid_argument("--atom outside the space");
  const std::size_t orbit_size = orbit(alpha, o.atom).size();
  const std::size_t k_max = o.k_max.value_or(orbit_size);
  report.inputs["atom"] = o.atom;
  report.inputs["k_max"] = k_max;
  report.results["orbit_size"] = orbit_size;
  report.results["degree"] = transitivity_degree(alpha, o.atom, k_max);
}

void analyze_stability(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const Homomorphism beta = load_hom(o.other_path, o);
  report.inputs["radius"] = o.radius;
  const StabilityCheck s = ball_stability_check(alpha, beta, o.radius);
  report.results["delta"] = to_json(hom_metric(alpha, beta));
  report.results["observed"] = to_json(s.observed);
  report.results["bound"] = to_json(s.bound);
  report.check("observed_within_bound", s.holds);
}

void analyze_symmetric(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const SymmetricGeneration s = generates_classwise_symmetric(alpha);
  report.results["symmetric"] = s.symmetric;
  report.results["ht_consistent"] = s.ht_consistent;
  report.check("degree_matches_orbit_size_when_symmetric", s.ht_consistent);
}

// ---- sweep ----------------------------------------------------------------

SweepProperty make_property(const Options& o, const Homomorphism& alpha, Json& params) {
  const std::string& p = o.property;
  if (p == "folner") {
    params["l"] = o.l;
    params["radius"] = o.radius;
    return folner_property(o.l, o.radius);
  }
  if (p == "realizes") {
    auto tau = parse_list<std::size_t>(o.tau, "--tau");
    const unsigned radius = o.long_radius.value_or(static_cast<unsigned>(2 * alpha.size()));
    params["tau"] = tau;
    params["radius"] = radius;
    const std::size_t m = tau.size();
    return realizes_property(m, std::move(tau), radius);
  }
  if (p == "corefree") {
    ReducedWord g = ReducedWord::parse(alpha.rank(), o.word);
    params["word"] = g.str();
    return corefree_property(std::move(g));
  }
  if (p == "periodic") {
    params["level"] = o.level;
    return periodic_property(o.level);
  }
  if (p == "always") return constant_property(true);
  if (p == "never") return constant_property(false);
  throw std::invalid_argument("--property must be one of folner, realizes, corefree, periodic, always, never");
}

void run_sweep(const Options& o, Report& report) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  const Rational eps = parse_epsilon(o);
  Json params = Json::object();
  const SweepProperty property = make_property(o, alpha, params);
  report.inputs["epsilon"] = to_json(eps);
  report.inputs["samples"] = o.samples;
  report.inputs["seed"] = *o.seed;
  report.inputs["property"] = property.name;
  report.inputs["parameters"] = std::move(params);
  report.results["fraction"] = to_json(genericity_sweep(alpha, eps, o.samples, property, *o.seed));
}

// ---- export ---------------------------------------------------------------

int run_export(const Options& o) {
  const Homomorphism alpha = load_hom(o.hom_path, o);
  std::string text;
  if (o.format == "json") {
    text = dump(hom_to_json(alpha));
  } else if (o.format == "csv") {
    if (o.table == "irs") {
      text = irs_csv(empirical_irs(alpha, o.radius));
    } else if (o.table == "index") {
      text = index_csv(index_distribution(alpha));
    } else {
      throw std::invalid_argument("--table must be 'irs' or 'index'");
    }
  } else if (o.format == "dot") {
    if (o.atom >= alpha.size()) throw std::invalid_argument("--atom outside the space");
    text = schreier_dot(schreier_ball(alpha, o.atom, o.radius));
  } else {
    throw std::invalid_argument("--format must be json, csv or dot");
  }
  write_text(o.out_path, text);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Finite models of free group actions and their stabilizer statistics"};
  app.require_subcommand(1);
  app.add_option("--workers", o.workers, "Worker threads (results do not depend on it)");

  auto add_hom = [&](CLI::App* sub) {
    sub->add_option("--hom", o.hom_path, "Homomorphism JSON")->required();
    sub->add_option("--space", o.space_path, "Space JSON (default: one class)");
  };
  auto add_report = [&](CLI::App* sub) { sub->add_option("--report", o.report_path, "Write the report here instead of stdout"); };

  CLI::App* gen = app.add_subcommand("gen", "Generate spaces and homomorphisms");
  gen->require_subcommand(1);
  CLI::App* gen_space_cmd = gen->add_subcommand("space", "Space of 2^log2 atoms");
  CLI::App* gen_hom_cmd = gen->add_subcommand("hom", "Random homomorphism");
  for (CLI::App* sub : {gen_space_cmd, gen_hom_cmd}) {
    sub->add_option("--log2", o.log2, "log2 of the number of atoms");
    sub->add_option("--classes", o.classes, "single | blocks:<k>");
    sub->add_option("--filtration", o.filtration, "Dyadic filtration levels");
    sub->add_option("--out", o.out_path, "Output path (default: stdout)");
  }
  gen_space_cmd->get_option("--log2")->required();
  gen_hom_cmd->add_option("--model", o.model, "lean-aperiodic | random")
      ->check(CLI::IsMember({"lean-aperiodic", "random"}));
  gen_hom_cmd->add_option("--rank", o.rank, "Number of generators");
  gen_hom_cmd->add_option("--seed", o.seed, "64-bit seed")->required();
  gen_hom_cmd->add_option("--space", o.space_path, "Space JSON (overrides --log2/--classes)");

  CLI::App* construct = app.add_subcommand("construct", "Run a construction on a homomorphism");
  construct->require_subcommand(1);
  CLI::App* c_splice = construct->add_subcommand("splice", "Splice one generator against a random target");
  CLI::App* c_periodic = construct->add_subcommand("periodic", "Truncate orbits at filtration blocks");
  CLI::App* c_folner = construct->add_subcommand("folner", "Insert finite classes with small boundary");
  CLI::App* c_ht = construct->add_subcommand("ht", "Realize a permutation of a sigma-segment");
  CLI::App* c_corefree = construct->add_subcommand("corefree", "Make a word act nontrivially on every orbit");
  for (CLI::App* sub : {c_splice, c_periodic, c_folner, c_ht, c_corefree}) {
    add_hom(sub);
    add_report(sub);
    sub->add_option("--out", o.out_path, "Write the perturbed homomorphism here");
  }
  c_splice->add_option("--generator", o.generator, "1-based generator index");
  c_splice->add_option("--region", o.region, "Atoms of the region, e.g. \"0 5 9\"");
  c_splice->add_option("--region-size", o.region_size, "Random region of this size");
  c_splice->add_option("--seed", o.seed, "64-bit seed")->required();
  c_periodic->add_option("--level", o.level, "Filtration level j")->required();
  for (CLI::App* sub : {c_folner, c_ht, c_corefree}) sub->add_option("--epsilon", o.epsilon, "p/q")->required();
  c_folner->add_option("--sizes", o.sizes, "Class sizes, e.g. \"4 8 16\"")->required();
  c_folner->add_option("--radius", o.radius, "Search radius for the verification");
  c_ht->add_option("--m", o.m, "Segment length")->required();
  c_ht->add_option("--tau", o.tau, "Permutation of 0..m-1, e.g. \"1 0\"")->required();
  c_ht->add_option("--radius", o.long_radius, "Word radius for the verification (default 2N)");
  c_corefree->add_option("--word", o.word, "Word, e.g. \"s1 s2^-1\"")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "Diagnostics on a homomorphism");
  analyze->require_subcommand(1);
  CLI::App* a_index = analyze->add_subcommand("index", "Distribution of stabilizer indices");
  CLI::App* a_irs = analyze->add_subcommand("irs", "Empirical IRS and its invariance defect");
  CLI::App* a_folner = analyze->add_subcommand("folner", "Følner set search at an atom");
  CLI::App* a_core = analyze->add_subcommand("core", "Fraction of orbits where a word acts trivially");
  CLI::App* a_realize = analyze->add_subcommand("realize", "Fraction of atoms realizing tau");
  CLI::App* a_degree = analyze->add_subcommand("degree", "Transitivity degree on an orbit");
  CLI::App* a_stability = analyze->add_subcommand("stability", "Ball stability against a second homomorphism");
  CLI::App* a_symmetric = analyze->add_subcommand("symmetric", "Classwise symmetric generation");
  for (CLI::App* sub : {a_index, a_irs, a_folner, a_core, a_realize, a_degree, a_stability, a_symmetric}) {
    add_hom(sub);
    add_report(sub);
  }
  for (CLI::App* sub : {a_irs, a_folner, a_stability}) sub->add_option("--radius", o.radius, "Ball radius");
  for (CLI::App* sub : {a_folner, a_degree}) sub->add_option("--atom", o.atom, "Root atom");
  a_folner->add_option("--l", o.l, "Success threshold 1/l");
  a_core->add_option("--word", o.word, "Word, e.g. \"s1 s2^-1\"")->required();
  a_realize->add_option("--m", o.m, "Segment length (default: length of tau)");
  a_realize->add_option("--tau", o.tau, "Permutation of 0..m-1")->required();
  a_realize->add_option("--radius", o.long_radius, "Word radius (default 2N)");
  a_degree->add_option("--k-max", o.k_max, "Upper bound on k (default: orbit size)");
  a_stability->add_option("--other", o.other_path, "Second homomorphism JSON")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Fraction of random perturbations with a property");
  add_hom(sweep);
  add_report(sweep);
  sweep->add_option("--epsilon", o.epsilon, "p/q")->required();
  sweep->add_option("--samples", o.samples, "Number of samples")->required();
  sweep->add_option("--property", o.property, "folner | realizes | corefree | periodic | always | never")->required();
  sweep->add_option("--seed", o.seed, "64-bit seed")->required();
  sweep->add_option("--l", o.l, "folner: threshold 1/l");
  sweep->add_option("--radius", o.radius, "folner: search radius");
  sweep->add_option("--word-radius", o.long_radius, "realizes: word radius (default 2N)");
  sweep->add_option("--tau", o.tau, "realizes: permutation");
  sweep->add_option("--word", o.word, "corefree: word");
  sweep->add_option("--level", o.level, "periodic: filtration level");

  CLI::App* exp = app.add_subcommand("export", "Write a homomorphism, distribution or Schreier ball");
  add_hom(exp);
  exp->add_option("--format", o.format, "json | csv | dot")->required();
  exp->add_option("--out", o.out_path, "Output path")->required();
  exp->add_option("--table", o.table, "csv: irs | index");
  exp->add_option("--radius", o.radius, "csv irs / dot: radius");
  exp->add_option("--atom", o.atom, "dot: root atom");

  std::vector<std::string> argv_store{"irslab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const unsigned previous_workers = parallel::workers();
  if (o.workers > 0) parallel::set_workers(o.workers);
  struct Restore {
    unsigned count;
    ~Restore() { parallel::set_workers(count); }
  } restore{previous_workers};

  try {
    if (gen->parsed()) return gen_space_cmd->parsed() ? gen_space(o, out) : gen_hom(o, out);
    if (exp->parsed()) return run_export(o);

    Report report;
    if (sweep->parsed()) {
      report.command = "sweep";
      run_sweep(o, report);
    } else {
      const std::vector<std::pair<CLI::App*, void (*)(const Options&, Report&)>> table{
          {c_splice, construct_splice},   {c_periodic, construct_periodic}, {c_folner, construct_folner},
          {c_ht, construct_ht},           {c_corefree, construct_corefree}, {a_index, analyze_index},
          {a_irs, analyze_irs},           {a_folner, analyze_folner},       {a_core, analyze_core},
          {a_realize, analyze_realize},   {a_degree, analyze_degree},       {a_stability, analyze_stability},
          {a_symmetric, analyze_symmetric}};
      for (const auto& [sub, handler] : table) {
        if (!sub->parsed()) continue;
        report.command = sub->get_parent()->get_name() + " " + sub->get_name();
        handler(o, report);
      }
    }
    const std::string text = dump(report.to_json());
    if (o.report_path.empty()) {
      out << text;
    } else {
      write_text(o.report_path, text);
    }
    return report.passed ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace irslab::cli
