#include "irslab/serialize.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace irslab {

Json to_json(const Rational& q) { return q.str(); }

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw std::invalid_argument("expected a rational as a \"p/q\" string");
  return Rational::parse(j.get<std::string>());
}

Json space_to_json(const FiniteSpace& space) {
  Json j;
  j["n_atoms"] = space.size();
  j["classes"] = space.classes();
  if (space.filtration_levels()) {
    j["filtration_log2_levels"] = *space.filtration_levels();
  } else {
    j["filtration_log2_levels"] = nullptr;
  }
  return j;
}

FiniteSpace space_from_json(const Json& j) {
  const auto n = j.at("n_atoms").get<std::size_t>();
  const auto classes = j.at("classes").get<std::vector<std::vector<Atom>>>();
  std::optional<unsigned> levels;
  if (j.contains("filtration_log2_levels") && !j["filtration_log2_levels"].is_null()) {
    levels = j["filtration_log2_levels"].get<unsigned>();
  }
  return FiniteSpace::from_classes(n, classes, levels);
}

Json hom_to_json(const Homomorphism& alpha) {
  Json j;
  j["n_atoms"] = alpha.size();
  j["rank"] = alpha.rank();
  Json gens = Json::array();
  for (const Permutation& g : alpha.generators()) gens.push_back(std::vector<Atom>(g.images().begin(), g.images().end()));
  j["gens"] = std::move(gens);
  return j;
}

std::shared_ptr<const FiniteSpace> default_space(std::size_t n_atoms) {
  std::optional<unsigned> levels;
  if (std::has_single_bit(n_atoms)) levels = static_cast<unsigned>(std::countr_zero(n_atoms));
  return std::make_shared<const FiniteSpace>(FiniteSpace::single_class(n_atoms, levels));
}

Homomorphism hom_from_json(const Json& j, std::shared_ptr<const FiniteSpace> space) {
  const auto n = j.at("n_atoms").get<std::size_t>();
  const auto rank = j.at("rank").get<unsigned>();
  const auto& gens_json = j.at("gens");
  if (gens_json.size() != rank) throw std::invalid_argument("homomorphism JSON: rank does not match the generator count");
  if (!space) space = default_space(n);
  if (space->size() != n) throw std::invalid_argument("homomorphism JSON: n_atoms does not match the space");
  std::vector<Permutation> gens;
  for (const auto& g : gens_json) {
    auto images = g.get<std::vector<Atom>>();
    if (images.size() != n) throw std::invalid_argument("homomorphism JSON: generator has the wrong length");
    gens.emplace_back(std::move(images));
  }
  return Homomorphism(std::move(space), std::move(gens));
}

std::string irs_csv(const EmpiricalIRS& irs) {
  std::ostringstream out;
  out << "trace_hex,weight_num,weight_den\n";
  for (const auto& [trace, weight] : irs.weights) out << trace.hex() << ',' << weight.num() << ',' << weight.den() << '\n';
  return out.str();
}

std::string index_csv(const std::map<std::size_t, Rational>& distribution) {
  std::ostringstream out;
  out << "orbit_size,weight_num,weight_den\n";
  for (const auto& [size, weight] : distribution) out << size << ',' << weight.num() << ',' << weight.den() << '\n';
  return out.str();
}

std::string schreier_dot(const SchreierBall& ball) {
  std::ostringstream out;
  out << "digraph schreier {\n";
  for (std::size_t i = 0; i < ball.vertices.size(); ++i) {
    const auto v = ball.vertices[i];
    out << "  " << v << " [label=\"" << v << "\"" << (v == ball.root ? ", shape=doublecircle" : "") << "];\n";
  }
  for (const SchreierEdge& e : ball.edges) {
    if (e.label > 0 && e.internal) out << "  " << e.from << " -> " << e.to << " [label=\"s" << e.label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace irslab
