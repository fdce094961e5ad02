#pragma once

#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "irslab/actions.hpp"
#include "irslab/finite_model.hpp"
#include "irslab/rational.hpp"

namespace irslab {

using Json = nlohmann::ordered_json;

/// Rationals cross every text boundary as "p/q".
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// {n_atoms, classes, filtration_log2_levels}; the last is null without a filtration.
Json space_to_json(const FiniteSpace& space);
FiniteSpace space_from_json(const Json& j);

/// {n_atoms, rank, gens}.
Json hom_to_json(const Homomorphism& alpha);
/// Without an explicit space the atoms form one class, with the full dyadic
/// filtration when N is a power of two.
Homomorphism hom_from_json(const Json& j, std::shared_ptr<const FiniteSpace> space = nullptr);
std::shared_ptr<const FiniteSpace> default_space(std::size_t n_atoms);

/// Header "trace_hex,weight_num,weight_den", one row per trace.
std::string irs_csv(const EmpiricalIRS& irs);
/// Header "orbit_size,weight_num,weight_den".
std::string index_csv(const std::map<std::size_t, Rational>& distribution);

/// Digraph with one edge per internal positive-letter edge labelled "s<i>".
std::string schreier_dot(const SchreierBall& ball);

/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace irslab
