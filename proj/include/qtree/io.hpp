#pragma once

#include <string>

#include <json.hpp>

#include "qtree/inverse.hpp"
#include "qtree/poly.hpp"
#include "qtree/potential.hpp"
#include "qtree/scattering.hpp"
#include "qtree/tree.hpp"

namespace qtree {

using json = nlohmann::json;

json tree_to_json(const RootedTree& t);
RootedTree tree_from_json(const json& j);

json poly_to_json(const Poly& p);
Poly poly_from_json(const json& j);

json potential_to_json(const Potential& p);
Potential potential_from_json(const json& j);
// zero | const:Q | sampled:FILE ; ell applies unless the file sets its own
Potential parse_potential_spec(const std::string& spec, double ell);

json record_to_json(const ScatteringRecord& r);
ScatteringRecord record_from_json(const json& j);

json recovery_to_json(const RecoveryResult& r);

json read_json_file(const std::string& path);

// 12 significant digits, as used in every CSV output
std::string csv_number(double x);

} // namespace qtree
