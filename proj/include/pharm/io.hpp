#ifndef PHARM_IO_HPP_
#define PHARM_IO_HPP_

// JSON and CSV forms of the library types.
//
// Group specs:  {"family": "free", "params": {"k": 2, "extra": ["ab"]}}
//               optional "vertex_budget" next to "family"; shorthand strings
//               "free:2", "free_abelian:2", "free_product_z2:3", "lamplighter".
// Elements:     free_abelian -> [x, y, ...], free / free_product_z2 -> "aB"
//               ("e" for the identity), lamplighter -> [cursor, [lamps...]].
// Fields (CSV): header "vertex,length,value", one row per vertex in BFS order.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pharm/dirichlet.hpp"
#include "pharm/energy.hpp"
#include "pharm/group_model.hpp"
#include "pharm/roughiso.hpp"

namespace pharm {

using json = nlohmann::json;

GroupSpec group_spec_from_json(const json& j);
json to_json(const GroupSpec& spec);
// Accepts either a JSON document or the "family:rank" shorthand.
GroupSpec parse_group_spec(std::string_view text);

json element_to_json(const GroupModel& model, const Element& g);
Element element_from_json(const GroupModel& model, const json& j);

SolverConfig solver_config_from_json(const json& j);
json to_json(const SolverConfig& config);
json to_json(const SolveReport& report, bool timing = false);

json field_to_json(const ScalarField& f);
ScalarField field_from_json(std::shared_ptr<const CayleyBall> ball, const json& j);
void write_field_csv(std::ostream& os, const ScalarField& f);

// Pairs [domain canonical form, codomain canonical form] in domain order.
json coarse_map_to_json(const CoarseMap& map);

// `x` printed with 17 significant digits.
std::string format_number(double x);

// FNV-1a over the bytes of `text`, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace pharm

#endif  // PHARM_IO_HPP_
