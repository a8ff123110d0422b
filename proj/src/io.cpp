#include "pharm/io.hpp"

#include <cstdio>
#include <ostream>

#include "pharm/error.hpp"

namespace pharm {

namespace {

const char* rank_key(Family f) {
  switch (f) {
    case Family::FreeAbelian:
      return "d";
    case Family::Free:
      return "k";
    case Family::FreeProductZ2:
      return "m";
    case Family::Lamplighter:
      return nullptr;
  }
  return nullptr;
}

}  // namespace

GroupSpec group_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw ValidationError("group spec must be an object with a string \"family\"");
  }
  GroupSpec spec;
  spec.family = parse_family(j["family"].get<std::string>());
  const json params = j.value("params", json::object());
  if (!params.is_object()) throw ValidationError("group \"params\" must be an object");
  if (const char* key = rank_key(spec.family)) {
    if (!params.contains(key) || !params[key].is_number_integer()) {
      throw ValidationError(std::string("group family ") + std::string(family_name(spec.family)) +
                            " needs integer parameter \"" + key + "\"");
    }
    spec.rank = params[key].get<int>();
  } else {
    spec.rank = 1;
  }
  if (params.contains("extra")) {
    if (!params["extra"].is_array()) throw ValidationError("\"extra\" must be an array of words");
    for (const auto& w : params["extra"]) {
      if (!w.is_string()) throw ValidationError("\"extra\" must be an array of words");
      spec.extra_generators.push_back(w.get<std::string>());
    }
  }
  if (j.contains("vertex_budget")) {
    if (!j["vertex_budget"].is_number_integer() || j["vertex_budget"].get<std::int64_t>() < 1) {
      throw ValidationError("\"vertex_budget\" must be a positive integer");
    }
    spec.vertex_budget = j["vertex_budget"].get<std::size_t>();
  }
  return spec;
}

json to_json(const GroupSpec& spec) {
  json params = json::object();
  if (const char* key = rank_key(spec.family)) params[key] = spec.rank;
  if (!spec.extra_generators.empty()) params["extra"] = spec.extra_generators;
  json j = {{"family", std::string(family_name(spec.family))}, {"params", params}};
  if (spec.vertex_budget != kDefaultVertexBudget) j["vertex_budget"] = spec.vertex_budget;
  return j;
}

GroupSpec parse_group_spec(std::string_view text) {
  const auto start = text.find_first_not_of(" \t\n");
  if (start != std::string_view::npos && text[start] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("malformed group JSON: ") + e.what());
    }
    return group_spec_from_json(j);
  }
  GroupSpec spec;
  const auto colon = text.find(':');
  spec.family = parse_family(text.substr(0, colon));
  if (spec.family == Family::Lamplighter) {
    if (colon != std::string_view::npos) throw ValidationError("lamplighter takes no parameter");
    return spec;
  }
  if (colon == std::string_view::npos) {
    throw ValidationError("group shorthand needs a rank, e.g. free:2");
  }
  const std::string rank(text.substr(colon + 1));
  std::size_t used = 0;
  try {
    spec.rank = std::stoi(rank, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != rank.size()) throw ValidationError("bad group rank '" + rank + "'");
  return spec;
}

json element_to_json(const GroupModel& model, const Element& g) {
  switch (model.spec().family) {
    case Family::FreeAbelian:
      return g.code;
    case Family::Free:
    case Family::FreeProductZ2:
      return model.format(g);
    case Family::Lamplighter:
      return json::array(
          {g.code.front(), std::vector<std::int32_t>(g.code.begin() + 1, g.code.end())});
  }
  return nullptr;
}

Element element_from_json(const GroupModel& model, const json& j) {
  switch (model.spec().family) {
    case Family::FreeAbelian: {
      if (!j.is_array() || j.size() != static_cast<std::size_t>(model.spec().rank)) {
        throw ValidationError("free abelian element must be an array of " +
                              std::to_string(model.spec().rank) + " integers");
      }
      Element g;
      for (const auto& x : j) {
        if (!x.is_number_integer()) throw ValidationError("coordinates must be integers");
        g.code.push_back(x.get<std::int32_t>());
      }
      return g;
    }
    case Family::Free:
    case Family::FreeProductZ2: {
      if (!j.is_string()) throw ValidationError("element must be a word string");
      const auto word = j.get<std::string>();
      return word == "e" ? model.identity() : model.reduce(word);
    }
    case Family::Lamplighter: {
      if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_array()) {
        throw ValidationError("lamplighter element must be [cursor, [lamps...]]");
      }
      Element g{{j[0].get<std::int32_t>()}};
      for (const auto& x : j[1]) {
        if (!x.is_number_integer()) throw ValidationError("lamp positions must be integers");
        g.code.push_back(x.get<std::int32_t>());
      }
      return model.canonical(g);
    }
  }
  throw ValidationError("unknown family");
}

SolverConfig solver_config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("solver config must be an object");
  SolverConfig c;
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number()) throw ValidationError("\"tolerance\" must be a number");
    c.tolerance = j["tolerance"].get<double>();
    if (!(c.tolerance > 0.0)) throw ValidationError("\"tolerance\" must be positive");
  }
  if (j.contains("max_sweeps")) {
    if (!j["max_sweeps"].is_number_integer() || j["max_sweeps"].get<std::int64_t>() < 1) {
      throw ValidationError("\"max_sweeps\" must be a positive integer");
    }
    c.max_sweeps = j["max_sweeps"].get<std::size_t>();
  }
  if (j.contains("warm_start")) {
    if (!j["warm_start"].is_boolean()) throw ValidationError("\"warm_start\" must be a boolean");
    c.warm_start = j["warm_start"].get<bool>();
  }
  return c;
}

json to_json(const SolverConfig& c) {
  return {{"tolerance", c.tolerance}, {"max_sweeps", c.max_sweeps}, {"warm_start", c.warm_start}};
}

json to_json(const SolveReport& r, bool timing) {
  json j = {{"iterations", r.iterations},
            {"final_energy", r.final_energy},
            {"residual", r.residual},
            {"converged", r.converged}};
  if (timing) j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

json field_to_json(const ScalarField& f) {
  return json(std::vector<double>(f.values().begin(), f.values().end()));
}

ScalarField field_from_json(std::shared_ptr<const CayleyBall> ball, const json& j) {
  if (!j.is_array()) throw ValidationError("field must be an array of numbers");
  std::vector<double> values;
  for (const auto& x : j) {
    if (!x.is_number()) throw ValidationError("field must be an array of numbers");
    values.push_back(x.get<double>());
  }
  return ScalarField(std::move(ball), std::move(values));
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
  const CayleyBall& b = f.ball();
  os << "vertex,length,value\n";
  for (std::size_t v = 0; v < b.size(); ++v) {
    os << '"' << b.model().format(b.vertex(v)) << "\"," << b.length(v) << ','
       << format_number(f[v]) << '\n';
  }
}

json coarse_map_to_json(const CoarseMap& map) {
  json pairs = json::array();
  for (std::size_t v = 0; v < map.domain().size(); ++v) {
    pairs.push_back({element_to_json(map.domain().model(), map.domain().vertex(v)),
                     element_to_json(map.codomain().model(), map.image(v))});
  }
  return pairs;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pharm
