#include "pharm/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "pharm/error.hpp"
#include "pharm/exhaustion.hpp"
#include "pharm/roughiso.hpp"
#include "pharm/tilf.hpp"

namespace pharm {

namespace {

const std::vector<std::string> kExperiments = {"solve",   "capacity", "witness", "royden",
                                               "massive", "roughiso", "tilf"};

std::vector<double> p_list(const json& m) {
  std::vector<double> ps;
  for (const auto& x : m["p"]) ps.push_back(x.get<double>());
  return ps;
}

std::vector<int> radii_list(const json& m) { return m["radii"].get<std::vector<int>>(); }

std::string option_string(const json& m, const char* key, const std::string& fallback) {
  const json& o = m["options"];
  if (!o.contains(key)) return fallback;
  if (!o[key].is_string()) throw ValidationError(std::string("option \"") + key + "\" must be a string");
  return o[key].get<std::string>();
}

// Fills defaults and checks types so that equal runs hash equally.
json normalize(const json& in) {
  if (!in.is_object()) throw ValidationError("manifest must be a JSON object");
  json m = json::object();
  if (!in.contains("experiment") || !in["experiment"].is_string()) {
    throw ValidationError("manifest needs a string \"experiment\"");
  }
  const auto kind = in["experiment"].get<std::string>();
  if (std::find(kExperiments.begin(), kExperiments.end(), kind) == kExperiments.end()) {
    throw ValidationError("unknown experiment '" + kind + "'");
  }
  m["experiment"] = kind;
  if (!in.contains("group")) throw ValidationError("manifest needs a \"group\"");
  m["group"] = to_json(group_spec_from_json(in["group"]));
  if (in.contains("codomain_group")) {
    m["codomain_group"] = to_json(group_spec_from_json(in["codomain_group"]));
  }

  json p = in.value("p", json(2.0));
  if (p.is_number()) p = json::array({p});
  if (!p.is_array() || p.empty()) throw ValidationError("\"p\" must be a number or a non-empty array");
  for (auto& x : p) {
    if (!x.is_number()) throw ValidationError("\"p\" entries must be numbers");
    x = Exponent(x.get<double>()).value();
  }
  m["p"] = p;

  if (!in.contains("radii") || !in["radii"].is_array() || in["radii"].empty()) {
    throw ValidationError("manifest needs a non-empty \"radii\" array");
  }
  for (const auto& r : in["radii"]) {
    if (!r.is_number_integer() || r.get<int>() < 1) {
      throw ValidationError("\"radii\" entries must be positive integers");
    }
  }
  m["radii"] = in["radii"];
  m["solver"] = to_json(solver_config_from_json(in.value("solver", json::object())));
  const json seed = in.value("seed", json(1));
  if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0) {
    throw ValidationError("\"seed\" must be an unsigned integer");
  }
  m["seed"] = seed.get<std::uint64_t>();
  const json options = in.value("options", json::object());
  if (!options.is_object()) throw ValidationError("\"options\" must be an object");
  m["options"] = options;
  return m;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + '\n';
}

std::string num(double x) { return format_number(x); }
std::string num(std::size_t x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

ScalarField seeded_field(std::shared_ptr<const CayleyBall> b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(b->size());
  for (auto& x : values) x = u(rng);
  return ScalarField(std::move(b), std::move(values));
}

ScalarField named_field(const std::string& name, const GroupModel& model,
                        std::shared_ptr<const CayleyBall> b, std::uint64_t seed) {
  if (name == "marking") {
    const auto marking = DirectionMarking::for_model(model);
    return ScalarField::from_function(
        std::move(b), [&](const Element& g) { return static_cast<double>(marking.label(g)); });
  }
  if (name == "radial") {
    std::vector<double> values(b->size());
    for (std::size_t v = 0; v < b->size(); ++v) values[v] = std::ldexp(1.0, -b->length(v));
    return ScalarField(std::move(b), std::move(values));
  }
  if (name == "random") return seeded_field(std::move(b), seed);
  throw ValidationError("unknown field '" + name + "' (expected marking, radial or random)");
}

void run_solve(const json& m, RunOutput& out, bool timing) {
  const auto model = GroupModel::build(group_spec_from_json(m["group"]));
  const auto radii = radii_list(m);
  const int radius = *std::max_element(radii.begin(), radii.end());
  const auto config = solver_config_from_json(m["solver"]);
  const auto boundary = option_string(m, "boundary", "marking");
  auto b = ball(model, radius);
  const ScalarField data = named_field(boundary, model, b, m["seed"].get<std::uint64_t>());
  out.csv = csv_row({"p", "radius", "iterations", "final_energy", "residual", "converged"});
  json rows = json::array();
  std::size_t i = 0;
  for (double p : p_list(m)) {
    DirichletProblem prob(b, Exponent(p));
    for (std::size_t v = b->interior_size(); v < b->size(); ++v) prob.clamp(v, data[v]);
    auto sol = solve_dirichlet(prob, config);
    out.converged = out.converged && sol.report.converged;
    out.csv += csv_row({num(p), num(radius), num(sol.report.iterations),
                        num(sol.report.final_energy), num(sol.report.residual),
                        flag(sol.report.converged)});
    rows.push_back({{"p", p}, {"radius", radius}, {"solve", to_json(sol.report, timing)}});
    std::ostringstream field;
    write_field_csv(field, sol.field);
    out.extra_csv.emplace_back("solve_field_" + std::to_string(i++) + ".csv", field.str());
  }
  out.report["results"] = rows;
}

void run_capacity(const json& m, RunOutput& out, bool timing) {
  const auto model = GroupModel::build(group_spec_from_json(m["group"]));
  const auto radii = radii_list(m);
  const auto config = solver_config_from_json(m["solver"]);
  out.csv = csv_row({"p", "radius", "capacity", "iterations", "residual", "converged"});
  json results = json::array();
  for (double p : p_list(m)) {
    json entry = {{"p", p}};
    json rows = json::array();
    auto add = [&](int r, double cap, const SolveReport& rep) {
      out.converged = out.converged && rep.converged;
      out.csv += csv_row({num(p), num(r), num(cap), num(rep.iterations), num(rep.residual),
                          flag(rep.converged)});
      rows.push_back({{"radius", r}, {"capacity", cap}, {"solve", to_json(rep, timing)}});
    };
    if (radii.size() >= 2) {
      auto profile = parabolicity_profile(model, Exponent(p), radii, config);
      for (const auto& row : profile.rows) add(row.radius, row.capacity, row.solve);
      entry["verdict"] = std::string(to_string(profile.verdict));
      entry["diagnostics"] = profile.diagnostics;
    } else {
      auto cap = capacity(model, 0, radii.front(), Exponent(p), config);
      add(radii.front(), cap.capacity, cap.report);
    }
    entry["rows"] = rows;
    results.push_back(entry);
  }
  out.report["results"] = results;
}

void run_witness(const json& m, RunOutput& out, bool timing) {
  const auto model = GroupModel::build(group_spec_from_json(m["group"]));
  const auto config = solver_config_from_json(m["solver"]);
  const auto marking = DirectionMarking::for_model(model);
  out.csv = csv_row({"p", "radius", "gap", "energy", "sup_norm", "iterations", "residual", "converged"});
  json results = json::array();
  for (double p : p_list(m)) {
    auto rep = boundary_witness(model, marking, Exponent(p), radii_list(m), config);
    json rows = json::array();
    for (const auto& r : rep.rows) {
      out.converged = out.converged && r.solve.converged;
      out.csv += csv_row({num(p), num(r.radius), num(r.gap), num(r.energy), num(r.sup_norm),
                          num(r.solve.iterations), num(r.solve.residual), flag(r.solve.converged)});
      rows.push_back({{"radius", r.radius},
                      {"gap", r.gap},
                      {"energy", r.energy},
                      {"sup_norm", r.sup_norm},
                      {"solve", to_json(r.solve, timing)}});
    }
    results.push_back({{"p", p},
                       {"marking", marking.rule},
                       {"rows", rows},
                       {"verdict", std::string(to_string(rep.verdict))},
                       {"stabilization_delta", rep.stabilization_delta},
                       {"diagnostics", rep.diagnostics}});
  }
  out.report["results"] = results;
}

void run_royden(const json& m, RunOutput& out, bool timing) {
  const auto model = GroupModel::build(group_spec_from_json(m["group"]));
  const auto radii = radii_list(m);
  const auto config = solver_config_from_json(m["solver"]);
  const int radius = *std::max_element(radii.begin(), radii.end());
  const ScalarField f = named_field(option_string(m, "field", "marking"), model, ball(model, radius),
                                    m["seed"].get<std::uint64_t>());
  out.csv = csv_row({"p", "radius", "core_change", "iterations", "residual", "converged"});
  json results = json::array();
  for (double p : p_list(m)) {
    auto res = royden_decompose(f, Exponent(p), radii, config);
    out.converged = out.converged && res.converged;
    json rows = json::array();
    for (const auto& r : res.rows) {
      const json change = std::isnan(r.core_change) ? json(nullptr) : json(r.core_change);
      out.csv += csv_row({num(p), num(r.radius), std::isnan(r.core_change) ? "" : num(r.core_change),
                          num(r.solve.iterations), num(r.solve.residual), flag(r.solve.converged)});
      rows.push_back(
          {{"radius", r.radius}, {"core_change", change}, {"solve", to_json(r.solve, timing)}});
    }
    results.push_back({{"p", p},
                       {"rows", rows},
                       {"u_seminorm", res.u_seminorm},
                       {"u_tail_sup", res.u_tail_sup},
                       {"stabilized", res.stabilized}});
  }
  out.report["results"] = results;
}

void run_massive(const json& m, RunOutput& out, bool timing) {
  const auto model = GroupModel::build(group_spec_from_json(m["group"]));
  const auto config = solver_config_from_json(m["solver"]);
  const auto which = option_string(
      m, "subset", model.spec().family == Family::FreeAbelian ? "half_space" : "subtree:a");
  MassiveSubsetSpec subset;
  if (which == "half_space") {
    subset = MassiveSubsetSpec::half_space(model);
  } else if (which.rfind("subtree:", 0) == 0) {
    subset = MassiveSubsetSpec::subtree(model, which.substr(8));
  } else {
    throw ValidationError("unknown subset '" + which + "' (expected half_space or subtree:<letter>)");
  }
  out.csv = csv_row({"p", "radius", "core_max", "core_change", "iterations", "residual", "converged"});
  json results = json::array();
  for (double p : p_list(m)) {
    auto res = inner_potential(model, subset, Exponent(p), radii_list(m), config);
    json rows = json::array();
    for (const auto& r : res.rows) {
      out.converged = out.converged && r.solve.converged;
      const json change = std::isnan(r.core_change) ? json(nullptr) : json(r.core_change);
      out.csv += csv_row({num(p), num(r.radius), num(r.core_max),
                          std::isnan(r.core_change) ? "" : num(r.core_change),
                          num(r.solve.iterations), num(r.solve.residual), flag(r.solve.converged)});
      rows.push_back({{"radius", r.radius},
                      {"core_max", r.core_max},
                      {"core_change", change},
                      {"solve", to_json(r.solve, timing)}});
    }
    results.push_back({{"p", p},
                       {"subset", subset.description},
                       {"rows", rows},
                       {"checks",
                        {{"residual", res.checks.residual},
                         {"harmonic_on_a", res.checks.harmonic_on_a},
                         {"zero_on_boundary", res.checks.zero_on_boundary},
                         {"sup_on_a", res.checks.sup_on_a},
                         {"sup_is_one", res.checks.sup_is_one}}},
                       {"verdict", std::string(to_string(res.verdict))},
                       {"diagnostics", res.diagnostics}});
  }
  out.report["results"] = results;
}

void run_roughiso(const json& m, RunOutput& out, bool /*timing*/) {
  const auto dom_model = GroupModel::build(group_spec_from_json(m["group"]));
  const auto cod_model = GroupModel::build(
      group_spec_from_json(m.contains("codomain_group") ? m["codomain_group"] : m["group"]));
  const int radius = radii_list(m).front();
  const auto seed = m["seed"].get<std::uint64_t>();
  const auto kind = option_string(m, "map", "identity");

  VertexMap map;
  if (kind == "identity") {
    if (dom_model.spec().family != cod_model.spec().family ||
        dom_model.spec().rank != cod_model.spec().rank) {
      throw ValidationError("identity map needs the same group on both sides");
    }
    map = [](const Element& g) { return g; };
  } else if (kind.rfind("scale:", 0) == 0) {
    if (dom_model.spec().family != Family::FreeAbelian || !(dom_model == cod_model)) {
      throw ValidationError("scale maps need the same free abelian group on both sides");
    }
    const int k = std::stoi(kind.substr(6));
    map = [k](const Element& g) {
      Element h = g;
      for (auto& c : h.code) c *= k;
      return h;
    };
  } else {
    throw ValidationError("unknown map '" + kind + "' (expected identity or scale:<k>)");
  }

  auto dom = ball(dom_model, radius);
  int cod_radius = 0;
  if (m["options"].contains("codomain_radius")) {
    cod_radius = m["options"]["codomain_radius"].get<int>();
  } else {
    // Smallest codomain ball holding every image.
    std::vector<Element> images;
    for (const auto& g : dom->vertices()) images.push_back(cod_model.canonical(map(g)));
    for (cod_radius = 1; cod_radius <= 8 * radius; ++cod_radius) {
      auto c = ball(cod_model, cod_radius);
      if (std::all_of(images.begin(), images.end(),
                      [&](const Element& y) { return c->index_of(y).has_value(); })) {
        break;
      }
    }
  }
  auto cod = ball(cod_model, cod_radius);
  FitOptions opts;
  opts.seed = seed;
  if (m["options"].contains("sample_budget")) {
    opts.sample_budget = m["options"]["sample_budget"].get<std::size_t>();
  }
  auto fit = fit_rough_constants(map, dom, cod, opts);
  json result = {{"domain_radius", radius},
                 {"codomain_radius", cod_radius},
                 {"pairs_checked", fit.pairs_checked},
                 {"exhaustive", fit.exhaustive},
                 {"covered_radius", fit.covered_radius},
                 {"diagnostics", fit.diagnostics},
                 {"fitted", fit.map.has_value()}};
  out.csv = csv_row({"p", "a", "b", "c", "pairs_checked", "back_displacement", "forth_displacement",
                     "k", "pullback_energy", "pullback_bound", "bound_holds"});
  if (!fit.map) {
    out.report["results"] = result;
    return;
  }
  const CoarseMap& phi = *fit.map;
  const auto& k = phi.constants();
  result["constants"] = {{"a", k.a}, {"b", k.b}, {"c", k.c}};
  auto fresh = check_constants(phi, 1000, seed + 1);
  result["fresh_check"] = {{"pairs", fresh.pairs}, {"violations", fresh.violations}};
  auto inv = rough_inverse(phi);
  result["inverse"] = {{"max_back_displacement", inv.max_back_displacement},
                       {"back_bound", inv.back_bound},
                       {"max_forth_displacement", inv.max_forth_displacement},
                       {"forth_bound", inv.forth_bound},
                       {"bounds_hold", inv.bounds_hold}};
  const ScalarField f = seeded_field(ball(cod_model, cod_radius + 1), seed);
  json pulls = json::array();
  for (double p : p_list(m)) {
    auto pb = pullback(f, phi, Exponent(p));
    pulls.push_back({{"p", p},
                     {"k", pb.k},
                     {"pullback_energy", pb.pulled_energy},
                     {"bound", pb.bound},
                     {"bound_holds", pb.bound_holds}});
    out.csv += csv_row({num(p), num(k.a), num(k.b), num(k.c), num(fit.pairs_checked),
                        num(inv.max_back_displacement), num(inv.max_forth_displacement), num(pb.k),
                        num(pb.pulled_energy), num(pb.bound), flag(pb.bound_holds)});
  }
  result["pullback"] = pulls;
  result["map"] = coarse_map_to_json(phi);
  out.report["results"] = result;
}

void run_tilf(const json& m, RunOutput& out, bool /*timing*/) {
  const auto model = GroupModel::build(group_spec_from_json(m["group"]));
  const auto config = solver_config_from_json(m["solver"]);
  const auto marking = DirectionMarking::for_model(model);
  const Element shift = m["options"].contains("shift")
                            ? element_from_json(model, m["options"]["shift"])
                            : model.generators()[model.degree() > 2 ? 2 : 0].value;
  out.csv = csv_row({"p", "radius", "T_f", "T_fx", "deviation", "witness_residual"});
  json results = json::array();
  for (double pv : p_list(m)) {
    const Exponent p(pv);
    json rows = json::array();
    for (int r : radii_list(m)) {
      auto b = ball(model, r);
      DirichletProblem prob(b, p);
      prob.clamp_boundary([&](const Element& g) { return static_cast<double>(marking.label(g)); });
      auto sol = solve_dirichlet(prob, config);
      out.converged = out.converged && sol.report.converged;
      if (!sol.report.converged) continue;
      const ScalarField f = ScalarField::from_function(
          b, [&](const Element& g) { return static_cast<double>(marking.label(g)); });
      auto d = tilf_invariance_defect(sol.field, f, shift, p, config.tolerance);
      out.csv += csv_row({num(pv), num(r), num(d.original), num(d.translated), num(d.defect),
                          num(sol.report.residual)});
      rows.push_back({{"radius", r},
                      {"T_f", d.original},
                      {"T_fx", d.translated},
                      {"deviation", d.defect},
                      {"witness_residual", sol.report.residual}});
    }
    results.push_back({{"p", pv}, {"shift", element_to_json(model, shift)}, {"rows", rows}});
  }
  out.report["results"] = results;
}

}  // namespace

RunOutput run_manifest(const json& manifest, bool timing) {
  const json m = normalize(manifest);
  RunOutput out;
  out.report = {{"experiment", m["experiment"]},
                {"version", kVersion},
                {"manifest_hash", fnv1a_hex(m.dump())},
                {"manifest", m}};
  const auto kind = m["experiment"].get<std::string>();
  if (kind == "solve") run_solve(m, out, timing);
  if (kind == "capacity") run_capacity(m, out, timing);
  if (kind == "witness") run_witness(m, out, timing);
  if (kind == "royden") run_royden(m, out, timing);
  if (kind == "massive") run_massive(m, out, timing);
  if (kind == "roughiso") run_roughiso(m, out, timing);
  if (kind == "tilf") run_tilf(m, out, timing);
  out.report["converged"] = out.converged;
  return out;
}

json describe_group(const GroupSpec& spec, int radius) {
  const auto model = GroupModel::build(spec);
  auto b = ball(model, radius);
  json gens = json::array();
  for (const auto& g : model.generators()) {
    gens.push_back({{"name", g.name},
                    {"inverse", model.generators()[g.inverse].name},
                    {"value", element_to_json(model, g.value)}});
  }
  std::vector<std::size_t> sizes;
  for (int r = 0; r <= radius; ++r) {
    auto [first, last] = b->sphere(r);
    sizes.push_back(last - first);
  }
  return {{"group", model.label()},
          {"spec", to_json(spec)},
          {"generators", gens},
          {"sphere_sizes", sizes},
          {"version", kVersion}};
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ValidationError(std::string("bad ") + what + " '" + s + "'");
  return x;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + path.string());
  os << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-harmonic experiments on Cayley graphs", "pharm"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string manifest_path, group, codomain_group, p_text, radii_text, out_dir, format = "json";
  std::string subset, map, shift, field, boundary;
  double tol = 0.0;
  std::size_t max_sweeps = 0;
  std::uint64_t seed = 0;
  bool timing = false;
  int radius = 3;

  std::vector<CLI::App*> subs;
  auto* describe = app.add_subcommand("describe", "print generators and sphere sizes");
  describe->add_option("--group", group, "group spec (JSON or family:rank)")->required();
  describe->add_option("--radius", radius, "largest sphere to report")->check(CLI::PositiveNumber);
  describe->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  format = "text";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest_path, "manifest JSON file");
    sub->add_option("--group", group, "group spec (JSON or family:rank)");
    sub->add_option("--p", p_text, "comma-separated exponents");
    sub->add_option("--radii", radii_text, "comma-separated radii");
    sub->add_option("--tol", tol, "solver tolerance");
    sub->add_option("--max-sweeps", max_sweeps, "Gauss-Seidel sweep cap");
    sub->add_option("--out", out_dir, "directory for report files");
    sub->add_option("--format", format, "stdout format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "seed for randomized inputs");
    sub->add_flag("--timing", timing, "include wall-clock times");
  };
  for (const auto& name : kExperiments) {
    auto* sub = app.add_subcommand(name, name + " experiment");
    add_common(sub);
    subs.push_back(sub);
  }
  auto* run = app.add_subcommand("run", "run the experiment named in a manifest");
  add_common(run);
  subs[0]->add_option("--boundary", boundary, "boundary data: marking, radial or random");
  subs[3]->add_option("--field", field, "field to decompose: marking, radial or random");
  subs[4]->add_option("--subset", subset, "half_space or subtree:<letter>");
  subs[5]->add_option("--codomain-group", codomain_group, "codomain group spec");
  subs[5]->add_option("--map", map, "identity or scale:<k>");
  subs[6]->add_option("--shift", shift, "translation element as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (describe->parsed()) {
      json d = describe_group(parse_group_spec(group), radius);
      if (format == "json") {
        out << d.dump(2) << '\n';
      } else {
        out << "group: " << d["group"].get<std::string>() << "\ngenerators:";
        for (const auto& g : d["generators"]) out << ' ' << g["name"].get<std::string>();
        out << "\nsphere sizes:";
        for (const auto& s : d["sphere_sizes"]) out << ' ' << s.get<std::size_t>();
        out << '\n';
      }
      return kExitOk;
    }
    if (format == "text") format = "json";

    CLI::App* active = run->parsed() ? run : nullptr;
    for (auto* s : subs) {
      if (s->parsed()) active = s;
    }
    json manifest = json::object();
    if (!manifest_path.empty()) {
      std::ifstream is(manifest_path);
      if (!is) throw ValidationError("cannot read manifest " + manifest_path);
      try {
        manifest = json::parse(is);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed manifest: ") + e.what());
      }
      if (!manifest.is_object()) throw ValidationError("manifest must be a JSON object");
    }
    if (active != run) {
      const std::string name = active->get_name();
      if (manifest.contains("experiment") && manifest["experiment"] != name) {
        throw ValidationError("manifest experiment '" + manifest["experiment"].get<std::string>() +
                              "' does not match subcommand '" + name + "'");
      }
      manifest["experiment"] = name;
    }
    if (!group.empty()) manifest["group"] = to_json(parse_group_spec(group));
    if (!codomain_group.empty()) manifest["codomain_group"] = to_json(parse_group_spec(codomain_group));
    if (!p_text.empty()) {
      json ps = json::array();
      for (const auto& s : split_list(p_text)) ps.push_back(parse_double(s, "exponent"));
      manifest["p"] = ps;
    }
    if (!radii_text.empty()) {
      json rs = json::array();
      for (const auto& s : split_list(radii_text)) {
        const double r = parse_double(s, "radius");
        if (r != std::floor(r)) throw ValidationError("radius '" + s + "' is not an integer");
        rs.push_back(static_cast<int>(r));
      }
      manifest["radii"] = rs;
    }
    if (tol > 0.0 || max_sweeps > 0) {
      json solver = manifest.value("solver", json::object());
      if (tol > 0.0) solver["tolerance"] = tol;
      if (max_sweeps > 0) solver["max_sweeps"] = max_sweeps;
      manifest["solver"] = solver;
    }
    if (seed > 0) manifest["seed"] = seed;
    json options = manifest.value("options", json::object());
    if (!boundary.empty()) options["boundary"] = boundary;
    if (!field.empty()) options["field"] = field;
    if (!subset.empty()) options["subset"] = subset;
    if (!map.empty()) options["map"] = map;
    if (!shift.empty()) {
      try {
        options["shift"] = json::parse(shift);
      } catch (const json::parse_error&) {
        options["shift"] = shift;
      }
    }
    if (!options.empty()) manifest["options"] = options;

    RunOutput result = run_manifest(manifest, timing);
    const std::string kind = result.report["experiment"].get<std::string>();
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      write_file(dir / (kind + ".json"), result.report.dump(2) + "\n");
      write_file(dir / (kind + ".csv"), result.csv);
      for (const auto& [name, text] : result.extra_csv) write_file(dir / name, text);
    }
    if (format == "csv") {
      out << result.csv;
    } else {
      out << result.report.dump(2) << '\n';
    }
    if (!result.converged) {
      err << "warning: at least one Dirichlet solve did not converge\n";
      return kExitNotConverged;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const json::exception& e) {
    err << "error: malformed manifest field: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace pharm
