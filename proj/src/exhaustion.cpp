#include "pharm/exhaustion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "pharm/error.hpp"

namespace pharm {

namespace {

void check_radii(const std::vector<int>& radii, std::size_t min_count, int min_radius) {
  if (radii.size() < min_count) {
    throw ValidationError("exhaustion needs at least " + std::to_string(min_count) + " radii");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < min_radius) {
      throw ValidationError("exhaustion radii must be >= " + std::to_string(min_radius));
    }
    if (i && radii[i] <= radii[i - 1]) throw ValidationError("radii must be strictly increasing");
  }
}

std::size_t core_size(const CayleyBall& b, int core_radius) {
  return b.sphere(std::min(core_radius, b.radius())).second;
}

// sup over the shared core prefix of |a - b|.
double core_change(const ScalarField& a, const ScalarField& b, int core_radius) {
  const std::size_t n = std::min(core_size(a.ball(), core_radius), core_size(b.ball(), core_radius));
  double m = 0.0;
  for (std::size_t v = 0; v < n; ++v) m = std::max(m, std::abs(a[v] - b[v]));
  return m;
}

double loglog_slope(int r0, double v0, int r1, double v1) {
  if (v0 <= 0.0 || v1 <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(v1 / v0) / std::log(static_cast<double>(r1) / static_cast<double>(r0));
}

template <typename Rows, typename Get>
bool strictly_decreasing(const Rows& rows, Get get) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(get(rows[i]) < get(rows[i - 1]))) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(WitnessVerdict v) {
  switch (v) {
    case WitnessVerdict::WitnessFound:
      return "witness_found";
    case WitnessVerdict::GapVanishing:
      return "gap_vanishing";
    case WitnessVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(ParabolicityVerdict v) {
  switch (v) {
    case ParabolicityVerdict::Parabolic:
      return "parabolic";
    case ParabolicityVerdict::NonParabolic:
      return "non_parabolic";
    case ParabolicityVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(MassiveVerdict v) {
  switch (v) {
    case MassiveVerdict::Massive:
      return "massive";
    case MassiveVerdict::NotMassive:
      return "not_massive";
    case MassiveVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

DirectionMarking DirectionMarking::for_model(const GroupModel& model) {
  DirectionMarking m;
  switch (model.spec().family) {
    case Family::Free:
      m.rule = "first letter = a";
      m.label = [](const Element& g) { return !g.code.empty() && g.code.front() == 1 ? 1 : 0; };
      m.plus = model.reduce("a");
      m.minus = model.reduce("A");
      break;
    case Family::FreeProductZ2:
      m.rule = "first letter = a";
      m.label = [](const Element& g) { return !g.code.empty() && g.code.front() == 1 ? 1 : 0; };
      m.plus = model.reduce("a");
      m.minus = model.reduce("b");
      break;
    case Family::FreeAbelian: {
      m.rule = "sign of last coordinate";
      m.label = [](const Element& g) { return g.code.back() > 0 ? 1 : 0; };
      const char up = static_cast<char>('a' + model.spec().rank - 1);
      const char down = static_cast<char>('A' + model.spec().rank - 1);
      m.plus = model.reduce(std::string(1, up));
      m.minus = model.reduce(std::string(1, down));
      break;
    }
    case Family::Lamplighter:
      m.rule = "cursor sign";
      m.label = [](const Element& g) { return g.code.front() > 0 ? 1 : 0; };
      m.plus = model.reduce("t");
      m.minus = model.reduce("T");
      break;
  }
  return m;
}

WitnessReport boundary_witness(const GroupModel& model, const DirectionMarking& marking,
                               const Exponent& p, const std::vector<int>& radii,
                               const SolverConfig& config, const ExhaustionThresholds& th) {
  check_radii(radii, 3, 2);
  WitnessReport report;
  bool all_converged = true;
  for (int n : radii) {
    auto b = ball(model, n);
    auto [first, last] = b->sphere(n);
    int seen = 0;
    for (std::size_t v = first; v < last; ++v) seen |= 1 << marking.label(b->vertex(v));
    if (seen != 3) {
      throw ValidationError("marking '" + marking.rule + "' does not use both labels on sphere " +
                            std::to_string(n));
    }
    DirichletProblem prob(b, p);
    prob.clamp_boundary([&](const Element& g) { return static_cast<double>(marking.label(g)); });
    auto sol = solve_dirichlet(prob, config);
    all_converged = all_converged && sol.report.converged;
    WitnessRow row;
    row.radius = n;
    row.gap = sol.field.at(marking.plus) - sol.field.at(marking.minus);
    row.energy = sol.report.final_energy;
    row.sup_norm = sup_norm(sol.field);
    row.solve = sol.report;
    report.rows.push_back(row);
    report.field = std::move(sol.field);
  }

  const auto& last = report.rows.back();
  const auto& prev = report.rows[report.rows.size() - 2];
  report.stabilization_delta = std::abs(last.gap - prev.gap);
  std::ostringstream diag;
  if (!all_converged) {
    diag << "at least one Dirichlet solve did not converge";
    report.verdict = WitnessVerdict::Inconclusive;
  } else {
    const bool energy_bounded = last.energy <= (1.0 + th.energy_growth_tol) * prev.energy;
    const double slope = loglog_slope(prev.radius, prev.gap, last.radius, last.gap);
    const bool decreasing =
        strictly_decreasing(report.rows, [](const WitnessRow& r) { return r.gap; });
    diag << "delta=" << report.stabilization_delta << " slope=" << slope
         << " energy_bounded=" << energy_bounded;
    if (report.stabilization_delta <= th.stab_tol && last.gap >= th.gap_floor && energy_bounded) {
      report.verdict = WitnessVerdict::WitnessFound;
    } else if (decreasing && (last.gap < th.gap_floor || slope >= th.vanish_exponent)) {
      report.verdict = WitnessVerdict::GapVanishing;
    } else {
      report.verdict = WitnessVerdict::Inconclusive;
    }
  }
  report.diagnostics = diag.str();
  return report;
}

ParabolicityReport parabolicity_profile(const GroupModel& model, const Exponent& p,
                                        const std::vector<int>& radii,
                                        const SolverConfig& config,
                                        const ExhaustionThresholds& th) {
  check_radii(radii, 2, 1);
  ParabolicityReport report;
  bool all_converged = true;
  for (int r : radii) {
    auto cap = capacity(model, 0, r, p, config);
    all_converged = all_converged && cap.report.converged;
    report.rows.push_back({r, cap.capacity, cap.report});
  }
  const auto& last = report.rows.back();
  const auto& prev = report.rows[report.rows.size() - 2];
  const double slope = loglog_slope(prev.radius, prev.capacity, last.radius, last.capacity);
  const bool decreasing =
      strictly_decreasing(report.rows, [](const CapacityRow& r) { return r.capacity; });
  std::ostringstream diag;
  diag << "slope=" << slope;
  if (!all_converged) {
    diag << "; at least one capacity solve did not converge";
    report.verdict = ParabolicityVerdict::Inconclusive;
  } else if (decreasing && (last.capacity < th.gap_floor || slope >= th.vanish_exponent)) {
    report.verdict = ParabolicityVerdict::Parabolic;
  } else if (last.capacity >= th.gap_floor && slope <= th.stall_exponent) {
    report.verdict = ParabolicityVerdict::NonParabolic;
  } else {
    report.verdict = ParabolicityVerdict::Inconclusive;
  }
  report.diagnostics = diag.str();
  return report;
}

RoydenResult royden_decompose(const ScalarField& f, const Exponent& p,
                              const std::vector<int>& radii, const SolverConfig& config,
                              const ExhaustionThresholds& th) {
  check_radii(radii, 1, 1);
  if (radii.back() > f.ball().radius()) {
    throw ValidationError("decomposition radius " + std::to_string(radii.back()) +
                          " exceeds the field's ball radius " + std::to_string(f.ball().radius()));
  }
  const GroupModel& model = f.ball().model();
  std::vector<RoydenRow> rows;
  std::optional<ScalarField> h;
  bool all_converged = true;
  for (int n : radii) {
    auto b = ball(model, n);
    DirichletProblem prob(b, p);
    for (std::size_t v = b->interior_size(); v < b->size(); ++v) prob.clamp(v, f[v]);
    auto sol = solve_dirichlet(prob, config);
    all_converged = all_converged && sol.report.converged;
    RoydenRow row;
    row.radius = n;
    row.core_change =
        h ? core_change(*h, sol.field, th.core_radius) : std::numeric_limits<double>::quiet_NaN();
    row.solve = sol.report;
    rows.push_back(row);
    h = std::move(sol.field);
  }
  ScalarField u = f.restrict_to(h->ball().radius()) - *h;
  RoydenResult result{u, *h, std::move(rows), 0.0, 0.0, false, false};
  result.u_seminorm = seminorm_p(u, p);
  const CayleyBall& b = u.ball();
  for (std::size_t v = 0; v < b.size(); ++v) {
    if (2 * b.length(v) > b.radius()) result.u_tail_sup = std::max(result.u_tail_sup, std::abs(u[v]));
  }
  result.stabilized = result.rows.size() >= 2 && result.rows.back().core_change <= th.stab_tol;
  result.converged = all_converged;
  return result;
}

MassiveSubsetSpec MassiveSubsetSpec::subtree(const GroupModel& model, std::string_view letter) {
  const Family fam = model.spec().family;
  if (fam != Family::Free && fam != Family::FreeProductZ2) {
    throw ValidationError("subtree subsets need a free group or a free product of Z_2");
  }
  auto idx = model.generator_index(letter);
  if (!idx || *idx >= model.generators().size() || model.generators()[*idx].value.code.size() != 1) {
    throw ValidationError("subtree letter '" + std::string(letter) + "' is not a base generator");
  }
  const std::int32_t code = model.generators()[*idx].value.code.front();
  MassiveSubsetSpec spec;
  spec.description = "reduced words starting with " + std::string(letter);
  spec.contains = [code](const Element& g) { return !g.code.empty() && g.code.front() == code; };
  return spec;
}

MassiveSubsetSpec MassiveSubsetSpec::half_space(const GroupModel& model) {
  if (model.spec().family != Family::FreeAbelian) {
    throw ValidationError("half-space subsets need a free abelian group");
  }
  MassiveSubsetSpec spec;
  spec.description = "last coordinate >= 1";
  spec.contains = [](const Element& g) { return g.code.back() >= 1; };
  return spec;
}

InnerPotentialResult inner_potential(const GroupModel& model, const MassiveSubsetSpec& subset,
                                     const Exponent& p, const std::vector<int>& radii,
                                     const SolverConfig& config, const ExhaustionThresholds& th) {
  check_radii(radii, 2, 2);
  std::vector<InnerPotentialRow> rows;
  std::optional<ScalarField> prev;
  bool all_converged = true;
  for (int n : radii) {
    auto b = ball(model, n);
    std::vector<char> in_a(b->size());
    for (std::size_t v = 0; v < b->size(); ++v) in_a[v] = subset.contains(b->vertex(v)) ? 1 : 0;

    // A must meet the interior, have a vertex boundary, and be connected.
    std::size_t seed = b->size();
    bool has_boundary = false;
    std::size_t members = 0;
    for (std::size_t v = 0; v < b->size(); ++v) {
      if (!in_a[v]) continue;
      ++members;
      if (seed == b->size() && b->is_interior(v)) seed = v;
      for (const Arc& a : b->arcs(v)) {
        if (a.inside() && !in_a[a.target]) has_boundary = true;
      }
    }
    if (seed == b->size()) {
      throw ValidationError("subset '" + subset.description + "' misses the interior at radius " +
                            std::to_string(n));
    }
    if (!has_boundary) {
      throw ValidationError("subset '" + subset.description + "' has empty vertex boundary at radius " +
                            std::to_string(n));
    }
    std::vector<char> seen(b->size(), 0);
    std::deque<std::size_t> queue{seed};
    seen[seed] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (const Arc& a : b->arcs(v)) {
        if (!a.inside() || !in_a[a.target] || seen[a.target]) continue;
        seen[a.target] = 1;
        ++reached;
        queue.push_back(a.target);
      }
    }
    if (reached != members) {
      throw ValidationError("subset '" + subset.description + "' is disconnected at radius " +
                            std::to_string(n));
    }

    DirichletProblem prob(b, p);
    for (std::size_t v = 0; v < b->size(); ++v) {
      if (in_a[v] && b->is_interior(v)) continue;
      prob.clamp(v, in_a[v] ? 1.0 : 0.0);
    }
    auto sol = solve_dirichlet(prob, config);
    all_converged = all_converged && sol.report.converged;

    InnerPotentialRow row;
    row.radius = n;
    const std::size_t core = core_size(*b, th.core_radius);
    for (std::size_t v = 0; v < core; ++v) {
      if (in_a[v]) row.core_max = std::max(row.core_max, sol.field[v]);
    }
    row.core_change = prev ? core_change(*prev, sol.field, th.core_radius)
                           : std::numeric_limits<double>::quiet_NaN();
    row.solve = sol.report;
    rows.push_back(row);
    prev = std::move(sol.field);
  }

  InnerPotentialResult result{*prev, std::move(rows), {}, MassiveVerdict::Inconclusive, {}};
  const ScalarField& u = result.field;
  const CayleyBall& b = u.ball();
  InnerPotentialChecks& checks = result.checks;
  checks.zero_on_boundary = true;
  for (std::size_t v = 0; v < b.size(); ++v) {
    const bool member = subset.contains(b.vertex(v));
    if (member) {
      checks.sup_on_a = std::max(checks.sup_on_a, u[v]);
      if (b.is_interior(v)) checks.residual = std::max(checks.residual, std::abs(p_laplacian(u, v, p)));
      continue;
    }
    for (const Arc& a : b.arcs(v)) {
      if (a.inside() && subset.contains(b.vertex(a.target)) && u[v] != 0.0) {
        checks.zero_on_boundary = false;
      }
    }
  }
  checks.harmonic_on_a = checks.residual <= config.tolerance;
  checks.sup_is_one = checks.sup_on_a == 1.0;

  const auto& last = result.rows.back();
  const auto& before = result.rows[result.rows.size() - 2];
  const double slope = loglog_slope(before.radius, before.core_max, last.radius, last.core_max);
  const bool decreasing =
      strictly_decreasing(result.rows, [](const InnerPotentialRow& r) { return r.core_max; });
  std::ostringstream diag;
  diag << "core_change=" << last.core_change << " slope=" << slope;
  if (!all_converged) {
    diag << "; at least one solve did not converge";
    result.verdict = MassiveVerdict::Inconclusive;
  } else if (last.core_change <= th.stab_tol && last.core_max >= th.gap_floor) {
    result.verdict = MassiveVerdict::Massive;
  } else if (decreasing && (last.core_max < th.gap_floor || slope >= th.vanish_exponent)) {
    result.verdict = MassiveVerdict::NotMassive;
  } else {
    result.verdict = MassiveVerdict::Inconclusive;
  }
  result.diagnostics = diag.str();
  return result;
}

}  // namespace pharm
