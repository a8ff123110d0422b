#ifndef PHARM_EXHAUSTION_HPP_
#define PHARM_EXHAUSTION_HPP_

// Ball-exhaustion experiments. Each run solves a sequence of finite
// Dirichlet problems on O_n for increasing n and reports how the solutions
// behave; verdicts are numerical evidence, not proofs.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pharm/dirichlet.hpp"
#include "pharm/energy.hpp"
#include "pharm/group_model.hpp"

namespace pharm {

struct ExhaustionThresholds {
  double gap_floor = 0.05;
  double stab_tol = 0.01;
  // A decreasing sequence whose last log-log slope is at least this is
  // treated as power-law decay to zero.
  double vanish_exponent = 0.25;
  // A sequence whose last log-log slope is at most this has stalled.
  double stall_exponent = 0.05;
  // Relative energy growth over the last step allowed for "bounded energy".
  double energy_growth_tol = 0.1;
  int core_radius = 2;
};

// Two-colouring of spheres standing in for two candidate boundary points.
//   free, free_product_z2: first letter is a
//   free_abelian:          last coordinate > 0
//   lamplighter:           cursor > 0
struct DirectionMarking {
  std::string rule;
  std::function<int(const Element&)> label;
  Element plus;
  Element minus;

  static DirectionMarking for_model(const GroupModel& model);
};

enum class WitnessVerdict { WitnessFound, GapVanishing, Inconclusive };
std::string_view to_string(WitnessVerdict v);

struct WitnessRow {
  int radius = 0;
  double gap = 0.0;
  double energy = 0.0;
  double sup_norm = 0.0;
  SolveReport solve;
};

struct WitnessReport {
  std::vector<WitnessRow> rows;
  WitnessVerdict verdict = WitnessVerdict::Inconclusive;
  double stabilization_delta = 0.0;
  std::string diagnostics;
  // Extension at the largest radius.
  std::optional<ScalarField> field;
};

// Solves on O_n with the marking as boundary data for every n in `radii`
// (strictly increasing, at least three entries).
WitnessReport boundary_witness(const GroupModel& model, const DirectionMarking& marking,
                               const Exponent& p, const std::vector<int>& radii,
                               const SolverConfig& config = {},
                               const ExhaustionThresholds& thresholds = {});

enum class ParabolicityVerdict { Parabolic, NonParabolic, Inconclusive };
std::string_view to_string(ParabolicityVerdict v);

struct CapacityRow {
  int radius = 0;
  double capacity = 0.0;
  SolveReport solve;
};

struct ParabolicityReport {
  std::vector<CapacityRow> rows;
  ParabolicityVerdict verdict = ParabolicityVerdict::Inconclusive;
  std::string diagnostics;
};

// capacity(model, 0, R, p) along the radii.
ParabolicityReport parabolicity_profile(const GroupModel& model, const Exponent& p,
                                        const std::vector<int>& radii,
                                        const SolverConfig& config = {},
                                        const ExhaustionThresholds& thresholds = {});

struct RoydenRow {
  int radius = 0;
  // sup over the core of |h_n - h_{previous n}|; NaN on the first row.
  double core_change = 0.0;
  SolveReport solve;
};

struct RoydenResult {
  ScalarField u;  // f - h on the final ball
  ScalarField h;  // p-harmonic part at the largest radius
  std::vector<RoydenRow> rows;
  double u_seminorm = 0.0;
  // max |u| on the outer half {|g| > N/2} of the final ball
  double u_tail_sup = 0.0;
  bool stabilized = false;
  bool converged = false;
};

// For each n in radii, h_n is the p-harmonic extension into O_n of f's
// values on the sphere of radius n; f must live on a ball of radius at least
// max(radii).
RoydenResult royden_decompose(const ScalarField& f, const Exponent& p,
                              const std::vector<int>& radii, const SolverConfig& config = {},
                              const ExhaustionThresholds& thresholds = {});

struct MassiveSubsetSpec {
  std::string description;
  std::function<bool(const Element&)> contains;

  // Reduced words starting with the given base letter (free groups and free
  // products of Z_2).
  static MassiveSubsetSpec subtree(const GroupModel& model, std::string_view letter);
  // {last coordinate >= 1} in Z^d.
  static MassiveSubsetSpec half_space(const GroupModel& model);
};

enum class MassiveVerdict { Massive, NotMassive, Inconclusive };
std::string_view to_string(MassiveVerdict v);

struct InnerPotentialRow {
  int radius = 0;
  double core_change = 0.0;  // NaN on the first row
  double core_max = 0.0;
  SolveReport solve;
};

struct InnerPotentialChecks {
  double residual = 0.0;  // max |Delta_p u| over A-interior
  bool harmonic_on_a = false;
  bool zero_on_boundary = false;
  double sup_on_a = 0.0;
  bool sup_is_one = false;
};

struct InnerPotentialResult {
  ScalarField field;
  std::vector<InnerPotentialRow> rows;
  InnerPotentialChecks checks;
  MassiveVerdict verdict = MassiveVerdict::Inconclusive;
  std::string diagnostics;
};

// Solves on O_n intersected with A with u = 0 on the vertex boundary of A
// and u = 1 on the part of the sphere of radius n inside A.
InnerPotentialResult inner_potential(const GroupModel& model, const MassiveSubsetSpec& subset,
                                     const Exponent& p, const std::vector<int>& radii,
                                     const SolverConfig& config = {},
                                     const ExhaustionThresholds& thresholds = {});

}  // namespace pharm

#endif  // PHARM_EXHAUSTION_HPP_
