#ifndef PHARM_DIRICHLET_HPP_
#define PHARM_DIRICHLET_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "pharm/energy.hpp"
#include "pharm/group_model.hpp"

namespace pharm {

enum class Initialization {
  LinearWarmStart,  // p = 2 solution (conjugate gradients), then sweeps
  Zero,             // free vertices start at 0
  ClampedMean,      // free vertices start at the mean clamped value
};

struct SolverConfig {
  double tolerance = 1e-8;
  std::size_t max_sweeps = 50000;
  bool warm_start = true;
  // Used only when warm_start is false.
  Initialization cold_start = Initialization::ClampedMean;

  Initialization initialization() const {
    return warm_start ? Initialization::LinearWarmStart : cold_start;
  }
};

struct SolveReport {
  std::size_t iterations = 0;  // Gauss-Seidel sweeps performed
  double final_energy = 0.0;
  double residual = 0.0;  // max over free vertices of |Delta_p u|
  bool converged = false;
  double elapsed_seconds = 0.0;
};

// Boundary data on a ball: every boundary vertex must be clamped; interior
// vertices may be clamped too. The remaining (free) interior vertices must
// each be joined to some clamped vertex through free vertices.
class DirichletProblem {
 public:
  DirichletProblem(std::shared_ptr<const CayleyBall> ball, Exponent p);

  void clamp(std::size_t v, double value);
  void clamp(const Element& g, double value);
  void release(std::size_t v);
  // Clamps every boundary vertex to fn(g).
  template <typename Fn>
  void clamp_boundary(Fn&& fn) {
    for (std::size_t v = ball_->interior_size(); v < ball_->size(); ++v) {
      clamp(v, fn(ball_->vertex(v)));
    }
  }

  const CayleyBall& ball() const noexcept { return *ball_; }
  const std::shared_ptr<const CayleyBall>& ball_ptr() const noexcept { return ball_; }
  const Exponent& p() const noexcept { return p_; }
  bool is_clamped(std::size_t v) const { return clamped_[v].has_value(); }
  const std::optional<double>& clamped(std::size_t v) const { return clamped_[v]; }
  std::vector<std::size_t> free_vertices() const;

  // Throws ValidationError naming the first violated invariant.
  void validate() const;

 private:
  std::shared_ptr<const CayleyBall> ball_;
  Exponent p_;
  std::vector<std::optional<double>> clamped_;
};

struct Solution {
  ScalarField field;
  SolveReport report;
};

// Minimizes the truncated p-Dirichlet energy subject to the clamped values
// by cyclic coordinate descent. Non-convergence is reported, not thrown.
Solution solve_dirichlet(const DirichletProblem& problem, const SolverConfig& config = {});

// argmin_t sum_j |values_j - t|^p, exact up to rounding.
double minimize_local(std::span<const double> values, double p, double start);

struct CapacityResult {
  double capacity = 0.0;
  ScalarField potential;
  SolveReport report;
};

// u = 1 on {|g| <= inner_radius}, u = 0 on the sphere of radius
// outer_radius; returns seminorm_p(u)^p of the p-harmonic interpolant.
CapacityResult capacity(const GroupModel& model, int inner_radius, int outer_radius,
                        const Exponent& p, const SolverConfig& config = {});

}  // namespace pharm

#endif  // PHARM_DIRICHLET_HPP_
