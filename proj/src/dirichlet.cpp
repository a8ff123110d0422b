#include "pharm/dirichlet.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

#include "pharm/error.hpp"

namespace pharm {

DirichletProblem::DirichletProblem(std::shared_ptr<const CayleyBall> ball, Exponent p)
    : ball_(std::move(ball)), p_(p), clamped_(ball_ ? ball_->size() : 0) {
  if (!ball_) throw ValidationError("Dirichlet problem needs a ball");
}

void DirichletProblem::clamp(std::size_t v, double value) {
  if (v >= clamped_.size()) throw ValidationError("clamped vertex index out of range");
  if (!std::isfinite(value)) throw ValidationError("clamped value must be finite");
  clamped_[v] = value;
}

void DirichletProblem::clamp(const Element& g, double value) {
  auto idx = ball_->index_of(g);
  if (!idx) throw ValidationError(ball_->model().format(g) + " is not a vertex of the ball");
  clamp(*idx, value);
}

void DirichletProblem::release(std::size_t v) {
  if (v >= ball_->interior_size()) throw ValidationError("only interior vertices can be free");
  clamped_[v].reset();
}

std::vector<std::size_t> DirichletProblem::free_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < ball_->interior_size(); ++v) {
    if (!clamped_[v]) out.push_back(v);
  }
  return out;
}

void DirichletProblem::validate() const {
  const CayleyBall& b = *ball_;
  for (std::size_t v = b.interior_size(); v < b.size(); ++v) {
    if (!clamped_[v]) {
      throw ValidationError("boundary vertex " + b.model().format(b.vertex(v)) + " is not clamped");
    }
  }
  const auto free = free_vertices();
  if (free.empty()) throw ValidationError("Dirichlet problem has no free interior vertex");

  // Every free vertex must reach a clamped vertex through free vertices.
  std::vector<char> reached(b.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < b.size(); ++v) {
    if (clamped_[v]) {
      reached[v] = 1;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (const Arc& a : b.arcs(v)) {
      if (!a.inside() || reached[a.target]) continue;
      reached[a.target] = 1;
      queue.push_back(a.target);
    }
  }
  for (std::size_t v : free) {
    if (!reached[v]) {
      throw ValidationError("free vertex " + b.model().format(b.vertex(v)) +
                            " is not connected to any clamped vertex");
    }
  }
}

double minimize_local(std::span<const double> values, double p, double start) {
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (lo == hi) return lo;
  if (p == 2.0) {
    double s = 0.0;
    for (double x : values) s += x;
    return std::clamp(s / static_cast<double>(values.size()), lo, hi);
  }
  const double q = p - 1.0;
  // G(t) = sum_j sign(t - x_j)|t - x_j|^q is strictly increasing with
  // G(lo) < 0 < G(hi); its root is the minimizer.
  auto eval = [&](double t, double& slope) {
    double g = 0.0;
    slope = 0.0;
    for (double x : values) {
      const double d = t - x;
      if (d == 0.0) {
        if (q < 1.0) slope = std::numeric_limits<double>::infinity();
        continue;
      }
      const double ad = std::abs(d);
      const double m = std::pow(ad, q - 1.0);
      g += d * m;
      slope += q * m;
    }
    return g;
  };

  double t = std::clamp(start, lo, hi);
  double step_old = hi - lo;
  double step = step_old;
  for (int iter = 0; iter < 200; ++iter) {
    double slope = 0.0;
    const double g = eval(t, slope);
    if (g == 0.0) return t;
    if (g < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) return 0.5 * (lo + hi);

    double next = 0.0;
    const bool newton_ok = std::isfinite(slope) && slope > 0.0;
    const double newton = newton_ok ? t - g / slope : 0.0;
    if (!newton_ok || !(newton > lo && newton < hi) || std::abs(2.0 * g) > std::abs(step_old * slope)) {
      step_old = step;
      next = 0.5 * (lo + hi);
      step = next - t;
    } else {
      step_old = step;
      next = newton;
      step = next - t;
    }
    if (std::abs(step) <= 2.0 * std::numeric_limits<double>::epsilon() * scale) return next;
    t = next;
  }
  return t;
}

namespace {

// Solves the p = 2 problem by conjugate gradients on the free vertices.
void linear_solve(const DirichletProblem& prob, const std::vector<std::size_t>& free,
                  std::vector<double>& u) {
  const CayleyBall& b = prob.ball();
  const std::size_t n = free.size();
  std::vector<std::int64_t> slot(b.size(), -1);
  for (std::size_t i = 0; i < n; ++i) slot[free[i]] = static_cast<std::int64_t>(i);

  const double deg = static_cast<double>(b.degree());
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = deg * x[i];
      for (const Arc& a : b.arcs(free[i])) {
        const auto j = slot[a.target];
        if (j >= 0) s -= x[static_cast<std::size_t>(j)];
      }
      y[i] = s;
    }
  };

  std::vector<double> rhs(n, 0.0), x(n), r(n), d(n), q(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Arc& a : b.arcs(free[i])) {
      if (slot[a.target] < 0) rhs[i] += *prob.clamped(a.target);
    }
    x[i] = u[free[i]];
  }
  apply(x, q);
  double rr = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = rhs[i] - q[i];
    d[i] = r[i];
    rr += r[i] * r[i];
    bb += rhs[i] * rhs[i];
  }
  const double stop = 1e-28 * std::max(bb, 1e-300);
  for (std::size_t it = 0; it < 20 * n + 100 && rr > stop; ++it) {
    apply(d, q);
    double dq = 0.0;
    for (std::size_t i = 0; i < n; ++i) dq += d[i] * q[i];
    const double alpha = rr / dq;
    double rr_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * d[i];
      r[i] -= alpha * q[i];
      rr_new += r[i] * r[i];
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) d[i] = r[i] + beta * d[i];
  }
  for (std::size_t i = 0; i < n; ++i) u[free[i]] = x[i];
}

double total_energy(const CayleyBall& b, const std::vector<double>& u, double p) {
  double e = 0.0;
  for (std::size_t v = 0; v < b.size(); ++v) {
    for (const Arc& a : b.arcs(v)) {
      if (!a.inside()) continue;
      const double d = std::abs(u[a.target] - u[v]);
      if (d != 0.0) e += p == 2.0 ? d * d : std::pow(d, p);
    }
  }
  return e;
}

// One damped Newton step on all free vertices at once. The Hessian is the
// Laplacian with edge weights |du|^(p-2), each |du| floored at `floor` so the
// weights stay finite (p < 2) and positive (p > 2); the step is solved by
// Jacobi-preconditioned conjugate gradients, projected onto [lo, hi] (which
// never raises the energy) and halved until the energy decreases. Returns
// false when no decrease was found.
bool newton_step(const CayleyBall& b, const std::vector<std::size_t>& free,
                 const std::vector<std::int64_t>& slot, std::vector<double>& u, double p,
                 double lo, double hi, double& current_energy) {
  const std::size_t n = free.size();
  const double q = p - 1.0;
  const double floor = 1e-9 * (hi - lo);
  const std::size_t deg = b.degree();
  std::vector<double> w(n * deg), diag(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto arcs = b.arcs(free[i]);
    for (std::size_t k = 0; k < deg; ++k) {
      const double d = u[arcs[k].target] - u[free[i]];
      w[i * deg + k] = std::pow(std::max(std::abs(d), floor), p - 2.0);
      diag[i] += w[i * deg + k];
      rhs[i] += signed_power(d, q) / q;
    }
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto arcs = b.arcs(free[i]);
      double s = diag[i] * x[i];
      for (std::size_t k = 0; k < deg; ++k) {
        const auto j = slot[arcs[k].target];
        if (j >= 0) s -= w[i * deg + k] * x[static_cast<std::size_t>(j)];
      }
      y[i] = s;
    }
  };
  std::vector<double> x(n, 0.0), r = rhs, z(n), d(n), hd(n);
  double rz = 0.0, bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = r[i] / diag[i];
    d[i] = z[i];
    rz += r[i] * z[i];
    bnorm += r[i] * r[i];
  }
  for (std::size_t it = 0; it < 4 * n + 100; ++it) {
    double rr = 0.0;
    for (double v : r) rr += v * v;
    if (rr <= 1e-24 * bnorm) break;
    apply(d, hd);
    double dhd = 0.0;
    for (std::size_t i = 0; i < n; ++i) dhd += d[i] * hd[i];
    if (!(dhd > 0.0)) break;
    const double alpha = rz / dhd;
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * d[i];
      r[i] -= alpha * hd[i];
      z[i] = r[i] / diag[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
  }
  std::vector<double> trial = u;
  for (double t = 1.0; t > 1e-6; t *= 0.5) {
    for (std::size_t i = 0; i < n; ++i) trial[free[i]] = std::clamp(u[free[i]] + t * x[i], lo, hi);
    const double e = total_energy(b, trial, p);
    if (e < current_energy) {
      u.swap(trial);
      current_energy = e;
      return true;
    }
  }
  return false;
}

double free_residual(const CayleyBall& b, const std::vector<std::size_t>& free,
                     const std::vector<double>& u, double q) {
  double m = 0.0;
  for (std::size_t v : free) {
    double s = 0.0;
    for (const Arc& a : b.arcs(v)) s += signed_power(u[a.target] - u[v], q);
    m = std::max(m, std::abs(s));
  }
  return m;
}

}  // namespace

Solution solve_dirichlet(const DirichletProblem& prob, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(config.tolerance > 0.0)) throw ValidationError("solver tolerance must be positive");
  prob.validate();

  const CayleyBall& b = prob.ball();
  const double p = prob.p().value();
  const auto free = prob.free_vertices();

  double cmin = std::numeric_limits<double>::infinity();
  double cmax = -cmin;
  double csum = 0.0;
  std::size_t ccount = 0;
  std::vector<double> u(b.size(), 0.0);
  for (std::size_t v = 0; v < b.size(); ++v) {
    if (const auto& c = prob.clamped(v)) {
      u[v] = *c;
      cmin = std::min(cmin, *c);
      cmax = std::max(cmax, *c);
      csum += *c;
      ++ccount;
    }
  }

  auto finish = [&](SolveReport report) {
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ScalarField field(prob.ball_ptr(), std::move(u));
    report.final_energy = energy(field, prob.p());
    return Solution{std::move(field), report};
  };

  if (cmin == cmax) {
    for (std::size_t v : free) u[v] = cmin;
    SolveReport report;
    report.converged = true;
    return finish(report);
  }

  switch (config.initialization()) {
    case Initialization::Zero:
      for (std::size_t v : free) u[v] = 0.0;
      break;
    case Initialization::ClampedMean:
      for (std::size_t v : free) u[v] = csum / static_cast<double>(ccount);
      break;
    case Initialization::LinearWarmStart:
      for (std::size_t v : free) u[v] = csum / static_cast<double>(ccount);
      linear_solve(prob, free, u);
      for (std::size_t v : free) u[v] = std::clamp(u[v], cmin, cmax);
      break;
  }

  const double q = p - 1.0;
  // Relative energy change below a few ulps is rounding noise.
  const double energy_tol =
      std::max(config.tolerance * config.tolerance, 64.0 * std::numeric_limits<double>::epsilon());
  std::vector<double> nb(b.degree());
  std::vector<std::int64_t> slot(b.size(), -1);
  for (std::size_t i = 0; i < free.size(); ++i) slot[free[i]] = static_cast<std::int64_t>(i);
  // Coordinate descent alone stalls for p far from 2; interleave global
  // Newton steps every few sweeps.
  constexpr std::size_t kNewtonEvery = 4;
  bool newton_useful = p != 2.0;
  SolveReport report;
  double prev_energy = total_energy(b, u, p);
  for (std::size_t sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    for (std::size_t v : free) {
      const auto arcs = b.arcs(v);
      for (std::size_t i = 0; i < arcs.size(); ++i) nb[i] = u[arcs[i].target];
      u[v] = minimize_local(nb, p, u[v]);
    }
    double e = total_energy(b, u, p);
    if (newton_useful && sweep % kNewtonEvery == 0) {
      newton_step(b, free, slot, u, p, cmin, cmax, e);
    }
    report.iterations = sweep;
    report.residual = free_residual(b, free, u, q);
    const double change = std::abs(prev_energy - e) / std::max(e, 1e-300);
    prev_energy = e;
    if (report.residual <= config.tolerance && change <= energy_tol) {
      report.converged = true;
      break;
    }
  }
  return finish(report);
}

CapacityResult capacity(const GroupModel& model, int inner_radius, int outer_radius,
                        const Exponent& p, const SolverConfig& config) {
  if (inner_radius < 0) throw ValidationError("inner radius must be >= 0");
  if (inner_radius >= outer_radius) {
    throw ValidationError("capacity needs inner radius < outer radius (got r = " +
                          std::to_string(inner_radius) + ", R = " + std::to_string(outer_radius) +
                          ")");
  }
  auto b = ball(model, outer_radius);
  DirichletProblem prob(b, p);
  for (std::size_t v = 0; v < b->size(); ++v) {
    if (b->length(static_cast<std::size_t>(v)) <= inner_radius) {
      prob.clamp(v, 1.0);
    } else if (!b->is_interior(v)) {
      prob.clamp(v, 0.0);
    }
  }
  if (inner_radius + 1 == outer_radius) {
    // Every vertex is clamped; the potential is the data itself.
    std::vector<double> values(b->size());
    for (std::size_t v = 0; v < b->size(); ++v) values[v] = *prob.clamped(v);
    ScalarField u(b, std::move(values));
    const double cap = energy(u, p);
    SolveReport report;
    report.final_energy = cap;
    report.converged = true;
    return CapacityResult{cap, std::move(u), report};
  }
  auto sol = solve_dirichlet(prob, config);
  const double cap = energy(sol.field, p);
  return CapacityResult{cap, std::move(sol.field), sol.report};
}

}  // namespace pharm
