#include "pharm/energy.hpp"

#include <algorithm>
#include <sstream>

#include "pharm/error.hpp"

namespace pharm {

Exponent::Exponent(double p) : p_(p) {
  if (!(p >= kMin && p <= kMax)) {
    std::ostringstream os;
    os << "exponent p = " << p << " outside the supported range [" << kMin << ", " << kMax << "]";
    throw ValidationError(os.str());
  }
}

ScalarField::ScalarField(std::shared_ptr<const CayleyBall> ball, std::vector<double> values)
    : ball_(std::move(ball)), values_(std::move(values)) {
  if (!ball_) throw ValidationError("scalar field needs a ball");
  if (values_.size() != ball_->size()) {
    throw ValidationError("scalar field has " + std::to_string(values_.size()) +
                          " values for a ball of " + std::to_string(ball_->size()) + " vertices");
  }
  for (std::size_t v = 0; v < values_.size(); ++v) {
    if (!std::isfinite(values_[v])) {
      throw ValidationError("non-finite value at vertex " + ball_->model().format(ball_->vertex(v)));
    }
  }
}

ScalarField ScalarField::constant(std::shared_ptr<const CayleyBall> ball, double c) {
  const std::size_t n = ball->size();
  return ScalarField(std::move(ball), std::vector<double>(n, c));
}

ScalarField ScalarField::from_function(std::shared_ptr<const CayleyBall> ball,
                                       const std::function<double(const Element&)>& fn) {
  std::vector<double> values;
  values.reserve(ball->size());
  for (const auto& g : ball->vertices()) values.push_back(fn(g));
  return ScalarField(std::move(ball), std::move(values));
}

ScalarField ScalarField::delta(std::shared_ptr<const CayleyBall> ball, const Element& g) {
  auto idx = ball->index_of(g);
  if (!idx) throw ValidationError("delta at " + ball->model().format(g) + " outside the ball");
  std::vector<double> values(ball->size(), 0.0);
  values[*idx] = 1.0;
  return ScalarField(std::move(ball), std::move(values));
}

double ScalarField::at(const Element& g) const {
  auto idx = ball_->index_of(g);
  if (!idx) throw ValidationError(ball_->model().format(g) + " is not a vertex of the ball");
  return values_[*idx];
}

ScalarField ScalarField::restrict_to(int r) const {
  if (r == ball_->radius()) return *this;
  if (r < 1 || r > ball_->radius()) {
    throw ValidationError("cannot restrict a radius-" + std::to_string(ball_->radius()) +
                          " field to radius " + std::to_string(r));
  }
  auto sub = pharm::ball(ball_->model(), r);
  std::vector<double> values(values_.begin(), values_.begin() + static_cast<long>(sub->size()));
  return ScalarField(std::move(sub), std::move(values));
}

namespace {
void require_same_ball(const ScalarField& a, const ScalarField& b) {
  if (!a.ball().same_as(b.ball())) throw ValidationError("fields live on different balls");
}
}  // namespace

ScalarField ScalarField::operator+(const ScalarField& other) const {
  require_same_ball(*this, other);
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return ScalarField(ball_, std::move(v));
}

ScalarField ScalarField::operator-(const ScalarField& other) const {
  require_same_ball(*this, other);
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= other.values_[i];
  return ScalarField(ball_, std::move(v));
}

ScalarField ScalarField::operator*(double c) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= c;
  return ScalarField(ball_, std::move(v));
}

ScalarField ScalarField::plus_constant(double c) const {
  std::vector<double> v(values_);
  for (auto& x : v) x += c;
  return ScalarField(ball_, std::move(v));
}

double energy(const ScalarField& f, const Exponent& p) {
  const CayleyBall& b = f.ball();
  const auto vals = f.values();
  const double pv = p.value();
  double sum = 0.0;
  for (std::size_t v = 0; v < b.size(); ++v) {
    for (const Arc& a : b.arcs(v)) {
      if (!a.inside()) continue;
      const double d = std::abs(vals[a.target] - vals[v]);
      if (d == 0.0) continue;
      sum += pv == 2.0 ? d * d : std::pow(d, pv);
    }
  }
  return sum;
}

double seminorm_p(const ScalarField& f, const Exponent& p) {
  return std::pow(energy(f, p), 1.0 / p.value());
}

double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double bdp_norm(const ScalarField& f, const Exponent& p) { return sup_norm(f) + seminorm_p(f, p); }

double lp_norm(const ScalarField& f, double p) {
  double sum = 0.0;
  for (double x : f.values()) sum += std::pow(std::abs(x), p);
  return std::pow(sum, 1.0 / p);
}

double p_laplacian(const ScalarField& f, std::size_t v, const Exponent& p) {
  const CayleyBall& b = f.ball();
  if (v >= b.size()) throw ValidationError("vertex index out of range");
  if (!b.is_interior(v)) {
    throw ValidationError("p-Laplacian requested at boundary vertex " +
                          b.model().format(b.vertex(v)));
  }
  const auto vals = f.values();
  const double q = p.value() - 1.0;
  double sum = 0.0;
  for (const Arc& a : b.arcs(v)) sum += signed_power(vals[a.target] - vals[v], q);
  return sum;
}

double max_interior_residual(const ScalarField& f, const Exponent& p) {
  double m = 0.0;
  for (std::size_t v = 0; v < f.ball().interior_size(); ++v) {
    m = std::max(m, std::abs(p_laplacian(f, v, p)));
  }
  return m;
}

double pairing(const ScalarField& h, const ScalarField& f, const Exponent& p) {
  require_same_ball(h, f);
  const CayleyBall& b = h.ball();
  const auto hv = h.values();
  const auto fv = f.values();
  const double q = p.value() - 1.0;
  double sum = 0.0;
  for (std::size_t v = 0; v < b.size(); ++v) {
    for (const Arc& a : b.arcs(v)) {
      if (!a.inside()) continue;
      const double df = fv[a.target] - fv[v];
      if (df == 0.0) continue;
      sum += signed_power(hv[a.target] - hv[v], q) * df;
    }
  }
  return sum;
}

}  // namespace pharm
