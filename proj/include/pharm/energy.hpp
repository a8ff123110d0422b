#ifndef PHARM_ENERGY_HPP_
#define PHARM_ENERGY_HPP_

// Norms, the p-Laplacian and the pairing <Delta_p h, f> on ball truncations.
//
// All sums run over arcs g -> g s^-1 with both endpoints inside the ball, so
// every unordered edge is counted twice, once per direction.

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "pharm/group_model.hpp"

namespace pharm {

class Exponent {
 public:
  static constexpr double kMin = 1.1;
  static constexpr double kMax = 8.0;

  // Throws ValidationError outside [kMin, kMax].
  explicit Exponent(double p);

  double value() const noexcept { return p_; }
  operator double() const noexcept { return p_; }

 private:
  double p_;
};

// A real value per vertex of a ball, in the ball's vertex order.
class ScalarField {
 public:
  // Throws ValidationError on a size mismatch or a non-finite value.
  ScalarField(std::shared_ptr<const CayleyBall> ball, std::vector<double> values);

  static ScalarField constant(std::shared_ptr<const CayleyBall> ball, double c);
  static ScalarField from_function(std::shared_ptr<const CayleyBall> ball,
                                   const std::function<double(const Element&)>& fn);
  static ScalarField delta(std::shared_ptr<const CayleyBall> ball, const Element& g);

  const CayleyBall& ball() const noexcept { return *ball_; }
  const std::shared_ptr<const CayleyBall>& ball_ptr() const noexcept { return ball_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t v) const { return values_[v]; }
  // Value at g; throws if g is not a vertex of the ball.
  double at(const Element& g) const;

  // Restriction to the ball of radius r <= ball().radius().
  ScalarField restrict_to(int r) const;

  ScalarField operator+(const ScalarField& other) const;
  ScalarField operator-(const ScalarField& other) const;
  ScalarField operator*(double c) const;
  ScalarField plus_constant(double c) const;

 private:
  std::shared_ptr<const CayleyBall> ball_;
  std::vector<double> values_;
};

// sign(t) |t|^q, with the zero-difference convention (0 -> 0).
inline double signed_power(double t, double q) {
  if (t == 0.0) return 0.0;
  if (q == 1.0) return t;
  const double m = std::pow(std::abs(t), q);
  return t > 0 ? m : -m;
}

// (sum over arcs of |f(g s^-1) - f(g)|^p)^(1/p).
double seminorm_p(const ScalarField& f, const Exponent& p);
// seminorm_p(f)^p, the truncated p-Dirichlet energy.
double energy(const ScalarField& f, const Exponent& p);
double sup_norm(const ScalarField& f);
// sup norm plus seminorm.
double bdp_norm(const ScalarField& f, const Exponent& p);
// (sum_g |f(g)|^p)^(1/p) over the ball's vertices.
double lp_norm(const ScalarField& f, double p);

// sum_s |f(g s^-1) - f(g)|^(p-2) (f(g s^-1) - f(g)) at interior vertex v.
// Throws ValidationError on a boundary vertex.
double p_laplacian(const ScalarField& f, std::size_t v, const Exponent& p);
// max |Delta_p f| over the interior vertices.
double max_interior_residual(const ScalarField& f, const Exponent& p);

// <Delta_p h, f> over arcs inside the common ball; throws on mismatched balls.
double pairing(const ScalarField& h, const ScalarField& f, const Exponent& p);

}  // namespace pharm

#endif  // PHARM_ENERGY_HPP_
