#ifndef PHARM_ROUGHISO_HPP_
#define PHARM_ROUGHISO_HPP_

// Rough isometries between truncated Cayley graphs.
//
// A map phi: X -> Y is checked against
//   d_X(x, x') / a - b <= d_Y(phi x, phi x') <= a d_X(x, x') + b
//   every y (away from the truncation edge) lies within c of the image.
// Constants are searched on the grid a in {1, 1.25, ..., 4}, b in {0, ..., 8}
// with the smallest b preferred, then the smallest a; c is the smallest
// integer >= 1 that works.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pharm/dirichlet.hpp"
#include "pharm/energy.hpp"
#include "pharm/exhaustion.hpp"
#include "pharm/group_model.hpp"

namespace pharm {

struct RoughConstants {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;

  bool operator==(const RoughConstants&) const = default;
};

// A vertex map from a domain ball into a codomain ball, stored as codomain
// vertex indices, together with its rough-isometry constants.
class CoarseMap {
 public:
  CoarseMap(std::shared_ptr<const CayleyBall> domain, std::shared_ptr<const CayleyBall> codomain,
            std::vector<std::size_t> image, RoughConstants constants);

  const CayleyBall& domain() const noexcept { return *domain_; }
  const CayleyBall& codomain() const noexcept { return *codomain_; }
  const std::shared_ptr<const CayleyBall>& domain_ptr() const noexcept { return domain_; }
  const std::shared_ptr<const CayleyBall>& codomain_ptr() const noexcept { return codomain_; }
  const RoughConstants& constants() const noexcept { return constants_; }

  std::size_t image_index(std::size_t v) const { return image_[v]; }
  const Element& image(std::size_t v) const { return codomain_->vertex(image_[v]); }
  // phi(x) for a domain vertex x; throws if x is outside the domain ball.
  const Element& operator()(const Element& x) const;
  bool defined_at(const Element& x) const { return domain_->index_of(x).has_value(); }

 private:
  std::shared_ptr<const CayleyBall> domain_;
  std::shared_ptr<const CayleyBall> codomain_;
  std::vector<std::size_t> image_;
  RoughConstants constants_;
};

using VertexMap = std::function<Element(const Element&)>;

struct FitOptions {
  // All pairs are used when there are at most this many, otherwise a
  // seeded random sample of this size.
  std::size_t sample_budget = 20000;
  std::uint64_t seed = 1;
};

struct FitResult {
  std::optional<CoarseMap> map;
  std::size_t pairs_checked = 0;
  bool exhaustive = false;
  // Covering is certified on {y : d(y, phi(e)) <= covered_radius}, where
  // covered_radius = floor(R / a - b - c) for a domain ball of radius R.
  int covered_radius = -1;
  std::string diagnostics;
};

// Throws ValidationError listing offenders when the image escapes the
// codomain ball.
FitResult fit_rough_constants(const VertexMap& map, std::shared_ptr<const CayleyBall> domain,
                              std::shared_ptr<const CayleyBall> codomain,
                              const FitOptions& options = {});

struct ConstantCheck {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  // Largest violation of either inequality (<= 0 when none).
  double worst_excess = 0.0;
};

// Re-checks the distance inequalities on a fresh seeded sample.
ConstantCheck check_constants(const CoarseMap& map, std::size_t samples, std::uint64_t seed);

// Radius of the largest codomain ball around e on which covering holds.
int covered_ball_radius(const CoarseMap& map);

struct RoughInverse {
  CoarseMap map;  // Y -> X on the covered codomain ball
  double max_back_displacement = 0.0;   // d_X(psi phi x, x)
  double max_forth_displacement = 0.0;  // d_Y(phi psi y, y)
  double back_bound = 0.0;              // a (c + b)
  double forth_bound = 0.0;             // c
  bool bounds_hold = false;
};

// psi(y) is a preimage of the nearest image point, ties broken by the
// smallest domain index. Throws ValidationError naming y if no image point
// lies within c.
RoughInverse rough_inverse(const CoarseMap& map);

struct PullbackResult {
  ScalarField field;  // f o phi on the domain ball
  double k = 0.0;
  double pulled_energy = 0.0;
  double bound = 0.0;  // (a + b)^(p-1) k energy(f)
  bool bound_holds = false;
};

// f must live on a codomain ball containing every arc-connecting walk of
// length <= floor(a + b) between images of adjacent vertices.
PullbackResult pullback(const ScalarField& f, const CoarseMap& map, const Exponent& p);

struct CoarseIdentityRow {
  int radius = 0;
  double max_change = 0.0;  // max over the sphere of |f(psi phi x) - f(x)|
  double max_path_bound = 0.0;
  bool bound_holds = true;
};

// Per sphere of the domain where psi phi is defined and stays inside f's
// ball. The path bound is n^(p-1) times the sum of |df|^p along a geodesic
// with n vertices, taken to the power 1/p.
std::vector<CoarseIdentityRow> check_coarse_identity(const ScalarField& f, const CoarseMap& map,
                                                     const CoarseMap& inverse,
                                                     const Exponent& p);

struct TransportResult {
  ScalarField composed;  // h o psi
  RoydenResult decomposition;
};

// Harmonic part of h o psi on the largest codomain ball whose psi-image lies
// in h's ball. `radii` are exhaustion radii for the decomposition.
TransportResult transport_harmonic(const ScalarField& h, const CoarseMap& map,
                                   const CoarseMap& inverse, const Exponent& p,
                                   const std::vector<int>& radii, const SolverConfig& config = {});

// Largest r such that psi maps the codomain ball of radius r into h's ball.
int transport_radius(const ScalarField& h, const CoarseMap& inverse);

}  // namespace pharm

#endif  // PHARM_ROUGHISO_HPP_
