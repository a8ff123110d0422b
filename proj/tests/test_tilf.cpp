#include <doctest.h>

#include <cmath>
#include <random>

#include "pharm/dirichlet.hpp"
#include "pharm/error.hpp"
#include "pharm/exhaustion.hpp"
#include "pharm/tilf.hpp"

using namespace pharm;

namespace {

GroupModel make(Family f, int rank = 1) {
  GroupSpec s;
  s.family = f;
  s.rank = rank;
  return GroupModel::build(s);
}

ScalarField witness(const GroupModel& m, int radius, double p) {
  const auto mk = DirectionMarking::for_model(m);
  DirichletProblem prob(ball(m, radius), Exponent(p));
  prob.clamp_boundary([&](const Element& g) { return static_cast<double>(mk.label(g)); });
  SolverConfig cfg;
  cfg.tolerance = 1e-10;
  return solve_dirichlet(prob, cfg).field;
}

}  // namespace

TEST_CASE("translation acts on the right and shrinks the ball") {
  const auto f2 = make(Family::Free, 2);
  auto b = ball(f2, 5);
  const Element x = f2.reduce("ab");
  const auto t = translate(ScalarField::delta(b, f2.identity()), x);
  CHECK(t.valid_radius == 3);
  CHECK(t.shift == 2);
  CHECK(t.field.ball().radius() == 3);
  for (std::size_t v = 0; v < t.field.size(); ++v) {
    CHECK(t.field[v] == (t.field.ball().vertex(v) == x ? 1.0 : 0.0));
  }
  const auto c = translate(ScalarField::constant(b, 2.5), x);
  for (double v : c.field.values()) CHECK(v == 2.5);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto f = ScalarField::from_function(b, [&](const Element&) { return u(rng); });
  const auto tf = translate(f, x);
  for (std::size_t v = 0; v < tf.field.size(); ++v) {
    const Element& g = tf.field.ball().vertex(v);
    CHECK(tf.field[v] == f.at(f2.multiply(g, f2.inverse(x))));
  }
  CHECK(translate(f, f2.reduce("abab")).valid_radius == 1);
  CHECK_THROWS_AS(translate(f, f2.reduce("ababa")), ValidationError);
}

TEST_CASE("translation energy stays under the path bound") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& m : {make(Family::Free, 2), make(Family::Lamplighter), make(Family::FreeAbelian, 2)}) {
    auto b = ball(m, 5);
    const auto f = ScalarField::from_function(b, [&](const Element&) { return u(rng); });
    for (std::size_t s = 0; s < m.degree(); ++s) {
      for (double p : {1.5, 2.0, 3.0}) {
        const auto e = translation_energy(f, m.generators()[s].value, Exponent(p));
        CHECK(e.translated <= e.bound);
        CHECK(e.bound == doctest::Approx(m.degree() * std::pow(3.0, p) * energy(f, Exponent(p))));
      }
    }
  }
}

TEST_CASE("difference approximation remainder") {
  const auto z = make(Family::FreeAbelian);
  auto b = ball(z, 20);
  const auto delta = ScalarField::delta(b, Element{{0}});
  const auto d = difference_approximation(delta, Element{{2}}, 4, 2.0);
  CHECK(d.remainder == doctest::Approx(0.5));
  CHECK(d.average.at(Element{{4}}) == 0.25);
  CHECK(d.difference.at(Element{{0}}) == 1.0);
  CHECK(d.difference.at(Element{{8}}) == -0.25);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> vals(b->size(), 0.0);
  for (std::size_t v = 0; v < b->sphere(1).second; ++v) vals[v] = u(rng);
  const ScalarField f(b, vals);
  for (double p : {1.5, 2.0, 3.0}) {
    CHECK(std::abs(difference_approximation(f, Element{{3}}, 1, p).remainder - lp_norm(f, p)) <= 1e-12);
    for (std::size_t n : {2u, 5u}) {
      const auto r = difference_approximation(f, Element{{3}}, n, p);
      CHECK(std::abs(r.remainder - std::pow(n, 1.0 / p - 1.0) * lp_norm(f, p)) <= 1e-12);
    }
  }
  CHECK_THROWS_WITH_AS(difference_approximation(f, Element{{2}}, 3, 2.0), doctest::Contains("overlap"),
                       ValidationError);
  CHECK_THROWS_AS(difference_approximation(f, Element{{3}}, 7, 2.0), ValidationError);
}

TEST_CASE("the functional vanishes on point masses and constants") {
  const auto f2 = make(Family::Free, 2);
  const auto h = witness(f2, 6, 2.0);
  auto b = h.ball_ptr();
  for (std::size_t v = 0; v < b->interior_size(); ++v) {
    CHECK(std::abs(tilf_evaluate(h, ScalarField::delta(b, b->vertex(v)), Exponent(2)).value) <= 1e-5);
  }
  CHECK(tilf_evaluate(h, ScalarField::constant(b, 4.0), Exponent(2)).value == 0.0);
  CHECK(tilf_evaluate(h, ScalarField::constant(b, 4.0), Exponent(2)).witness_residual <= 1e-8);
}

TEST_CASE("the functional sees the first-letter indicator") {
  const auto f2 = make(Family::Free, 2);
  const auto mk = DirectionMarking::for_model(f2);
  for (double p : {2.0, 3.0}) {
    const auto h = witness(f2, 6, p);
    const auto ind = ScalarField::from_function(
        h.ball_ptr(), [&](const Element& g) { return static_cast<double>(mk.label(g)); });
    const double t = tilf_evaluate(h, ind, Exponent(p)).value;
    const double edge = h.at(f2.reduce("a")) - h.at(f2.identity());
    CHECK(t == doctest::Approx(2.0 * signed_power(edge, p - 1.0)).epsilon(1e-9));
    CHECK(t > 0.1);
    CHECK(tilf_evaluate(h, ind.plus_constant(3.0), Exponent(p)).value == doctest::Approx(t));
  }
}

TEST_CASE("the functional rejects non-harmonic witnesses and mismatched balls") {
  const auto f2 = make(Family::Free, 2);
  auto b = ball(f2, 4);
  const auto bumpy = ScalarField::delta(b, f2.identity());
  CHECK_THROWS_AS(tilf_evaluate(bumpy, bumpy, Exponent(2)), ValidationError);
  const auto h = witness(f2, 5, 2.0);
  CHECK_THROWS_AS(tilf_evaluate(h, bumpy, Exponent(2)), ValidationError);
}

TEST_CASE("translation defect shrinks with the radius") {
  const auto f2 = make(Family::Free, 2);
  const auto mk = DirectionMarking::for_model(f2);
  double prev = INFINITY;
  for (int R = 5; R <= 7; ++R) {
    const auto h = witness(f2, R, 2.0);
    const auto f = ScalarField::from_function(h.ball_ptr(), [&](const Element& g) {
      return mk.label(g) + std::pow(2.0, -static_cast<double>(*f2.formula_length(g)));
    });
    const auto d = tilf_invariance_defect(h, f, f2.reduce("b"), Exponent(2));
    CHECK(d.defect == doctest::Approx(std::abs(d.translated - d.original)));
    CHECK(d.defect <= prev);
    prev = d.defect;
  }
}
