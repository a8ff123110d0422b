#include <doctest.h>

#include <cmath>
#include <random>

#include "linear_oracle.hpp"
#include "pharm/error.hpp"
#include "pharm/exhaustion.hpp"

using namespace pharm;

namespace {

GroupModel make(Family f, int rank = 1) {
  GroupSpec s;
  s.family = f;
  s.rank = rank;
  return GroupModel::build(s);
}

double core_sup(const ScalarField& f, int core) {
  double m = 0.0;
  for (std::size_t v = 0; v < f.ball().sphere(core).second; ++v) m = std::max(m, std::abs(f[v]));
  return m;
}

}  // namespace

TEST_CASE("markings use both labels on every sphere and probe at radius 1") {
  for (const auto& m : {make(Family::FreeAbelian, 1), make(Family::FreeAbelian, 3), make(Family::Free, 2),
                        make(Family::FreeProductZ2, 2), make(Family::Lamplighter)}) {
    const auto mk = DirectionMarking::for_model(m);
    CHECK(m.word_length(mk.plus) == 1);
    CHECK(m.word_length(mk.minus) == 1);
    CHECK(mk.label(mk.plus) == 1);
    CHECK(mk.label(mk.minus) == 0);
    auto b = ball(m, 5);
    for (int r = 2; r <= 5; ++r) {
      const auto [first, last] = b->sphere(r);
      int seen = 0;
      for (std::size_t v = first; v < last; ++v) seen |= 1 << mk.label(b->vertex(v));
      CHECK(seen == 3);
    }
  }
}

TEST_CASE("witness on Z has gap exactly 1/R and vanishes") {
  const auto z = make(Family::FreeAbelian);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto r = boundary_witness(z, DirectionMarking::for_model(z), Exponent(p), {4, 8, 16});
    CHECK(r.verdict == WitnessVerdict::GapVanishing);
    for (const auto& row : r.rows) {
      CHECK(row.gap == doctest::Approx(1.0 / row.radius).epsilon(1e-9));
      CHECK(row.sup_norm <= 1.0);
    }
  }
}

TEST_CASE("witness on F_2 is found and matches the linear oracle") {
  const auto f2 = make(Family::Free, 2);
  const auto mk = DirectionMarking::for_model(f2);
  const auto r = boundary_witness(f2, mk, Exponent(2), {5, 6, 7, 8});
  CHECK(r.verdict == WitnessVerdict::WitnessFound);
  CHECK(r.rows.back().gap >= 0.2);
  CHECK(r.stabilization_delta <= 0.01);
  REQUIRE(r.field.has_value());
  // Four-fold symmetry of the data pins the value at the identity.
  CHECK(r.field->at(f2.identity()) == doctest::Approx(0.25).epsilon(1e-8));

  DirichletProblem prob(ball(f2, 6), Exponent(2));
  prob.clamp_boundary([&](const Element& g) { return static_cast<double>(mk.label(g)); });
  const auto ref = oracle::linear_dirichlet(prob);
  const auto& b = prob.ball();
  const double gap = ref[*b.index_of(mk.plus)] - ref[*b.index_of(mk.minus)];
  CHECK(r.rows[1].gap == doctest::Approx(gap).epsilon(1e-8));
  for (const auto& row : r.rows) {
    CHECK(row.sup_norm <= 1.0);
    CHECK(row.sup_norm >= 0.0);
  }
}

TEST_CASE("witness on Z^2 decays") {
  const auto z2 = make(Family::FreeAbelian, 2);
  const auto r = boundary_witness(z2, DirectionMarking::for_model(z2), Exponent(2), {8, 16, 32});
  CHECK(r.verdict == WitnessVerdict::GapVanishing);
  CHECK(r.rows[1].gap < r.rows[0].gap);
  CHECK(r.rows[2].gap < r.rows[1].gap);
  CHECK(r.rows[2].gap < 0.5 * r.rows[0].gap);
}

TEST_CASE("witness input validation and non-convergence") {
  const auto f2 = make(Family::Free, 2);
  const auto mk = DirectionMarking::for_model(f2);
  CHECK_THROWS_AS(boundary_witness(f2, mk, Exponent(2), {4, 5}), ValidationError);
  CHECK_THROWS_AS(boundary_witness(f2, mk, Exponent(2), {5, 4, 6}), ValidationError);
  SolverConfig cfg;
  cfg.max_sweeps = 1;
  const auto r = boundary_witness(f2, mk, Exponent(3), {3, 4, 5}, cfg);
  CHECK(r.verdict == WitnessVerdict::Inconclusive);
  CHECK(!r.diagnostics.empty());
}

TEST_CASE("parabolicity verdicts") {
  const auto z = make(Family::FreeAbelian);
  const auto zr = parabolicity_profile(z, Exponent(2), {8, 16, 32, 64});
  CHECK(zr.verdict == ParabolicityVerdict::Parabolic);
  for (const auto& row : zr.rows) CHECK(row.capacity == doctest::Approx(4.0 / row.radius));
  CHECK(parabolicity_profile(z, Exponent(1.5), {8, 16, 32, 64}).verdict == ParabolicityVerdict::Parabolic);

  const auto f2 = make(Family::Free, 2);
  const auto fr = parabolicity_profile(f2, Exponent(2), {2, 4, 6, 8});
  CHECK(fr.verdict == ParabolicityVerdict::NonParabolic);
  for (const auto& row : fr.rows) CHECK(row.capacity >= 2.0);
}

TEST_CASE("Royden decomposition of simple fields") {
  const auto f2 = make(Family::Free, 2);
  auto b = ball(f2, 7);
  const auto c = royden_decompose(ScalarField::constant(b, 0.3), Exponent(2.5), {4, 5, 6, 7});
  for (double v : c.h.values()) CHECK(v == doctest::Approx(0.3));
  for (double v : c.u.values()) CHECK(std::abs(v) <= 1e-12);

  const auto delta = royden_decompose(ScalarField::delta(b, f2.identity()), Exponent(2), {4, 5, 6, 7});
  CHECK(delta.converged);
  CHECK(core_sup(delta.h, 2) <= 0.05);
  CHECK(delta.u.at(f2.identity()) == doctest::Approx(1.0).epsilon(0.05));

  const auto ind = ScalarField::from_function(
      b, [](const Element& g) { return !g.code.empty() && g.code.front() == 1 ? 1.0 : 0.0; });
  const auto r = royden_decompose(ind, Exponent(2), {4, 5, 6, 7});
  CHECK(r.h.at(f2.identity()) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(r.stabilized);
  CHECK(std::isnan(r.rows.front().core_change));

  CHECK_THROWS_AS(royden_decompose(ind, Exponent(2), {4, 8}), ValidationError);
}

TEST_CASE("Royden harmonic part is independent of the schedule and annihilates test functions") {
  const auto f2 = make(Family::Free, 2);
  auto b = ball(f2, 7);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> vals(b->size());
  for (std::size_t v = 0; v < b->size(); ++v) vals[v] = (!b->vertex(v).code.empty() && b->vertex(v).code.front() == 2 ? 1.0 : 0.0) + 0.1 * u(rng);
  vals[0] = 0.0;
  const ScalarField f(b, vals);
  for (double pv : {2.0, 3.0}) {
    const Exponent p(pv);
    SolverConfig cfg;
    cfg.tolerance = 1e-10;
    const auto one = royden_decompose(f, p, {4, 5, 6, 7}, cfg);
    const auto two = royden_decompose(f, p, {6, 7}, cfg);
    double d = 0.0;
    for (std::size_t v = 0; v < b->sphere(2).second; ++v) d = std::max(d, std::abs(one.h[v] - two.h[v]));
    CHECK(d <= 1e-3);
    const double scale = std::pow(seminorm_p(one.h, p), pv - 1.0);
    for (int t = 0; t < 10; ++t) {
      std::vector<double> w(b->size(), 0.0);
      for (int k = 0; k < 5; ++k) w[rng() % b->sphere(5).second] = u(rng);
      const ScalarField wf(b, w);
      CHECK(std::abs(pairing(one.h, wf, p)) <= 1e-6 * scale * seminorm_p(wf, p));
    }
  }
}

TEST_CASE("inner potential on the half-line of Z vanishes") {
  const auto z = make(Family::FreeAbelian);
  const auto r = inner_potential(z, MassiveSubsetSpec::half_space(z), Exponent(2), {4, 8, 16});
  CHECK(r.verdict == MassiveVerdict::NotMassive);
  for (const auto& row : r.rows) CHECK(row.core_max == doctest::Approx(2.0 / row.radius));
  CHECK(r.checks.zero_on_boundary);
  CHECK(r.field.at(Element{{0}}) == 0.0);
}

TEST_CASE("inner potential on the a-subtree of F_2 is massive") {
  const auto f2 = make(Family::Free, 2);
  const auto subtree = MassiveSubsetSpec::subtree(f2, "a");
  const auto r = inner_potential(f2, subtree, Exponent(2), {4, 5, 6, 7});
  CHECK(r.verdict == MassiveVerdict::Massive);
  CHECK(r.checks.harmonic_on_a);
  CHECK(r.checks.zero_on_boundary);
  CHECK(r.checks.sup_is_one);
  CHECK(r.field.at(f2.reduce("a")) > 0.1);
  for (std::size_t v = 0; v < r.field.size(); ++v) {
    CHECK(r.field[v] >= 0.0);
    CHECK(r.field[v] <= 1.0);
    if (!subtree.contains(r.field.ball().vertex(v))) CHECK(r.field[v] == 0.0);
  }
}

TEST_CASE("inner potential on a half-plane of Z^2 is not massive") {
  const auto z2 = make(Family::FreeAbelian, 2);
  const auto r = inner_potential(z2, MassiveSubsetSpec::half_space(z2), Exponent(2), {8, 16, 32});
  CHECK(r.verdict == MassiveVerdict::NotMassive);
  CHECK(r.rows[2].core_max < r.rows[1].core_max);
  CHECK(r.rows[1].core_max < r.rows[0].core_max);
}

TEST_CASE("inner potential rejects unusable subsets") {
  const auto z = make(Family::FreeAbelian);
  MassiveSubsetSpec split{"nonzero integers", [](const Element& g) { return g.code[0] != 0; }};
  CHECK_THROWS_WITH_AS(inner_potential(z, split, Exponent(2), {4, 8}), doctest::Contains("disconnected at radius"),
                       ValidationError);
  MassiveSubsetSpec everything{"all", [](const Element&) { return true; }};
  CHECK_THROWS_WITH_AS(inner_potential(z, everything, Exponent(2), {4, 8}),
                       doctest::Contains("empty vertex boundary"), ValidationError);
  CHECK_THROWS_AS(MassiveSubsetSpec::half_space(make(Family::Free, 2)), ValidationError);
  CHECK_THROWS_AS(MassiveSubsetSpec::subtree(z, "a"), ValidationError);
}
