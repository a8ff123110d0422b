#include <doctest.h>

#include <cmath>
#include <random>

#include "pharm/error.hpp"
#include "pharm/roughiso.hpp"

using namespace pharm;

namespace {

GroupModel make(Family f, int rank = 1, std::vector<std::string> extra = {}) {
  GroupSpec s;
  s.family = f;
  s.rank = rank;
  s.extra_generators = std::move(extra);
  return GroupModel::build(s);
}

const VertexMap kIdentity = [](const Element& g) { return g; };
const VertexMap kDoubling = [](const Element& g) { return Element{{2 * g.code[0]}}; };

ScalarField random_field(std::shared_ptr<const CayleyBall> b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(b->size());
  for (auto& v : x) v = u(rng);
  return ScalarField(std::move(b), std::move(x));
}

}  // namespace

TEST_CASE("identity fits (1, 0, 1) on every family") {
  for (const auto& m : {make(Family::FreeAbelian, 1), make(Family::FreeAbelian, 2), make(Family::Free, 2),
                        make(Family::FreeProductZ2, 3), make(Family::Lamplighter)}) {
    auto b = ball(m, 4);
    const auto fit = fit_rough_constants(kIdentity, b, b);
    REQUIRE(fit.map.has_value());
    CHECK(fit.map->constants() == RoughConstants{1, 0, 1});
    const auto inv = rough_inverse(*fit.map);
    CHECK(inv.max_back_displacement == 0.0);
    CHECK(inv.max_forth_displacement == 0.0);
    for (std::size_t y = 0; y < inv.map.domain().size(); ++y) CHECK(inv.map.image(y) == inv.map.domain().vertex(y));
  }
}

TEST_CASE("doubling on Z fits (2, 0, 1) with an exact rough inverse") {
  const auto z = make(Family::FreeAbelian);
  const auto fit = fit_rough_constants(kDoubling, ball(z, 8), ball(z, 16));
  REQUIRE(fit.map.has_value());
  CHECK(fit.map->constants() == RoughConstants{2, 0, 1});
  CHECK(fit.exhaustive);
  CHECK(fit.covered_radius == 3);
  CHECK((*fit.map)(Element{{-3}}) == Element{{-6}});

  const auto inv = rough_inverse(*fit.map);
  CHECK(inv.bounds_hold);
  CHECK(inv.max_back_displacement == 0.0);
  CHECK(inv.max_forth_displacement == 1.0);
  CHECK(inv.back_bound == 2.0);
  CHECK(inv.forth_bound == 1.0);
  // Ties between two preimages go to the one enumerated first.
  CHECK(inv.map(Element{{3}}) == Element{{1}});
  CHECK(inv.map(Element{{-3}}) == Element{{-1}});
  CHECK(inv.map(Element{{2}}) == Element{{1}});
}

TEST_CASE("generating-set change on F_2 fits (2, 0, 1)") {
  const auto s = make(Family::Free, 2);
  const auto s2 = make(Family::Free, 2, {"ab"});
  const auto fit = fit_rough_constants(kIdentity, ball(s, 5), ball(s2, 5));
  REQUIRE(fit.map.has_value());
  CHECK(fit.map->constants() == RoughConstants{2, 0, 1});
  const auto fresh = check_constants(*fit.map, 1000, 42);
  CHECK(fresh.pairs == 1000);
  CHECK(fresh.violations == 0);
  const auto inv = rough_inverse(*fit.map);
  CHECK(inv.bounds_hold);
  for (std::size_t y = 0; y < inv.map.domain().size(); ++y) CHECK(inv.map.image(y) == inv.map.domain().vertex(y));
}

TEST_CASE("sampled fitting is reproducible") {
  const auto s = make(Family::Free, 2);
  const auto s2 = make(Family::Free, 2, {"ab"});
  FitOptions opts;
  opts.sample_budget = 500;
  opts.seed = 9;
  const auto a = fit_rough_constants(kIdentity, ball(s, 4), ball(s2, 4), opts);
  const auto b = fit_rough_constants(kIdentity, ball(s, 4), ball(s2, 4), opts);
  CHECK(!a.exhaustive);
  CHECK(a.pairs_checked == 500);
  CHECK(a.map->constants() == b.map->constants());
}

TEST_CASE("escaping images are rejected with the offenders listed") {
  const auto z = make(Family::FreeAbelian);
  CHECK_THROWS_WITH_AS(fit_rough_constants(kDoubling, ball(z, 4), ball(z, 6)), doctest::Contains("(4) -> (8)"),
                       ValidationError);
}

TEST_CASE("a sparse image has no rough inverse") {
  const auto z = make(Family::FreeAbelian);
  const VertexMap quadrupling = [](const Element& g) { return Element{{4 * g.code[0]}}; };
  auto dom = ball(z, 4);
  auto cod = ball(z, 16);
  std::vector<std::size_t> image(dom->size());
  for (std::size_t v = 0; v < dom->size(); ++v) image[v] = *cod->index_of(quadrupling(dom->vertex(v)));
  // c = 1 is wrong for this map: 2 is two steps from the image.
  const CoarseMap claimed(dom, cod, image, RoughConstants{1, 0, 1});
  CHECK_THROWS_WITH_AS(rough_inverse(claimed), doctest::Contains("no image point within c"), ValidationError);
}

TEST_CASE("pullback energy inequality") {
  std::mt19937_64 rng(3);
  const auto z = make(Family::FreeAbelian);
  auto zb = ball(z, 6);
  const auto id = fit_rough_constants(kIdentity, zb, zb);
  const auto f = random_field(zb, rng);
  const auto pb = pullback(f, *id.map, Exponent(2));
  for (std::size_t v = 0; v < zb->size(); ++v) CHECK(pb.field[v] == f[v]);
  CHECK(pb.k >= 1.0);
  CHECK(pb.bound_holds);

  const auto konst = pullback(ScalarField::constant(zb, 2.0), *id.map, Exponent(3));
  CHECK(seminorm_p(konst.field, Exponent(3)) == 0.0);

  const auto dbl = fit_rough_constants(kDoubling, ball(z, 6), ball(z, 12));
  for (double p : {1.5, 2.0, 3.0}) {
    const auto r = pullback(random_field(ball(z, 13), rng), *dbl.map, Exponent(p));
    CHECK(r.k == 1.0);
    CHECK(r.bound_holds);
  }

  const auto s = make(Family::Free, 2);
  const auto s2 = make(Family::Free, 2, {"ab"});
  const auto change = fit_rough_constants(kIdentity, ball(s, 4), ball(s2, 4));
  for (double p : {1.5, 2.0, 3.0}) {
    const auto r = pullback(random_field(ball(s2, 5), rng), *change.map, Exponent(p));
    CHECK(r.k == 2.0);
    CHECK(r.bound_holds);
  }
  CHECK_THROWS_AS(pullback(random_field(ball(s, 5), rng), *change.map, Exponent(2)), ValidationError);
}

TEST_CASE("coarse identity profile") {
  const auto z = make(Family::FreeAbelian);
  auto dom = ball(z, 8);
  auto cod = ball(z, 16);
  const auto dbl = fit_rough_constants(kDoubling, dom, cod);
  const auto inv = rough_inverse(*dbl.map);
  std::mt19937_64 rng(4);
  for (const auto& row : check_coarse_identity(random_field(dom, rng), *dbl.map, inv.map, Exponent(2))) {
    CHECK(row.max_change == 0.0);
  }

  // psi(y) = y/2 + 1 on even y, so psi(phi(x)) = x + 1.
  auto psi_dom = ball(z, 3);
  std::vector<std::size_t> shifted(psi_dom->size());
  for (std::size_t y = 0; y < psi_dom->size(); ++y) {
    const int v = psi_dom->vertex(y).code[0];
    const int pre = v % 2 == 0 ? v / 2 + 1 : (v - 1) / 2;
    shifted[y] = *dom->index_of(Element{{pre}});
  }
  const CoarseMap perturbed(psi_dom, dom, shifted, RoughConstants{2, 2, 1});
  const auto ramp = ScalarField::from_function(dom, [](const Element& g) {
    return std::min(std::abs(g.code[0]), 1) * 1.0;
  });
  const auto rows = check_coarse_identity(ramp, *dbl.map, perturbed, Exponent(2));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].max_change == 1.0);
  CHECK(rows[1].max_change == 1.0);
  for (const auto& row : rows) CHECK(row.bound_holds);
  for (const auto& row : check_coarse_identity(ScalarField::constant(dom, 1.0), *dbl.map, perturbed, Exponent(2))) {
    CHECK(row.max_change == 0.0);
  }
}

TEST_CASE("transport of harmonic functions") {
  const auto f2 = make(Family::Free, 2);
  auto b = ball(f2, 6);
  const auto id = fit_rough_constants(kIdentity, b, b);
  const auto inv = rough_inverse(*id.map);
  const auto c = transport_harmonic(ScalarField::constant(b, 0.7), *id.map, inv.map, Exponent(3), {3, 4});
  for (double v : c.decomposition.h.values()) CHECK(v == doctest::Approx(0.7));

  std::mt19937_64 rng(5);
  const auto f = random_field(b, rng);
  const int r = transport_radius(f, inv.map);
  CHECK(r == inv.map.domain().radius());
  const auto t = transport_harmonic(f, *id.map, inv.map, Exponent(2), {r});
  const auto direct = royden_decompose(f.restrict_to(r), Exponent(2), {r});
  for (std::size_t v = 0; v < direct.h.size(); ++v) CHECK(t.decomposition.h[v] == doctest::Approx(direct.h[v]));
}
