#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "obtuselab/invariants.hpp"
#include "obtuselab/numerics.hpp"

using namespace obtuselab;
using num::pi;

TEST_CASE("plane pairs sit exactly at pi/2") {
  auto space = make_surface_space(ProfileSurface::plane());
  ComparisonQuery q;
  q.p = SpacePoint{1.0, 0.0};
  q.q = SpacePoint{2.0, 0.0};  // collinear pair
  q.far_radii = {30.0, 100.0};
  q.samples_per_radius = 360;
  const InvariantEstimate comp = pair_obtuse_comparison(*space, q);
  CHECK(comp.value == doctest::Approx(0.5 * pi).epsilon(1e-9));
  const InvariantEstimate ang = pair_obtuse_angle(*space, q);
  CHECK(ang.value == doctest::Approx(0.5 * pi).epsilon(1e-9));
}

TEST_CASE("obtuse_from_infinity on the plane is flat at pi/2") {
  auto space = make_surface_space(ProfileSurface::plane());
  ObtuseConfig oc;
  oc.pairs_per_separation = 6;
  oc.samples_per_radius = 240;
  oc.far_radii = {30.0, 100.0};
  const InvariantEstimate est = obtuse_from_infinity(*space, oc);
  CHECK(est.value == doctest::Approx(0.5 * pi).epsilon(1e-9));
  CHECK(est.uncertainty <= 1e-12);
  for (const double v : est.ladder) CHECK(v == doctest::Approx(0.5 * pi).epsilon(1e-9));
}

TEST_CASE("cone estimators match the exact oracle") {
  const FlatCone cone(0.5 * pi);
  auto space = make_cone_space(cone);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 12; ++i) {
    const ConePoint p{0.5 + 2.0 * unif(rng), 0.5 * pi * unif(rng)};
    const ConePoint q{0.5 + 2.0 * unif(rng), 0.5 * pi * unif(rng)};
    if (cone_distance(cone, p, q) < 0.05) continue;
    ComparisonQuery query;
    query.p = SpacePoint{p.rho, p.phi};
    query.q = SpacePoint{q.rho, q.phi};
    query.samples_per_radius = 720;
    const double est_c = pair_obtuse_comparison(*space, query).value;
    const double ora_c = cone_obtuse_inf_exact(cone, p, q, ObtuseVariant::comparison);
    CHECK(std::fabs(est_c - ora_c) < 1e-3);
    const double est_a = pair_obtuse_angle(*space, query).value;
    const double ora_a = cone_obtuse_inf_exact(cone, p, q, ObtuseVariant::angle);
    CHECK(std::fabs(est_a - ora_a) < 1e-3);
  }
}

TEST_CASE("comparison estimate never exceeds the angle estimate") {
  const FlatCone cone(0.75 * pi);
  auto space = make_cone_space(cone);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 15; ++i) {
    const SpacePoint p{0.5 + 2.0 * unif(rng), 0.75 * pi * unif(rng)};
    const SpacePoint q{0.5 + 2.0 * unif(rng), 0.75 * pi * unif(rng)};
    if (space->distance(p, q) < 0.05) continue;
    ComparisonQuery query;
    query.p = p;
    query.q = q;
    query.samples_per_radius = 360;
    const InvariantEstimate comp = pair_obtuse_comparison(*space, query);
    const InvariantEstimate ang = pair_obtuse_angle(*space, query);
    CHECK(comp.value <= ang.value + 1e-6);
    // per-rung far maxima are nondecreasing in the radius on cones
    CHECK(comp.monotone);
  }
}

TEST_CASE("ideal triangle pair estimate reaches -pi/2 for deep pairs") {
  auto space = make_ideal_triangle_space();
  const auto pairs = space->deep_pairs(1);
  REQUIRE(!pairs.empty());
  ComparisonQuery q;
  q.p = pairs.front().p;
  q.q = pairs.front().q;
  q.kappa = Curvature(-1.0);
  q.samples_per_radius = 90;
  const InvariantEstimate est = pair_obtuse_comparison(*space, q);
  CHECK(est.value == doctest::Approx(-0.5 * pi).epsilon(0.02));
}

TEST_CASE("ideal triangle kappa constant and capability guards") {
  auto space = make_ideal_triangle_space();
  ObtuseConfig oc;
  oc.samples_per_radius = 90;
  const InvariantEstimate est = kappa_obtuse_infinity(*space, Curvature(-1.0), oc);
  CHECK(std::fabs(est.value - (-0.5 * pi)) <= 0.05);

  ComparisonQuery q;
  q.p = SpacePoint{0.4, 1.0};
  q.q = SpacePoint{0.6, 1.0};
  CHECK_THROWS_AS(pair_obtuse_angle(*space, q), capability_error);
  CHECK_THROWS_AS(space->growth(), capability_error);
  CHECK_THROWS_AS(obtuse_compact(*space, oc), capability_error);
}

TEST_CASE("kappa-obtuse on plane and cone") {
  auto plane = make_surface_space(ProfileSurface::plane());
  ObtuseConfig oc;
  oc.samples_per_radius = 240;
  oc.far_radii = {30.0, 100.0};
  const InvariantEstimate est = kappa_obtuse_infinity(*plane, Curvature(0.0), oc);
  CHECK(est.value == doctest::Approx(0.5 * pi).epsilon(1e-9));

  const FlatCone cone(0.5 * pi);
  auto cs = make_cone_space(cone);
  ObtuseConfig occ;
  occ.samples_per_radius = 360;
  const InvariantEstimate kappa_est = kappa_obtuse_infinity(*cs, Curvature(0.0), occ);
  double oracle_min = std::numeric_limits<double>::infinity();
  for (const PairSample& pr : cs->deep_pairs(occ.seed)) {
    oracle_min = std::min(oracle_min,
                          cone_obtuse_inf_exact(cone, ConePoint{pr.p.u, pr.p.v},
                                                ConePoint{pr.q.u, pr.q.v},
                                                ObtuseVariant::comparison));
  }
  CHECK(std::fabs(kappa_est.value - oracle_min) < 1e-3);
}

TEST_CASE("growth reports") {
  auto plane = make_surface_space(ProfileSurface::plane());
  const GrowthReport g = plane->growth();
  CHECK(*g.v_inf == doctest::Approx(pi).epsilon(1e-10));

  auto cone = make_cone_space(FlatCone(1.1));
  const GrowthReport cg = cone->growth();
  CHECK(*cg.v_inf == 0.55);
  CHECK(*cg.ideal_boundary_length == 1.1);

  // hyperboloid grid: v_inf strictly decreasing, matching the closed form
  double prev = std::numeric_limits<double>::infinity();
  for (const double a : {0.0, 0.5, 1.0, std::sqrt(3.0), 3.0}) {
    auto space = make_surface_space(ProfileSurface::hyperboloid(a));
    const GrowthReport hg = space->growth();
    CHECK(std::fabs(*hg.v_inf - pi / std::sqrt(1.0 + a * a)) <= 1e-4);
    CHECK(*hg.v_inf < prev);
    prev = *hg.v_inf;
  }
}

TEST_CASE("estimates are deterministic given the seed") {
  const FlatCone cone(1.2 * pi);
  auto space = make_cone_space(cone);
  ObtuseConfig oc;
  oc.samples_per_radius = 240;
  oc.seed = 99;
  const InvariantEstimate a = kappa_obtuse_infinity(*space, Curvature(0.0), oc);
  const InvariantEstimate b = kappa_obtuse_infinity(*space, Curvature(0.0), oc);
  CHECK(a.value == b.value);
  CHECK(a.ladder == b.ladder);
}

TEST_CASE("obtuse estimates stay within [-pi/2, pi/2]") {
  const FlatCone cone(0.25 * pi);
  auto space = make_cone_space(cone);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const SpacePoint p{0.2 + 3.0 * unif(rng), 0.25 * pi * unif(rng)};
    const SpacePoint q{0.2 + 3.0 * unif(rng), 0.25 * pi * unif(rng)};
    if (space->distance(p, q) < 0.05) continue;
    ComparisonQuery query;
    query.p = p;
    query.q = q;
    query.samples_per_radius = 180;
    const InvariantEstimate est = pair_obtuse_comparison(*space, query);
    CHECK(est.value <= 0.5 * pi + 1e-12);
    CHECK(est.value >= -0.5 * pi - 1e-12);
  }
}
