#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "obtuselab/flatcone.hpp"
#include "obtuselab/model_trig.hpp"
#include "obtuselab/numerics.hpp"
#include "obtuselab/revsurface.hpp"

using namespace obtuselab;
using num::pi;

TEST_CASE("cone construction validates the link length") {
  CHECK_THROWS_AS(FlatCone(7.0), std::invalid_argument);
  CHECK_THROWS_AS(FlatCone(0.0), std::invalid_argument);
  CHECK(FlatCone(pi).link_length == pi);
}

TEST_CASE("cone distances by unrolling") {
  const FlatCone plane(2.0 * pi);
  CHECK(cone_distance(plane, ConePoint{1.0, 0.0}, ConePoint{1.0, pi}) ==
        doctest::Approx(2.0).epsilon(1e-15));
  const FlatCone half(pi);
  CHECK(cone_distance(half, ConePoint{1.0, 0.0}, ConePoint{1.0, 0.5 * pi}) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const FlatCone c32(1.5 * pi);
  CHECK(cone_distance(c32, ConePoint{1.0, 0.0}, ConePoint{1.0, 0.75 * pi}) ==
        doctest::Approx(std::sqrt(2.0 - 2.0 * std::cos(0.75 * pi))).epsilon(1e-15));
}

TEST_CASE("cone metric axioms on random triples") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const double L : {0.4 * pi, pi, 1.7 * pi}) {
    const FlatCone cone(L);
    for (int i = 0; i < 200; ++i) {
      const ConePoint a{3.0 * unif(rng), L * unif(rng)};
      const ConePoint b{3.0 * unif(rng), L * unif(rng)};
      const ConePoint c{3.0 * unif(rng), L * unif(rng)};
      const double ab = cone_distance(cone, a, b);
      CHECK(ab == doctest::Approx(cone_distance(cone, b, a)).epsilon(1e-14));
      CHECK(ab <= cone_distance(cone, a, c) + cone_distance(cone, c, b) + 1e-12);
    }
  }
}

TEST_CASE("apex distances agree with the flat cone formula of the tangent model") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const FlatCone cone(0.8 * pi);
  for (int i = 0; i < 100; ++i) {
    const ConePoint a{2.0 * unif(rng), 0.8 * pi * unif(rng)};
    const ConePoint b{2.0 * unif(rng), 0.8 * pi * unif(rng)};
    const double g = std::fabs(a.phi - b.phi);
    const double psi = std::min(g, 0.8 * pi - g);
    if (psi > pi) continue;
    CHECK(cone_distance(cone, a, b) ==
          doctest::Approx(tangent_cone_distance(Curvature(0.0), a.rho, b.rho, psi))
              .epsilon(1e-13));
  }
}

TEST_CASE("cone connect directions") {
  const FlatCone plane(2.0 * pi);
  // radial pair: directions along the ray
  const ConeConnection out = cone_connect(plane, ConePoint{1.0, 0.3}, ConePoint{2.5, 0.3});
  REQUIRE(out.solutions.size() == 1);
  CHECK(out.solutions[0].alpha_p == doctest::Approx(0.0));
  CHECK(out.solutions[0].alpha_q == doctest::Approx(0.0));
  CHECK_FALSE(out.through_apex);

  // tie at the antipodal gap returns the two symmetric unrollings
  const ConeConnection tie = cone_connect(plane, ConePoint{1.0, 0.0}, ConePoint{1.0, pi});
  CHECK(tie.through_apex);
  CHECK(tie.solutions.size() == 2);
  CHECK(tie.solutions[0].alpha_p == doctest::Approx(-tie.solutions[1].alpha_p).epsilon(1e-12));

  // generic pair matches shooting on a smoothed-cone profile
  const FlatCone sharp(pi);
  const ConePoint p{1.2, 0.2}, q{0.9, 0.2 + 0.4 * pi};
  const ConeConnection cc = cone_connect(sharp, p, q);
  // smoothed cone: m(r) = (L/2pi) * r matched by a profile table with a
  // short smoothing collar near the apex
  std::vector<double> rr, mm;
  const double slope = 0.5;
  const double collar = 1e-3;
  rr.push_back(0.0);
  mm.push_back(0.0);
  for (int i = 1; i <= 40; ++i) {
    const double r = collar * i / 40.0;
    rr.push_back(r);
    // quintic blend from slope 1 at the apex to the cone slope
    const double t = r / collar;
    const double blend = 1.0 + (slope - 1.0) * (10 * t * t * t - 15 * t * t * t * t +
                                                6 * t * t * t * t * t);
    mm.push_back(mm.back() + blend * collar / 40.0);
  }
  const double m_end = mm.back();
  for (int i = 1; i <= 120; ++i) {
    const double r = collar + 4.0 * i / 120.0;
    rr.push_back(r);
    mm.push_back(m_end + slope * (r - collar));
  }
  const ProfileSurface smoothed = ProfileSurface::from_table(rr, mm);
  // cone coordinates phi relate to surface theta by phi = (L/2pi) theta
  const SurfacePoint sp{p.rho, p.phi / slope};
  const SurfacePoint sq{q.rho, q.phi / slope};
  const Connection sc = connect(smoothed, sp, sq);
  CHECK(sc.distance == doctest::Approx(cc.distance).epsilon(1e-3));
  // departure direction at p agrees within the smoothing error
  double best_gap = pi;
  for (const ConnectSolution& s : sc.solutions)
    best_gap = std::min(best_gap, std::fabs(num::wrap_pi(s.beta_p - cc.solutions[0].alpha_p)));
  CHECK(best_gap < 1e-3);
}

TEST_CASE("plane cone obtuse constants are pi/2") {
  const FlatCone plane(2.0 * pi);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const ConePoint p{0.5 + 2.0 * unif(rng), 2.0 * pi * unif(rng)};
    const ConePoint q{0.5 + 2.0 * unif(rng), 2.0 * pi * unif(rng)};
    if (cone_distance(plane, p, q) < 1e-2) continue;
    CHECK(cone_obtuse_inf_exact(plane, p, q, ObtuseVariant::comparison) ==
          doctest::Approx(0.5 * pi).epsilon(1e-6));
    CHECK(cone_obtuse_inf_exact(plane, p, q, ObtuseVariant::angle) ==
          doctest::Approx(0.5 * pi).epsilon(1e-6));
  }
}

TEST_CASE("radially aligned pairs see an extendable geodesic") {
  for (const double L : {0.3 * pi, 0.75 * pi, 1.5 * pi}) {
    const FlatCone cone(L);
    const ConePoint p{0.8, 0.4}, q{1.7, 0.4};
    CHECK(cone_obtuse_inf_exact(cone, p, q, ObtuseVariant::comparison) ==
          doctest::Approx(0.5 * pi).epsilon(1e-5));
    CHECK(cone_obtuse_inf_exact(cone, p, q, ObtuseVariant::angle) ==
          doctest::Approx(0.5 * pi).epsilon(1e-5));
  }
}

TEST_CASE("brute force far maximisation confirms the oracle") {
  const FlatCone cone(0.5 * pi);
  const ConePoint p{1.0, 0.1}, q{1.4, 0.3};
  const double oracle = cone_obtuse_inf_exact(cone, p, q, ObtuseVariant::comparison);
  // brute force over 1e6 far samples at R = 1e6 * |p,q|
  const double d_pq = cone_distance(cone, p, q);
  const double R = 1e6 * d_pq;
  double best = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const ConePoint x{R, cone.link_length * i / n};
    const double dpx = cone_distance(cone, p, x);
    const double dqx = cone_distance(cone, q, x);
    best = std::max(best, comparison_angle_at(Curvature(0.0), d_pq, dpx, dqx));
    best = std::max(best, comparison_angle_at(Curvature(0.0), d_pq, dqx, dpx));
  }
  CHECK(std::fabs(oracle - (best - 0.5 * pi)) < 1e-4);
}

TEST_CASE("obtuse constants are scale invariant") {
  const FlatCone cone(0.6 * pi);
  const ConePoint p{0.7, 0.2}, q{1.1, 0.9};
  const double base = cone_obtuse_inf_exact(cone, p, q, ObtuseVariant::comparison);
  for (const double lam : {0.01, 100.0}) {
    const ConePoint ps{lam * p.rho, p.phi}, qs{lam * q.rho, q.phi};
    CHECK(cone_obtuse_inf_exact(cone, ps, qs, ObtuseVariant::comparison) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("asymptotic cone link length matches the surface ideal boundary") {
  const double a = 1.0;
  const AsymptoticProfile ap = asymptotic_profile(ProfileSurface::hyperboloid(a));
  const double link = 2.0 * pi / std::sqrt(1.0 + a * a);
  CHECK(ap.ideal_boundary_length == doctest::Approx(link).epsilon(1e-4 / link));
}
