#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "obtuselab/model_trig.hpp"
#include "obtuselab/numerics.hpp"

using namespace obtuselab;
using num::pi;

TEST_CASE("model_side basic values") {
  CHECK(model_side(Curvature(0.0), 3.0, 4.0, 0.5 * pi) == doctest::Approx(5.0).epsilon(1e-14));
  // degenerate angles collapse to |a-b| and a+b for kappa <= 0
  for (const double k : {0.0, -1.0, -4.0}) {
    for (const double a : {0.0, 0.7, 2.5}) {
      for (const double b : {0.3, 1.9}) {
        CHECK(std::fabs(model_side(Curvature(k), a, b, 0.0) - std::fabs(a - b)) < 1e-10);
        CHECK(std::fabs(model_side(Curvature(k), a, b, pi) - (a + b)) < 1e-10);
      }
    }
  }
}

TEST_CASE("model_side hyperbolic law of cosines oracle") {
  // independent oracle: evaluate cosh c = cosh^2 1 - sinh^2 1 cos(pi/3) directly
  const double ch = std::cosh(1.0) * std::cosh(1.0) -
                    std::sinh(1.0) * std::sinh(1.0) * std::cos(pi / 3.0);
  const double expected = std::acosh(ch);
  CHECK(model_side(Curvature(-1.0), 1.0, 1.0, pi / 3.0) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("model_side domain errors") {
  CHECK_THROWS_AS(model_side(Curvature(0.0), -1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(model_side(Curvature(0.0), 1.0, 1.0, 3.5), std::domain_error);
  CHECK_THROWS_AS(model_side(Curvature(1.0), 3.2, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(model_side(Curvature(-1.0), 800.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("comparison_angle basic values") {
  CHECK(comparison_angle(Curvature(0.0), SideTriple{3.0, 4.0, 5.0}, 2) ==
        doctest::Approx(0.5 * pi).epsilon(1e-13));
  CHECK(comparison_angle(Curvature(0.0), SideTriple{1.0, 1.0, 2.0}, 2) ==
        doctest::Approx(pi).epsilon(1e-7));
  // round trip with the hyperbolic example above
  const double c = model_side(Curvature(-1.0), 1.0, 1.0, pi / 3.0);
  CHECK(comparison_angle(Curvature(-1.0), SideTriple{1.0, 1.0, c}, 2) ==
        doctest::Approx(pi / 3.0).epsilon(1e-10));
  CHECK_THROWS_AS(comparison_angle(Curvature(0.0), SideTriple{1.0, 1.0, 2.5}, 2),
                  invalid_triangle);
}

TEST_CASE("comparison_angle round-trips model_side for random configurations") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 400; ++i) {
    const double k = -4.0 + 8.0 * unif(rng);
    const Curvature kappa(k);
    double cap = 2.5;
    if (k > 1e-12) cap = std::min(cap, 0.95 * pi / std::sqrt(k) * 0.5);
    const double a = 0.05 + cap * unif(rng);
    const double b = 0.05 + cap * unif(rng);
    const double gamma = 0.02 + (pi - 0.04) * unif(rng);
    const double c = model_side(kappa, a, b, gamma);
    const double back = comparison_angle(kappa, SideTriple{a, b, c}, 2);
    CHECK(std::fabs(back - gamma) < 1e-8);
  }
}

TEST_CASE("comparison_angle grows with the opposite side") {
  // scalar backbone of comparison monotonicity: with the adjacent sides
  // fixed, the vertex angle is nondecreasing in the opposite side
  for (const double k : {-2.0, -1.0, 0.0, 1.0}) {
    double prev = -1.0;
    for (double c = 0.2; c < 2.19; c += 0.05) {
      const double ang = comparison_angle(Curvature(k), SideTriple{1.2, 1.0, c}, 2);
      CHECK(ang >= prev - 1e-12);
      prev = ang;
    }
  }
}

TEST_CASE("tangent cone distance matches the model side and its edge cases") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double k = -3.0 * unif(rng);
    const double s = 3.0 * unif(rng), t = 3.0 * unif(rng);
    const double alpha = pi * unif(rng);
    CHECK(tangent_cone_distance(Curvature(k), s, t, alpha) ==
          doctest::Approx(model_side(Curvature(k), s, t, alpha)).epsilon(1e-12));
  }
  CHECK(tangent_cone_distance(Curvature(-1.0), 1.3, 0.4, 0.0) ==
        doctest::Approx(0.9).epsilon(1e-12));
  CHECK(tangent_cone_distance(Curvature(-1.0), 1.3, 0.4, pi) ==
        doctest::Approx(1.7).epsilon(1e-12));
  CHECK(tangent_cone_distance(Curvature(0.0), 1.0, 1.0, 0.5 * pi) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(tangent_cone_distance(Curvature(1.0), 1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("theta_n closed forms and properties") {
  CHECK(theta_n(2, 0.5 * pi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(theta_n(2, 0.0) == 0.0);
  for (double eps = 0.05; eps < 0.5 * pi; eps += 0.08) {
    CHECK(theta_n(2, eps) == doctest::Approx(4.0 * eps / (pi + 2.0 * eps)).epsilon(1e-12));
    // n = 3 closed form from the 1 - cos r cap areas
    const double closed3 = 2.0 * std::sin(eps) / (1.0 + std::sin(eps));
    CHECK(theta_n(3, eps) == doctest::Approx(closed3).epsilon(1e-9));
  }
  // quadrature route for n = 3 as an independent oracle at one point
  const double eps = 0.1;
  const double big = num::adaptive_simpson([](double t) { return std::sin(t); }, 0.0,
                                           0.5 * pi + eps, 1e-12);
  const double small = num::adaptive_simpson([](double t) { return std::sin(t); }, 0.0,
                                             0.5 * pi - eps, 1e-12);
  CHECK(theta_n(3, eps) == doctest::Approx((big - small) / big).epsilon(1e-9));
  for (const int n : {2, 3, 4, 5}) {
    double prev = -1.0;
    for (double e = 0.0; e <= 0.5 * pi + 1e-12; e += 0.5 * pi / 16.0) {
      const double v = theta_n(n, std::min(e, 0.5 * pi));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
  CHECK_THROWS_AS(theta_n(1, 0.1), std::domain_error);
  CHECK_THROWS_AS(theta_n(2, 2.0), std::domain_error);
}

TEST_CASE("strainer constants") {
  const StrainerConstants sc = strainer_constants(2, 1.0, 0.5, 0.1);
  CHECK(sc.c1 == doctest::Approx(std::cosh(1.0) - std::cosh(0.25)).epsilon(1e-10));
  // huge v1: the inequality holds on the whole range
  CHECK(strainer_constants(2, 1.0, 0.5, 1e9).eps == doctest::Approx(0.5 * pi));
  // vanishing v1 forces eps -> 0
  CHECK(strainer_constants(2, 1.0, 0.5, 1e-12).eps < 1e-3);
  CHECK_THROWS_AS(strainer_constants(2, 1.0, 0.2, 0.1), std::domain_error);
  CHECK_THROWS_AS(strainer_constants(2, -1.0, 0.5, 0.1), std::domain_error);
}

TEST_CASE("half-plane distance") {
  CHECK(halfplane_distance(HPoint{0.0, 1.0}, HPoint{0.0, std::exp(1.0)}) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(halfplane_distance(HPoint{0.3, 0.9}, HPoint{0.3, 0.9}) == 0.0);
  CHECK(halfplane_distance(HPoint{0.0, 1.0}, HPoint{1.0, 1.0}) ==
        doctest::Approx(std::acosh(1.5)).epsilon(1e-13));
}

TEST_CASE("half-plane distance equals the geodesic arc integral") {
  // quadrature oracle: the geodesic between (0,1) and (1,1) is the circle
  // |z - 1/2| = sqrt(5)/2; integrate ds = |dz|/y along it
  const double cx = 0.5;
  const double R = std::sqrt(1.25);
  const double phi1 = std::atan2(1.0, 0.0 - cx);
  const double phi2 = std::atan2(1.0, 1.0 - cx);
  const double arc = num::adaptive_simpson(
      [&](double phi) { return R / (R * std::sin(phi)); }, phi2, phi1, 1e-12);
  CHECK(halfplane_distance(HPoint{0.0, 1.0}, HPoint{1.0, 1.0}) ==
        doctest::Approx(arc).epsilon(1e-10));
}

TEST_CASE("half-plane metric axioms on random triples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const HPoint a{4.0 * unif(rng) - 2.0, 0.1 + 3.0 * unif(rng)};
    const HPoint b{4.0 * unif(rng) - 2.0, 0.1 + 3.0 * unif(rng)};
    const HPoint c{4.0 * unif(rng) - 2.0, 0.1 + 3.0 * unif(rng)};
    const double ab = halfplane_distance(a, b);
    const double ba = halfplane_distance(b, a);
    const double ac = halfplane_distance(a, c);
    const double cb = halfplane_distance(c, b);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
    CHECK(ab <= ac + cb + 1e-12);
    CHECK(halfplane_distance(a, a) == 0.0);
  }
}

TEST_CASE("ideal triangle membership") {
  CHECK(ideal_triangle_contains(HPoint{0.5, 10.0}));
  CHECK_FALSE(ideal_triangle_contains(HPoint{0.5, 0.4}));
  CHECK(ideal_triangle_contains(HPoint{0.0, 1.0}));
  CHECK_FALSE(ideal_triangle_contains(HPoint{-0.1, 1.0}));
  CHECK_FALSE(ideal_triangle_contains(HPoint{1.2, 5.0}));
  CHECK(ideal_triangle_contains(HPoint{0.5, 0.5}));  // on the bounding half-circle
}
