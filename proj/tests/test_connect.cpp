#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "obtuselab/numerics.hpp"
#include "obtuselab/revsurface.hpp"

using namespace obtuselab;
using num::pi;

namespace {

double sphere_distance(SurfacePoint a, SurfacePoint b) {
  const double c = std::cos(a.r) * std::cos(b.r) +
                   std::sin(a.r) * std::sin(b.r) * std::cos(a.theta - b.theta);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// fixed-step RK4 shooting oracle, independent of the adaptive machinery
struct BruteShot {
  double s_cross = 0.0;
  double th_cross = 0.0;
  bool valid = false;
};

BruteShot brute_shoot(const ProfileSurface& surf, double r0, double beta, double level,
                      double cap, double h) {
  double r = r0, pr = std::cos(beta);
  double th = 0.0, pth = std::sin(beta) / surf.m(r0);
  auto rhs = [&surf](const std::array<double, 4>& y, std::array<double, 4>& d) {
    const double m = surf.m(y[0]);
    const double mp = surf.m_prime(y[0]);
    d[0] = y[1];
    d[1] = m * mp * y[3] * y[3];
    d[2] = y[3];
    d[3] = -2.0 * (mp / m) * y[1] * y[3];
  };
  std::array<double, 4> y{r, pr, th, pth};
  BruteShot out;
  double s = 0.0;
  double min_r = r0;
  while (s < cap) {
    std::array<double, 4> k1, k2, k3, k4, t;
    rhs(y, k1);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * h * k1[i];
    rhs(t, k2);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * h * k2[i];
    rhs(t, k3);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * k3[i];
    rhs(t, k4);
    std::array<double, 4> yn;
    for (int i = 0; i < 4; ++i) yn[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    const double s_next = s + h;
    min_r = std::min(min_r, yn[0]);
    if (min_r < 0.05) return out;  // too close to the vertex for the fixed step
    if ((y[0] - level) * (yn[0] - level) <= 0.0 && y[1] > 0.0) {
      const double f = (level - y[0]) / (yn[0] - y[0]);
      out.s_cross = s + f * h;
      out.th_cross = y[2] + f * (yn[2] - y[2]);
      out.valid = true;
      return out;
    }
    y = yn;
    s = s_next;
  }
  return out;
}

}  // namespace

TEST_CASE("plane: through-vertex meridian connection") {
  const ProfileSurface plane = ProfileSurface::plane();
  const Connection conn = connect(plane, SurfacePoint{1.0, 0.0}, SurfacePoint{1.0, pi});
  CHECK(conn.distance == doctest::Approx(2.0).epsilon(1e-9));
  bool has_meridian = false;
  for (const ConnectSolution& s : conn.solutions)
    if (std::fabs(num::wrap_pi(s.beta_p - pi)) < 1e-6) has_meridian = true;
  CHECK(has_meridian);
}

TEST_CASE("plane: straight chords") {
  const ProfileSurface plane = ProfileSurface::plane();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const SurfacePoint p{0.5 + 3.0 * unif(rng), 2.0 * pi * unif(rng)};
    const SurfacePoint q{0.5 + 3.0 * unif(rng), 2.0 * pi * unif(rng)};
    const double dx = p.r * std::cos(p.theta) - q.r * std::cos(q.theta);
    const double dy = p.r * std::sin(p.theta) - q.r * std::sin(q.theta);
    const double expected = std::hypot(dx, dy);
    if (expected < 1e-3) continue;
    CHECK(connect(plane, p, q).distance == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("sphere: closed-form distances") {
  const ProfileSurface sphere = ProfileSurface::spheroid(1.0);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const SurfacePoint p{0.2 + 2.7 * unif(rng), 2.0 * pi * unif(rng)};
    const SurfacePoint q{0.2 + 2.7 * unif(rng), 2.0 * pi * unif(rng)};
    const double expected = sphere_distance(p, q);
    if (expected < 1e-3 || expected > pi - 0.05) continue;
    CHECK(connect(sphere, p, q).distance == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("sphere: antipodal degeneracy") {
  const ProfileSurface sphere = ProfileSurface::spheroid(1.0);
  const Connection conn = connect(sphere, SurfacePoint{1.0, 0.0}, SurfacePoint{pi - 1.0, pi});
  CHECK(conn.distance == doctest::Approx(pi).epsilon(1e-7));
  CHECK(conn.degenerate);
  CHECK(conn.solutions.size() >= 2);
}

TEST_CASE("hyperboloid: brute-force shooting oracle") {
  const ProfileSurface h = ProfileSurface::hyperboloid(1.0);
  const SurfacePoint p{2.0, 0.0}, q{2.0, pi};
  const Connection conn = connect(h, p, q);

  // oracle: 1e4-shot fan with fixed-step RK4, linear interpolation in beta
  // across the theta = pi crossing; the through-vertex meridian (length 4)
  // is added analytically since fixed steps cannot pass the vertex
  const int n = 10000;
  double best = 4.0;
  BruteShot prev;
  double prev_beta = 0.0;
  for (int i = 0; i < n; ++i) {
    const double beta = 0.02 + (pi - 0.04) * (i + 0.5) / n;
    const BruteShot shot = brute_shoot(h, p.r, beta, q.r, 4.2, 1e-3);
    if (shot.valid && prev.valid) {
      if ((prev.th_cross - pi) * (shot.th_cross - pi) <= 0.0) {
        const double f = (pi - prev.th_cross) / (shot.th_cross - prev.th_cross);
        best = std::min(best, prev.s_cross + f * (shot.s_cross - prev.s_cross));
      }
    }
    prev = shot;
    prev_beta = beta;
  }
  (void)prev_beta;
  CHECK(conn.distance == doctest::Approx(best).epsilon(1e-5));
}

TEST_CASE("hyperboloid: reflected targets give mirror-image minimizers") {
  // the swing function is monotone here, so the antipodal target has the
  // single through-vertex minimizer; mirror symmetry is checked on the
  // reflected pair instead
  const ProfileSurface h = ProfileSurface::hyperboloid(1.0);
  const Connection anti = connect(h, SurfacePoint{2.0, 0.0}, SurfacePoint{2.0, pi});
  CHECK(anti.distance == doctest::Approx(4.0).epsilon(1e-8));

  const Connection plusc = connect(h, SurfacePoint{2.0, 0.0}, SurfacePoint{2.0, 2.0});
  const Connection minusc = connect(h, SurfacePoint{2.0, 0.0}, SurfacePoint{2.0, -2.0});
  REQUIRE(!plusc.solutions.empty());
  REQUIRE(!minusc.solutions.empty());
  CHECK(plusc.distance == doctest::Approx(minusc.distance).epsilon(1e-9));
  CHECK(std::fabs(plusc.solutions[0].beta_p + minusc.solutions[0].beta_p) < 1e-6);
}

TEST_CASE("metric axioms on random pairs") {
  const ProfileSurface h = ProfileSurface::hyperboloid(1.0);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ConnectOptions opts;
  opts.scan_resolution = pi / 360.0;
  for (int i = 0; i < 8; ++i) {
    const SurfacePoint a{0.4 + 3.0 * unif(rng), 2.0 * pi * unif(rng)};
    const SurfacePoint b{0.4 + 3.0 * unif(rng), 2.0 * pi * unif(rng)};
    const SurfacePoint c{0.4 + 3.0 * unif(rng), 2.0 * pi * unif(rng)};
    const double ab = connect(h, a, b, opts).distance;
    const double ba = connect(h, b, a, opts).distance;
    const double ac = connect(h, a, c, opts).distance;
    const double cb = connect(h, c, b, opts).distance;
    CHECK(std::fabs(ab - ba) <= 1e-7);
    CHECK(ab <= ac + cb + 1e-6);
  }
}

TEST_CASE("rotational equivariance") {
  const ProfileSurface h = ProfileSurface::hyperboloid(1.0);
  const double d1 = connect(h, SurfacePoint{1.3, 0.0}, SurfacePoint{2.2, 1.1}).distance;
  const double d2 = connect(h, SurfacePoint{1.3, 4.0}, SurfacePoint{2.2, 5.1}).distance;
  const double d3 = connect(h, SurfacePoint{1.3, 0.3}, SurfacePoint{2.2, 0.3 - 1.1}).distance;
  CHECK(std::fabs(d1 - d2) <= 1e-8);
  CHECK(std::fabs(d1 - d3) <= 1e-8);
}

TEST_CASE("far field matches pointwise connections") {
  const ProfileSurface h = ProfileSurface::hyperboloid(1.0);
  const SurfacePoint base{2.0, 0.0};
  const std::vector<double> levels{8.0, 20.0};
  const auto fields = far_field(h, base, levels, 12);
  for (const FarField& f : fields) {
    int found = 0;
    for (const FarFieldSample& s : f.samples) {
      if (!s.found) continue;
      ++found;
      const double direct = connect(h, base, SurfacePoint{f.level, s.phi}).distance;
      CHECK(s.distance == doctest::Approx(direct).epsilon(1e-7));
    }
    CHECK(found == 12);
  }
}

TEST_CASE("rays: plane, sphere, hyperboloid") {
  const ProfileSurface plane = ProfileSurface::plane();
  CHECK(is_ray(plane, SurfacePoint{1.0, 0.0}, 2.1, 20.0, 1e-3));

  const ProfileSurface sphere = ProfileSurface::spheroid(1.0);
  CHECK_FALSE(is_ray(sphere, SurfacePoint{1.0, 0.0}, 0.7, pi + 0.1, 1e-3));

  const ProfileSurface h = ProfileSurface::hyperboloid(1.0);
  CHECK(is_ray(h, SurfacePoint{2.0, 0.0}, 0.5 * pi, 20.0, 1e-3));
}

TEST_CASE("ray measure on the plane is the full circle") {
  const ProfileSurface plane = ProfileSurface::plane();
  const RayMeasureResult rm = ray_measure(plane, SurfacePoint{1.5, 0.0}, 20.0, 1e-3);
  CHECK(rm.lower == doctest::Approx(2.0 * pi));
  CHECK(rm.upper == doctest::Approx(2.0 * pi));
}

TEST_CASE("compact extents of the round sphere") {
  const CompactExtents ext = compact_extents(ProfileSurface::spheroid(1.0), 8);
  CHECK(ext.diameter == doctest::Approx(pi).epsilon(1e-4));
  CHECK(ext.radius == doctest::Approx(pi).epsilon(1e-4));
  CHECK(ext.normalized_volume == doctest::Approx(4.0 / pi).epsilon(1e-4));
}

TEST_CASE("normalized volume drops along the prolate family") {
  const CompactExtents round = compact_extents(ProfileSurface::spheroid(1.0), 6);
  const CompactExtents prolate = compact_extents(ProfileSurface::spheroid(2.0), 6);
  CHECK(prolate.normalized_volume < round.normalized_volume - 0.05);
  CHECK_THROWS_AS(compact_extents(ProfileSurface::plane()), std::domain_error);
}

TEST_CASE("connect rejects coincident points and vertex targets work") {
  const ProfileSurface plane = ProfileSurface::plane();
  CHECK_THROWS_AS(connect(plane, SurfacePoint{1.0, 0.3}, SurfacePoint{1.0, 0.3}),
                  std::domain_error);
  const Connection conn = connect(plane, SurfacePoint{1.5, 0.2}, SurfacePoint{0.0, 0.0});
  CHECK(conn.distance == doctest::Approx(1.5).epsilon(1e-12));
}
