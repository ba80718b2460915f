#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "obtuselab/cli.hpp"
#include "obtuselab/numerics.hpp"

namespace obtuselab::cli {

using num::pi;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  Json values = Json::object();

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!detail.empty()) detail += "; ";
      detail += what;
      ok = false;
    }
  }
  void note(const std::string& key, double v) { values.set(key, v); }
};

std::string fmt(double v) { return Json::format_number(v); }

// 1. maximal obtuse constant from infinity on the hyperboloid family
CriterionResult criterion1() {
  CriterionResult cr{1, "hyperboloid family: obtuse constant from infinity = pi/2", false, "", {}};
  Check ck;
  for (const double a : {0.5, 1.0, std::sqrt(3.0)}) {
    auto space = make_surface_space(ProfileSurface::hyperboloid(a));
    for (const ObtuseVariant variant : {ObtuseVariant::angle, ObtuseVariant::comparison}) {
      ObtuseConfig oc;
      oc.pair_separations = {0.1, 0.03, 0.01};
      oc.far_radii = {30.0, 100.0, 300.0, 1000.0};
      oc.samples_per_radius = 720;
      oc.pairs_per_separation = 12;
      oc.variant = variant;
      const InvariantEstimate est = obtuse_from_infinity(*space, oc);
      const char* vn = variant == ObtuseVariant::angle ? "angle" : "comparison";
      std::ostringstream key;
      key << vn << "_a=" << fmt(a);
      ck.note(key.str(), est.value);
      ck.expect(est.value >= 0.5 * pi - 0.05,
                std::string(vn) + " value " + fmt(est.value) + " below pi/2 - 0.05 at a=" + fmt(a));
      ck.expect(est.monotone && est.ladder.back() >= est.ladder.front(),
                std::string(vn) + " ladder not monotone increasing at a=" + fmt(a));
    }
  }
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "both variants >= pi/2 - 0.05 with increasing ladders" : ck.detail;
  cr.values = ck.values;
  return cr;
}

// 2. total curvature of the boundary-case hyperboloid by both routes
CriterionResult criterion2() {
  CriterionResult cr{2, "hyperboloid(sqrt 3): total curvature pi by both routes", false, "", {}};
  Check ck;
  const AsymptoticProfile ap = asymptotic_profile(ProfileSurface::hyperboloid(std::sqrt(3.0)));
  ck.note("total_curvature", ap.total_curvature);
  ck.note("total_curvature_quadrature", ap.total_curvature_quadrature);
  ck.note("ideal_boundary_length", ap.ideal_boundary_length);
  ck.expect(std::fabs(ap.total_curvature - pi) <= 1e-4, "Gauss-Bonnet route off pi");
  ck.expect(std::fabs(ap.total_curvature_quadrature - pi) <= 1e-4, "quadrature route off pi");
  ck.expect(std::fabs(ap.ideal_boundary_length - pi) <= 1e-4, "ideal boundary length off pi");
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "all three quantities within 1e-4 of pi" : ck.detail;
  cr.values = ck.values;
  return cr;
}

// 3. volume growth closed form and exact cone growth
CriterionResult criterion3() {
  CriterionResult cr{3, "volume growth: v_inf = pi/sqrt(1+a^2); cones exact", false, "", {}};
  Check ck;
  double prev = std::numeric_limits<double>::infinity();
  for (const double a : {0.0, 0.5, 1.0, 3.0}) {
    const AsymptoticProfile ap = asymptotic_profile(ProfileSurface::hyperboloid(a));
    const double expected = pi / std::sqrt(1.0 + a * a);
    ck.note("v_inf_a=" + fmt(a), ap.v_inf);
    ck.expect(std::fabs(ap.v_inf - expected) <= 1e-4,
              "v_inf off closed form at a=" + fmt(a));
    ck.expect(ap.v_inf < prev, "v_inf not strictly decreasing at a=" + fmt(a));
    prev = ap.v_inf;
  }
  for (const double L : {0.25 * pi, pi, 2.0 * pi}) {
    auto cone = make_cone_space(FlatCone(L));
    const GrowthReport g = cone->growth();
    ck.expect(g.v_inf && *g.v_inf == 0.5 * L, "cone growth not exactly L/2 at L=" + fmt(L));
  }
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "closed form within 1e-4, strictly decreasing, cones exact" : ck.detail;
  cr.values = ck.values;
  return cr;
}

// 4. ideal-triangle kappa-obtuse constant
CriterionResult criterion4() {
  CriterionResult cr{4, "ideal triangle: kappa-obtuse constant from infinity = -pi/2", false, "", {}};
  Check ck;
  auto space = make_ideal_triangle_space();
  ObtuseConfig oc;
  oc.samples_per_radius = 90;
  const InvariantEstimate est = kappa_obtuse_infinity(*space, Curvature(-1.0), oc);
  ck.note("value", est.value);
  ck.expect(std::fabs(est.value - (-0.5 * pi)) <= 0.05,
            "value " + fmt(est.value) + " not within 0.05 of -pi/2");
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "value " + fmt(est.value) + " within 0.05 of -pi/2" : ck.detail;
  cr.values = ck.values;
  return cr;
}

// 5. ray structure and ray measure on hyperboloid(1)
CriterionResult criterion5() {
  CriterionResult cr{5, "hyperboloid(1): meridian fan rays and Maeda ray measure", false, "", {}};
  Check ck;
  const ProfileSurface surf = ProfileSurface::hyperboloid(1.0);
  const SurfacePoint p{2.0, 0.0};
  for (const double t : {0.0, 0.25 * pi, -0.25 * pi, 0.5 * pi, -0.5 * pi}) {
    const bool ray = is_ray(surf, p, t, 50.0, 1e-3);
    ck.expect(ray, "direction " + fmt(t) + " failed the ray certificate");
  }
  const AsymptoticProfile ap = asymptotic_profile(surf);
  const RayMeasureResult rm = ray_measure(surf, p, 50.0, 1e-3);
  const double maeda = 2.0 * pi - ap.total_curvature_quadrature;
  ck.note("ray_measure_lower", rm.lower);
  ck.note("maeda_bound", maeda);
  ck.expect(rm.lower >= maeda - 0.05,
            "ray measure lower bound " + fmt(rm.lower) + " below Maeda bound " + fmt(maeda));
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "fan directions are rays; measure >= 2pi - total curvature - 0.05"
                    : ck.detail;
  cr.values = ck.values;
  return cr;
}

// 6. estimator vs exact cone oracle across link lengths
CriterionResult criterion6() {
  CriterionResult cr{6, "flat cones: estimators match the exact oracle to 1e-3", false, "", {}};
  Check ck;
  double worst_comp = 0.0, worst_ang = 0.0;
  for (const double L : {0.25 * pi, 0.5 * pi, pi, 1.5 * pi, 2.0 * pi}) {
    auto space = make_cone_space(FlatCone(L));
    std::vector<PairSample> pairs;
    int batch = 0;
    for (const double sep : {0.5, 1.5, 3.0}) {
      const int want = batch < 2 ? 17 : 16;
      auto chunk = space->pair_samples(sep, want, 7 + batch);
      pairs.insert(pairs.end(), chunk.begin(), chunk.end());
      ++batch;
    }
    const FlatCone cone(L);
    for (const PairSample& pr : pairs) {
      const ConePoint cp{pr.p.u, pr.p.v}, cq{pr.q.u, pr.q.v};
      ComparisonQuery q;
      q.p = pr.p;
      q.q = pr.q;
      q.samples_per_radius = 720;
      const double est_c = pair_obtuse_comparison(*space, q).value;
      const double ora_c = cone_obtuse_inf_exact(cone, cp, cq, ObtuseVariant::comparison);
      worst_comp = std::max(worst_comp, std::fabs(est_c - ora_c));
      const double est_a = pair_obtuse_angle(*space, q).value;
      const double ora_a = cone_obtuse_inf_exact(cone, cp, cq, ObtuseVariant::angle);
      worst_ang = std::max(worst_ang, std::fabs(est_a - ora_a));
    }
  }
  ck.note("worst_comparison_gap", worst_comp);
  ck.note("worst_angle_gap", worst_ang);
  ck.expect(worst_comp <= 1e-3, "comparison estimator off oracle by " + fmt(worst_comp));
  ck.expect(worst_ang <= 1e-3, "angle estimator off oracle by " + fmt(worst_ang));
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "250 pairs, worst gaps " + fmt(worst_comp) + " / " + fmt(worst_ang)
                    : ck.detail;
  cr.values = ck.values;
  return cr;
}

// 7. comparison-angle monotonicity and angle >= comparison angle
CriterionResult criterion7() {
  CriterionResult cr{7, "comparison monotonicity and angle bound on 500 configurations",
                     false, "", {}};
  Check ck;
  ConnectOptions copts;
  copts.scan_resolution = pi / 360.0;
  int tested_total = 0;
  for (const bool sphere : {true, false}) {
    const ProfileSurface surf =
        sphere ? ProfileSurface::spheroid(1.0) : ProfileSurface::hyperboloid(1.0);
    std::mt19937_64 rng(sphere ? 11u : 12u);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int tested = 0;
    double worst_mono = 0.0, worst_bound = 0.0;
    while (tested < 500) {
      const double r_x = sphere ? (0.25 * pi + 0.5 * pi * unif(rng)) : (1.0 + 3.0 * unif(rng));
      const double b1 = 2.0 * pi * unif(rng) - pi;
      const double b2 = 2.0 * pi * unif(rng) - pi;
      if (std::fabs(num::wrap_pi(b1 - b2)) < 0.05) continue;
      const double l1 = 0.3 + (sphere ? 1.0 : 1.7) * unif(rng);
      const double l2 = 0.3 + (sphere ? 1.0 : 1.7) * unif(rng);
      const SurfacePoint x{r_x, 0.0};
      const GeodesicPath g1 = integrate_geodesic(surf, make_state(surf, x, b1), l1);
      const GeodesicPath g2 = integrate_geodesic(surf, make_state(surf, x, b2), l2);
      auto endpoint = [](const GeodesicPath& g) {
        SurfacePoint e = g.samples.back().point;
        e.theta = num::wrap_period(e.theta, 2.0 * pi);
        return e;
      };
      const SurfacePoint y = endpoint(g1), z = endpoint(g2);
      if (!sphere) {
        // minimality guard for the two legs
        if (connect(surf, x, y, copts).distance < l1 - 1e-7) continue;
        if (connect(surf, x, z, copts).distance < l2 - 1e-7) continue;
      }
      const double u1 = 0.25 + 0.6 * unif(rng);
      const double u2 = 0.25 + 0.6 * unif(rng);
      const GeodesicPath h1 = integrate_geodesic(surf, make_state(surf, x, b1), u1 * l1);
      const GeodesicPath h2 = integrate_geodesic(surf, make_state(surf, x, b2), u2 * l2);
      const SurfacePoint s = endpoint(h1), t = endpoint(h2);

      const double d_yz = connect(surf, y, z, copts).distance;
      const double d_st = connect(surf, s, t, copts).distance;
      const double big = comparison_angle_at(Curvature(0.0), l1, l2, d_yz);
      const double small = comparison_angle_at(Curvature(0.0), u1 * l1, u2 * l2, d_st);
      worst_mono = std::max(worst_mono, big - small);
      const double angle = std::fabs(num::wrap_pi(b1 - b2));
      worst_bound = std::max(worst_bound, big - angle);
      ++tested;
    }
    ck.note(sphere ? "sphere_worst_monotonicity_excess" : "hyperboloid_worst_monotonicity_excess",
            worst_mono);
    ck.note(sphere ? "sphere_worst_angle_excess" : "hyperboloid_worst_angle_excess", worst_bound);
    ck.expect(worst_mono <= 1e-6, "comparison-angle monotonicity violated by " + fmt(worst_mono));
    ck.expect(worst_bound <= 1e-6, "angle < comparison angle by " + fmt(worst_bound));
    tested_total += tested;
  }
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "1000 configurations within 1e-6" : ck.detail;
  cr.values = ck.values;
  return cr;
}

// 8. conservation of the angular constant and unit speed
CriterionResult criterion8() {
  CriterionResult cr{8, "conservation over length-100 geodesics (200 seeded states)", false, "", {}};
  Check ck;
  std::mt19937_64 rng(21u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_nu = 0.0, worst_speed = 0.0;
  const std::array<ProfileSurface, 6> surfaces = {
      ProfileSurface::plane(),          ProfileSurface::hyperboloid(1.0),
      ProfileSurface::hyperboloid(std::sqrt(3.0)), ProfileSurface::spheroid(1.0),
      ProfileSurface::spheroid(2.5),    ProfileSurface::paraboloid(1.0)};
  int launched = 0;
  for (int i = 0; i < 200; ++i) {
    const ProfileSurface& surf = surfaces[i % surfaces.size()];
    const double span = surf.compact() ? 0.9 * surf.r_max() : 5.0;
    const double r0 = 0.05 * span + 0.9 * span * unif(rng);
    const double beta = 2.0 * pi * unif(rng) - pi;
    const GeodesicPath path = integrate_geodesic(surf, make_state(surf, SurfacePoint{r0, 0.0}, beta),
                                                 100.0);
    worst_nu = std::max(worst_nu, path.clairaut_drift);
    worst_speed = std::max(worst_speed, path.unit_speed_drift);
    ++launched;
  }
  ck.note("states", launched);
  ck.note("worst_clairaut_drift", worst_nu);
  ck.note("worst_unit_speed_drift", worst_speed);
  ck.expect(worst_nu <= 1e-8, "angular constant drift " + fmt(worst_nu));
  ck.expect(worst_speed <= 1e-8, "unit speed drift " + fmt(worst_speed));
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "drifts " + fmt(worst_nu) + " / " + fmt(worst_speed) + " within 1e-8"
                    : ck.detail;
  cr.values = ck.values;
  return cr;
}

// 9. compact invariants on the round sphere and scale invariance
CriterionResult criterion9() {
  CriterionResult cr{9, "unit sphere: radius, normalized volume, compact obtuse constant; "
                        "scale invariance", false, "", {}};
  Check ck;
  auto run = [&](double lam) {
    auto space = make_surface_space(ProfileSurface::spheroid(1.0, lam));
    const GrowthReport g = space->growth();
    ObtuseConfig oc;
    oc.pairs_per_separation = 6;
    oc.samples_per_radius = 240;
    const InvariantEstimate ob = obtuse_compact(*space, oc);
    return std::array<double, 3>{*g.radius / lam, *g.normalized_volume, ob.value};
  };
  const auto base = run(1.0);
  ck.note("radius", base[0]);
  ck.note("normalized_volume", base[1]);
  ck.note("obtuse_compact", base[2]);
  ck.expect(std::fabs(base[0] - pi) <= 1e-3, "radius " + fmt(base[0]) + " off pi");
  ck.expect(std::fabs(base[1] - 4.0 / pi) <= 1e-3,
            "normalized volume " + fmt(base[1]) + " off 4/pi");
  ck.expect(std::fabs(base[2] - 0.5 * pi) <= 1e-3,
            "compact obtuse estimate " + fmt(base[2]) + " off pi/2");
  for (const double lam : {0.1, 10.0}) {
    const auto scaled = run(lam);
    ck.note("normalized_volume_scale_" + fmt(lam), scaled[1]);
    ck.note("obtuse_compact_scale_" + fmt(lam), scaled[2]);
    ck.expect(std::fabs(scaled[1] - base[1]) <= 1e-9,
              "normalized volume changed under scaling by " + fmt(lam));
    ck.expect(std::fabs(scaled[2] - base[2]) <= 1e-9,
              "obtuse estimate changed under scaling by " + fmt(lam));
  }
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "sphere values within 1e-3; scaling invariance within 1e-9" : ck.detail;
  cr.values = ck.values;
  return cr;
}

// 10. explicit constants
CriterionResult criterion10() {
  CriterionResult cr{10, "explicit constants: c1 closed form, theta_2 closed form, eps monotone",
                     false, "", {}};
  Check ck;
  const StrainerConstants sc = strainer_constants(2, 1.0, 0.5, 0.1);
  const double c1_expected = std::cosh(1.0) - std::cosh(0.25);
  ck.note("c1", sc.c1);
  ck.expect(std::fabs(sc.c1 - c1_expected) <= 1e-9,
            "c1 " + fmt(sc.c1) + " off cosh(1) - cosh(1/4)");
  double worst_theta = 0.0;
  for (int i = 1; i <= 24; ++i) {
    const double eps = 0.5 * pi * i / 24.0;
    const double closed = 4.0 * eps / (pi + 2.0 * eps);
    worst_theta = std::max(worst_theta, std::fabs(theta_n(2, eps) - closed));
  }
  ck.note("worst_theta2_gap", worst_theta);
  ck.expect(worst_theta <= 1e-9, "theta_2 off 4 eps/(pi + 2 eps) by " + fmt(worst_theta));
  double prev = -1.0;
  bool monotone = true;
  for (const double v1 : {1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0}) {
    const double eps = strainer_constants(2, 1.0, 0.5, v1).eps;
    if (eps < prev - 1e-12) monotone = false;
    prev = eps;
  }
  ck.expect(monotone, "eps not monotone nondecreasing in v1");
  cr.pass = ck.ok;
  cr.detail = ck.ok ? "constants match closed forms to 1e-9; eps monotone in v1" : ck.detail;
  cr.values = ck.values;
  return cr;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(int only) {
  using Fn = CriterionResult (*)();
  const std::array<Fn, 10> criteria = {criterion1, criterion2, criterion3, criterion4,
                                       criterion5, criterion6, criterion7, criterion8,
                                       criterion9, criterion10};
  std::vector<CriterionResult> out;
  for (int i = 0; i < 10; ++i) {
    if (only > 0 && only != i + 1) continue;
    out.push_back(criteria[i]());
  }
  return out;
}

}  // namespace obtuselab::cli
