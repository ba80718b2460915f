#include <algorithm>
#include <cmath>

#include "obtuselab/numerics.hpp"
#include "obtuselab/revsurface.hpp"
#include "geodesic_core.hpp"

namespace obtuselab {

using num::pi;

AsymptoticProfile asymptotic_profile(const ProfileSurface& surf) {
  if (surf.compact())
    throw std::domain_error("asymptotic profile requires a noncompact surface");
  const auto& mdl = detail::model_of(surf);
  const double scale = surf.scale();
  const double T0 = 100.0 * scale;
  if (surf.r_max() < 4.0 * T0)
    throw not_converged("profile table too short for the T ladder {100,200,400}*scale");

  const double v1 = mdl.m_prime(T0);
  const double v2 = mdl.m_prime(2.0 * T0);
  const double v3 = mdl.m_prime(4.0 * T0);
  const num::Richardson2 ext = num::richardson_ladder(v1, v2, v3);
  if (ext.spread > 1e-6)
    throw not_converged("m' ladder has not stabilized: spread " + std::to_string(ext.spread));
  const double c = ext.value;

  AsymptoticProfile out;
  out.m_prime_limit = c;
  out.total_curvature = 2.0 * pi * (1.0 - c);
  out.ideal_boundary_length = 2.0 * pi * c;
  out.v_inf = pi * c;

  // independent route: direct quadrature of the curvature mass
  auto tc_at = [&](double T) {
    return 2.0 * pi *
           num::adaptive_simpson(
               [&](double r) { return mdl.curvature(r) * mdl.m(r); }, 0.0, T, 1e-11, true);
  };
  const num::Richardson2 quad = num::richardson_ladder(tc_at(T0), tc_at(2.0 * T0),
                                                       tc_at(4.0 * T0));
  out.total_curvature_quadrature = quad.value;
  return out;
}

bool is_ray(const ProfileSurface& surf, SurfacePoint p, double beta, double horizon,
            double tol, const ConnectOptions& opts) {
  if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
  const GeodesicState init = make_state(surf, p, beta);
  for (const double frac : {0.25, 0.5, 1.0}) {
    const double t = frac * horizon;
    const GeodesicPath path = integrate_geodesic(surf, init, t);
    SurfacePoint target = path.samples.back().point;
    target.theta = num::wrap_period(target.theta, 2.0 * pi);
    const double d = connect(surf, p, target, opts).distance;
    if (d < t - tol) return false;
  }
  return true;
}

RayMeasureResult ray_measure(const ProfileSurface& surf, SurfacePoint p, double horizon,
                             double tol, double angular_resolution) {
  if (surf.compact())
    throw std::domain_error("ray measure requires a noncompact surface");
  // The direction set is symmetric across the meridian through p, and for
  // these profiles it is a closed arc around the outward meridian; bisect
  // its boundary on [0, pi].
  auto ray_at = [&](double t) { return is_ray(surf, p, t, horizon, tol); };
  if (!ray_at(0.0)) return RayMeasureResult{0.0, 2.0 * angular_resolution};
  if (ray_at(pi)) {
    // every sampled direction minimises; report the full circle
    if (ray_at(0.5 * pi) && ray_at(0.25 * pi)) return RayMeasureResult{2.0 * pi, 2.0 * pi};
  }
  double lo = 0.0, hi = pi;
  while (hi - lo > angular_resolution) {
    const double mid = 0.5 * (lo + hi);
    (ray_at(mid) ? lo : hi) = mid;
  }
  return RayMeasureResult{2.0 * lo, 2.0 * hi};
}

namespace {

// distance between (r1, 0) and (r2, pi); the farthest point from a base
// point on these rotationally symmetric profiles lies on the opposite
// meridian, so extents reduce to this two-variable function
double opposite_meridian_distance(const ProfileSurface& surf, double r1, double r2) {
  ConnectOptions opts;
  opts.scan_resolution = pi / 180.0;
  return connect(surf, SurfacePoint{r1, 0.0}, SurfacePoint{r2, pi}, opts).distance;
}

}  // namespace

CompactExtents compact_extents(const ProfileSurface& surf, int sample_density) {
  if (!surf.compact()) throw std::domain_error("compact extents require a compact surface");
  const double rmax = surf.r_max();
  const double lo = 3.0 * detail::chart_radius(detail::model_of(surf));
  const double hi = rmax - lo;
  const int n = std::max(8, sample_density);

  const double xtol = 2e-4;
  auto sup_from = [&](double r1) {
    double best = std::max(opposite_meridian_distance(surf, r1, lo),
                           opposite_meridian_distance(surf, r1, hi));
    const double r2_star = num::brent_min(
        [&](double r2) { return -opposite_meridian_distance(surf, r1, r2); }, lo, hi, xtol, 24);
    best = std::max(best, opposite_meridian_distance(surf, r1, r2_star));
    return best;
  };

  double radius = std::numeric_limits<double>::infinity();
  double diameter = 0.0;
  double arg_rad = lo, arg_diam = lo;
  for (int i = 0; i < n; ++i) {
    const double r1 = lo + (hi - lo) * (i + 0.5) / n;
    const double R = sup_from(r1);
    if (R < radius) {
      radius = R;
      arg_rad = r1;
    }
    if (R > diameter) {
      diameter = R;
      arg_diam = r1;
    }
  }
  const double span = (hi - lo) / n;
  const double r_rad = num::brent_min(
      [&](double r1) { return sup_from(r1); }, std::max(lo, arg_rad - span),
      std::min(hi, arg_rad + span), xtol, 16);
  radius = std::min(radius, sup_from(r_rad));
  const double r_diam = num::brent_min(
      [&](double r1) { return -sup_from(r1); }, std::max(lo, arg_diam - span),
      std::min(hi, arg_diam + span), xtol, 16);
  diameter = std::max(diameter, sup_from(r_diam));

  CompactExtents out;
  out.diameter = diameter;
  out.radius = radius;
  out.normalized_volume = surf.ball_area(rmax) / (diameter * diameter);
  return out;
}

}  // namespace obtuselab
