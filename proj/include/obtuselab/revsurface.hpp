#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace obtuselab {

struct not_converged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct domain_exit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ProfileFamily { plane, hyperboloid, spheroid, paraboloid, table };

class ProfileSurface;

namespace detail {
class ProfileModel;
const ProfileModel& model_of(const ProfileSurface& surf);
}

/// Rotationally symmetric surface dr^2 + m(r)^2 dtheta^2 given by its
/// warping profile m. Immutable after construction; profile tables are
/// precomputed up front, so all methods are const and thread-safe.
class ProfileSurface {
 public:
  static ProfileSurface plane(double scale = 1.0);
  /// z = a*sqrt(x^2+y^2+1); profile obtained by integrating
  /// drho/dr = (1 + a^2 rho^2/(rho^2+1))^{-1/2}. r_cap bounds the
  /// precomputed table (in units of scale).
  static ProfileSurface hyperboloid(double a, double scale = 1.0, double r_cap = 1200.0);
  /// Ellipsoid of revolution with polar half-axis c (c=1: round unit
  /// sphere m = sin r; c > 1 prolate, c < 1 oblate).
  static ProfileSurface spheroid(double c = 1.0, double scale = 1.0);
  /// z = b rho^2 / 2; zero volume growth.
  static ProfileSurface paraboloid(double b, double scale = 1.0, double r_cap = 1200.0);
  /// Tabulated profile through (r_i, m_i) with a natural cubic spline.
  static ProfileSurface from_table(const std::vector<double>& r, const std::vector<double>& m);

  double m(double r) const;
  double m_prime(double r) const;
  /// Gaussian curvature K = -m''/m (limit value at r = 0).
  double curvature(double r) const;

  bool compact() const;
  /// Domain end: meridian length for compact surfaces, table cap otherwise.
  double r_max() const;
  double scale() const;
  ProfileFamily family() const;
  std::string describe() const;

  /// H^2(B(p0, R)) = 2*pi integral_0^R m dr.
  double ball_area(double R) const;

 private:
  explicit ProfileSurface(std::shared_ptr<const detail::ProfileModel> model);
  std::shared_ptr<const detail::ProfileModel> model_;
  friend const detail::ProfileModel& detail::model_of(const ProfileSurface& surf);
};

struct SurfacePoint {
  double r = 0.0;
  double theta = 0.0;
};

/// Unit-speed geodesic data. nu = m(r)^2 * theta_dot is the conserved
/// angular constant.
struct GeodesicState {
  SurfacePoint point;
  double r_dot = 1.0;
  double theta_dot = 0.0;
  double nu = 0.0;
};

/// State with direction angle beta measured from the outward meridian
/// (beta = +pi/2 points along the parallel of increasing theta).
GeodesicState make_state(const ProfileSurface& surf, SurfacePoint at, double beta);

double unit_speed_defect(const ProfileSurface& surf, const GeodesicState& st);

struct PathSample {
  double s = 0.0;
  SurfacePoint point;
  double r_dot = 0.0;
  double theta_dot = 0.0;
};

struct GeodesicPath {
  GeodesicState initial;
  std::vector<PathSample> samples;
  double length = 0.0;
  int winding = 0;
  double clairaut_drift = 0.0;
  double unit_speed_drift = 0.0;
};

GeodesicPath integrate_geodesic(const ProfileSurface& surf, const GeodesicState& init,
                                double length, double tol = 1e-11);

struct ConnectOptions {
  int winding_bound = 2;
  double scan_resolution = 0.0043633231299858239;  // pi/720
  double hit_tol = 0.0;        // 0: auto (1e-9 * scale * (1 + distance/scale))
  double min_tol_factor = 1e-6;  // solutions within this of the minimum count
  double max_length = 0.0;     // 0: auto cap
  double tol = 1e-10;          // integrator tolerance for refinement shots
  double scan_tol = 1e-7;      // looser tolerance for the bracketing scan
};

struct ConnectSolution {
  double beta_p = 0.0;     // departure direction at p
  double beta_q_in = 0.0;  // arrival motion direction at q
  double length = 0.0;
  int winding = 0;
};

struct Connection {
  double distance = 0.0;
  std::vector<ConnectSolution> solutions;  // all within min_tol of the minimum
  bool degenerate = false;
  double best_residual = 0.0;
};

/// Two-point boundary value solve by initial-angle shooting; returns the
/// global minimum over |winding| <= winding_bound plus every solution in
/// the min_tol band.
Connection connect(const ProfileSurface& surf, SurfacePoint p, SurfacePoint q,
                   const ConnectOptions& opts = {});

struct Velocity {
  double r_dot = 0.0;
  double theta_dot = 0.0;
};

/// Riemannian angle between velocities at a point, via g = diag(1, m^2).
double tangent_angle(const ProfileSurface& surf, SurfacePoint at, Velocity v1, Velocity v2);

/// Minimality certificate up to the horizon: d(p, gamma(t)) >= t - tol at
/// t in {horizon/4, horizon/2, horizon}.
bool is_ray(const ProfileSurface& surf, SurfacePoint p, double beta, double horizon,
            double tol, const ConnectOptions& opts = {});

struct RayMeasureResult {
  double lower = 0.0;
  double upper = 0.0;
};

/// Measure (radians) of ray directions at p, by bisecting the boundary of
/// the ray arc on [0, pi] (the direction set is symmetric across the
/// meridian through p).
RayMeasureResult ray_measure(const ProfileSurface& surf, SurfacePoint p, double horizon,
                             double tol, double angular_resolution = 1e-3);

struct AsymptoticProfile {
  double m_prime_limit = 0.0;
  double total_curvature = 0.0;
  double ideal_boundary_length = 0.0;
  double v_inf = 0.0;
  double total_curvature_quadrature = 0.0;  // direct \iint K dM route
};

/// Limits at infinity via m'(T) on the T ladder {100,200,400}*scale with
/// Richardson extrapolation, cross-checked by direct curvature quadrature.
AsymptoticProfile asymptotic_profile(const ProfileSurface& surf);

struct CompactExtents {
  double diameter = 0.0;
  double radius = 0.0;
  double normalized_volume = 0.0;
};

CompactExtents compact_extents(const ProfileSurface& surf, int sample_density = 16);

// ---- far-field fans (batched distance/direction queries) ----

struct FarFieldSample {
  double phi = 0.0;       // absolute angular position on the circle r = level
  double distance = 0.0;
  double beta_at_base = 0.0;  // departure direction of the minimal geodesic
  bool found = false;
};

struct FarField {
  double level = 0.0;
  std::vector<FarFieldSample> samples;
};

/// Distances (and departure directions) from `base` to phi-grids on the
/// coordinate circles r = level, one shooting fan for all levels.
std::vector<FarField> far_field(const ProfileSurface& surf, SurfacePoint base,
                                const std::vector<double>& levels, int samples_per_level,
                                const ConnectOptions& opts = {});

}  // namespace obtuselab
