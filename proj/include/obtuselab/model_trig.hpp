#pragma once

#include <stdexcept>

namespace obtuselab {

/// Thrown when side data cannot form a model-plane triangle.
struct invalid_triangle : std::domain_error {
  using std::domain_error::domain_error;
};

/// Curvature of the model plane M_kappa. Operations with kappa > 0 enforce
/// the perimeter bound 2*pi/sqrt(kappa).
struct Curvature {
  double kappa = 0.0;

  Curvature() = default;
  explicit Curvature(double k);

  /// |kappa| below this is treated as flat to avoid cancellation in
  /// sinh(sqrt(-k) s)/sqrt(-k) style expressions.
  static constexpr double flat_eps = 1e-12;
  bool flat() const { return kappa > -flat_eps && kappa < flat_eps; }
};

/// Three side lengths of a geodesic triangle in M_kappa.
struct SideTriple {
  double a = 0.0, b = 0.0, c = 0.0;

  double operator[](int i) const { return i == 0 ? a : (i == 1 ? b : c); }
  void validate(Curvature k) const;  // throws invalid_triangle
};

/// Upper-half-plane point, the model for M_{-1}.
struct HPoint {
  double x = 0.0;
  double y = 1.0;
};

/// Third side of the M_kappa triangle with sides a, b enclosing angle gamma.
double model_side(Curvature k, double a, double b, double gamma);

/// Angle of the comparison triangle at the vertex opposite sides[opposite].
/// Vertex i is where the two other sides meet.
double comparison_angle(Curvature k, const SideTriple& sides, int opposite);

/// Comparison angle straight from three distances: the angle at p of the
/// M_kappa triangle with sides |pq|, |px|, |qx|. Clamps tiny triangle
/// inequality violations (up to `slack`) before solving.
double comparison_angle_at(Curvature k, double d_pq, double d_px, double d_qx,
                           double slack = 1e-9);

/// kappa-cone metric between (xi,s) and (eta,t) with angle alpha between the
/// directions; kappa <= 0 (kappa = 0 is the Euclidean cone law).
double tangent_cone_distance(Curvature k, double s, double t, double alpha);

/// Normalised spherical cap-annulus ratio
///   (cap(pi/2+eps) - cap(pi/2-eps)) / cap(pi/2+eps)
/// of balls around a point of the unit (n-1)-sphere.
double theta_n(int n, double eps);

struct StrainerConstants {
  double c1 = 0.0;
  double eps = 0.0;
};

/// c1 = integral_{r_min/2}^{1} (sinh(D s)/D)^{n-1} ds, and the largest
/// eps in [0, pi/2] with c1 * H(S^{n-1}) * theta_n(eps) <= v1/2.
StrainerConstants strainer_constants(int n, double d_bound, double r_min, double v1);

/// Hausdorff measure of the round unit (n-1)-sphere.
double sphere_measure(int n);

/// Hyperbolic distance in the upper half-plane model.
double halfplane_distance(HPoint p, HPoint q);

/// Membership in the closed ideal triangle with vertices 0, 1, infinity.
bool ideal_triangle_contains(HPoint p);

}  // namespace obtuselab
