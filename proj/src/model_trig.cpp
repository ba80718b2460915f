#include "obtuselab/model_trig.hpp"

#include <algorithm>
#include <cmath>

#include "obtuselab/numerics.hpp"

namespace obtuselab {

using num::pi;

namespace {

constexpr double hyperbolic_arg_cap = 700.0;  // exp overflow guard

double clamped_acos(double c, double slack = 1e-12) {
  if (c > 1.0) {
    if (c > 1.0 + slack) throw invalid_triangle("cosine out of range");
    c = 1.0;
  } else if (c < -1.0) {
    if (c < -1.0 - slack) throw invalid_triangle("cosine out of range");
    c = -1.0;
  }
  return std::acos(c);
}

void check_lengths(Curvature k, double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::domain_error("negative side length");
  if (k.kappa > 0.0 && !k.flat()) {
    const double cap = pi / std::sqrt(k.kappa);
    if (a > cap + 1e-12 || b > cap + 1e-12)
      throw std::domain_error("side exceeds pi/sqrt(kappa)");
  }
  if (k.kappa < 0.0) {
    const double s = std::sqrt(-k.kappa);
    if (a * s > hyperbolic_arg_cap || b * s > hyperbolic_arg_cap)
      throw std::domain_error("sqrt(-kappa)*length exceeds overflow cap");
  }
}

}  // namespace

Curvature::Curvature(double k) : kappa(k) {
  if (!std::isfinite(k)) throw std::domain_error("curvature must be finite");
}

void SideTriple::validate(Curvature k) const {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0))
    throw invalid_triangle("sides must be nonnegative");
  const double slack = 1e-12 * std::max({1.0, a, b, c});
  if (a > b + c + slack || b > a + c + slack || c > a + b + slack)
    throw invalid_triangle("triangle inequality violated");
  if (k.kappa > 0.0 && !k.flat()) {
    if (a + b + c >= 2.0 * pi / std::sqrt(k.kappa))
      throw invalid_triangle("perimeter exceeds 2*pi/sqrt(kappa)");
  }
}

double model_side(Curvature k, double a, double b, double gamma) {
  check_lengths(k, a, b);
  if (gamma < -1e-12 || gamma > pi + 1e-12)
    throw std::domain_error("angle outside [0, pi]");
  gamma = std::clamp(gamma, 0.0, pi);
  if (k.flat()) {
    const double c2 = a * a + b * b - 2.0 * a * b * std::cos(gamma);
    return std::sqrt(std::max(c2, 0.0));
  }
  if (k.kappa < 0.0) {
    const double s = std::sqrt(-k.kappa);
    // cosh(sc) = cosh(sa)cosh(sb) - sinh(sa)sinh(sb)cos(gamma); evaluated via
    // the difference form to dodge cancellation for small angles.
    const double sa = s * a, sb = s * b;
    const double ch = std::cosh(sa - sb) + std::sinh(sa) * std::sinh(sb) * (1.0 - std::cos(gamma));
    return std::acosh(std::max(ch, 1.0)) / s;
  }
  const double s = std::sqrt(k.kappa);
  const double cosc = std::cos(s * a) * std::cos(s * b) +
                      std::sin(s * a) * std::sin(s * b) * std::cos(gamma);
  return clamped_acos(cosc) / s;
}

double comparison_angle(Curvature k, const SideTriple& sides, int opposite) {
  if (opposite < 0 || opposite > 2) throw std::domain_error("vertex index must be 0, 1 or 2");
  sides.validate(k);
  const double c = sides[opposite];
  const double a = sides[(opposite + 1) % 3];
  const double b = sides[(opposite + 2) % 3];
  if (a == 0.0 || b == 0.0)
    throw invalid_triangle("adjacent side degenerates to a point");
  if (k.flat()) {
    return clamped_acos((a * a + b * b - c * c) / (2.0 * a * b), 1e-9);
  }
  if (k.kappa < 0.0) {
    const double s = std::sqrt(-k.kappa);
    const double num = std::cosh(s * a) * std::cosh(s * b) - std::cosh(s * c);
    const double den = std::sinh(s * a) * std::sinh(s * b);
    return clamped_acos(num / den, 1e-9);
  }
  const double s = std::sqrt(k.kappa);
  const double num = std::cos(s * c) - std::cos(s * a) * std::cos(s * b);
  const double den = std::sin(s * a) * std::sin(s * b);
  return clamped_acos(num / den, 1e-9);
}

double comparison_angle_at(Curvature k, double d_pq, double d_px, double d_qx, double slack) {
  if (!(d_pq > 0.0) || !(d_px > 0.0))
    throw invalid_triangle("comparison angle needs positive adjacent sides");
  const double scale = std::max({d_pq, d_px, d_qx});
  double c = d_qx;
  const double hi = d_pq + d_px;
  const double lo = std::fabs(d_pq - d_px);
  if (c > hi) {
    if (c > hi + slack * scale) throw invalid_triangle("triangle inequality violated");
    c = hi;
  } else if (c < lo) {
    if (c < lo - slack * scale) throw invalid_triangle("triangle inequality violated");
    c = lo;
  }
  return comparison_angle(k, SideTriple{d_pq, d_px, c}, 2);
}

double tangent_cone_distance(Curvature k, double s, double t, double alpha) {
  if (k.kappa > Curvature::flat_eps)
    throw std::domain_error("cone metric defined for kappa <= 0");
  if (!(s >= 0.0) || !(t >= 0.0)) throw std::domain_error("negative radius");
  if (alpha < -1e-12 || alpha > pi + 1e-12) throw std::domain_error("angle outside [0, pi]");
  alpha = std::clamp(alpha, 0.0, pi);
  if (k.flat()) {
    const double d2 = s * s + t * t - 2.0 * s * t * std::cos(alpha);
    return std::sqrt(std::max(d2, 0.0));
  }
  const double q = std::sqrt(-k.kappa);
  if (s * q > hyperbolic_arg_cap || t * q > hyperbolic_arg_cap)
    throw std::domain_error("sqrt(-kappa)*length exceeds overflow cap");
  // f'(d) = f'(s) f'(t) + kappa f(s) f(t) cos(alpha), f(s) = sinh(qs)/q.
  const double ch = std::cosh(q * (s - t)) +
                    std::sinh(q * s) * std::sinh(q * t) * (1.0 - std::cos(alpha));
  return std::acosh(std::max(ch, 1.0)) / q;
}

namespace {

// integral_0^r sin^{n-2}, the unnormalised cap measure on S^{n-1}.
double cap_integral(int n, double r) {
  r = std::clamp(r, 0.0, pi);
  if (n == 2) return r;
  if (n == 3) return 1.0 - std::cos(r);
  return num::adaptive_simpson(
      [n](double t) { return std::pow(std::sin(t), n - 2); }, 0.0, r, 1e-10);
}

}  // namespace

double theta_n(int n, double eps) {
  if (n < 2) throw std::domain_error("dimension must be >= 2");
  if (eps < -1e-15 || eps > pi / 2 + 1e-15) throw std::domain_error("eps outside [0, pi/2]");
  eps = std::clamp(eps, 0.0, pi / 2);
  if (eps == 0.0) return 0.0;
  const double big = cap_integral(n, pi / 2 + eps);
  const double small = cap_integral(n, pi / 2 - eps);
  return std::clamp((big - small) / big, 0.0, 1.0);
}

double sphere_measure(int n) {
  return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

StrainerConstants strainer_constants(int n, double d_bound, double r_min, double v1) {
  if (n < 2) throw std::domain_error("dimension must be >= 2");
  if (!(d_bound > 0.0)) throw std::domain_error("diameter bound must be positive");
  if (!(r_min >= 0.5 && r_min <= 1.0)) throw std::domain_error("r_min must lie in [1/2, 1]");
  if (!(v1 > 0.0)) throw std::domain_error("v1 must be positive");

  StrainerConstants out;
  out.c1 = num::adaptive_simpson(
      [n, d_bound](double s) { return std::pow(std::sinh(d_bound * s) / d_bound, n - 1); },
      0.5 * r_min, 1.0, 1e-10);

  const double budget = 0.5 * v1;
  const double factor = out.c1 * sphere_measure(n);
  auto excess = [&](double e) { return factor * theta_n(n, e) - budget; };
  if (excess(pi / 2) <= 0.0) {
    out.eps = pi / 2;  // inequality holds on the whole range; cap at the max
  } else if (excess(0.0) > 0.0) {
    out.eps = 0.0;  // cannot happen for v1 > 0, kept as a guard
  } else {
    double lo = 0.0, hi = pi / 2;
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) <= 0.0 ? lo : hi) = mid;
    }
    out.eps = lo;
  }
  return out;
}

double halfplane_distance(HPoint p, HPoint q) {
  if (!(p.y > 0.0) || !(q.y > 0.0)) throw std::domain_error("half-plane points need y > 0");
  const double dx = p.x - q.x, dy = p.y - q.y;
  const double ch = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y);
  return std::acosh(std::max(ch, 1.0));
}

bool ideal_triangle_contains(HPoint p) {
  if (!(p.y > 0.0)) throw std::domain_error("half-plane points need y > 0");
  if (p.x < 0.0 || p.x > 1.0) return false;
  const double dx = p.x - 0.5;
  return dx * dx + p.y * p.y >= 0.25;
}

}  // namespace obtuselab
