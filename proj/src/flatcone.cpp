#include "obtuselab/flatcone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "obtuselab/numerics.hpp"

namespace obtuselab {

using num::pi;

FlatCone::FlatCone(double length) : link_length(length) {
  if (!(length > 0.0) || length > 2.0 * pi + 1e-12)
    throw std::invalid_argument("cone link length must lie in (0, 2*pi]");
  link_length = std::min(length, 2.0 * pi);
}

namespace {

void check_point(const ConePoint& p) {
  if (!(p.rho >= 0.0)) throw std::domain_error("cone radius must be nonnegative");
}

// minimal angular gap between the lifts of the two rays
double angular_gap(const FlatCone& cone, double phi1, double phi2) {
  const double g = num::wrap_period(phi1 - phi2, cone.link_length);
  return std::min(g, cone.link_length - g);
}

// signed gap in (-L/2, L/2]: positive when q sits counterclockwise from p
double signed_gap(const FlatCone& cone, double phi_from, double phi_to) {
  double g = num::wrap_period(phi_to - phi_from, cone.link_length);
  if (g > 0.5 * cone.link_length) g -= cone.link_length;
  return g;
}

}  // namespace

double cone_distance(const FlatCone& cone, ConePoint p, ConePoint q) {
  check_point(p);
  check_point(q);
  const double psi = angular_gap(cone, p.phi, q.phi);
  if (psi >= pi) return p.rho + q.rho;
  const double d2 = p.rho * p.rho + q.rho * q.rho - 2.0 * p.rho * q.rho * std::cos(psi);
  return std::sqrt(std::max(d2, 0.0));
}

ConeConnection cone_connect(const FlatCone& cone, ConePoint p, ConePoint q) {
  check_point(p);
  check_point(q);
  ConeConnection out;
  const double psi = angular_gap(cone, p.phi, q.phi);
  out.distance = cone_distance(cone, p, q);

  if (p.rho == 0.0 || q.rho == 0.0) {
    // departure from the apex is radial by convention
    out.through_apex = true;
    out.solutions.push_back(ConeSolution{p.rho == 0.0 ? 0.0 : pi, q.rho == 0.0 ? pi : 0.0});
    return out;
  }
  if (psi > pi) {
    out.through_apex = true;
    out.solutions.push_back(ConeSolution{pi, 0.0});
    return out;
  }

  const double sgn = signed_gap(cone, p.phi, q.phi) >= 0.0 ? 1.0 : -1.0;
  auto planar = [&](double gap_signed) {
    // unroll p to (rho_p, 0), q to angle gap_signed
    const double qx = q.rho * std::cos(gap_signed), qy = q.rho * std::sin(gap_signed);
    const double vx = qx - p.rho, vy = qy;
    ConeSolution sol;
    sol.alpha_p = std::atan2(vy, vx);
    sol.alpha_q = std::atan2(qx * vy - qy * vx, qx * vx + qy * vy);
    return sol;
  };
  if (psi == pi) {
    out.through_apex = true;  // the tie passes the apex in the degenerate middle
    out.solutions.push_back(planar(pi));
    out.solutions.push_back(planar(-pi));
  } else {
    out.solutions.push_back(planar(sgn * psi));
  }
  return out;
}

namespace {

struct FarAngles {
  double at_p = 0.0;
  double at_q = 0.0;
};

// both pair angles for the witness at (R, phi)
FarAngles witness_angles(const FlatCone& cone, ConePoint p, ConePoint q, double d_pq,
                         double R, double phi, ObtuseVariant variant, Curvature kappa,
                         const ConeConnection& pq_conn) {
  const ConePoint x{R, phi};
  FarAngles out;
  if (variant == ObtuseVariant::comparison) {
    const double dpx = cone_distance(cone, p, x);
    const double dqx = cone_distance(cone, q, x);
    out.at_p = comparison_angle_at(kappa, d_pq, dpx, dqx);
    out.at_q = comparison_angle_at(kappa, d_pq, dqx, dpx);
    return out;
  }
  const ConeConnection px = cone_connect(cone, p, x);
  const ConeConnection qx = cone_connect(cone, q, x);
  // per witness ray: inf over the minimal-direction set toward the pair
  // partner; ties over the witness ray take the larger value
  double best_p = 0.0, best_q = 0.0;
  for (const ConeSolution& to_x : px.solutions) {
    double inf_gap = pi;
    for (const ConeSolution& to_q : pq_conn.solutions)
      inf_gap = std::min(inf_gap, num::direction_gap(to_x.alpha_p, to_q.alpha_p));
    best_p = std::max(best_p, inf_gap);
  }
  for (const ConeSolution& to_x : qx.solutions) {
    double inf_gap = pi;
    for (const ConeSolution& to_p : pq_conn.solutions) {
      const double toward_p = num::wrap_pi(to_p.alpha_q + pi);
      inf_gap = std::min(inf_gap, num::direction_gap(to_x.alpha_p, toward_p));
    }
    best_q = std::max(best_q, inf_gap);
  }
  out.at_p = best_p;
  out.at_q = best_q;
  return out;
}

}  // namespace

double cone_obtuse_inf_exact(const FlatCone& cone, ConePoint p, ConePoint q,
                             ObtuseVariant variant, Curvature kappa) {
  check_point(p);
  check_point(q);
  const double d_pq = cone_distance(cone, p, q);
  if (!(d_pq > 0.0)) throw std::domain_error("pair points must be distinct");
  const ConeConnection pq_conn = cone_connect(cone, p, q);
  const double L = cone.link_length;

  std::vector<double> ladder;
  for (const double mult : {1e3, 1e4, 1e5, 1e6}) {
    const double R = mult * d_pq;
    auto neg_val = [&](double phi) {
      const FarAngles fa = witness_angles(cone, p, q, d_pq, R, phi, variant, kappa, pq_conn);
      return -std::max(fa.at_p, fa.at_q);
    };
    // dense scan plus local refinement; the witness profile is piecewise
    // smooth with apex-transition kinks
    const int n = 2048;
    double best_phi = 0.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double phi = L * i / n;
      const double v = neg_val(phi);
      if (v < best) {
        best = v;
        best_phi = phi;
      }
    }
    const double w = L / n;
    const double refined = num::brent_min(neg_val, best_phi - w, best_phi + w, 1e-12, 200);
    best = std::min(best, neg_val(refined));
    ladder.push_back(-best);
  }
  const double value = num::extrapolate_ladder(ladder);
  return std::clamp(value - 0.5 * pi, -0.5 * pi, 0.5 * pi);
}

}  // namespace obtuselab
