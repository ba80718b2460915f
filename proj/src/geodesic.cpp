#include <algorithm>
#include <array>
#include <cmath>

#include "obtuselab/numerics.hpp"
#include "obtuselab/revsurface.hpp"
#include "geodesic_core.hpp"

namespace obtuselab {

using num::pi;

namespace detail {

namespace {

using Y4 = std::array<double, 4>;  // r, pr, th, pth

inline Y4 rhs(const ProfileModel& mdl, const Y4& y) {
  double m, mp;
  mdl.eval(y[0], m, mp);
  if (!(m > 0.0)) {
    return {std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0.0};
  }
  const double pth = y[3];
  return {y[1], m * mp * pth * pth, pth, -2.0 * (mp / m) * y[1] * pth};
}

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct StepOut {
  Y4 y;
  double err = 0.0;  // scaled error norm
  bool bad = false;
};

StepOut dp_step(const ProfileModel& mdl, const Y4& y, const Y4& k1, double h, double tol,
                double scale) {
  StepOut out;
  Y4 t;
  auto stage = [&](double c1, double c2, double c3, double c4, double c5, double c6,
                   const Y4& k2, const Y4& k3, const Y4& k4, const Y4& k5, const Y4& k6) {
    for (int i = 0; i < 4; ++i)
      t[i] = y[i] + h * (c1 * k1[i] + c2 * k2[i] + c3 * k3[i] + c4 * k4[i] + c5 * k5[i] +
                         c6 * k6[i]);
  };
  const Y4 z{};
  stage(a21, 0, 0, 0, 0, 0, z, z, z, z, z);
  const Y4 k2 = rhs(mdl, t);
  stage(a31, a32, 0, 0, 0, 0, k2, z, z, z, z);
  const Y4 k3 = rhs(mdl, t);
  stage(a41, a42, a43, 0, 0, 0, k2, k3, z, z, z);
  const Y4 k4 = rhs(mdl, t);
  stage(a51, a52, a53, a54, 0, 0, k2, k3, k4, z, z);
  const Y4 k5 = rhs(mdl, t);
  stage(a61, a62, a63, a64, a65, 0, k2, k3, k4, k5, z);
  const Y4 k6 = rhs(mdl, t);
  for (int i = 0; i < 4; ++i)
    out.y[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  const Y4 k7 = rhs(mdl, out.y);

  const std::array<double, 4> atol{tol * scale, tol, tol, tol / scale};
  double err2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
    const double sc = atol[i] + tol * std::max(std::fabs(y[i]), std::fabs(out.y[i]));
    err2 += (e / sc) * (e / sc);
  }
  out.err = std::sqrt(err2 / 4.0);
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(out.y[i])) out.bad = true;
  }
  if (!std::isfinite(out.err)) out.bad = true;
  return out;
}

// Hermite root of r(s) = level inside a step.
double hermite_root(double s0, double h, double r0, double pr0, double r1, double pr1,
                    double level) {
  auto value = [&](double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * r0 + (t3 - 2 * t2 + t) * h * pr0 +
           (-2 * t3 + 3 * t2) * r1 + (t3 - t2) * h * pr1 - level;
  };
  double lo = 0.0, hi = 1.0, flo = value(0.0), fhi = value(1.0);
  if (flo == 0.0) return s0;
  if (fhi == 0.0) return s0 + h;
  if ((flo > 0) == (fhi > 0)) return s0 + h;  // touch case: settle at the end
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = value(mid);
    if (fm == 0.0) return s0 + mid * h;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return s0 + 0.5 * (lo + hi) * h;
}

struct ChartOut {
  GeoState st;
  bool ended_inside = false;
};

// Straight-line passage through the flat chart disc around a pole.
// `mirror` handles the far pole of compact surfaces (u = r_max - r); the
// chart coordinates are (u, theta), so only the radial component flips.
ChartOut chart_pass(const ProfileModel& mdl, const GeoState& in, double rc, double s_end,
                    bool mirror) {
  const double rmax = mdl.r_max();
  const double u = mirror ? rmax - in.r : in.r;
  const double upr = mirror ? -in.pr : in.pr;
  double m, mp;
  mdl.eval(in.r, m, mp);
  const double tau = m * in.pth;  // signed tangential speed

  // chart cartesian position/direction, rotated so entry is at chart angle 0
  const double px = u;
  const double dx = upr, dy = tau;
  const double pd = px * dx;
  const double disc = pd * pd - (u * u - rc * rc);
  const double t_exit = -pd + std::sqrt(std::max(disc, 0.0));

  ChartOut out;
  const double budget = s_end - in.s;
  const double t = std::min(t_exit, budget);
  const double ex = px + t * dx, ey = t * dy;
  const double re = std::hypot(ex, ey);
  if (re < 1e-300) {
    // ends at the pole itself
    out.st = in;
    out.st.s += t;
    out.st.r = mirror ? rmax : 0.0;
    out.st.pth = 0.0;
    out.ended_inside = true;
    return out;
  }
  double dth_chart = std::atan2(ey, ex);
  if (tau == 0.0 && ex < 0.0) dth_chart = pi;  // meridian continuation convention

  out.ended_inside = budget < t_exit;
  // snap a completed passage to the rim so roundoff cannot re-enter the chart
  const double ue = out.ended_inside ? re : rc;
  const double rr = mirror ? rmax - ue : ue;
  double me, mpe;
  mdl.eval(rr, me, mpe);
  const double cosd = ex / re, sind = ey / re;
  const double pre_chart = dx * cosd + dy * sind;  // radial component at exit
  const double taue = -dx * sind + dy * cosd;      // tangential component at exit
  out.st.s = in.s + t;
  out.st.r = rr;
  out.st.pr = mirror ? -pre_chart : pre_chart;
  out.st.th = in.th + dth_chart;
  out.st.pth = taue / me;
  return out;
}

}  // namespace

double chart_radius(const ProfileModel& mdl) { return 1e-4 * mdl.scale(); }

WalkResult walk_geodesic(const ProfileModel& mdl, GeoState start, const WalkOptions& opt,
                         const CrossingFn& on_cross, const SampleFn& on_sample) {
  const double scale = mdl.scale();
  const double rc = chart_radius(mdl);
  const double rmax = mdl.r_max();
  const bool compact = mdl.compact();
  const double tol = opt.tol;

  WalkResult res;
  GeoState st = start;

  const std::vector<double>& levels = opt.levels ? *opt.levels : std::vector<double>{};
  std::vector<double> next_allowed(levels.size(), -1.0);

  double h = 0.05 * scale;
  int consecutive_rejects = 0;

  auto fire_crossings = [&](const GeoState& from, const GeoState& to, bool& halt) -> GeoState {
    // earliest crossing within the accepted step, if any
    int best = -1;
    double best_s = to.s + 1.0;
    for (size_t i = 0; i < levels.size(); ++i) {
      const double L = levels[i];
      const double f0 = from.r - L, f1 = to.r - L;
      if ((f0 < 0.0 && f1 >= 0.0) || (f0 > 0.0 && f1 <= 0.0)) {
        const double s_star =
            hermite_root(from.s, to.s - from.s, from.r, from.pr, to.r, to.pr, L);
        if (s_star <= next_allowed[i]) continue;
        if (s_star < best_s) {
          best_s = s_star;
          best = static_cast<int>(i);
        }
      }
    }
    if (best < 0) return to;
    // redo a clipped step to land exactly on the crossing
    GeoState cross = from;
    const double hc = best_s - from.s;
    if (hc > 1e-300) {
      const Y4 y0{from.r, from.pr, from.th, from.pth};
      const Y4 k1 = rhs(mdl, y0);
      const StepOut so = dp_step(mdl, y0, k1, hc, tol, scale);
      cross.s = best_s;
      cross.r = so.y[0];
      cross.pr = so.y[1];
      cross.th = so.y[2];
      cross.pth = so.y[3];
    }
    // snap onto the level so the resumed walk cannot refire the crossing
    cross.r = levels[best];
    next_allowed[best] = best_s + 1e-6 * scale;
    if (on_cross && !on_cross(best, cross)) {
      halt = true;
      return cross;
    }
    return cross;  // resume from the crossing point
  };

  while (st.s < opt.s_end - 1e-15 * scale) {
    // vertex / far-pole chart passages
    if (st.r < rc || (st.r <= rc && st.pr < 0.0)) {
      const ChartOut co = chart_pass(mdl, st, rc, opt.s_end, false);
      st = co.st;
      if (on_sample) on_sample(st);
      if (co.ended_inside) break;
      continue;
    }
    if (compact && (rmax - st.r < rc || (rmax - st.r <= rc && st.pr > 0.0))) {
      const ChartOut co = chart_pass(mdl, st, rc, opt.s_end, true);
      st = co.st;
      if (on_sample) on_sample(st);
      if (co.ended_inside) break;
      continue;
    }
    if (!compact && st.r >= rmax) {
      res.domain_exit = true;
      break;
    }

    // clip so stages stay inside (0.4 rc, rmax - 0.4 rc)
    double hmax = opt.s_end - st.s;
    if (st.pr < 0.0) {
      const double room = st.r - 0.45 * rc;
      if (room > 0.0) hmax = std::min(hmax, std::max(room / (-st.pr), 1e-12 * scale));
    }
    if (compact && st.pr > 0.0) {
      const double room = (rmax - 0.45 * rc) - st.r;
      if (room > 0.0) hmax = std::min(hmax, std::max(room / st.pr, 1e-12 * scale));
    }
    if (!compact) {
      // stay within the tabulated domain
      if (st.pr > 0.0) {
        const double room = rmax - st.r;
        hmax = std::min(hmax, std::max(room / st.pr, 1e-12 * scale) * 1.0000001);
      }
    }
    h = std::min(h, hmax);
    if (h <= 1e-14 * scale) h = 1e-14 * scale;

    const Y4 y0{st.r, st.pr, st.th, st.pth};
    const Y4 k1 = rhs(mdl, y0);
    const StepOut so = dp_step(mdl, y0, k1, h, tol, scale);
    if (so.bad || so.err > 1.0) {
      h *= so.bad ? 0.25 : std::max(0.2, 0.9 * std::pow(so.err, -0.2));
      if (++consecutive_rejects > 200)
        throw not_converged("geodesic integrator stalled (repeated step rejections)");
      continue;
    }
    consecutive_rejects = 0;

    GeoState nxt;
    nxt.s = st.s + h;
    nxt.r = so.y[0];
    nxt.pr = so.y[1];
    nxt.th = so.y[2];
    nxt.pth = so.y[3];

    bool halt = false;
    if (!levels.empty()) {
      const GeoState after = fire_crossings(st, nxt, halt);
      st = after;
      if (on_sample) on_sample(st);
      if (halt) {
        res.halted = true;
        break;
      }
      // if we stopped at a crossing short of the full step, continue from there
    } else {
      st = nxt;
      if (on_sample) on_sample(st);
    }

    if (opt.convex_early_stop && st.r > opt.top_level && st.pr > 0.0) {
      res.halted = true;
      break;
    }

    const double grow = (so.err > 1e-30) ? 0.9 * std::pow(so.err, -0.2) : 6.0;
    h *= std::clamp(grow, 0.2, 6.0);
    h = std::min(h, 0.2 * scale + 0.05 * std::max(st.r, scale));
  }

  res.final = st;
  return res;
}

}  // namespace detail

GeodesicState make_state(const ProfileSurface& surf, SurfacePoint at, double beta) {
  const auto& mdl = detail::model_of(surf);
  GeodesicState st;
  st.point = at;
  const double m = mdl.m(at.r);
  double cb = std::cos(beta), sb = std::sin(beta);
  if (beta == num::pi || beta == -num::pi) {
    cb = -1.0;
    sb = 0.0;  // exact meridians must stay meridians
  } else if (beta == 0.0) {
    cb = 1.0;
    sb = 0.0;
  }
  st.r_dot = cb;
  if (m > 0.0) {
    st.theta_dot = sb / m;
    st.nu = m * sb;
  } else {
    st.theta_dot = 0.0;
    st.nu = 0.0;
  }
  return st;
}

double unit_speed_defect(const ProfileSurface& surf, const GeodesicState& st) {
  const double m = detail::model_of(surf).m(st.point.r);
  return std::fabs(st.r_dot * st.r_dot + m * m * st.theta_dot * st.theta_dot - 1.0);
}

GeodesicPath integrate_geodesic(const ProfileSurface& surf, const GeodesicState& init,
                                double length, double tol) {
  if (!(length > 0.0)) throw std::domain_error("geodesic length must be positive");
  if (unit_speed_defect(surf, init) > 1e-8)
    throw std::domain_error("initial state is not unit speed");
  const auto& mdl = detail::model_of(surf);

  detail::GeoState g0;
  g0.r = init.point.r;
  g0.pr = init.r_dot;
  g0.th = init.point.theta;
  g0.pth = init.theta_dot;

  GeodesicPath path;
  path.initial = init;
  const double nu0 = init.nu;

  detail::WalkOptions opt;
  opt.tol = tol;
  opt.s_end = length;

  double max_nu_drift = 0.0, max_speed_drift = 0.0;
  auto record = [&](const detail::GeoState& st) {
    PathSample ps;
    ps.s = st.s;
    ps.point = SurfacePoint{st.r, st.th};
    ps.r_dot = st.pr;
    ps.theta_dot = st.pth;
    path.samples.push_back(ps);
    double m, mp;
    mdl.eval(st.r, m, mp);
    max_nu_drift = std::max(max_nu_drift, std::fabs(m * m * st.pth - nu0));
    max_speed_drift =
        std::max(max_speed_drift, std::fabs(st.pr * st.pr + m * m * st.pth * st.pth - 1.0));
  };
  record(g0);

  const detail::WalkResult res = detail::walk_geodesic(mdl, g0, opt, {}, record);
  if (res.domain_exit)
    throw domain_exit("geodesic left the tabulated domain of " + surf.describe());

  path.length = res.final.s;
  path.winding =
      static_cast<int>(std::llround((res.final.th - init.point.theta) / (2.0 * num::pi)));
  path.clairaut_drift = max_nu_drift;
  path.unit_speed_drift = max_speed_drift;
  return path;
}

double tangent_angle(const ProfileSurface& surf, SurfacePoint at, Velocity v1, Velocity v2) {
  const double m = detail::model_of(surf).m(at.r);
  const double n1 = std::sqrt(v1.r_dot * v1.r_dot + m * m * v1.theta_dot * v1.theta_dot);
  const double n2 = std::sqrt(v2.r_dot * v2.r_dot + m * m * v2.theta_dot * v2.theta_dot);
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw std::domain_error("zero velocity has no direction");
  const double g = v1.r_dot * v2.r_dot + m * m * v1.theta_dot * v2.theta_dot;
  return std::acos(std::clamp(g / (n1 * n2), -1.0, 1.0));
}

}  // namespace obtuselab
