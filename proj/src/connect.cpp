#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "obtuselab/numerics.hpp"
#include "obtuselab/revsurface.hpp"
#include "geodesic_core.hpp"

namespace obtuselab {

using num::pi;

namespace {

using detail::GeoState;
using detail::model_of;
using detail::ProfileModel;
using detail::WalkOptions;

struct Crossing {
  double s = 0.0;
  double th = 0.0;  // unwrapped, relative to the base meridian
  double pr = 0.0;
  double pth = 0.0;
};

// All crossings of the given r-levels along the shot at direction beta,
// grouped per level, s-ordered. Stops at s_cap, or once r has passed the
// top level outgoing when the profile makes r convex along geodesics.
struct ShotTrace {
  std::vector<std::vector<Crossing>> per_level;
};

bool r_is_convex(const ProfileModel& mdl) {
  switch (mdl.family()) {
    case ProfileFamily::plane:
    case ProfileFamily::hyperboloid:
    case ProfileFamily::paraboloid:
      return true;  // m' > 0 everywhere, so r'' = m m' theta'^2 >= 0
    default:
      return false;
  }
}

ShotTrace shoot(const ProfileModel& mdl, double r0, double beta,
                const std::vector<double>& levels, double s_cap, double tol,
                int stop_level = -1, int stop_index = -1) {
  ShotTrace trace;
  trace.per_level.resize(levels.size());

  GeoState st;
  st.r = r0;
  double cb = std::cos(beta), sb = std::sin(beta);
  if (beta == pi || beta == -pi) {
    cb = -1.0;
    sb = 0.0;  // exact meridians must stay meridians
  } else if (beta == 0.0) {
    cb = 1.0;
    sb = 0.0;
  }
  st.pr = cb;
  const double m0 = mdl.m(r0);
  st.pth = (m0 > 0.0) ? sb / m0 : 0.0;

  WalkOptions opt;
  opt.tol = tol;
  opt.s_end = s_cap;
  opt.levels = &levels;
  if (r_is_convex(mdl) && !levels.empty()) {
    opt.convex_early_stop = true;
    opt.top_level = std::max(levels.back(), r0) * 1.0000001;
  }

  detail::walk_geodesic(
      mdl, st, opt,
      [&](int li, const GeoState& g) {
        trace.per_level[li].push_back(Crossing{g.s, g.th, g.pr, g.pth});
        if (li == stop_level &&
            static_cast<int>(trace.per_level[li].size()) > stop_index)
          return false;
        return true;
      },
      {});
  return trace;
}

struct Hit {
  double beta = 0.0;
  double s = 0.0;
  double pr = 0.0;
  double pth = 0.0;
  double residual = 0.0;  // |theta - target|
  int winding = 0;
};

// Secant refinement of theta_cross(beta) = target on crossing index j of a
// single level, starting from a bracketing pair of scan shots. The scan
// runs at a loose tolerance, so both endpoints are re-shot accurately
// first; a bracket that does not survive the re-evaluation belongs to a
// neighbouring cell and is dropped.
std::optional<Hit> refine_hit(const ProfileModel& mdl, double r0, double level, int j,
                              double beta_a, double th_a, double beta_b, double th_b,
                              double target, double s_cap, double tol, double th_tol,
                              int winding) {
  const std::vector<double> lv{level};
  double fa = th_a - target, fb = th_b - target;
  double best_beta = beta_a, best_f = std::fabs(fa);
  Crossing best_cr{};
  bool have = false;

  auto accurate = [&](double beta, double& f) {
    const ShotTrace tr = shoot(mdl, r0, beta, lv, s_cap, tol, 0, j);
    if (static_cast<int>(tr.per_level[0].size()) <= j) return false;
    const Crossing cr = tr.per_level[0][j];
    f = cr.th - target;
    if (std::fabs(f) < best_f) {
      best_f = std::fabs(f);
      best_beta = beta;
      best_cr = cr;
      have = true;
    }
    return true;
  };
  if (!accurate(beta_a, fa) || !accurate(beta_b, fb)) return std::nullopt;
  if (best_f >= th_tol && (fa > 0) == (fb > 0)) {
    // scan noise can push a root just across a grid point; extend one cell
    // toward the small side before giving up
    if (std::min(std::fabs(fa), std::fabs(fb)) > 1e-4) return std::nullopt;
    const double width = beta_b - beta_a;
    if (std::fabs(fa) < std::fabs(fb)) {
      const double beta_c = beta_a - width;
      double fc;
      if (!accurate(beta_c, fc) || (fc > 0) == (fa > 0)) return std::nullopt;
      beta_b = beta_a;
      fb = fa;
      beta_a = beta_c;
      fa = fc;
    } else {
      const double beta_c = beta_b + width;
      double fc;
      if (!accurate(beta_c, fc) || (fc > 0) == (fb > 0)) return std::nullopt;
      beta_a = beta_b;
      fa = fb;
      beta_b = beta_c;
      fb = fc;
    }
  }

  for (int it = 0; it < 48 && best_f >= th_tol; ++it) {
    double beta_m;
    if (std::fabs(fb - fa) > 1e-300) {
      beta_m = beta_a - fa * (beta_b - beta_a) / (fb - fa);  // secant
      const double lo = std::min(beta_a, beta_b), hi = std::max(beta_a, beta_b);
      if (!(beta_m > lo && beta_m < hi)) beta_m = 0.5 * (beta_a + beta_b);
    } else {
      beta_m = 0.5 * (beta_a + beta_b);
    }
    const ShotTrace tr = shoot(mdl, r0, beta_m, lv, s_cap, tol, 0, j);
    if (static_cast<int>(tr.per_level[0].size()) <= j) {
      // crossing vanished: shrink toward side a (which had it)
      beta_b = beta_m;
      fb = fa > 0 ? 1e9 : -1e9;
      continue;
    }
    const Crossing cr = tr.per_level[0][j];
    const double fm = cr.th - target;
    if (std::fabs(fm) < best_f) {
      best_f = std::fabs(fm);
      best_beta = beta_m;
      best_cr = cr;
      have = true;
    }
    if (std::fabs(fm) < th_tol) break;
    if ((fm > 0) == (fa > 0)) {
      beta_a = beta_m;
      fa = fm;
    } else {
      beta_b = beta_m;
      fb = fm;
    }
    if (std::fabs(beta_b - beta_a) < 1e-15) break;
  }
  if (!have || best_f > th_tol) return std::nullopt;
  Hit h;
  h.beta = best_beta;
  h.s = best_cr.s;
  h.pr = best_cr.pr;
  h.pth = best_cr.pth;
  h.residual = best_f;
  h.winding = winding;
  return h;
}

// One-sided refinement for roots hiding next to a tangency birth, where
// adjacent scan shots disagree on the crossing count and no sign bracket
// exists. Free secant in beta, retreating toward the side that still has
// the crossing whenever a trial loses it.
std::optional<Hit> refine_near_miss(const ProfileModel& mdl, double r0, double level, int j,
                                    double beta0, double th0, double cell, double target,
                                    double s_cap, double tol, double th_tol, int winding) {
  const std::vector<double> lv{level};
  double ba = beta0, fa = th0 - target;
  double bb = beta0 + cell, fb;
  auto eval = [&](double beta, double& f) {
    const ShotTrace tr = shoot(mdl, r0, beta, lv, s_cap, tol, 0, j);
    if (static_cast<int>(tr.per_level[0].size()) <= j) return false;
    f = tr.per_level[0][j].th - target;
    return true;
  };
  if (!eval(ba, fa)) return std::nullopt;
  if (!eval(bb, fb)) {
    bb = beta0 - cell;
    if (!eval(bb, fb)) return std::nullopt;
  }
  double best_beta = ba;
  double best_f = std::fabs(fa);
  for (int it = 0; it < 40 && best_f >= th_tol; ++it) {
    if (std::fabs(fb - fa) < 1e-300) break;
    double bm = bb - fb * (bb - ba) / (fb - fa);
    bm = std::clamp(bm, beta0 - 3.0 * cell, beta0 + 3.0 * cell);
    double fm;
    bool ok = eval(bm, fm);
    int retreat = 0;
    while (!ok && retreat < 12) {
      bm = 0.5 * (bm + (std::fabs(fa) < std::fabs(fb) ? ba : bb));
      ok = eval(bm, fm);
      ++retreat;
    }
    if (!ok) break;
    ba = bb;
    fa = fb;
    bb = bm;
    fb = fm;
    if (std::fabs(fm) < best_f) {
      best_f = std::fabs(fm);
      best_beta = bm;
    }
  }
  if (best_f >= th_tol) return std::nullopt;
  const ShotTrace tr = shoot(mdl, r0, best_beta, lv, s_cap, tol, 0, j);
  if (static_cast<int>(tr.per_level[0].size()) <= j) return std::nullopt;
  const Crossing cr = tr.per_level[0][j];
  Hit h;
  h.beta = best_beta;
  h.s = cr.s;
  h.pr = cr.pr;
  h.pth = cr.pth;
  h.residual = std::fabs(cr.th - target);
  h.winding = winding;
  return h;
}

std::vector<double> shot_grid(double resolution) {
  const int n = std::max(16, static_cast<int>(std::ceil(2.0 * pi / resolution)));
  std::vector<double> betas;
  betas.reserve(n + 2);
  for (int i = 0; i < n; ++i) betas.push_back(-pi + (i + 0.5) * 2.0 * pi / n);
  betas.push_back(0.0);
  betas.push_back(pi);
  std::sort(betas.begin(), betas.end());
  return betas;
}

double auto_cap(const ProfileModel& mdl, double r_p, double r_q) {
  if (mdl.compact()) return 1.15 * mdl.r_max();
  return 1.02 * (r_p + r_q) + 4.0 * detail::chart_radius(mdl) + 1e-9 * mdl.scale();
}

}  // namespace

Connection connect(const ProfileSurface& surf, SurfacePoint p, SurfacePoint q,
                   const ConnectOptions& opts) {
  const ProfileModel& mdl = model_of(surf);
  const double scale = mdl.scale();
  const double rc = detail::chart_radius(mdl);

  const double dtheta = num::wrap_period(q.theta - p.theta, 2.0 * pi);
  if (p.r == q.r && (dtheta == 0.0 || p.r < rc))
    throw std::domain_error("connect requires distinct points");

  Connection out;

  // vertex endpoints: minimal geodesics are meridians
  if (q.r < 2.0 * rc || p.r < 2.0 * rc) {
    const bool p_is_vertex = p.r < 2.0 * rc;
    const double d = p_is_vertex ? q.r : p.r;
    ConnectSolution sol;
    sol.length = d;
    sol.beta_p = p_is_vertex ? q.theta : pi;  // from the vertex: the meridian of q
    sol.beta_q_in = p_is_vertex ? 0.0 : pi;
    sol.winding = 0;
    out.distance = d;
    out.solutions.push_back(sol);
    return out;
  }

  const double hit_tol =
      opts.hit_tol > 0.0 ? opts.hit_tol : 1e-9 * scale * (1.0 + (p.r + q.r) / scale);
  const double m_q = mdl.m(q.r);
  const double th_tol = hit_tol / std::max(m_q, 1e-300);
  const double cap = opts.max_length > 0.0 ? opts.max_length : auto_cap(mdl, p.r, q.r);
  const std::vector<double> levels{q.r};

  const std::vector<double> betas = shot_grid(opts.scan_resolution);
  std::vector<ShotTrace> traces;
  traces.reserve(betas.size());
  for (const double b : betas) traces.push_back(shoot(mdl, p.r, b, levels, cap, opts.scan_tol));

  std::vector<double> targets;
  std::vector<int> target_winding;
  for (int k = -opts.winding_bound; k <= opts.winding_bound; ++k) {
    targets.push_back(dtheta + 2.0 * pi * k);
    target_winding.push_back(k);
  }

  std::vector<Hit> hits;
  double best_res = std::numeric_limits<double>::infinity();

  auto consider_pair = [&](size_t ia, size_t ib, double beta_shift) {
    const auto& ca = traces[ia].per_level[0];
    const auto& cb = traces[ib].per_level[0];
    const size_t nj = std::min(ca.size(), cb.size());
    for (size_t j = 0; j < nj; ++j) {
      const double tha = ca[j].th, thb = cb[j].th;
      // index matching is only unreliable across a tangency birth, where the
      // crossing counts differ; equal counts pair up by s-order
      if (ca.size() != cb.size() && std::fabs(tha - thb) > 1.5) continue;
      for (size_t ti = 0; ti < targets.size(); ++ti) {
        const double tgt = targets[ti];
        best_res = std::min({best_res, std::fabs(tha - tgt), std::fabs(thb - tgt)});
        if ((tha - tgt) * (thb - tgt) > 0.0) continue;
        auto hit = refine_hit(mdl, p.r, q.r, static_cast<int>(j), betas[ia], tha,
                              betas[ib] + beta_shift, thb, tgt, cap, opts.tol, th_tol,
                              target_winding[ti]);
        if (hit) hits.push_back(*hit);
      }
    }
  };

  for (size_t i = 0; i + 1 < betas.size(); ++i) consider_pair(i, i + 1, 0.0);
  consider_pair(betas.size() - 1, 0, 2.0 * pi);

  // direct grid hits (exact meridian solutions land here)
  for (size_t i = 0; i < betas.size(); ++i) {
    const auto& cl = traces[i].per_level[0];
    for (size_t j = 0; j < cl.size(); ++j) {
      for (size_t ti = 0; ti < targets.size(); ++ti) {
        if (std::fabs(cl[j].th - targets[ti]) < th_tol) {
          Hit h;
          h.beta = betas[i];
          h.s = cl[j].s;
          h.pr = cl[j].pr;
          h.pth = cl[j].pth;
          h.residual = std::fabs(cl[j].th - targets[ti]);
          h.winding = target_winding[ti];
          hits.push_back(h);
        }
      }
    }
  }

  // rescue roots left unbracketed by tangency births in the crossing count:
  // refine the best near-miss crossing per target that sits away from every
  // hit already found
  for (size_t ti = 0; ti < targets.size(); ++ti) {
    double best_gap = 0.2;
    size_t best_i = 0;
    int best_j = -1;
    for (size_t i = 0; i < betas.size(); ++i) {
      const auto& cl = traces[i].per_level[0];
      for (size_t j = 0; j < cl.size(); ++j) {
        const double gap = std::fabs(cl[j].th - targets[ti]);
        if (gap >= best_gap) continue;
        bool near_existing = false;
        for (const Hit& h : hits)
          near_existing = near_existing ||
                          std::fabs(num::wrap_pi(h.beta - betas[i])) < 2.5 * opts.scan_resolution;
        if (near_existing) continue;
        best_gap = gap;
        best_i = i;
        best_j = static_cast<int>(j);
      }
    }
    if (best_j < 0) continue;
    auto hit = refine_near_miss(mdl, p.r, q.r, best_j, betas[best_i],
                                traces[best_i].per_level[0][best_j].th,
                                opts.scan_resolution, targets[ti], cap, opts.tol, th_tol,
                                target_winding[ti]);
    if (hit) hits.push_back(*hit);
  }

  if (hits.empty())
    throw not_converged("connect: no shooting solution (best angular residual " +
                        std::to_string(best_res) + ")");

  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.s < b.s; });
  const double dist = hits.front().s;
  const double band = std::max(opts.min_tol_factor * dist, 1e-12 * scale);

  std::vector<Hit> kept;
  for (const Hit& h : hits) {
    if (h.s > dist + band) break;
    bool dup = false;
    for (const Hit& k : kept) {
      if (std::fabs(num::wrap_pi(h.beta - k.beta)) < 1e-6) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(h);
  }

  out.distance = dist;
  out.degenerate = kept.size() > 12;
  out.best_residual = hits.front().residual;
  size_t stride = out.degenerate ? (kept.size() + 7) / 8 : 1;
  for (size_t i = 0; i < kept.size(); i += stride) {
    const Hit& h = kept[i];
    ConnectSolution sol;
    sol.beta_p = h.beta;
    sol.length = h.s;
    sol.winding = h.winding;
    sol.beta_q_in = std::atan2(m_q * h.pth, h.pr);
    out.solutions.push_back(sol);
  }
  return out;
}

std::vector<FarField> far_field(const ProfileSurface& surf, SurfacePoint base,
                                const std::vector<double>& levels, int samples_per_level,
                                const ConnectOptions& opts) {
  const ProfileModel& mdl = model_of(surf);
  const double rc = detail::chart_radius(mdl);
  if (base.r < 2.0 * rc) throw std::domain_error("far_field base too close to the vertex");
  std::vector<double> lv = levels;
  std::sort(lv.begin(), lv.end());
  for (const double L : lv)
    if (L < 2.0 * rc) throw std::domain_error("far_field level below the chart radius");

  const double cap =
      opts.max_length > 0.0 ? opts.max_length : auto_cap(mdl, base.r, lv.back());
  const std::vector<double> betas = shot_grid(opts.scan_resolution);
  std::vector<ShotTrace> traces;
  traces.reserve(betas.size());
  for (const double b : betas) traces.push_back(shoot(mdl, base.r, b, lv, cap, opts.scan_tol));

  std::vector<FarField> out(lv.size());
  for (size_t li = 0; li < lv.size(); ++li) {
    out[li].level = lv[li];
    out[li].samples.resize(samples_per_level);
    const double m_L = mdl.m(lv[li]);
    const double th_tol =
        (opts.hit_tol > 0.0 ? opts.hit_tol : 1e-9 * mdl.scale() * (1.0 + lv[li] / mdl.scale())) /
        std::max(m_L, 1e-300);

    for (int t = 0; t < samples_per_level; ++t) {
      const double phi_abs = 2.0 * pi * t / samples_per_level;
      out[li].samples[t].phi = phi_abs;
      const double dphi = num::wrap_period(phi_abs - base.theta, 2.0 * pi);

      Hit best;
      best.s = std::numeric_limits<double>::infinity();
      bool found = false;

      auto try_bracket = [&](size_t ia, size_t ib, double shift) {
        const auto& ca = traces[ia].per_level[li];
        const auto& cb = traces[ib].per_level[li];
        const size_t nj = std::min(ca.size(), cb.size());
        for (size_t j = 0; j < nj; ++j) {
          const double tha = ca[j].th, thb = cb[j].th;
          if (ca.size() != cb.size() && std::fabs(tha - thb) > 1.5) continue;
          for (int k = -opts.winding_bound; k <= opts.winding_bound; ++k) {
            const double tgt = dphi + 2.0 * pi * k;
            if ((tha - tgt) * (thb - tgt) > 0.0) continue;
            if (std::min(ca[j].s, cb[j].s) > best.s + 1e-3 * (lv[li] + mdl.scale())) continue;
            auto hit = refine_hit(mdl, base.r, lv[li], static_cast<int>(j), betas[ia], tha,
                                  betas[ib] + shift, thb, tgt, cap, opts.tol, th_tol, k);
            if (hit && hit->s < best.s) {
              best = *hit;
              found = true;
            }
          }
        }
      };
      for (size_t i = 0; i + 1 < betas.size(); ++i) try_bracket(i, i + 1, 0.0);
      try_bracket(betas.size() - 1, 0, 2.0 * pi);

      if (found) {
        out[li].samples[t].distance = best.s;
        out[li].samples[t].beta_at_base = best.beta;
        out[li].samples[t].found = true;
      }
    }
  }
  return out;
}

}  // namespace obtuselab
