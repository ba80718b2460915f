#include <algorithm>
#include <cmath>

#include "obtuselab/invariants.hpp"
#include "obtuselab/numerics.hpp"

namespace obtuselab {

using num::pi;

namespace {

std::vector<double> resolve_levels(const Space& space, const ComparisonQuery& query,
                                   double d_pq) {
  if (!query.far_radii.empty()) return query.far_radii;
  std::vector<double> lv = space.default_far_levels();
  if (!lv.empty()) return lv;
  // pair-relative ladder for exact-model spaces
  return {1e3 * d_pq, 1e4 * d_pq, 1e5 * d_pq, 1e6 * d_pq};
}

InvariantEstimate finish_pair(const std::vector<double>& raw_max_angles) {
  InvariantEstimate est;
  est.ladder.reserve(raw_max_angles.size());
  for (const double a : raw_max_angles)
    est.ladder.push_back(std::clamp(a - 0.5 * pi, -0.5 * pi, 0.5 * pi));
  est.monotone = num::is_nondecreasing(est.ladder, 1e-9);
  est.value = std::clamp(num::extrapolate_ladder(est.ladder), -0.5 * pi, 0.5 * pi);
  const size_t n = est.ladder.size();
  est.uncertainty = n >= 2 ? 0.5 * std::fabs(est.ladder[n - 1] - est.ladder[n - 2]) : 0.0;
  return est;
}

InvariantEstimate finish_population(const std::vector<double>& per_rung_values) {
  InvariantEstimate est;
  est.ladder = per_rung_values;
  est.monotone = num::is_nondecreasing(est.ladder, 1e-9);
  est.value = est.ladder.empty() ? 0.0 : est.ladder.back();
  const size_t n = est.ladder.size();
  est.uncertainty = n >= 2 ? 0.5 * std::fabs(est.ladder[n - 1] - est.ladder[n - 2]) : 0.0;
  return est;
}

// Witness integrand at one far sample: the larger of the two pair angles.
struct WitnessEval {
  const Space* space;
  ComparisonQuery query;
  double d_pq = 0.0;
  bool angle_variant = false;
  MinimalDirections dirs;  // angle variant only

  double comparison(const FarProbe& at_p, const FarProbe& at_q) const {
    double best = 0.0;
    // angle at p (witness vs q) and at q (witness vs p)
    best = std::max(best, comparison_angle_at(query.kappa, d_pq, at_p.distance,
                                              at_q.distance));
    best = std::max(best, comparison_angle_at(query.kappa, d_pq, at_q.distance,
                                              at_p.distance));
    return best;
  }

  double angle(const FarProbe& at_p, const FarProbe& at_q) const {
    double gp = pi, gq = pi;
    for (const double d : dirs.at_p) gp = std::min(gp, num::direction_gap(d, at_p.dir_at_base));
    for (const double d : dirs.at_q) gq = std::min(gq, num::direction_gap(d, at_q.dir_at_base));
    return std::max(gp, gq);
  }

  double operator()(const FarProbe& at_p, const FarProbe& at_q) const {
    return angle_variant ? angle(at_p, at_q) : comparison(at_p, at_q);
  }
};

InvariantEstimate pair_obtuse_impl(const Space& space, const ComparisonQuery& query,
                                   bool angle_variant) {
  if (angle_variant && !space.has_angles())
    throw capability_error("the angle estimator needs the direction capability of " +
                           space.describe());
  const double d_pq = space.distance(query.p, query.q);
  if (!(d_pq > 0.0)) throw std::domain_error("pair points must be distinct");
  if (query.samples_per_radius < 1)
    throw std::domain_error("samples_per_radius must be at least 1");

  WitnessEval eval;
  eval.space = &space;
  eval.query = query;
  eval.d_pq = d_pq;
  eval.angle_variant = angle_variant;
  if (angle_variant) eval.dirs = space.minimal_directions(query.p, query.q);

  const std::vector<double> levels = resolve_levels(space, query, d_pq);
  const auto probes_p =
      space.far_probes(query.p, levels, query.samples_per_radius, angle_variant);
  const auto probes_q =
      space.far_probes(query.q, levels, query.samples_per_radius, angle_variant);

  std::vector<double> rung_max;
  for (size_t li = 0; li < levels.size(); ++li) {
    double best = 0.0;
    int best_t = -1;
    const auto& pp = probes_p[li];
    const auto& pq = probes_q[li];
    for (size_t t = 0; t < pp.size() && t < pq.size(); ++t) {
      if (!pp[t].found || !pq[t].found) continue;
      const double v = eval(pp[t], pq[t]);
      if (v > best) {
        best = v;
        best_t = static_cast<int>(t);
      }
    }
    if (space.exact_far() && best_t >= 0) {
      // local refinement of the witness position
      const double w = 1.0 / query.samples_per_radius;
      const double t0 = best_t * w;
      auto neg = [&](double pos) {
        const FarProbe a = space.far_probe_at(query.p, levels[li], pos, angle_variant);
        const FarProbe b = space.far_probe_at(query.q, levels[li], pos, angle_variant);
        return -eval(a, b);
      };
      const double pos = num::brent_min(neg, t0 - w, t0 + w, 1e-12, 120);
      best = std::max(best, -neg(pos));
    }
    rung_max.push_back(best);
  }
  return finish_pair(rung_max);
}

std::vector<double> default_separations(const Space& space) {
  const double s = space.scale();
  return {0.1 * s, 0.03 * s, 0.01 * s};
}

}  // namespace

InvariantEstimate pair_obtuse_comparison(const Space& space, const ComparisonQuery& query) {
  return pair_obtuse_impl(space, query, false);
}

InvariantEstimate pair_obtuse_angle(const Space& space, const ComparisonQuery& query) {
  return pair_obtuse_impl(space, query, true);
}

InvariantEstimate obtuse_from_infinity(const Space& space, const ObtuseConfig& cfg) {
  if (space.compact())
    throw capability_error("constants from infinity need a noncompact space");
  const std::vector<double> seps =
      cfg.pair_separations.empty() ? default_separations(space) : cfg.pair_separations;

  std::vector<double> per_sep;
  for (const double sep : seps) {
    const auto pairs = space.pair_samples(sep, cfg.pairs_per_separation, cfg.seed);
    if (pairs.empty()) throw not_converged("no admissible pairs at separation");
    double inf_val = std::numeric_limits<double>::infinity();
    for (const PairSample& pr : pairs) {
      ComparisonQuery q;
      q.p = pr.p;
      q.q = pr.q;
      q.kappa = cfg.kappa;
      q.far_radii = cfg.far_radii;
      q.samples_per_radius = cfg.samples_per_radius;
      q.seed = cfg.seed;
      const InvariantEstimate est = cfg.variant == ObtuseVariant::angle
                                        ? pair_obtuse_angle(space, q)
                                        : pair_obtuse_comparison(space, q);
      inf_val = std::min(inf_val, est.value);
    }
    per_sep.push_back(inf_val);
  }
  return finish_population(per_sep);
}

InvariantEstimate obtuse_compact(const Space& space, const ObtuseConfig& cfg) {
  if (!space.compact()) throw capability_error("the compact constant needs a compact space");
  const double R = space.radius();
  const std::vector<double> seps =
      cfg.pair_separations.empty() ? default_separations(space) : cfg.pair_separations;
  const std::vector<double> levels = space.region_levels(16);
  const int count = std::max(24, cfg.samples_per_radius / 10);

  std::vector<double> per_sep;
  for (const double sep : seps) {
    const auto pairs = space.pair_samples(sep, cfg.pairs_per_separation, cfg.seed);
    if (pairs.empty()) throw not_converged("no admissible pairs at separation");
    double inf_val = std::numeric_limits<double>::infinity();
    for (const PairSample& pr : pairs) {
      const double d_pq = space.distance(pr.p, pr.q);
      if (!(d_pq > 0.0)) continue;
      const bool angles = cfg.variant == ObtuseVariant::angle;
      MinimalDirections dirs;
      if (angles) dirs = space.minimal_directions(pr.p, pr.q);
      double sup = 0.0;

      auto eval_side = [&](const std::vector<double>& side_dirs, double d_near,
                           double d_far_from_other, double dir_at_near) {
        if (angles) {
          double g = pi;
          for (const double d : side_dirs) g = std::min(g, num::direction_gap(d, dir_at_near));
          sup = std::max(sup, g);
        } else {
          sup = std::max(sup, comparison_angle_at(cfg.kappa, d_pq, d_near, d_far_from_other));
        }
      };

      const auto probes_p = space.far_probes(pr.p, levels, count, angles);
      const auto probes_q = space.far_probes(pr.q, levels, count, angles);
      for (size_t li = 0; li < levels.size(); ++li) {
        for (size_t t = 0; t < probes_p[li].size() && t < probes_q[li].size(); ++t) {
          const FarProbe& ap = probes_p[li][t];
          const FarProbe& aq = probes_q[li][t];
          if (!ap.found || !aq.found) continue;
          // far sets are the complements of B(p, R/2) and B(q, R/2)
          if (ap.distance >= 0.5 * R)
            eval_side(dirs.at_p, ap.distance, aq.distance, ap.dir_at_base);
          if (aq.distance >= 0.5 * R)
            eval_side(dirs.at_q, aq.distance, ap.distance, aq.dir_at_base);
        }
      }

      // collinear witnesses: continue the pair geodesic beyond each endpoint
      const std::vector<double> ext_d{0.55 * R, 0.7 * R, 0.85 * R};
      for (int side = 0; side < 2; ++side) {
        const SpacePoint& near = side == 0 ? pr.p : pr.q;
        const SpacePoint& other = side == 0 ? pr.q : pr.p;
        for (const SpacePoint& x : space.extension_witnesses(near, other, ext_d)) {
          const double d_near = space.distance(near, x);
          if (d_near < 0.5 * R) continue;
          const double d_other = space.distance(other, x);
          if (angles) {
            const MinimalDirections to_x = space.minimal_directions(near, x);
            const std::vector<double>& side_dirs = side == 0 ? dirs.at_p : dirs.at_q;
            double g = pi;
            for (const double a : side_dirs)
              for (const double b : to_x.at_p) g = std::min(g, num::direction_gap(a, b));
            sup = std::max(sup, g);
          } else {
            sup = std::max(sup, comparison_angle_at(cfg.kappa, d_pq, d_near, d_other));
          }
        }
      }
      inf_val = std::min(inf_val, std::clamp(sup - 0.5 * pi, -0.5 * pi, 0.5 * pi));
    }
    per_sep.push_back(inf_val);
  }
  return finish_population(per_sep);
}

InvariantEstimate kappa_obtuse_infinity(const Space& space, Curvature kappa,
                                        const ObtuseConfig& cfg) {
  if (space.compact())
    throw capability_error("constants from infinity need a noncompact space");
  const auto pairs = space.deep_pairs(cfg.seed);
  if (pairs.empty()) throw not_converged("empty pair population");
  InvariantEstimate best;
  best.value = std::numeric_limits<double>::infinity();
  for (const PairSample& pr : pairs) {
    ComparisonQuery q;
    q.p = pr.p;
    q.q = pr.q;
    q.kappa = kappa;
    q.far_radii = cfg.far_radii;
    q.samples_per_radius = cfg.samples_per_radius;
    q.seed = cfg.seed;
    const InvariantEstimate est = pair_obtuse_comparison(space, q);
    if (est.value < best.value) best = est;
  }
  return best;
}

GrowthReport growth_report(const Space& space) { return space.growth(); }

}  // namespace obtuselab
