#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "obtuselab/invariants.hpp"
#include "obtuselab/numerics.hpp"

namespace obtuselab {

using num::pi;

FarProbe Space::far_probe_at(SpacePoint, double, double, bool) const {
  throw capability_error(describe() + " does not support pointwise far probes");
}

std::vector<double> Space::region_levels(int) const {
  throw capability_error(describe() + " has no compact region sampling");
}

double Space::radius() const {
  throw capability_error(describe() + " has no radius (noncompact)");
}

double Space::diameter() const {
  throw capability_error(describe() + " has no diameter (noncompact)");
}

std::vector<SpacePoint> Space::extension_witnesses(SpacePoint, SpacePoint,
                                                   const std::vector<double>&) const {
  return {};
}

namespace {

// ---------------------------------------------------------------- surfaces

class SurfaceSpace final : public Space {
 public:
  explicit SurfaceSpace(ProfileSurface surf) : surf_(std::move(surf)) {}

  SpaceKind kind() const override { return SpaceKind::rev_surface; }
  std::string describe() const override { return surf_.describe(); }
  bool compact() const override { return surf_.compact(); }
  bool has_angles() const override { return true; }
  double scale() const override { return surf_.scale(); }

  double distance(SpacePoint a, SpacePoint b) const override {
    if (a.u == b.u && num::wrap_period(a.v - b.v, 2.0 * pi) == 0.0) return 0.0;
    return connect(surf_, to_point(a), to_point(b)).distance;
  }

  MinimalDirections minimal_directions(SpacePoint p, SpacePoint q) const override {
    const Connection conn = connect(surf_, to_point(p), to_point(q));
    MinimalDirections out;
    out.distance = conn.distance;
    for (const ConnectSolution& s : conn.solutions) {
      out.at_p.push_back(s.beta_p);
      out.at_q.push_back(num::wrap_pi(s.beta_q_in + pi));
    }
    return out;
  }

  std::vector<std::vector<FarProbe>> far_probes(SpacePoint base,
                                                const std::vector<double>& levels, int count,
                                                bool) const override {
    {
      std::lock_guard<std::mutex> lk(cache_mutex_);
      auto it = cache_.find(cache_key(base, levels, count));
      if (it != cache_.end()) return it->second;
    }
    const std::vector<FarField> fields = far_field(surf_, to_point(base), levels, count);
    std::vector<std::vector<FarProbe>> out(fields.size());
    for (size_t li = 0; li < fields.size(); ++li) {
      out[li].resize(fields[li].samples.size());
      for (size_t t = 0; t < fields[li].samples.size(); ++t) {
        const FarFieldSample& s = fields[li].samples[t];
        FarProbe& pr = out[li][t];
        pr.x = SpacePoint{fields[li].level, s.phi};
        pr.distance = s.distance;
        pr.dir_at_base = s.beta_at_base;
        pr.found = s.found;
      }
    }
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (cache_.size() > 128) cache_.clear();
    cache_[cache_key(base, levels, count)] = out;
    return out;
  }

  std::vector<double> default_far_levels() const override {
    const double s = surf_.scale();
    if (surf_.compact()) return region_levels(12);
    return {30.0 * s, 100.0 * s, 300.0 * s, 1000.0 * s};
  }

  std::vector<double> region_levels(int density) const override {
    if (!surf_.compact()) throw capability_error("region sampling needs a compact surface");
    std::vector<double> lv;
    const double rmax = surf_.r_max();
    for (int i = 0; i < density; ++i) lv.push_back(rmax * (i + 0.5) / density);
    return lv;
  }

  double radius() const override { return extents().radius; }
  double diameter() const override { return extents().diameter; }

  std::vector<PairSample> pair_samples(double separation, int count,
                                       std::uint64_t) const override {
    std::vector<PairSample> out;
    const int per_dir = std::max(1, count / 3);
    const std::vector<double> radii = base_radii(per_dir);
    for (const double r0 : radii) {
      const double m0 = surf_.m(r0);
      // radial, parallel and diagonal relative placements
      out.push_back({SpacePoint{r0, 0.0}, SpacePoint{r0 + separation, 0.0}});
      out.push_back({SpacePoint{r0, 0.0}, SpacePoint{r0, separation / m0}});
      const double h = separation / std::sqrt(2.0);
      out.push_back({SpacePoint{r0, 0.0}, SpacePoint{r0 + h, h / m0}});
    }
    return out;
  }

  std::vector<PairSample> deep_pairs(std::uint64_t seed) const override {
    std::vector<PairSample> out;
    const double s = surf_.scale();
    for (const double sep : {0.05 * s, 0.5 * s, 2.0 * s}) {
      auto pairs = pair_samples(sep, 9, seed);
      out.insert(out.end(), pairs.begin(), pairs.end());
    }
    return out;
  }

  std::vector<SpacePoint> extension_witnesses(
      SpacePoint p, SpacePoint q, const std::vector<double>& distances) const override {
    std::vector<SpacePoint> out;
    const Connection conn = connect(surf_, to_point(p), to_point(q));
    for (const ConnectSolution& sol : conn.solutions) {
      const double beta_away = num::wrap_pi(sol.beta_p + pi);
      const GeodesicState st = make_state(surf_, to_point(p), beta_away);
      for (const double d : distances) {
        if (!(d > 0.0)) continue;
        const GeodesicPath path = integrate_geodesic(surf_, st, d);
        const SurfacePoint end = path.samples.back().point;
        out.push_back(SpacePoint{end.r, num::wrap_period(end.theta, 2.0 * pi)});
      }
      if (out.size() >= 2 * distances.size()) break;  // two direction branches suffice
    }
    return out;
  }

  GrowthReport growth() const override {
    GrowthReport out;
    if (surf_.compact()) {
      const CompactExtents& ext = extents();
      out.normalized_volume = ext.normalized_volume;
      out.diameter = ext.diameter;
      out.radius = ext.radius;
      return out;
    }
    const AsymptoticProfile ap = asymptotic_profile(surf_);
    out.v_inf = ap.v_inf;
    out.ideal_boundary_length = ap.ideal_boundary_length;
    out.total_curvature = ap.total_curvature;
    out.total_curvature_quadrature = ap.total_curvature_quadrature;
    return out;
  }

 private:
  static SurfacePoint to_point(SpacePoint p) {
    return SurfacePoint{p.u, num::wrap_period(p.v, 2.0 * pi)};
  }
  std::vector<double> base_radii(int n) const {
    std::vector<double> out;
    const double s = surf_.scale();
    if (surf_.compact()) {
      const double rmax = surf_.r_max();
      for (int i = 0; i < n; ++i) out.push_back(rmax * (0.2 + 0.6 * (i + 0.5) / n));
    } else {
      const double lo = 0.75 * s, hi = 6.0 * s;
      for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, n == 1 ? 0.5 : double(i) / (n - 1)));
    }
    return out;
  }
  const CompactExtents& extents() const {
    std::call_once(extents_once_, [this] { extents_ = compact_extents(surf_); });
    return extents_;
  }
  static std::string cache_key(SpacePoint base, const std::vector<double>& levels, int count) {
    std::string k = std::to_string(base.u) + "|" + std::to_string(base.v) + "|" +
                    std::to_string(count);
    for (double L : levels) k += "|" + std::to_string(L);
    return k;
  }

  ProfileSurface surf_;
  mutable std::once_flag extents_once_;
  mutable CompactExtents extents_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::string, std::vector<std::vector<FarProbe>>> cache_;
};

// ------------------------------------------------------------------- cones

class ConeSpace final : public Space {
 public:
  explicit ConeSpace(FlatCone cone) : cone_(cone) {}

  SpaceKind kind() const override { return SpaceKind::flat_cone; }
  std::string describe() const override {
    return "flat_cone(length=" + std::to_string(cone_.link_length) + ")";
  }
  bool compact() const override { return false; }
  bool has_angles() const override { return true; }
  double scale() const override { return 1.0; }

  double distance(SpacePoint a, SpacePoint b) const override {
    return cone_distance(cone_, to_point(a), to_point(b));
  }

  MinimalDirections minimal_directions(SpacePoint p, SpacePoint q) const override {
    const ConeConnection conn = cone_connect(cone_, to_point(p), to_point(q));
    MinimalDirections out;
    out.distance = conn.distance;
    for (const ConeSolution& s : conn.solutions) {
      out.at_p.push_back(s.alpha_p);
      out.at_q.push_back(num::wrap_pi(s.alpha_q + pi));
    }
    return out;
  }

  std::vector<std::vector<FarProbe>> far_probes(SpacePoint base,
                                                const std::vector<double>& levels, int count,
                                                bool want_directions) const override {
    std::vector<std::vector<FarProbe>> out(levels.size());
    for (size_t li = 0; li < levels.size(); ++li) {
      out[li].resize(count);
      for (int t = 0; t < count; ++t)
        out[li][t] = far_probe_at(base, levels[li], double(t) / count, want_directions);
    }
    return out;
  }

  bool exact_far() const override { return true; }

  FarProbe far_probe_at(SpacePoint base, double level, double position,
                        bool want_directions) const override {
    const ConePoint b = to_point(base);
    const ConePoint x{level, num::wrap_period(position, 1.0) * cone_.link_length};
    FarProbe pr;
    pr.x = SpacePoint{x.rho, x.phi};
    pr.distance = cone_distance(cone_, b, x);
    pr.found = true;
    if (want_directions) pr.dir_at_base = cone_connect(cone_, b, x).solutions.front().alpha_p;
    return pr;
  }

  std::vector<double> default_far_levels() const override { return {}; }

  std::vector<PairSample> pair_samples(double separation, int count,
                                       std::uint64_t seed) const override {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<PairSample> out;
    for (int i = 0; i < count; ++i) {
      const double rho = 0.5 + 2.5 * unif(rng);
      const double phi = cone_.link_length * unif(rng);
      const double alpha = 2.0 * pi * unif(rng);
      // step off in the local chart
      const double qx = rho + separation * std::cos(alpha);
      const double qy = separation * std::sin(alpha);
      const double rho_q = std::hypot(qx, qy);
      const double dphi = std::atan2(qy, qx);
      out.push_back({SpacePoint{rho, phi},
                     SpacePoint{rho_q, num::wrap_period(phi + dphi, cone_.link_length)}});
    }
    return out;
  }

  std::vector<PairSample> deep_pairs(std::uint64_t seed) const override {
    std::vector<PairSample> out;
    for (const double sep : {0.3, 1.0, 3.0}) {
      auto pairs = pair_samples(sep, 10, seed + static_cast<std::uint64_t>(sep * 100));
      out.insert(out.end(), pairs.begin(), pairs.end());
    }
    return out;
  }

  GrowthReport growth() const override {
    // unrolling: area(B(apex, R)) = L R^2 / 2 exactly
    GrowthReport out;
    const double L = cone_.link_length;
    out.v_inf = 0.5 * L;
    out.ideal_boundary_length = L;
    out.total_curvature = 2.0 * pi - L;
    out.total_curvature_quadrature = 2.0 * pi - L;
    return out;
  }

 private:
  static ConePoint to_point(SpacePoint p) { return ConePoint{p.u, p.v}; }
  FlatCone cone_;
};

// -------------------------------------------------- half-plane ideal triangle

// Moebius maps cycling the cusps of the {0, 1, inf} ideal triangle:
// S(z) = 1/(1-z) sends inf -> 0 -> 1 -> inf.
HPoint cusp_map(HPoint z, int times) {
  double x = z.x, y = z.y;
  for (int i = 0; i < times; ++i) {
    const double dx = 1.0 - x;
    const double den = dx * dx + y * y;
    const double nx = dx / den;
    const double ny = y / den;
    x = nx;
    y = ny;
  }
  return HPoint{x, y};
}

class TriangleSpace final : public Space {
 public:
  SpaceKind kind() const override { return SpaceKind::halfplane_triangle; }
  std::string describe() const override { return "hyperbolic_ideal_triangle"; }
  bool compact() const override { return false; }
  bool has_angles() const override { return false; }
  double scale() const override { return 1.0; }

  double distance(SpacePoint a, SpacePoint b) const override {
    return halfplane_distance(to_point(a), to_point(b));
  }

  MinimalDirections minimal_directions(SpacePoint, SpacePoint) const override {
    throw capability_error("the ideal-triangle domain exposes distances only");
  }

  std::vector<std::vector<FarProbe>> far_probes(SpacePoint base,
                                                const std::vector<double>& levels, int count,
                                                bool want_directions) const override {
    if (want_directions)
      throw capability_error("the ideal-triangle domain exposes distances only");
    const HPoint b = to_point(base);
    std::vector<std::vector<FarProbe>> out(levels.size());
    for (size_t li = 0; li < levels.size(); ++li) {
      out[li].resize(count);
      for (int t = 0; t < count; ++t) {
        // samples cycle through the three cusps at across-throat offsets
        const int cusp = t % 3;
        const int slot = t / 3;
        const int slots = std::max(1, (count + 2) / 3);
        const double frac = 0.2 + 0.6 * (slot + 0.5) / slots;
        const double y = incenter_y() * std::exp(levels[li]);
        HPoint x{frac, y};
        x = cusp_map(x, cusp);
        FarProbe& pr = out[li][t];
        pr.x = SpacePoint{x.x, x.y};
        pr.distance = halfplane_distance(b, x);
        pr.found = true;
      }
    }
    return out;
  }

  std::vector<double> default_far_levels() const override { return {4.0, 8.0, 16.0, 32.0}; }

  std::vector<PairSample> pair_samples(double separation, int count,
                                       std::uint64_t) const override {
    // symmetric core pairs on horocycle arcs at a few heights
    std::vector<PairSample> out;
    const int n = std::max(1, count / 3);
    for (int i = 0; i < n; ++i) {
      const double y0 = incenter_y() * std::pow(2.0, i - n / 2);
      const double half_dx = y0 * std::sinh(0.5 * separation);
      if (half_dx > 0.5) continue;
      const HPoint p{0.5 - half_dx, y0};
      const HPoint q{0.5 + half_dx, y0};
      if (!ideal_triangle_contains(p) || !ideal_triangle_contains(q)) continue;
      for (int cusp = 0; cusp < 3; ++cusp) {
        const HPoint pm = cusp_map(p, cusp);
        const HPoint qm = cusp_map(q, cusp);
        out.push_back({SpacePoint{pm.x, pm.y}, SpacePoint{qm.x, qm.y}});
      }
    }
    return out;
  }

  std::vector<PairSample> deep_pairs(std::uint64_t) const override {
    // Pairs pushed deep into two different cusps, well beyond the default
    // far horizon, plus core pairs. The deep pairs realise the infimum at
    // desk scale: every witness within the ladder sees both endpoints at
    // vanishing comparison angles.
    std::vector<PairSample> out;
    const double hmax = default_far_levels().back();
    for (const double depth : {3.0 * hmax, 4.0 * hmax}) {
      const HPoint top{0.5, incenter_y() * std::exp(depth)};
      const HPoint c0 = cusp_map(top, 1);
      const HPoint c1 = cusp_map(top, 2);
      out.push_back({SpacePoint{c0.x, c0.y}, SpacePoint{c1.x, c1.y}});
      out.push_back({SpacePoint{top.x, top.y}, SpacePoint{c0.x, c0.y}});
      out.push_back({SpacePoint{top.x, top.y}, SpacePoint{c1.x, c1.y}});
    }
    auto core = pair_samples(0.8, 3, 0);
    out.insert(out.end(), core.begin(), core.end());
    return out;
  }

  GrowthReport growth() const override {
    throw capability_error(
        "the ideal-triangle domain has finite area and a three-point ideal boundary; "
        "growth quantities are not defined for it");
  }

 private:
  static double incenter_y() { return 0.8660254037844386; }  // sqrt(3)/2
  static HPoint to_point(SpacePoint p) {
    const HPoint h{p.u, p.v};
    if (!ideal_triangle_contains(h))
      throw std::domain_error("point outside the ideal-triangle domain");
    return h;
  }
};

}  // namespace

std::unique_ptr<Space> make_surface_space(ProfileSurface surf) {
  return std::make_unique<SurfaceSpace>(std::move(surf));
}
std::unique_ptr<Space> make_cone_space(FlatCone cone) {
  return std::make_unique<ConeSpace>(cone);
}
std::unique_ptr<Space> make_ideal_triangle_space() {
  return std::make_unique<TriangleSpace>();
}

}  // namespace obtuselab
