#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obtuselab/flatcone.hpp"
#include "obtuselab/model_trig.hpp"
#include "obtuselab/revsurface.hpp"

namespace obtuselab {

struct capability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coordinates interpreted by the owning space: (r, theta) on surfaces of
/// revolution, (rho, phi) on cones, (x, y) on the half-plane domain.
struct SpacePoint {
  double u = 0.0;
  double v = 0.0;
};

enum class SpaceKind { rev_surface, flat_cone, halfplane_triangle };

struct PairSample {
  SpacePoint p, q;
};

struct FarProbe {
  SpacePoint x;
  double distance = 0.0;       // from the queried base point
  double dir_at_base = 0.0;    // departure direction (angle spaces only)
  bool found = false;
};

struct MinimalDirections {
  std::vector<double> at_p;  // departure directions of minimal geodesics p -> q
  std::vector<double> at_q;  // departure directions of minimal geodesics q -> p
  double distance = 0.0;
};

struct GrowthReport {
  std::optional<double> v_inf;
  std::optional<double> ideal_boundary_length;
  std::optional<double> total_curvature;
  std::optional<double> total_curvature_quadrature;
  std::optional<double> normalized_volume;
  std::optional<double> diameter;
  std::optional<double> radius;
};

/// Capability interface the estimators run against. Distances are always
/// available; direction queries throw capability_error when unsupported.
class Space {
 public:
  virtual ~Space() = default;

  virtual SpaceKind kind() const = 0;
  virtual std::string describe() const = 0;
  virtual bool compact() const = 0;
  virtual bool has_angles() const = 0;
  virtual double scale() const = 0;

  virtual double distance(SpacePoint a, SpacePoint b) const = 0;
  virtual MinimalDirections minimal_directions(SpacePoint p, SpacePoint q) const = 0;

  /// Batched far-field probes from `base` on the witness families at the
  /// given levels (coordinate circles on surfaces/cones, cusp depth on the
  /// half-plane domain). Sample positions depend only on (level, count),
  /// so probes from different bases pair up by index.
  virtual std::vector<std::vector<FarProbe>> far_probes(SpacePoint base,
                                                        const std::vector<double>& levels,
                                                        int count,
                                                        bool want_directions) const = 0;

  /// Exact-model spaces can evaluate a probe at an arbitrary position in
  /// [0, 1) along the level family, enabling local refinement of maxima.
  virtual bool exact_far() const { return false; }
  virtual FarProbe far_probe_at(SpacePoint base, double level, double position,
                                bool want_directions) const;

  virtual std::vector<double> default_far_levels() const = 0;
  virtual std::vector<double> region_levels(int density) const;  // compact far sets
  virtual double radius() const;    // compact only
  virtual double diameter() const;  // compact only

  /// Witness points continuing the minimal geodesics q -> p beyond p for
  /// the given distances (compact far sets need the collinear witnesses,
  /// which a coordinate grid misses).
  virtual std::vector<SpacePoint> extension_witnesses(SpacePoint p, SpacePoint q,
                                                      const std::vector<double>& distances) const;

  virtual std::vector<PairSample> pair_samples(double separation, int count,
                                               std::uint64_t seed) const = 0;
  /// Pair population for the infimum-style constants (not shrinking
  /// separations); includes pairs deep relative to the far levels.
  virtual std::vector<PairSample> deep_pairs(std::uint64_t seed) const = 0;

  /// Growth data matching the space's capabilities (asymptotic quantities
  /// when noncompact, normalised volume and extents when compact).
  virtual GrowthReport growth() const = 0;
};

std::unique_ptr<Space> make_surface_space(ProfileSurface surf);
std::unique_ptr<Space> make_cone_space(FlatCone cone);
std::unique_ptr<Space> make_ideal_triangle_space();

struct ComparisonQuery {
  SpacePoint p, q;
  Curvature kappa = Curvature(0.0);
  std::vector<double> far_radii;      // empty: the space default
  int samples_per_radius = 720;
  std::uint64_t seed = 0;
};

struct InvariantEstimate {
  double value = 0.0;
  std::vector<double> ladder;
  bool monotone = false;
  double uncertainty = 0.0;
};

/// limsup_{x->inf} max comparison angle at the pair, minus pi/2; distance
/// data only.
InvariantEstimate pair_obtuse_comparison(const Space& space, const ComparisonQuery& query);

/// Same ladder with the true-angle integrand inf over minimal directions.
InvariantEstimate pair_obtuse_angle(const Space& space, const ComparisonQuery& query);

struct ObtuseConfig {
  std::vector<double> pair_separations;  // empty: {0.1, 0.03, 0.01} * scale
  int pairs_per_separation = 36;
  std::vector<double> far_radii;
  int samples_per_radius = 720;
  Curvature kappa = Curvature(0.0);
  std::uint64_t seed = 1;
  ObtuseVariant variant = ObtuseVariant::comparison;
};

/// liminf over shrinking pair separations of the pair constants from
/// infinity (noncompact spaces).
InvariantEstimate obtuse_from_infinity(const Space& space, const ObtuseConfig& cfg);

/// Compact variant: far set is the complement of B(center, radius/2).
InvariantEstimate obtuse_compact(const Space& space, const ObtuseConfig& cfg);

/// inf over a pair population (not shrinking separations) of the
/// comparison constant with the given kappa.
InvariantEstimate kappa_obtuse_infinity(const Space& space, Curvature kappa,
                                        const ObtuseConfig& cfg);

GrowthReport growth_report(const Space& space);

}  // namespace obtuselab
