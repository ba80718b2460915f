#pragma once

#include <vector>

#include "obtuselab/model_trig.hpp"

namespace obtuselab {

/// Euclidean cone over a circle of length `link_length` in (0, 2*pi];
/// link_length = 2*pi is the flat plane.
struct FlatCone {
  double link_length = 2.0 * 3.14159265358979323846;

  explicit FlatCone(double length);
  FlatCone() = default;
};

struct ConePoint {
  double rho = 0.0;
  double phi = 0.0;
};

/// Exact cone metric by unrolling: with psi the minimal angular gap over
/// lifts, d = rho1 + rho2 once psi >= pi (through the apex), else the
/// planar law of cosines.
double cone_distance(const FlatCone& cone, ConePoint p, ConePoint q);

struct ConeSolution {
  double alpha_p = 0.0;  // departure direction at p, measured from outward radial
  double alpha_q = 0.0;  // arrival motion direction at q, from outward radial
};

struct ConeConnection {
  double distance = 0.0;
  bool through_apex = false;
  std::vector<ConeSolution> solutions;  // two entries when the gap ties at pi
};

ConeConnection cone_connect(const FlatCone& cone, ConePoint p, ConePoint q);

enum class ObtuseVariant { comparison, angle };

/// Exact-model evaluation of the pair obtuse constant from infinity on the
/// cone: per-radius maximisation over the far circle plus an R-ladder
/// {1e3..1e6}*|p,q| with extrapolation, normalised by -pi/2.
double cone_obtuse_inf_exact(const FlatCone& cone, ConePoint p, ConePoint q,
                             ObtuseVariant variant = ObtuseVariant::comparison,
                             Curvature kappa = Curvature(0.0));

}  // namespace obtuselab
