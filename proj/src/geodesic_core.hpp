#pragma once

#include <functional>
#include <vector>

#include "profile_model.hpp"

namespace obtuselab::detail {

struct GeoState {
  double s = 0.0;
  double r = 0.0;
  double pr = 0.0;   // dr/ds
  double th = 0.0;   // unwrapped
  double pth = 0.0;  // dtheta/ds
};

struct WalkOptions {
  double tol = 1e-11;
  double s_end = 0.0;
  const std::vector<double>* levels = nullptr;  // r-levels for crossing callbacks
  bool convex_early_stop = false;  // stop once r > top level with pr > 0
  double top_level = 0.0;
};

/// return false to halt the walk
using CrossingFn = std::function<bool(int level_index, const GeoState&)>;
using SampleFn = std::function<void(const GeoState&)>;

struct WalkResult {
  GeoState final;
  bool halted = false;       // stopped by callback or early-stop
  bool domain_exit = false;  // left the profile table / open domain end
};

WalkResult walk_geodesic(const ProfileModel& mdl, GeoState start, const WalkOptions& opt,
                         const CrossingFn& on_cross = {}, const SampleFn& on_sample = {});

/// Chart radius below which vertex passage switches to the flat local chart.
double chart_radius(const ProfileModel& mdl);

}  // namespace obtuselab::detail
