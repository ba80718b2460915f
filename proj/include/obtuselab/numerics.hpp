#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace obtuselab::num {

inline constexpr double pi = 3.14159265358979323846;

/// Wrap an angle to (-pi, pi].
double wrap_pi(double x);

/// Wrap to [0, period).
double wrap_period(double x, double period);

/// Angle between two tangent directions given their polar angles, in [0, pi].
inline double direction_gap(double b1, double b2) { return std::fabs(wrap_pi(b1 - b2)); }

/// Adaptive Simpson quadrature. Tolerance is absolute unless `relative`
/// is set, in which case it is scaled by a running magnitude estimate.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, bool relative = false);

/// Brent root bracketing solve on [a,b]; fa, fb must straddle zero.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double fa, double fb, double xtol, int max_iter = 128);

/// Golden-section/parabolic minimisation of f on [a,b].
double brent_min(const std::function<double(double)>& f, double a, double b,
                 double xtol, int max_iter = 160);

/// Aitken delta-squared extrapolation of a ladder tail; falls back to the
/// last value when the increments do not contract.
double extrapolate_ladder(const std::vector<double>& values);

struct Richardson2 {
  double value = 0.0;
  double spread = 0.0;  // |second refinement - first|, the convergence gauge
};

/// Richardson extrapolation for v(T), v(2T), v(4T) with error model c1/T^2 + c2/T^4.
Richardson2 richardson_ladder(double v1, double v2, double v3);

/// True when the sequence is nondecreasing up to `slack`.
bool is_nondecreasing(const std::vector<double>& v, double slack = 1e-12);

}  // namespace obtuselab::num
