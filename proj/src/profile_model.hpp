#pragma once

#include <string>
#include <vector>

#include "obtuselab/revsurface.hpp"

namespace obtuselab::detail {

class ProfileModel {
 public:
  virtual ~ProfileModel() = default;
  virtual void eval(double r, double& m, double& mp) const = 0;
  virtual double curvature(double r) const = 0;
  virtual bool compact() const = 0;
  virtual double r_max() const = 0;
  virtual double scale() const = 0;
  virtual ProfileFamily family() const = 0;
  virtual std::string describe() const = 0;

  double m(double r) const {
    double v, d;
    eval(r, v, d);
    return v;
  }
  double m_prime(double r) const {
    double v, d;
    eval(r, v, d);
    return d;
  }
  void check_domain(double r) const;
};

const ProfileModel& model_of(const ProfileSurface& surf);

/// Dense table for y(r) with y' = G(y), uniform grid, cubic Hermite between
/// knots using the exact slope G at the knots.
class OdeTable {
 public:
  template <class G>
  void build(G g, double r_end, double h, int substeps) {
    h_ = h;
    const auto n = static_cast<size_t>(r_end / h) + 1;
    val_.resize(n + 1);
    slope_.resize(n + 1);
    double y = 0.0;
    val_[0] = y;
    slope_[0] = g(y);
    const double hs = h / substeps;
    for (size_t i = 1; i <= n; ++i) {
      for (int j = 0; j < substeps; ++j) {
        const double k1 = g(y);
        const double k2 = g(y + 0.5 * hs * k1);
        const double k3 = g(y + 0.5 * hs * k2);
        const double k4 = g(y + hs * k3);
        y += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      val_[i] = y;
      slope_[i] = g(y);
    }
    r_end_ = static_cast<double>(n) * h;
  }

  double r_end() const { return r_end_; }
  void eval(double r, double& y, double& yp) const;

 private:
  double h_ = 0.0;
  double r_end_ = 0.0;
  std::vector<double> val_;
  std::vector<double> slope_;
};

}  // namespace obtuselab::detail
