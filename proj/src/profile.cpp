#include "obtuselab/revsurface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "obtuselab/numerics.hpp"
#include "profile_model.hpp"

namespace obtuselab {

using num::pi;

namespace detail {

void ProfileModel::check_domain(double r) const {
  if (!(r >= 0.0)) throw std::domain_error("r must be nonnegative");
  if (r > r_max() * (1.0 + 1e-12))
    throw domain_exit("r = " + std::to_string(r) + " outside profile domain [0, " +
                      std::to_string(r_max()) + "]");
}

void OdeTable::eval(double r, double& y, double& yp) const {
  if (r <= 0.0) {
    y = val_[0];
    yp = slope_[0];
    return;
  }
  const double u = r / h_;
  auto i = static_cast<size_t>(u);
  if (i >= val_.size() - 1) i = val_.size() - 2;
  const double t = u - static_cast<double>(i);
  const double y0 = val_[i], y1 = val_[i + 1];
  const double d0 = slope_[i] * h_, d1 = slope_[i + 1] * h_;
  const double t2 = t * t, t3 = t2 * t;
  y = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 +
      (t3 - t2) * d1;
  yp = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * d0 + (-6 * t2 + 6 * t) * y1 +
        (3 * t2 - 2 * t) * d1) /
       h_;
}

namespace {

class PlaneModel final : public ProfileModel {
 public:
  explicit PlaneModel(double scale) : scale_(scale) {}
  void eval(double r, double& m, double& mp) const override {
    m = r;
    mp = 1.0;
  }
  double curvature(double) const override { return 0.0; }
  bool compact() const override { return false; }
  double r_max() const override { return 1e12 * scale_; }
  double scale() const override { return scale_; }
  ProfileFamily family() const override { return ProfileFamily::plane; }
  std::string describe() const override { return "plane"; }

 private:
  double scale_;
};

class HyperboloidModel final : public ProfileModel {
 public:
  HyperboloidModel(double a, double scale, double r_cap) : a_(a), scale_(scale) {
    if (!(a >= 0.0)) throw std::invalid_argument("hyperboloid parameter a must be >= 0");
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    auto g = [a](double rho) {
      return 1.0 / std::sqrt(1.0 + a * a * rho * rho / (rho * rho + 1.0));
    };
    table_.build(g, r_cap, 1.0 / 128.0, 4);
  }
  void eval(double r, double& m, double& mp) const override {
    const double u = r / scale_;
    double rho, f;
    table_.eval(u, rho, f);
    m = scale_ * rho;
    mp = f;
  }
  double curvature(double r) const override {
    check_domain(r);
    double rho, f;
    table_.eval(r / scale_, rho, f);
    const double d = (1.0 + a_ * a_) * rho * rho + 1.0;
    return a_ * a_ / (d * d) / (scale_ * scale_);
  }
  bool compact() const override { return false; }
  double r_max() const override { return table_.r_end() * scale_; }
  double scale() const override { return scale_; }
  ProfileFamily family() const override { return ProfileFamily::hyperboloid; }
  std::string describe() const override {
    std::ostringstream os;
    os << "hyperboloid(a=" << a_ << ")";
    return os.str();
  }

 private:
  double a_, scale_;
  OdeTable table_;
};

class RoundSphereModel final : public ProfileModel {
 public:
  explicit RoundSphereModel(double scale) : scale_(scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  }
  void eval(double r, double& m, double& mp) const override {
    const double u = r / scale_;
    m = scale_ * std::sin(u);
    mp = std::cos(u);
  }
  double curvature(double r) const override {
    check_domain(r);
    return 1.0 / (scale_ * scale_);
  }
  bool compact() const override { return true; }
  double r_max() const override { return pi * scale_; }
  double scale() const override { return scale_; }
  ProfileFamily family() const override { return ProfileFamily::spheroid; }
  std::string describe() const override { return "spheroid(c=1)"; }

 private:
  double scale_;
};

// Ellipsoid of revolution, meridian parametrised by the ellipse angle phi:
// (rho, z) = (sin phi, c cos phi), W = dr/dphi = sqrt(cos^2 + c^2 sin^2).
class SpheroidModel final : public ProfileModel {
 public:
  SpheroidModel(double c, double scale) : c_(c), scale_(scale) {
    if (!(c > 0.0)) throw std::invalid_argument("spheroid axis ratio must be positive");
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    const double w_min = std::min(1.0, c);
    auto g = [c](double phi) {
      const double cp = std::cos(phi), sp = std::sin(phi);
      return 1.0 / std::sqrt(cp * cp + c * c * sp * sp);
    };
    // meridian length; grid sized so phi stays within [0, pi]
    const double len = num::adaptive_simpson(
        [c](double phi) {
          const double cp = std::cos(phi), sp = std::sin(phi);
          return std::sqrt(cp * cp + c * c * sp * sp);
        },
        0.0, pi, 1e-12);
    const double h = len / 8192.0;
    table_.build(g, len, h, 4);
    r_max_ = len;
    // clamp the top knot drift
  }
  void eval(double r, double& m, double& mp) const override {
    double u = r / scale_;
    u = std::clamp(u, 0.0, r_max_);
    double phi, dphi;
    table_.eval(u, phi, dphi);
    phi = std::clamp(phi, 0.0, pi);
    m = scale_ * std::sin(phi);
    mp = std::cos(phi) * dphi;
  }
  double curvature(double r) const override {
    check_domain(r);
    double phi, dphi;
    table_.eval(std::clamp(r / scale_, 0.0, r_max_), phi, dphi);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double w2 = cp * cp + c_ * c_ * sp * sp;
    return c_ * c_ / (w2 * w2) / (scale_ * scale_);
  }
  bool compact() const override { return true; }
  double r_max() const override { return r_max_ * scale_; }
  double scale() const override { return scale_; }
  ProfileFamily family() const override { return ProfileFamily::spheroid; }
  std::string describe() const override {
    std::ostringstream os;
    os << "spheroid(c=" << c_ << ")";
    return os.str();
  }

 private:
  double c_, scale_, r_max_ = 0.0;
  OdeTable table_;
};

class ParaboloidModel final : public ProfileModel {
 public:
  ParaboloidModel(double b, double scale, double r_cap) : b_(b), scale_(scale) {
    if (!(b > 0.0)) throw std::invalid_argument("paraboloid parameter b must be positive");
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    auto g = [b](double rho) { return 1.0 / std::sqrt(1.0 + b * b * rho * rho); };
    table_.build(g, r_cap, 1.0 / 128.0, 4);
  }
  void eval(double r, double& m, double& mp) const override {
    double rho, f;
    table_.eval(r / scale_, rho, f);
    m = scale_ * rho;
    mp = f;
  }
  double curvature(double r) const override {
    check_domain(r);
    double rho, f;
    table_.eval(r / scale_, rho, f);
    const double d = 1.0 + b_ * b_ * rho * rho;
    return b_ * b_ / (d * d) / (scale_ * scale_);
  }
  bool compact() const override { return false; }
  double r_max() const override { return table_.r_end() * scale_; }
  double scale() const override { return scale_; }
  ProfileFamily family() const override { return ProfileFamily::paraboloid; }
  std::string describe() const override {
    std::ostringstream os;
    os << "paraboloid(b=" << b_ << ")";
    return os.str();
  }

 private:
  double b_, scale_;
  OdeTable table_;
};

// Natural cubic spline through the tabulated profile.
class TableModel final : public ProfileModel {
 public:
  TableModel(std::vector<double> r, std::vector<double> m) : r_(std::move(r)), m_(std::move(m)) {
    const size_t n = r_.size();
    if (n < 2 || m_.size() != n)
      throw std::invalid_argument("profile table needs matching r/m arrays of length >= 2");
    if (r_[0] != 0.0) throw std::invalid_argument("profile table must start at r = 0");
    if (m_[0] != 0.0) throw std::invalid_argument("profile table needs m(0) = 0");
    for (size_t i = 1; i < n; ++i) {
      if (!(r_[i] > r_[i - 1]))
        throw std::invalid_argument("profile table r values must be strictly increasing");
      if (i + 1 < n && !(m_[i] > 0.0))
        throw std::invalid_argument("profile table m must be positive on the interior");
    }
    if (!(m_.back() >= 0.0)) throw std::invalid_argument("profile table m must be nonnegative");
    build_spline();
    const double mp0 = spline_deriv(0.0);
    if (std::fabs(mp0 - 1.0) > 0.1)
      throw std::invalid_argument("profile table has m'(0) far from 1");
    compact_ = m_.back() <= 1e-9 * *std::max_element(m_.begin(), m_.end());
  }

  void eval(double r, double& m, double& mp) const override {
    const size_t i = interval(r);
    const double t = r - r_[i];
    m = m_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
    mp = b_[i] + t * (2.0 * c_[i] + 3.0 * t * d_[i]);
  }
  double curvature(double r) const override {
    check_domain(r);
    const size_t i = interval(r);
    const double t = r - r_[i];
    const double mpp = 2.0 * c_[i] + 6.0 * d_[i] * t;
    double m, mp;
    eval(r, m, mp);
    if (m < 1e-7 * r_.back()) {
      // K -> -m'''(0) as r -> 0 for a natural spline (m''(0) = 0)
      return -6.0 * d_[0];
    }
    return -mpp / m;
  }
  bool compact() const override { return compact_; }
  double r_max() const override { return r_.back(); }
  double scale() const override { return 1.0; }
  ProfileFamily family() const override { return ProfileFamily::table; }
  std::string describe() const override {
    std::ostringstream os;
    os << "profile_table(" << r_.size() << " knots)";
    return os.str();
  }

 private:
  size_t interval(double r) const {
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    auto i = static_cast<size_t>(std::distance(r_.begin(), it));
    if (i == 0) return 0;
    if (i >= r_.size()) return r_.size() - 2;
    return i - 1;
  }
  double spline_deriv(double r) const {
    const size_t i = interval(r);
    const double t = r - r_[i];
    return b_[i] + t * (2.0 * c_[i] + 3.0 * t * d_[i]);
  }
  void build_spline() {
    const size_t n = r_.size();
    std::vector<double> h(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) h[i] = r_[i + 1] - r_[i];
    std::vector<double> sig(n, 0.0);  // second derivatives, natural ends
    if (n > 2) {
      std::vector<double> diag(n - 2), rhs(n - 2), off(n - 2);
      for (size_t i = 1; i + 1 < n; ++i) {
        diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
        off[i - 1] = h[i];
        rhs[i - 1] = 6.0 * ((m_[i + 1] - m_[i]) / h[i] - (m_[i] - m_[i - 1]) / h[i - 1]);
      }
      for (size_t i = 1; i < n - 2; ++i) {
        const double w = h[i] / diag[i - 1];
        diag[i] -= w * off[i - 1];
        rhs[i] -= w * rhs[i - 1];
      }
      for (size_t i = n - 2; i-- > 0;) {
        const double upper = (i + 1 < n - 2) ? off[i] * sig[i + 2] : 0.0;
        sig[i + 1] = (rhs[i] - upper) / diag[i];
      }
    }
    b_.resize(n - 1);
    c_.resize(n - 1);
    d_.resize(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      b_[i] = (m_[i + 1] - m_[i]) / h[i] - h[i] * (2.0 * sig[i] + sig[i + 1]) / 6.0;
      c_[i] = 0.5 * sig[i];
      d_[i] = (sig[i + 1] - sig[i]) / (6.0 * h[i]);
    }
  }

  std::vector<double> r_, m_;
  std::vector<double> b_, c_, d_;
  bool compact_ = false;
};

}  // namespace

}  // namespace detail

ProfileSurface::ProfileSurface(std::shared_ptr<const detail::ProfileModel> model)
    : model_(std::move(model)) {}

ProfileSurface ProfileSurface::plane(double scale) {
  return ProfileSurface(std::make_shared<detail::PlaneModel>(scale));
}
ProfileSurface ProfileSurface::hyperboloid(double a, double scale, double r_cap) {
  return ProfileSurface(std::make_shared<detail::HyperboloidModel>(a, scale, r_cap));
}
ProfileSurface ProfileSurface::spheroid(double c, double scale) {
  if (c == 1.0) return ProfileSurface(std::make_shared<detail::RoundSphereModel>(scale));
  return ProfileSurface(std::make_shared<detail::SpheroidModel>(c, scale));
}
ProfileSurface ProfileSurface::paraboloid(double b, double scale, double r_cap) {
  return ProfileSurface(std::make_shared<detail::ParaboloidModel>(b, scale, r_cap));
}
ProfileSurface ProfileSurface::from_table(const std::vector<double>& r,
                                          const std::vector<double>& m) {
  return ProfileSurface(std::make_shared<detail::TableModel>(r, m));
}

double ProfileSurface::m(double r) const {
  model_->check_domain(r);
  return model_->m(r);
}
double ProfileSurface::m_prime(double r) const {
  model_->check_domain(r);
  return model_->m_prime(r);
}
double ProfileSurface::curvature(double r) const { return model_->curvature(r); }
bool ProfileSurface::compact() const { return model_->compact(); }
double ProfileSurface::r_max() const { return model_->r_max(); }
double ProfileSurface::scale() const { return model_->scale(); }
ProfileFamily ProfileSurface::family() const { return model_->family(); }
std::string ProfileSurface::describe() const { return model_->describe(); }

double ProfileSurface::ball_area(double R) const {
  model_->check_domain(R);
  const auto* mdl = model_.get();
  return 2.0 * pi *
         num::adaptive_simpson([mdl](double r) { return mdl->m(r); }, 0.0, R, 1e-9, true);
}

namespace detail {
const ProfileModel& model_of(const ProfileSurface& surf) { return *surf.model_; }
}  // namespace detail

}  // namespace obtuselab
