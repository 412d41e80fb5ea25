#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "alloq/errors.hpp"
#include "alloq/interp.hpp"
#include "alloq/tolerances.hpp"

namespace alloq {

struct UniformSupply {
  double height;       // f(x) = height on [0, X]
  double max_quality;  // X
};

struct PiecewiseLinearSupply {
  // (x, f(x)) knots; x increasing from 0, f > 0 everywhere.
  std::vector<std::pair<double, double>> knots;
};

struct TabulatedSupply {
  // Density samples, interpolated monotonically per segment.
  std::vector<double> xs;
  std::vector<double> density;
};

/// Strictly positive supply density f on [0, X] with exact CDF and
/// quantile. CDF and quantile are inverse to 1e-9.
class Supply {
 public:
  explicit Supply(UniformSupply u) {
    if (!(u.height > 0.0) || !(u.max_quality > 0.0)) {
      throw std::invalid_argument("UniformSupply: height and X must be > 0");
    }
    xs_ = {0.0, u.max_quality};
    fs_ = {u.height, u.height};
    init_linear();
  }

  explicit Supply(PiecewiseLinearSupply p) {
    if (p.knots.size() < 2 || p.knots.front().first != 0.0) {
      throw std::invalid_argument(
          "PiecewiseLinearSupply: knots must start at x = 0");
    }
    for (std::size_t i = 0; i < p.knots.size(); ++i) {
      if (!(p.knots[i].second > 0.0)) {
        throw std::invalid_argument(
            "PiecewiseLinearSupply: density must be positive");
      }
      if (i > 0 && !(p.knots[i].first > p.knots[i - 1].first)) {
        throw std::invalid_argument(
            "PiecewiseLinearSupply: knot positions must increase");
      }
      xs_.push_back(p.knots[i].first);
      fs_.push_back(p.knots[i].second);
    }
    init_linear();
  }

  explicit Supply(TabulatedSupply t) {
    if (t.xs.size() < 2 || t.xs.front() != 0.0) {
      throw std::invalid_argument("TabulatedSupply: samples must start at 0");
    }
    for (double d : t.density) {
      if (!(d > 0.0)) {
        throw std::invalid_argument("TabulatedSupply: density must be > 0");
      }
    }
    xs_ = t.xs;
    fs_ = t.density;
    curve_ = Pchip(t.xs, t.density);
    cum_.assign(xs_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      cum_[i + 1] = cum_[i] + hermite_mass(i, xs_[i + 1]);
    }
  }

  static Supply uniform(double height, double max_quality) {
    return Supply(UniformSupply{height, max_quality});
  }

  double max_quality() const { return xs_.back(); }
  double total_mass() const { return cum_.back(); }

  double density(double x) const {
    check_range(x);
    if (curve_) {
      return (*curve_)(x);
    }
    const std::size_t i = segment(x);
    const double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return fs_[i] + t * (fs_[i + 1] - fs_[i]);
  }

  double cdf(double x) const {
    check_range(x);
    const std::size_t i = segment(x);
    if (curve_) {
      return cum_[i] + hermite_mass(i, x);
    }
    const double dx = x - xs_[i];
    const double slope = (fs_[i + 1] - fs_[i]) / (xs_[i + 1] - xs_[i]);
    return cum_[i] + dx * (fs_[i] + 0.5 * slope * dx);
  }

  /// Mass of supply between qualities a <= b.
  double mass(double a, double b) const { return cdf(b) - cdf(a); }

  /// F^{-1}(m): the quality below which exactly mass m of supply lies.
  double quantile(double m) const {
    if (m > total_mass() + tol::mass) {
      throw InsufficientMassError("Supply::quantile: mass " +
                                  std::to_string(m) + " exceeds total " +
                                  std::to_string(total_mass()));
    }
    m = std::clamp(m, 0.0, total_mass());
    // Locate the segment by cumulative knot mass.
    std::size_t lo = 0, hi = xs_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (cum_[mid] <= m ? lo : hi) = mid;
    }
    const double dm = m - cum_[lo];
    if (curve_) {
      return invert_hermite(lo, dm);
    }
    const double slope = (fs_[lo + 1] - fs_[lo]) / (xs_[lo + 1] - xs_[lo]);
    // Stable root of f*t + slope*t^2/2 = dm.
    const double disc = std::sqrt(fs_[lo] * fs_[lo] + 2.0 * slope * dm);
    const double t = 2.0 * dm / (fs_[lo] + disc);
    return std::min(xs_[lo] + t, xs_[lo + 1]);
  }

 private:
  void init_linear() {
    cum_.assign(xs_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      cum_[i + 1] =
          cum_[i] + 0.5 * (fs_[i] + fs_[i + 1]) * (xs_[i + 1] - xs_[i]);
    }
  }

  void check_range(double x) const {
    if (!(x >= 0.0 && x <= xs_.back() + 1e-12)) {
      throw std::domain_error("Supply: quality outside [0, X]");
    }
  }

  std::size_t segment(double x) const {
    std::size_t lo = 0, hi = xs_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (xs_[mid] <= x ? lo : hi) = mid;
    }
    return lo;
  }

  // Exact integral of the cubic Hermite density over [xs_[i], x].
  double hermite_mass(std::size_t i, double x) const {
    const double h = xs_[i + 1] - xs_[i];
    const double t = std::clamp((x - xs_[i]) / h, 0.0, 1.0);
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
    const double H00 = 0.5 * t4 - t3 + t;
    const double H10 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;
    const double H01 = -0.5 * t4 + t3;
    const double H11 = 0.25 * t4 - t3 / 3.0;
    const double d0 = curve_->derivative_at_knot(i);
    const double d1 = curve_->derivative_at_knot(i + 1);
    return h * (H00 * fs_[i] + h * H10 * d0 + H01 * fs_[i + 1] + h * H11 * d1);
  }

  double invert_hermite(std::size_t i, double dm) const {
    double lo = xs_[i], hi = xs_[i + 1];
    // Newton with bisection safeguard; density > 0 makes mass increasing.
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
      const double g = hermite_mass(i, x) - dm;
      (g < 0.0 ? lo : hi) = x;
      const double d = (*curve_)(std::clamp(x, xs_[i], xs_[i + 1]));
      double next = x - g / d;
      if (!(next > lo && next < hi)) {
        next = 0.5 * (lo + hi);
      }
      if (std::abs(next - x) < 1e-14 * (1.0 + std::abs(x))) {
        return next;
      }
      x = next;
    }
    return x;
  }

  std::vector<double> xs_, fs_, cum_;
  std::optional<Pchip> curve_;  // set only for TabulatedSupply
};

}  // namespace alloq
