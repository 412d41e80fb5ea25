#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace alloq {

/// Shape-preserving cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Monotone data produce a monotone interpolant and values never
/// overshoot the local data range.
class Pchip {
 public:
  Pchip() = default;

  Pchip(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n) {
      throw std::invalid_argument("Pchip: need >= 2 matching samples");
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (!(xs_[i] > xs_[i - 1])) {
        throw std::invalid_argument("Pchip: abscissae must be increasing");
      }
    }
    ds_.resize(n);
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = xs_[i + 1] - xs_[i];
      delta[i] = (ys_[i + 1] - ys_[i]) / h[i];
    }
    if (n == 2) {
      ds_[0] = ds_[1] = delta[0];
    } else {
      ds_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
      ds_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
          ds_[i] = 0.0;
        } else {
          const double w1 = 2.0 * h[i] + h[i - 1];
          const double w2 = h[i] + 2.0 * h[i - 1];
          ds_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
      }
    }
  }

  double operator()(double x) const {
    const std::size_t i = interval(x);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * ys_[i] + h * h10 * ds_[i] + h01 * ys_[i + 1] +
           h * h11 * ds_[i + 1];
  }

  double derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t;
    const double d00 = (6 * t2 - 6 * t) / h;
    const double d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h;
    const double d11 = 3 * t2 - 2 * t;
    return d00 * ys_[i] + d10 * ds_[i] + d01 * ys_[i + 1] + d11 * ds_[i + 1];
  }

  double x_front() const { return xs_.front(); }
  double x_back() const { return xs_.back(); }
  double y_front() const { return ys_.front(); }
  double y_back() const { return ys_.back(); }
  double slope_back() const { return ds_.back(); }
  double derivative_at_knot(std::size_t i) const { return ds_.at(i); }

 private:
  static double edge_slope(double h0, double h1, double d0, double d1) {
    double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) {
      s = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) {
      s = 3.0 * d0;
    }
    return s;
  }

  std::size_t interval(double x) const {
    if (!(x >= xs_.front() && x <= xs_.back())) {
      throw std::domain_error("Pchip: query outside sample range");
    }
    std::size_t lo = 0, hi = xs_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (xs_[mid] <= x ? lo : hi) = mid;
    }
    return lo;
  }

  std::vector<double> xs_, ys_, ds_;
};

}  // namespace alloq
