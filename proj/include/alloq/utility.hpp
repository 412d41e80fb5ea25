#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "alloq/interp.hpp"

namespace alloq {

/// A realized outcome: a quality level in [0, inf) or the no-service
/// outcome (written "none" here). No service compares worse than any
/// quality.
struct Outcome {
  static Outcome none() { return Outcome{true, 0.0}; }
  static Outcome quality(double x) { return Outcome{false, x}; }

  bool is_none = false;
  double x = 0.0;
};

/// Exponentially discounted value of a unit good delivered at time x.
struct ExponentialDiscount {
  double rate;  // > 0
};

/// Constant relative risk aversion over shifted quality: (1+x)^(-rho).
struct ConstantRelative {
  double rho;  // > 0
};

/// Constant absolute risk aversion: exp(-a x).
struct ConstantAbsolute {
  double coefficient;  // > 0
};

/// Sampled utility curve, interpolated monotonically; decays
/// exponentially beyond the last sample so the value vanishes at
/// infinity.
struct Tabulated {
  std::vector<double> xs;
  std::vector<double> values;
};

/// Strictly decreasing positive utility over quality, worth 0 at the
/// no-service outcome.
class Utility {
 public:
  using Family =
      std::variant<ExponentialDiscount, ConstantRelative, ConstantAbsolute,
                   Tabulated>;

  explicit Utility(ExponentialDiscount f) : family_(check_rate(f)) {}
  explicit Utility(ConstantRelative f) : family_(check_rho(f)) {}
  explicit Utility(ConstantAbsolute f) : family_(check_coeff(f)) {}
  explicit Utility(Tabulated f) : family_(check_samples(std::move(f))) {
    build_curve();
  }

  static Utility exponential(double rate) {
    return Utility(ExponentialDiscount{rate});
  }
  static Utility crra(double rho) { return Utility(ConstantRelative{rho}); }
  static Utility cara(double a) { return Utility(ConstantAbsolute{a}); }
  static Utility tabulated(std::vector<double> xs, std::vector<double> vs) {
    return Utility(Tabulated{std::move(xs), std::move(vs)});
  }

  /// u(x) for quality x >= 0.
  double value(double x) const {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::domain_error("Utility::value: quality must be finite, >= 0");
    }
    if (curve_) {
      if (x <= curve_->curve.x_back()) {
        return curve_->curve(x);
      }
      return curve_->curve.y_back() *
             std::exp(-curve_->tail_rate * (x - curve_->curve.x_back()));
    }
    if (const auto* f = std::get_if<ExponentialDiscount>(&family_)) {
      return std::exp(-f->rate * x);
    }
    if (const auto* f = std::get_if<ConstantRelative>(&family_)) {
      return std::pow(1.0 + x, -f->rho);
    }
    return std::exp(-std::get<ConstantAbsolute>(family_).coefficient * x);
  }

  /// u over qualities and the no-service outcome (worth exactly 0).
  double value(Outcome o) const { return o.is_none ? 0.0 : value(o.x); }

  const Family& family() const { return family_; }

 private:
  struct TabulatedCurve {
    Pchip curve;
    double tail_rate;  // exponential decay beyond the last sample
  };

  static ExponentialDiscount check_rate(ExponentialDiscount f) {
    if (!(f.rate > 0.0)) {
      throw std::invalid_argument("ExponentialDiscount: rate must be > 0");
    }
    return f;
  }
  static ConstantRelative check_rho(ConstantRelative f) {
    if (!(f.rho > 0.0)) {
      throw std::invalid_argument("ConstantRelative: rho must be > 0");
    }
    return f;
  }
  static ConstantAbsolute check_coeff(ConstantAbsolute f) {
    if (!(f.coefficient > 0.0)) {
      throw std::invalid_argument("ConstantAbsolute: coefficient must be > 0");
    }
    return f;
  }

  static Tabulated check_samples(Tabulated f) {
    if (f.xs.empty() || f.xs.front() != 0.0) {
      throw std::invalid_argument("Tabulated: samples must start at x = 0");
    }
    if (f.xs.size() != f.values.size() || f.xs.size() < 2) {
      throw std::invalid_argument("Tabulated: need >= 2 matching samples");
    }
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (!(f.values[i] > 0.0)) {
        throw std::invalid_argument("Tabulated: values must be positive");
      }
      if (i > 0 && !(f.values[i] < f.values[i - 1])) {
        throw std::invalid_argument(
            "Tabulated: values must be strictly decreasing");
      }
    }
    return f;
  }

  void build_curve() {
    const auto& f = std::get<Tabulated>(family_);
    Pchip curve(f.xs, f.values);
    double lambda = -curve.slope_back() / curve.y_back();
    if (!(lambda > 0.0)) {
      const std::size_t n = f.xs.size();
      lambda = std::log(f.values[n - 2] / f.values[n - 1]) /
               (f.xs[n - 1] - f.xs[n - 2]);
    }
    curve_ = std::make_shared<const TabulatedCurve>(
        TabulatedCurve{std::move(curve), lambda});
  }

  Family family_;
  std::shared_ptr<const TabulatedCurve> curve_;  // only for Tabulated
};

/// Absolute-risk-aversion estimate u''(x)/u'(x) by central differences.
inline double ara_estimate(const Utility& u, double x, double h) {
  const double lo = std::max(0.0, x - h);
  const double um = u.value(lo), u0 = u.value(lo + h), up = u.value(lo + 2 * h);
  const double d1 = (up - um) / (2.0 * h);
  const double d2 = (up - 2.0 * u0 + um) / (h * h);
  return d2 / d1;
}

}  // namespace alloq
