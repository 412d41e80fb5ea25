#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "alloq/errors.hpp"
#include "alloq/supply.hpp"
#include "alloq/tolerances.hpp"
#include "alloq/utility.hpp"

namespace alloq {

struct AraViolation {
  std::size_t pair_first = 0;  // types (pair_first, pair_first + 1)
  double x = 0.0;
  double ara_first = 0.0;
  double ara_second = 0.0;
};

struct AraReport {
  std::vector<AraViolation> violations;
  bool valid() const { return violations.empty(); }
};

/// Agents of N types sharing an ordinal ranking of qualities. Type 0 is
/// the most risk-averse (for two types: 0 = P, 1 = I). Weights enter
/// welfare as given; two-type economies built from a scalar alpha carry
/// weights (alpha, 1 - alpha).
class Economy {
 public:
  Economy(std::vector<Utility> utilities, std::vector<double> masses,
          std::vector<double> weights, Supply supply,
          bool enforce_ara_order = true)
      : utilities_(std::move(utilities)),
        masses_(std::move(masses)),
        weights_(std::move(weights)),
        supply_(std::move(supply)) {
    const std::size_t n = utilities_.size();
    if (n == 0 || masses_.size() != n || weights_.size() != n) {
      throw std::invalid_argument("Economy: mismatched type vectors");
    }
    for (double m : masses_) {
      if (!(m > 0.0)) {
        throw std::invalid_argument("Economy: masses must be positive");
      }
    }
    for (double w : weights_) {
      if (!(w > 0.0)) {
        throw std::invalid_argument("Economy: weights must be positive");
      }
    }
    if (total_mass() > supply_.total_mass() + tol::mass) {
      throw InfeasibleError(
          "Economy: insufficient supply (total demand " +
          std::to_string(total_mass()) + " > " +
          std::to_string(supply_.total_mass()) + ")");
    }
    if (enforce_ara_order && n >= 2) {
      const AraReport report = validate_ara_order(*this, 64);
      if (!report.valid()) {
        const auto& v = report.violations.front();
        throw std::invalid_argument(
            "Economy: risk-aversion order violated for types " +
            std::to_string(v.pair_first) + "," +
            std::to_string(v.pair_first + 1) + " at x = " +
            std::to_string(v.x));
      }
    }
  }

  static Economy two_type(Utility pat, Utility imp, double mu_p, double mu_i,
                          double alpha, Supply supply) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw std::invalid_argument("Economy: alpha must lie in (0, 1)");
    }
    return Economy({std::move(pat), std::move(imp)}, {mu_p, mu_i},
                   {alpha, 1.0 - alpha}, std::move(supply));
  }

  std::size_t n_types() const { return utilities_.size(); }
  const Utility& utility(std::size_t i) const { return utilities_.at(i); }
  double mass(std::size_t i) const { return masses_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<double>& masses() const { return masses_; }
  const std::vector<double>& weights() const { return weights_; }
  const Supply& supply() const { return supply_; }

  double total_mass() const {
    return std::accumulate(masses_.begin(), masses_.end(), 0.0);
  }

  /// Lowest quality needed to exhaust all demand from the top.
  double x_bar() const { return supply_.quantile(total_mass()); }

  /// Lowest quality needed if type i alone took the best goods.
  double x_bar_type(std::size_t i) const {
    return supply_.quantile(mass(i));
  }

  void require_two_types(const char* op) const {
    if (n_types() != 2) {
      throw std::invalid_argument(std::string(op) +
                                  ": economy must have exactly 2 types");
    }
  }

  friend AraReport validate_ara_order(const Economy& e, int grid_n);

 private:
  std::vector<Utility> utilities_;
  std::vector<double> masses_;
  std::vector<double> weights_;
  Supply supply_;
};

/// Checks the pairwise risk-aversion ordering u_i''/u_i' > u_{i+1}''/u_{i+1}'
/// on a grid over [0, X] by central differences. An empty report means
/// the ordering holds.
inline AraReport validate_ara_order(const Economy& e, int grid_n) {
  if (grid_n < 16) {
    throw std::invalid_argument("validate_ara_order: grid_n must be >= 16");
  }
  const double X = e.supply().max_quality();
  const double h = 1e-4 * X;
  AraReport report;
  for (std::size_t i = 0; i + 1 < e.n_types(); ++i) {
    for (int k = 0; k < grid_n; ++k) {
      const double x = X * (k + 0.5) / grid_n;
      const double a0 = ara_estimate(e.utility(i), x, h);
      const double a1 = ara_estimate(e.utility(i + 1), x, h);
      if (!std::isfinite(a0) || !std::isfinite(a1)) {
        throw NumericError("validate_ara_order: non-finite derivative at x = " +
                           std::to_string(x));
      }
      if (!(a0 > a1)) {
        report.violations.push_back({i, x, a0, a1});
      }
    }
  }
  return report;
}

}  // namespace alloq
