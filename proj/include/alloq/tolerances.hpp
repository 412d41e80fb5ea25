#pragma once

namespace alloq::tol {

// Mass comparisons (lottery totals, feasibility residuals).
inline constexpr double mass = 1e-7;

// Incentive-constraint binding detection, in utility units.
inline constexpr double ic = 1e-6;

// Root finding in quality units.
inline constexpr double x = 1e-9;

// Absolute quadrature tolerance per lottery segment.
inline constexpr double quad = 1e-8;

// Inverse-pair accuracy required of supply CDF/quantile.
inline constexpr double quantile = 1e-9;

}  // namespace alloq::tol
