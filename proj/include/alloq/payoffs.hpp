#pragma once

#include <vector>

#include "alloq/economy.hpp"
#include "alloq/lottery.hpp"
#include "alloq/quadrature.hpp"
#include "alloq/tolerances.hpp"

namespace alloq {

/// Expected utility of lottery q under u: the integral of u against the
/// lottery density (the no-service atom contributes zero).
inline double expected_utility(const Lottery& q, const Utility& u,
                               const Supply& s) {
  double v = 0.0;
  for (const auto& seg : q.segments()) {
    if (seg.scale <= 0.0) {
      continue;
    }
    v += seg.scale *
         integrate([&](double x) { return u.value(x) * s.density(x); },
                   seg.lo, seg.hi, tol::quad);
  }
  return v;
}

/// Weighted utilitarian welfare: sum_i w_i mu_i V_i(q_i).
inline double welfare(const Allocation& a, const Economy& e) {
  if (a.size() != e.n_types()) {
    throw std::invalid_argument("welfare: allocation/economy type mismatch");
  }
  double w = 0.0;
  for (std::size_t i = 0; i < e.n_types(); ++i) {
    w += e.weight(i) * e.mass(i) *
         expected_utility(a[i], e.utility(i), e.supply());
  }
  return w;
}

/// Every type gets the same uniform share of the best goods: f|[0, Xbar].
inline Allocation pooling_allocation(const Economy& e) {
  const double x_bar = e.x_bar();
  const Lottery pool = Lottery::restriction(e.supply(), Interval{0.0, x_bar});
  Allocation a;
  a.lotteries.assign(e.n_types(), pool);
  return a;
}

}  // namespace alloq
