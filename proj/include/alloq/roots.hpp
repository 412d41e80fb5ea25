#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace alloq {

struct RootResult {
  double x = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Bisection on [lo, hi]. Requires a sign change; throws otherwise.
template <class F>
RootResult bisect(const F& f, double lo, double hi, double xtol = 1e-12,
                  int maxit = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return {lo, 0, true};
  if (fhi == 0.0) return {hi, 0, true};
  if ((flo > 0) == (fhi > 0)) {
    throw std::invalid_argument("bisect: root not bracketed");
  }
  int it = 0;
  while (hi - lo > xtol && it < maxit) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return {mid, it, true};
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    ++it;
  }
  return {0.5 * (lo + hi), it, hi - lo <= xtol};
}

/// Golden-section maximization of a quasi-concave f on [lo, hi].
template <class F>
RootResult golden_max(const F& f, double lo, double hi, double xtol = 1e-10,
                      int maxit = 200) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int it = 0;
  while (b - a > xtol && it < maxit) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
    ++it;
  }
  const double xm = 0.5 * (a + b);
  // The peak may sit at an endpoint of the original interval.
  double best = xm, fbest = f(xm);
  if (f(lo) > fbest) {
    best = lo;
    fbest = f(lo);
  }
  if (f(hi) > fbest) {
    best = hi;
  }
  return {best, it, b - a <= xtol};
}

}  // namespace alloq
