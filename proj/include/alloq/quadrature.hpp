#pragma once

#include <cmath>
#include <stdexcept>

namespace alloq {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (QUADPACK constants).
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double g7_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * gk_nodes[i]);
    fv[14 - i] = f(c + h * gk_nodes[i]);
  }
  fv[7] = f(c);
  double kronrod = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    kronrod += gk_weights[i] * (i == 7 ? fv[7] : fv[i] + fv[14 - i]);
  }
  // Gauss-7 uses the odd Kronrod nodes.
  for (int i = 0; i < 4; ++i) {
    const int j = 2 * i + 1;
    gauss += g7_weights[i] * (j == 7 ? fv[7] : fv[j] + fv[14 - j]);
  }
  result = kronrod * h;
  err = std::abs((kronrod - gauss) * h);
}

template <class F>
double integrate_rec(const F& f, double a, double b, double tol, int depth) {
  double result, err;
  gk15(f, a, b, result, err);
  if (err <= tol || depth >= 48) {
    return result;
  }
  const double c = 0.5 * (a + b);
  return integrate_rec(f, a, c, 0.5 * tol, depth + 1) +
         integrate_rec(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] to absolute
/// tolerance abstol.
template <class F>
double integrate(const F& f, double a, double b, double abstol = 1e-10) {
  if (!(a <= b)) {
    throw std::invalid_argument("integrate: a > b");
  }
  if (a == b) {
    return 0.0;
  }
  return detail::integrate_rec(f, a, b, abstol, 0);
}

}  // namespace alloq
