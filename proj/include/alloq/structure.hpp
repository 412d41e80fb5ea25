#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "alloq/payoffs.hpp"
#include "alloq/roots.hpp"

namespace alloq {

/// Witness of an inverted spread: the more risk-averse type holds mass
/// on A and C around the less risk-averse type's mass on B. C may be
/// the no-service outcome, which ranks below every quality.
struct SpreadWitness {
  Interval a;
  Interval b;
  Interval c;
  bool c_is_no_service = false;
};

namespace detail {

/// Smallest t with q([0, t]) >= m; assumes m <= total goods mass.
inline double lottery_lower_quantile(const Lottery& q, const Supply& s,
                                     double m) {
  double acc = 0.0;
  for (const auto& seg : q.segments()) {
    const double seg_mass = seg.scale * s.mass(seg.lo, seg.hi);
    if (acc + seg_mass >= m) {
      return s.quantile(s.cdf(seg.lo) + (m - acc) / seg.scale);
    }
    acc += seg_mass;
  }
  return q.has_goods() ? q.support_hi() : 0.0;
}

/// Largest t with q([t, X]) >= m (goods part only).
inline double lottery_upper_quantile(const Lottery& q, const Supply& s,
                                     double m) {
  double acc = 0.0;
  for (auto it = q.segments().rbegin(); it != q.segments().rend(); ++it) {
    const double seg_mass = it->scale * s.mass(it->lo, it->hi);
    if (acc + seg_mass >= m) {
      return s.quantile(s.cdf(it->hi) - (m - acc) / it->scale);
    }
    acc += seg_mass;
  }
  return q.has_goods() ? q.support_lo() : 0.0;
}

/// Smallest t with q([lo, t] /\ [lo, hi]) >= m.
inline double lottery_lower_quantile_in(const Lottery& q, const Supply& s,
                                        double lo, double hi, double m) {
  double acc = 0.0;
  for (const auto& seg : q.segments()) {
    const double a = std::max(seg.lo, lo), b = std::min(seg.hi, hi);
    if (b <= a) {
      continue;
    }
    const double seg_mass = seg.scale * s.mass(a, b);
    if (acc + seg_mass >= m) {
      return s.quantile(s.cdf(a) + (m - acc) / seg.scale);
    }
    acc += seg_mass;
  }
  return hi;
}

inline double lottery_upper_quantile_in(const Lottery& q, const Supply& s,
                                        double lo, double hi, double m) {
  double acc = 0.0;
  for (auto it = q.segments().rbegin(); it != q.segments().rend(); ++it) {
    const double a = std::max(it->lo, lo), b = std::min(it->hi, hi);
    if (b <= a) {
      continue;
    }
    const double seg_mass = it->scale * s.mass(a, b);
    if (acc + seg_mass >= m) {
      return s.quantile(s.cdf(b) - (m - acc) / it->scale);
    }
    acc += seg_mass;
  }
  return lo;
}

}  // namespace detail

/// Looks for A < B < C with q_i(A), q_j(B), q_i(C) all above the mass
/// tolerance, where i is the more risk-averse type. C may contain the
/// no-service outcome. Returns nothing for allocations free of inverted
/// spreads.
inline std::optional<SpreadWitness> detect_inverted_spread(
    const Allocation& alloc, const Economy& e, std::size_t i, std::size_t j,
    double eps_mass = tol::mass) {
  if (i >= j) {
    throw std::invalid_argument(
        "detect_inverted_spread: need i < j (i more risk-averse)");
  }
  const Supply& s = e.supply();
  const Lottery& qi = alloc[i];
  const Lottery& qj = alloc[j];
  const double X = s.max_quality();
  const double level = 1.5 * eps_mass;

  const double goods_i = qi.mass_on(s, 0.0, X);
  const double atom_i = qi.atom_weight();
  if (goods_i < level || goods_i + atom_i < 2.0 * level) {
    return std::nullopt;  // q_i cannot supply both A and C
  }
  // A takes the lowest `level` of q_i's mass; C the highest (or the
  // no-service atom when it is heavy enough).
  const double t1 = detail::lottery_lower_quantile(qi, s, level);
  const bool c_none = atom_i >= level;
  const double t2 = c_none ? X : detail::lottery_upper_quantile(qi, s, level);
  if (!(t2 > t1) || qj.mass_on(s, t1, t2) <= level) {
    return std::nullopt;
  }
  SpreadWitness w;
  w.a = {qi.has_goods() ? qi.support_lo() : 0.0, t1};
  w.c_is_no_service = c_none;
  if (!c_none) {
    w.c = {t2, qi.support_hi()};
  }
  // Trim a quarter tolerance of q_j mass off each end of (t1, t2) so
  // that A < B < C holds with strict inequalities.
  const double trim = 0.25 * eps_mass;
  w.b = {detail::lottery_lower_quantile_in(qj, s, t1, t2, trim),
         detail::lottery_upper_quantile_in(qj, s, t1, t2, trim)};
  return w;
}

/// Witness of disposal for type k: supply left unassigned on A while
/// q_k puts mass on strictly worse outcomes B (possibly no service).
struct DisposalWitness {
  Interval a;
  Interval b;
  bool b_is_no_service = false;
};

inline std::optional<DisposalWitness> detect_disposal(
    const Allocation& alloc, const Economy& e, std::size_t k,
    double eps_mass = tol::mass) {
  const Supply& s = e.supply();
  const auto pieces = residual_pieces(alloc, e.masses(), s);
  const Lottery& qk = alloc[k];
  const double X = s.max_quality();
  const double level = 1.5 * eps_mass;

  // Smallest t accumulating `level` of unassigned supply below it.
  double t = X;
  double a_lo = X;
  {
    double acc = 0.0;
    bool found = false;
    for (const auto& p : pieces) {
      if (p.kappa <= 0.0) {
        continue;
      }
      const double piece_mass = p.kappa * s.mass(p.lo, p.hi);
      if (acc == 0.0) {
        a_lo = p.lo;
      }
      if (acc + piece_mass >= level) {
        t = s.quantile(s.cdf(p.lo) + (level - acc) / p.kappa);
        found = true;
        break;
      }
      acc += piece_mass;
    }
    if (!found) {
      return std::nullopt;
    }
  }
  const double after = qk.mass_on(s, t, X);
  const double atom = qk.atom_weight();
  if (after + atom <= level) {
    return std::nullopt;
  }
  DisposalWitness w;
  w.a = {a_lo, t};
  if (atom >= level) {
    w.b_is_no_service = true;
  } else {
    const double trim = 0.25 * eps_mass;
    w.b = {detail::lottery_lower_quantile_in(qk, s, t, X, trim),
           detail::lottery_upper_quantile_in(qk, s, t, X, trim)};
  }
  return w;
}

/// Pairwise expected utilities, incentive slacks, and binding flags.
struct ICMatrix {
  std::vector<std::vector<double>> values;  // values[k][j] = V_k(q_j)
  std::vector<std::vector<double>> slack;   // V_k(q_k) - V_k(q_j)
  std::vector<std::vector<bool>> binding;   // |slack| <= eps_ic, k != j
  double eps_ic = tol::ic;

  bool feasible() const {
    for (std::size_t k = 0; k < slack.size(); ++k) {
      for (std::size_t j = 0; j < slack.size(); ++j) {
        if (k != j && slack[k][j] < -eps_ic) {
          return false;
        }
      }
    }
    return true;
  }

  bool any_binding() const {
    for (std::size_t k = 0; k < binding.size(); ++k) {
      for (std::size_t j = 0; j < binding.size(); ++j) {
        if (k != j && binding[k][j]) {
          return true;
        }
      }
    }
    return false;
  }
};

inline ICMatrix ic_matrix(const Allocation& a, const Economy& e,
                          double eps_ic = tol::ic) {
  const std::size_t n = e.n_types();
  ICMatrix m;
  m.eps_ic = eps_ic;
  m.values.assign(n, std::vector<double>(n, 0.0));
  m.slack.assign(n, std::vector<double>(n, 0.0));
  m.binding.assign(n, std::vector<bool>(n, false));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      m.values[k][j] = expected_utility(a[j], e.utility(k), e.supply());
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      m.slack[k][j] = m.values[k][k] - m.values[k][j];
      m.binding[k][j] = (k != j) && std::abs(m.slack[k][j]) <= eps_ic;
    }
  }
  return m;
}

/// The unique gamma in (0, 1) that makes utility u indifferent between
/// gamma * f|A + (1 - gamma) * f|C and f|B, for A < B < C.
inline double indifference_mix(const Utility& u, std::vector<Interval> a,
                               std::vector<Interval> b, std::vector<Interval> c,
                               const Supply& s) {
  auto ordered = [](const std::vector<Interval>& lo,
                    const std::vector<Interval>& hi) {
    double lo_max = -1.0, hi_min = 1e300;
    for (const auto& p : lo) {
      lo_max = std::max(lo_max, p.hi);
    }
    for (const auto& p : hi) {
      hi_min = std::min(hi_min, p.lo);
    }
    return lo_max <= hi_min + 1e-12;
  };
  auto positive_mass = [&](const std::vector<Interval>& parts) {
    double m = 0.0;
    for (const auto& p : parts) {
      m += s.mass(p.lo, p.hi);
    }
    return m > 0.0;
  };
  if (a.empty() || b.empty() || c.empty() || !ordered(a, b) ||
      !ordered(b, c) || !positive_mass(a) || !positive_mass(b) ||
      !positive_mass(c)) {
    throw std::invalid_argument(
        "indifference_mix: need ordered interval sets with positive mass");
  }
  const double va = expected_utility(Lottery::restriction(s, a), u, s);
  const double vb = expected_utility(Lottery::restriction(s, b), u, s);
  const double vc = expected_utility(Lottery::restriction(s, c), u, s);
  if (!(va > vb && vb > vc)) {
    throw NumericError("indifference_mix: values not strictly ordered");
  }
  // h(gamma) = gamma*va + (1-gamma)*vc - vb is increasing; bisect until
  // the indifference residual is below 1e-10.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double h = mid * va + (1.0 - mid) * vc - vb;
    if (std::abs(h) <= 1e-10) {
      return mid;
    }
    (h < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace alloq
