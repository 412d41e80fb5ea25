#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "alloq/errors.hpp"
#include "alloq/supply.hpp"
#include "alloq/tolerances.hpp"

namespace alloq {

/// A quality interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// One lottery piece: the supply restriction f|[lo, hi] scaled by a
/// nonnegative factor, so the lottery density there is scale * f(x).
struct LotterySegment {
  double lo = 0.0;
  double hi = 0.0;
  double scale = 0.0;
};

/// A probability measure over qualities plus an atom at the no-service
/// outcome. The density over [0, X] is proportional to the supply
/// density piecewise; there are no atoms on [0, X].
class Lottery {
 public:
  /// f|A for a union of disjoint intervals A.
  static Lottery restriction(const Supply& s, std::vector<Interval> parts) {
    return scaled_restriction(s, std::move(parts), 0.0);
  }

  static Lottery restriction(const Supply& s, Interval part) {
    return restriction(s, std::vector<Interval>{part});
  }

  /// (1 - atom) * f|A + atom * delta_none.
  static Lottery scaled_restriction(const Supply& s,
                                    std::vector<Interval> parts, double atom) {
    if (!(atom >= 0.0 && atom <= 1.0)) {
      throw std::invalid_argument("Lottery: atom weight outside [0, 1]");
    }
    Lottery q;
    q.atom_ = atom;
    double total = 0.0;
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const Interval& p : parts) {
      if (p.width() <= 0.0) {
        continue;
      }
      total += s.mass(p.lo, p.hi);
      q.segments_.push_back({p.lo, p.hi, 0.0});
    }
    if (q.segments_.empty()) {
      if (std::abs(atom - 1.0) > tol::mass) {
        throw std::invalid_argument(
            "Lottery: empty support requires a full no-service atom");
      }
      q.atom_ = 1.0;
      return q;
    }
    if (!(total > 0.0)) {
      throw std::invalid_argument("Lottery: support carries no supply mass");
    }
    const double scale = (1.0 - atom) / total;
    for (auto& seg : q.segments_) {
      seg.scale = scale;
    }
    q.check_invariants(s);
    return q;
  }

  /// Lottery with the full atom at the no-service outcome.
  static Lottery no_service() {
    Lottery q;
    q.atom_ = 1.0;
    return q;
  }

  /// Convex combination lambda * a + (1 - lambda) * b.
  static Lottery mix(const Supply& s, const Lottery& a, const Lottery& b,
                     double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw std::invalid_argument("Lottery::mix: lambda outside [0, 1]");
    }
    std::vector<double> cuts;
    for (const auto& seg : a.segments_) {
      cuts.push_back(seg.lo);
      cuts.push_back(seg.hi);
    }
    for (const auto& seg : b.segments_) {
      cuts.push_back(seg.lo);
      cuts.push_back(seg.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Lottery q;
    q.atom_ = lambda * a.atom_ + (1.0 - lambda) * b.atom_;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      const double mid = 0.5 * (lo + hi);
      const double scale =
          lambda * a.scale_at(mid) + (1.0 - lambda) * b.scale_at(mid);
      if (scale > 0.0) {
        if (!q.segments_.empty() && q.segments_.back().hi == lo &&
            q.segments_.back().scale == scale) {
          q.segments_.back().hi = hi;
        } else {
          q.segments_.push_back({lo, hi, scale});
        }
      }
    }
    q.check_invariants(s);
    return q;
  }

  const std::vector<LotterySegment>& segments() const { return segments_; }
  double atom_weight() const { return atom_; }

  /// Density multiplier applied to f at quality x.
  double scale_at(double x) const {
    for (const auto& seg : segments_) {
      if (x >= seg.lo && x <= seg.hi) {
        return seg.scale;
      }
    }
    return 0.0;
  }

  /// Probability mass the lottery puts on [lo, hi].
  double mass_on(const Supply& s, double lo, double hi) const {
    double m = 0.0;
    for (const auto& seg : segments_) {
      const double a = std::max(lo, seg.lo), b = std::min(hi, seg.hi);
      if (b > a) {
        m += seg.scale * s.mass(a, b);
      }
    }
    return m;
  }

  double total_mass(const Supply& s) const {
    return mass_on(s, 0.0, s.max_quality()) + atom_;
  }

  /// Smallest and largest supported quality; meaningful only when some
  /// segment is present.
  double support_lo() const { return segments_.front().lo; }
  double support_hi() const { return segments_.back().hi; }
  bool has_goods() const { return !segments_.empty(); }

  void check_invariants(const Supply& s) const {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (!(segments_[i].lo >= -1e-12 &&
            segments_[i].hi <= s.max_quality() + 1e-9 &&
            segments_[i].lo < segments_[i].hi)) {
        throw std::invalid_argument("Lottery: malformed segment");
      }
      if (i > 0 && segments_[i].lo < segments_[i - 1].hi - 1e-12) {
        throw std::invalid_argument("Lottery: overlapping segments");
      }
      if (!(segments_[i].scale >= 0.0)) {
        throw std::invalid_argument("Lottery: negative segment scale");
      }
    }
    const double total = total_mass(s);
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("Lottery: total mass " +
                                  std::to_string(total) + " is not 1");
    }
  }

 private:
  std::vector<LotterySegment> segments_;
  double atom_ = 0.0;
};

/// Per-type lotteries.
struct Allocation {
  std::vector<Lottery> lotteries;

  const Lottery& operator[](std::size_t i) const { return lotteries.at(i); }
  std::size_t size() const { return lotteries.size(); }
};

/// One piece of the residual density f - sum_i mu_i q_i, which is
/// kappa * f(x) on [lo, hi].
struct ResidualPiece {
  double lo = 0.0;
  double hi = 0.0;
  double kappa = 0.0;
};

/// Piecewise form of the unassigned supply density over [0, X].
inline std::vector<ResidualPiece> residual_pieces(
    const Allocation& a, const std::vector<double>& masses, const Supply& s) {
  std::vector<double> cuts = {0.0, s.max_quality()};
  for (const auto& q : a.lotteries) {
    for (const auto& seg : q.segments()) {
      cuts.push_back(seg.lo);
      cuts.push_back(seg.hi);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<ResidualPiece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi <= lo) {
      continue;
    }
    const double mid = 0.5 * (lo + hi);
    double used = 0.0;
    for (std::size_t t = 0; t < a.lotteries.size(); ++t) {
      used += masses[t] * a.lotteries[t].scale_at(mid);
    }
    pieces.push_back({lo, hi, 1.0 - used});
  }
  return pieces;
}

/// Residual supply mass on [lo, hi].
inline double residual_mass(const std::vector<ResidualPiece>& pieces,
                            const Supply& s, double lo, double hi) {
  double m = 0.0;
  for (const auto& p : pieces) {
    const double a = std::max(lo, p.lo), b = std::min(hi, p.hi);
    if (b > a) {
      m += p.kappa * s.mass(a, b);
    }
  }
  return m;
}

/// Most negative residual density over [0, X]; >= -1e-9 means feasible.
inline double min_residual_density(const std::vector<ResidualPiece>& pieces,
                                   const Supply& s) {
  double worst = 0.0;
  for (const auto& p : pieces) {
    const double fmax = std::max(
        {s.density(p.lo), s.density(0.5 * (p.lo + p.hi)), s.density(p.hi)});
    const double fmin = std::min(
        {s.density(p.lo), s.density(0.5 * (p.lo + p.hi)), s.density(p.hi)});
    worst = std::min(worst, p.kappa * (p.kappa >= 0.0 ? fmin : fmax));
  }
  return worst;
}

}  // namespace alloq
