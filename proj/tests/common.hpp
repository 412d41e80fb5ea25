#pragma once

#include <random>

#include "alloq/economy.hpp"
#include "alloq/payoffs.hpp"

namespace alloq::test {

// Canonical scenario: equal masses and weights, supply of total mass
// 3/2 spread uniformly over [0, 5].
inline Supply canonical_supply() { return Supply::uniform(0.3, 5.0); }

inline Economy e0(double r_p, double r_i, double alpha = 0.5) {
  return Economy::two_type(Utility::exponential(r_p),
                           Utility::exponential(r_i), 0.5, 0.5, alpha,
                           canonical_supply());
}

// Deterministic uniform draw in [lo, hi) from raw generator bits.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = (rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

}  // namespace alloq::test
