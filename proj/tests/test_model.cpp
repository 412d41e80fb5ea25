#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "alloq/structure.hpp"
#include "common.hpp"

using namespace alloq;
using Catch::Approx;

TEST_CASE("utility values and the no-service normalization") {
  const Utility u = Utility::exponential(1.0);
  CHECK(u.value(Outcome::none()) == 0.0);
  CHECK(u.value(0.0) == 1.0);
  CHECK(Utility::exponential(0.5).value(2.0) == Approx(std::exp(-1.0)));

  CHECK_THROWS_AS(u.value(-0.5), std::domain_error);
  CHECK_THROWS_AS(u.value(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(Utility::exponential(0.0), std::invalid_argument);
}

TEST_CASE("utility families are positive, decreasing, vanishing") {
  const std::vector<Utility> us = {
      Utility::exponential(0.7), Utility::crra(1.3), Utility::cara(0.4),
      Utility::tabulated({0.0, 1.0, 2.5, 5.0}, {1.0, 0.5, 0.2, 0.05})};
  for (const auto& u : us) {
    double prev = u.value(0.0);
    CHECK(prev > 0.0);
    for (int k = 1; k <= 64; ++k) {
      const double x = 8.0 * k / 64.0;
      const double v = u.value(x);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(u.value(200.0) < 1e-2);
  }
  CHECK(Utility::crra(2.0).value(1.0) == Approx(0.25));
  CHECK(Utility::cara(2.0).value(1.0) == Approx(std::exp(-2.0)));
}

TEST_CASE("tabulated utility interpolates its samples monotonically") {
  const Utility u =
      Utility::tabulated({0.0, 1.0, 2.0, 4.0}, {1.0, 0.6, 0.35, 0.1});
  CHECK(u.value(1.0) == Approx(0.6));
  CHECK(u.value(4.0) == Approx(0.1));
  CHECK(u.value(0.5) < 1.0);
  CHECK(u.value(0.5) > 0.6);
  // Tail decays toward zero.
  CHECK(u.value(6.0) < 0.1);
  CHECK(u.value(30.0) < 1e-3);
  CHECK_THROWS_AS(Utility::tabulated({0.0, 1.0}, {0.5, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("risk-aversion order validation") {
  const Supply s = test::canonical_supply();
  SECTION("ordered exponential rates are valid") {
    const Economy e = test::e0(0.5, 1.0);
    CHECK(validate_ara_order(e, 32).valid());
  }
  SECTION("equal rates violate the strict order everywhere") {
    Economy e({Utility::exponential(1.0), Utility::exponential(1.0)},
              {0.5, 0.5}, {0.5, 0.5}, s, false);
    const auto report = validate_ara_order(e, 32);
    CHECK(report.violations.size() == 32);
  }
  SECTION("reversed rates are flagged") {
    Economy e({Utility::exponential(2.0), Utility::exponential(0.5)},
              {0.5, 0.5}, {0.5, 0.5}, s, false);
    CHECK_FALSE(validate_ara_order(e, 32).valid());
    CHECK_THROWS_AS(test::e0(2.0, 0.5), std::invalid_argument);
  }
  SECTION("grid too coarse is rejected") {
    const Economy e = test::e0(0.5, 1.0);
    CHECK_THROWS_AS(validate_ara_order(e, 8), std::invalid_argument);
  }
}

TEST_CASE("supply cdf and quantile are exact inverses") {
  SECTION("uniform: canonical values") {
    const Supply s = test::canonical_supply();
    CHECK(s.cdf(5.0) == Approx(1.5));
    CHECK(s.quantile(1.0) == Approx(10.0 / 3.0));
    CHECK(s.quantile(0.5) == Approx(5.0 / 3.0));
    CHECK_THROWS_AS(s.quantile(1.6), InsufficientMassError);
  }
  const std::vector<Supply> supplies = {
      test::canonical_supply(),
      Supply(PiecewiseLinearSupply{{{0.0, 0.1}, {2.0, 0.6}, {5.0, 0.2}}}),
      Supply(TabulatedSupply{{0.0, 1.0, 2.0, 3.5, 5.0},
                             {0.2, 0.5, 0.45, 0.3, 0.25}})};
  std::mt19937_64 rng(12345);
  for (const auto& s : supplies) {
    for (int k = 0; k < 200; ++k) {
      const double x = test::uniform(rng, 0.0, s.max_quality());
      CHECK(std::abs(s.quantile(s.cdf(x)) - x) < 1e-9);
      CHECK(s.density(x) > 0.0);
    }
    CHECK(s.quantile(0.0) == 0.0);
    CHECK(s.quantile(s.total_mass()) == Approx(s.max_quality()));
  }
}

TEST_CASE("expected utility of canonical lotteries") {
  const Supply s = test::canonical_supply();
  const Utility u = Utility::exponential(1.0);
  SECTION("full atom is worth zero") {
    CHECK(expected_utility(Lottery::no_service(), u, s) == 0.0);
  }
  SECTION("pooling lottery matches the closed-form integral") {
    const Lottery pool = Lottery::restriction(s, Interval{0.0, 10.0 / 3.0});
    const double expect = 0.3 * (1.0 - std::exp(-10.0 / 3.0));
    CHECK(expected_utility(pool, u, s) == Approx(expect).epsilon(1e-8));
    CHECK(expected_utility(pool, u, s) == Approx(0.28930).margin(5e-6));
  }
  SECTION("half atom halves the value") {
    const Lottery q = Lottery::scaled_restriction(
        s, {Interval{0.0, 10.0 / 3.0}}, 0.5);
    const double expect = 0.5 * 0.3 * (1.0 - std::exp(-10.0 / 3.0));
    CHECK(expected_utility(q, u, s) == Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("expected utility is linear in the lottery") {
  const Supply s = test::canonical_supply();
  const Utility u = Utility::exponential(0.8);
  std::mt19937_64 rng(777);
  for (int k = 0; k < 50; ++k) {
    const double a = test::uniform(rng, 0.0, 2.0);
    const double b = a + test::uniform(rng, 0.1, 2.0);
    const Lottery q1 = Lottery::restriction(s, Interval{a, b});
    const Lottery q2 = Lottery::scaled_restriction(
        s, {Interval{0.0, a}, Interval{b, 5.0}}, test::uniform(rng, 0.0, 0.5));
    const double lambda = test::uniform(rng, 0.0, 1.0);
    const Lottery mixed = Lottery::mix(s, q1, q2, lambda);
    const double direct = expected_utility(mixed, u, s);
    const double linear = lambda * expected_utility(q1, u, s) +
                          (1.0 - lambda) * expected_utility(q2, u, s);
    CHECK(std::abs(direct - linear) < 1e-9);
    CHECK(std::abs(mixed.total_mass(s) - 1.0) < 1e-9);
  }
}

TEST_CASE("welfare of simple allocations") {
  const Economy e = test::e0(1.0, 1.0001);
  SECTION("all no-service is worth zero") {
    Allocation a;
    a.lotteries.assign(2, Lottery::no_service());
    CHECK(welfare(a, e) == 0.0);
  }
  SECTION("pooling welfare from the expected-utility example") {
    // Both utilities essentially e^{-x}; welfare = 0.5 * 0.5 * V * 2.
    const Allocation pool = pooling_allocation(e);
    const double v = 0.3 * (1.0 - std::exp(-10.0 / 3.0));
    CHECK(welfare(pool, e) == Approx(0.5 * v).epsilon(1e-3));
  }
  SECTION("welfare scales linearly in the weights") {
    const Supply s = test::canonical_supply();
    Economy base({Utility::exponential(0.5), Utility::exponential(1.5)},
                 {0.4, 0.6}, {1.0, 1.0}, s);
    Economy doubled({Utility::exponential(0.5), Utility::exponential(1.5)},
                    {0.4, 0.6}, {2.0, 2.0}, s);
    const Allocation pool = pooling_allocation(base);
    CHECK(welfare(pool, doubled) == Approx(2.0 * welfare(pool, base)));
  }
  SECTION("type-count mismatch is rejected") {
    Allocation a;
    a.lotteries.assign(3, Lottery::no_service());
    CHECK_THROWS_AS(welfare(a, e), std::invalid_argument);
  }
}

TEST_CASE("pooling allocation structure") {
  const Economy e = test::e0(0.5, 1.0);
  const Allocation pool = pooling_allocation(e);
  REQUIRE(pool.size() == 2);
  for (const auto& q : pool.lotteries) {
    REQUIRE(q.segments().size() == 1);
    CHECK(q.segments()[0].lo == 0.0);
    CHECK(q.segments()[0].hi == Approx(10.0 / 3.0));
    CHECK(q.segments()[0].scale == Approx(1.0));  // mass of [0, Xbar] is 1
    CHECK(q.atom_weight() == 0.0);
  }
  // Pooling exhausts [0, Xbar] exactly.
  const auto pieces = residual_pieces(pool, e.masses(), e.supply());
  CHECK(std::abs(residual_mass(pieces, e.supply(), 0.0, 10.0 / 3.0)) < 1e-9);
  CHECK(min_residual_density(pieces, e.supply()) > -1e-9);

  SECTION("single type exhausting all supply") {
    Economy solo({Utility::exponential(1.0)}, {1.5}, {1.0},
                 test::canonical_supply());
    const Allocation a = pooling_allocation(solo);
    CHECK(a[0].segments()[0].hi == Approx(5.0));
    CHECK(a[0].total_mass(solo.supply()) == Approx(1.0));
  }
}

TEST_CASE("inverted-spread detector") {
  const Economy e = test::e0(0.5, 1.0);
  const Supply& s = e.supply();
  const double x_bar = 10.0 / 3.0;

  SECTION("pooling allocation exhibits an inverted spread") {
    const auto w = detect_inverted_spread(pooling_allocation(e), e, 0, 1);
    REQUIRE(w.has_value());
    CHECK(w->a.hi <= w->b.lo + 1e-12);
    CHECK(w->b.hi <= w->c.lo + 1e-12);
  }
  SECTION("IPI allocation has none") {
    Allocation a;
    a.lotteries.push_back(Lottery::restriction(s, Interval{1.0, 2.2}));
    a.lotteries.push_back(Lottery::restriction(
        s, {Interval{0.0, 1.0}, Interval{2.2, x_bar}}));
    CHECK_FALSE(detect_inverted_spread(a, e, 0, 1).has_value());
  }
  SECTION("explicit interleaving is caught") {
    Allocation a;
    a.lotteries.push_back(
        Lottery::restriction(s, {Interval{0.0, 1.0}, Interval{2.0, 3.0}}));
    a.lotteries.push_back(Lottery::restriction(s, Interval{1.0, 2.0}));
    const auto w = detect_inverted_spread(a, e, 0, 1);
    REQUIRE(w.has_value());
    CHECK(w->a.lo == Approx(0.0));
    CHECK(w->b.lo >= 1.0);
    CHECK(w->b.hi <= 2.0);
    CHECK(w->c.hi == Approx(3.0));
  }
  SECTION("a heavy no-service atom can close the spread") {
    Allocation a;
    a.lotteries.push_back(Lottery::scaled_restriction(
        s, {Interval{0.0, 1.0}}, 0.5));  // mass below + atom above
    a.lotteries.push_back(Lottery::restriction(s, Interval{1.5, 2.5}));
    const auto w = detect_inverted_spread(a, e, 0, 1);
    REQUIRE(w.has_value());
    CHECK(w->c_is_no_service);
  }
  SECTION("argument order is validated") {
    CHECK_THROWS_AS(detect_inverted_spread(pooling_allocation(e), e, 1, 1),
                    std::invalid_argument);
  }
  SECTION("randomized layouts: interleaved supports always witness") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 40; ++k) {
      const double c1 = test::uniform(rng, 0.3, 1.4);
      const double c2 = c1 + test::uniform(rng, 0.2, 1.0);
      const double c3 = c2 + test::uniform(rng, 0.2, 0.8);
      Allocation inner_j;  // i wraps around j: witness expected
      inner_j.lotteries.push_back(Lottery::restriction(
          s, {Interval{0.0, c1}, Interval{c2, c3}}));
      inner_j.lotteries.push_back(Lottery::restriction(s, Interval{c1, c2}));
      CHECK(detect_inverted_spread(inner_j, e, 0, 1).has_value());

      Allocation ipi;  // i inside j: no witness
      ipi.lotteries.push_back(Lottery::restriction(s, Interval{c1, c2}));
      ipi.lotteries.push_back(Lottery::restriction(
          s, {Interval{0.0, c1}, Interval{c2, c3}}));
      CHECK_FALSE(detect_inverted_spread(ipi, e, 0, 1).has_value());
    }
  }
}

TEST_CASE("disposal detector") {
  const Economy e = test::e0(0.5, 1.0);
  const Supply& s = e.supply();
  const double x_bar = 10.0 / 3.0;

  SECTION("exhausting the best goods leaves no disposal") {
    Allocation a;
    a.lotteries.push_back(Lottery::restriction(s, Interval{1.0, 2.2}));
    a.lotteries.push_back(Lottery::restriction(
        s, {Interval{0.0, 1.0}, Interval{2.2, x_bar}}));
    CHECK_FALSE(detect_disposal(a, e, 0).has_value());
    CHECK_FALSE(detect_disposal(a, e, 1).has_value());
  }
  SECTION("atom with unused supply below demand is disposal via no-service") {
    // I-types keep an atom while supply in (x3, Xbar] goes unused.
    Allocation a;
    a.lotteries.push_back(Lottery::restriction(s, Interval{0.5, 1.9}));
    a.lotteries.push_back(Lottery::scaled_restriction(
        s, {Interval{0.0, 0.5}, Interval{1.9, 2.8}}, 0.2));
    const auto w = detect_disposal(a, e, 1);
    REQUIRE(w.has_value());
    CHECK(w->b_is_no_service);
    CHECK_FALSE(detect_disposal(a, e, 0).has_value());
  }
  SECTION("a gap below assigned goods is disposal") {
    Allocation a;
    a.lotteries.push_back(Lottery::restriction(s, Interval{0.0, 1.0}));
    a.lotteries.push_back(Lottery::restriction(s, Interval{2.0, 3.0}));
    const auto w = detect_disposal(a, e, 1);
    REQUIRE(w.has_value());
    CHECK_FALSE(w->b_is_no_service);
    CHECK(w->a.lo >= 1.0);
    CHECK(w->b.hi <= 3.0 + 1e-9);
  }
}

TEST_CASE("incentive matrix") {
  const Economy e = test::e0(0.4, 1.3);
  const Supply& s = e.supply();
  const double x_bar = 10.0 / 3.0;
  const double x_bar_i = 5.0 / 3.0;

  SECTION("pooling slacks are exactly zero and all binding") {
    const auto m = ic_matrix(pooling_allocation(e), e);
    CHECK(m.slack[0][1] == 0.0);
    CHECK(m.slack[1][0] == 0.0);
    CHECK(m.binding[0][1]);
    CHECK(m.binding[1][0]);
    CHECK(m.feasible());
  }
  SECTION("IP structure: P envies I") {
    Allocation a;
    a.lotteries.push_back(Lottery::restriction(s, Interval{x_bar_i, x_bar}));
    a.lotteries.push_back(Lottery::restriction(s, Interval{0.0, x_bar_i}));
    const auto m = ic_matrix(a, e);
    CHECK(m.slack[0][1] < 0.0);
    CHECK_FALSE(m.feasible());
  }
  SECTION("first-order dominance: I envies P") {
    Allocation a;
    a.lotteries.push_back(Lottery::restriction(s, Interval{0.0, x_bar_i}));
    a.lotteries.push_back(Lottery::restriction(s, Interval{x_bar_i, x_bar}));
    const auto m = ic_matrix(a, e);
    CHECK(m.slack[1][0] < 0.0);
  }
}

TEST_CASE("indifference mix") {
  const Supply s = test::canonical_supply();
  SECTION("degenerate intervals approach the two-point closed form") {
    const double eps = 1e-4;
    const double gamma = indifference_mix(
        Utility::exponential(1.0), {Interval{0.0, eps}},
        {Interval{1.0, 1.0 + eps}}, {Interval{2.0, 2.0 + eps}}, s);
    const double expect =
        (std::exp(-1.0) - std::exp(-2.0)) / (1.0 - std::exp(-2.0));
    CHECK(gamma == Approx(expect).margin(1e-3));
    CHECK(expect == Approx(0.26894).margin(5e-6));
  }
  SECTION("a value midway between A and C gives one half") {
    // With u = e^{-x} on a uniform supply, pick B so V(f|B) is the
    // average of V(f|A) and V(f|C), then gamma must be 1/2.
    const Utility u = Utility::exponential(1.0);
    const Interval a{0.0, 0.5}, c{3.0, 3.5};
    const double va = expected_utility(Lottery::restriction(s, a), u, s);
    const double vc = expected_utility(Lottery::restriction(s, c), u, s);
    const double target = 0.5 * (va + vc);
    // Solve for the width-0.5 interval [b, b+0.5] with that value.
    auto vb = [&](double b) {
      return expected_utility(
                 Lottery::restriction(s, Interval{b, b + 0.5}), u, s) -
             target;
    };
    const double b = bisect(vb, 0.5, 3.0, 1e-12).x;
    const double gamma = indifference_mix(u, {a}, {Interval{b, b + 0.5}}, {c},
                                          s);
    CHECK(gamma == Approx(0.5).margin(1e-8));
  }
  SECTION("more risk-averse utilities mix with larger gamma") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 25; ++k) {
      const double a1 = test::uniform(rng, 0.1, 1.0);
      const double a2 = a1 + test::uniform(rng, 0.1, 0.8);
      const double b2 = a2 + test::uniform(rng, 0.1, 0.8);
      const double c2 = b2 + test::uniform(rng, 0.1, 0.8);
      const double r = test::uniform(rng, 0.1, 1.5);
      const double gap = test::uniform(rng, 0.05, 1.0);
      const std::vector<Interval> A = {Interval{0.0, a1}};
      const std::vector<Interval> B = {Interval{a2, b2}};
      const std::vector<Interval> C = {Interval{c2, c2 + 0.4}};
      const double g_more =
          indifference_mix(Utility::exponential(r), A, B, C, s);
      const double g_less =
          indifference_mix(Utility::exponential(r + gap), A, B, C, s);
      CHECK(g_less < g_more - 1e-8);
    }
  }
  SECTION("bad arguments are rejected") {
    CHECK_THROWS_AS(
        indifference_mix(Utility::exponential(1.0), {Interval{0.0, 2.0}},
                         {Interval{1.0, 3.0}}, {Interval{4.0, 5.0}}, s),
        std::invalid_argument);
    CHECK_THROWS_AS(
        indifference_mix(Utility::exponential(1.0), {},
                         {Interval{1.0, 3.0}}, {Interval{4.0, 5.0}}, s),
        std::invalid_argument);
  }
}

TEST_CASE("lottery invariants on random constructions") {
  const Supply s = test::canonical_supply();
  std::mt19937_64 rng(31415);
  for (int k = 0; k < 60; ++k) {
    const double a = test::uniform(rng, 0.0, 2.0);
    const double b = a + test::uniform(rng, 0.05, 1.5);
    const double c = b + test::uniform(rng, 0.05, 1.0);
    const double d = c + test::uniform(rng, 0.05, 5.0 - c - 0.01);
    const double atom = test::uniform(rng, 0.0, 0.9);
    const Lottery q = Lottery::scaled_restriction(
        s, {Interval{a, b}, Interval{c, d}}, atom);
    CHECK(std::abs(q.total_mass(s) - 1.0) < 1e-9);
    CHECK(q.atom_weight() == atom);
    REQUIRE(q.segments().size() == 2);
    CHECK(q.segments()[0].hi <= q.segments()[1].lo);
  }
  CHECK_THROWS_AS(
      Lottery::scaled_restriction(s, {Interval{0.0, 1.0}}, 1.2),
      std::invalid_argument);
}
