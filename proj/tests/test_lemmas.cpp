#include <doctest.h>

#include <initializer_list>
#include <stdexcept>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "sbf/experiments.hpp"
#include "sbf/lemmas.hpp"
#include "sbf/rng.hpp"

using namespace sbf;

TEST_CASE("stroock bounds on pinned samples") {
  StroockBounds b = stroock_check(1.0, 0.0, 3.0);
  CHECK(b.lower == doctest::Approx(9.0));
  CHECK(b.middle == doctest::Approx(9.0));
  CHECK(b.upper == doctest::Approx(18.0));

  b = stroock_check(0.7, 0.4, 0.4);
  CHECK(b.lower == 0.0);
  CHECK(b.middle == 0.0);
  CHECK(b.upper == 0.0);

  b = stroock_check(0.5, -1.0, 1.0);
  CHECK(b.lower == doctest::Approx(3.0));
  CHECK(b.middle == doctest::Approx(4.0));
  CHECK(b.upper == doctest::Approx(8.0));
}

TEST_CASE("stroock ordering holds on random samples") {
  SplitMix64 g(7);
  for (int k = 0; k < 20000; ++k) {
    double alpha = g.uniform(0.01, 1.99);
    double s = std::copysign(std::exp(g.uniform(-20.0, 20.0)), g.coin() ? 1.0 : -1.0);
    double t = std::copysign(std::exp(g.uniform(-20.0, 20.0)), g.coin() ? 1.0 : -1.0);
    StroockBounds b = stroock_check(alpha, s, t);
    double slack = 1e-12 * std::max(1.0, b.upper);
    CHECK(b.lower <= b.middle + slack);
    CHECK(b.middle <= b.upper + slack);
  }
}

TEST_CASE("key bound on pinned samples") {
  LemmaParams lp(0.5, 2.0);
  KeyBound diag = key_bound_residual({0.4, 0.4, lp});
  CHECK(diag.lhs == 0.0);
  CHECK(diag.rhs == 0.0);
  CHECK(diag.margin == 0.0);

  // region A: the truncated product is exactly (t - s)^2
  KeyBound a = key_bound_residual({-0.3, 0.8, lp});
  double d2 = 1.1 * 1.1;
  double expected_lhs = std::abs(d2 - (phi(0.5, 0.8) - phi(0.5, -0.3)) *
                                          (phi(1.5, 0.8) - phi(1.5, -0.3)));
  CHECK(a.lhs == doctest::Approx(expected_lhs).epsilon(1e-13));

  // region E: both products agree exactly
  KeyBound e = key_bound_residual({1.5, 9.0, lp});
  CHECK(e.lhs == 0.0);
}

TEST_CASE("region classification follows the threshold boundaries") {
  CHECK(classify_region(0.5, 0.7, 2.0) == Region::A);
  CHECK(classify_region(-0.5, 3.0, 2.0) == Region::C);  // t = 3 > n = 2, below n^4 = 16
  CHECK(classify_region(-0.5, 1.5, 2.0) == Region::B);
  CHECK(classify_region(0.2, 100.0, 2.0) == Region::D);
  CHECK(classify_region(1.5, 9.0, 2.0) == Region::E);
  CHECK(classify_region(-2.0, 20.0, 2.0) == Region::F);
  CHECK(classify_region(20.0, 30.0, 2.0) == Region::G);
  CHECK(classify_region(-20.0, 30.0, 2.0) == Region::G);

  // ties go to the alphabetically earliest tag
  CHECK(classify_region(0.5, 1.0, 2.0) == Region::A);
  CHECK(classify_region(1.0, 1.0, 2.0) == Region::A);
  CHECK(classify_region(0.5, 2.0, 2.0) == Region::B);
  CHECK(classify_region(0.5, 16.0, 2.0) == Region::C);
  CHECK(classify_region(1.0, 16.0, 2.0) == Region::C);
  CHECK(classify_region(16.0, 16.0, 2.0) == Region::E);
  CHECK(classify_region(16.0, 17.0, 2.0) == Region::F);
}

TEST_CASE("classification is stable under the normalization symmetries") {
  SplitMix64 g(8);
  for (int k = 0; k < 5000; ++k) {
    double n = 2.0 + g.uniform(0.0, 62.0);
    double s = std::copysign(std::exp(g.uniform(-28.0, 28.0)), g.coin() ? 1.0 : -1.0);
    double t = std::copysign(std::exp(g.uniform(-28.0, 28.0)), g.coin() ? 1.0 : -1.0);
    Region base = classify_region(s, t, n);
    CHECK(classify_region(t, s, n) == base);
    CHECK(classify_region(-s, -t, n) == base);
  }
}

TEST_CASE("key bound symmetries are exact") {
  SplitMix64 g(9);
  for (int k = 0; k < 5000; ++k) {
    double alpha = g.uniform(0.05, 1.95);
    double n = 2.0 + g.uniform(0.0, 62.0);
    double s = std::copysign(std::exp(g.uniform(-28.0, 28.0)), g.coin() ? 1.0 : -1.0);
    double t = std::copysign(std::exp(g.uniform(-28.0, 28.0)), g.coin() ? 1.0 : -1.0);
    LemmaParams lp(alpha, n);
    LemmaParams reflected(2.0 - alpha, n);
    KeyBound base = key_bound_residual({s, t, lp});
    KeyBound swapped = key_bound_residual({t, s, lp});
    KeyBound negated = key_bound_residual({-s, -t, lp});
    CHECK(base.lhs == swapped.lhs);
    CHECK(base.rhs == swapped.rhs);
    CHECK(base.lhs == negated.lhs);
    CHECK(base.rhs == negated.rhs);
    // alpha -> 2 - alpha only commutes up to the rounding of 2 - (2 - alpha)
    KeyBound alpha_reflected = key_bound_residual({s, t, reflected});
    CHECK(std::abs(base.lhs - alpha_reflected.lhs) <= 1e-9 * std::max(1.0, base.rhs));
    CHECK(std::abs(base.rhs - alpha_reflected.rhs) <= 1e-9 * std::max(1.0, base.rhs));
  }
}

TEST_CASE("per-region bounds on pinned samples") {
  LemmaParams lp(0.5, 2.0);

  RegionBound e = region_bound_check({1.5, 9.0, lp});
  CHECK(e.region == Region::E);
  CHECK(e.lhs == 0.0);
  CHECK(e.margin == e.rhs);

  RegionBound a = region_bound_check({0.2, 0.9, lp});
  CHECK(a.region == Region::A);
  CHECK(a.lhs <= 3.0 * 0.7 * 0.7 + 1e-12);

  RegionBound c = region_bound_check({0.5, 5.0, lp});
  CHECK(c.region == Region::C);
  CHECK(c.margin >= 0.0);
}

TEST_CASE("key and region bounds hold across distributions") {
  SplitMix64 g(10);
  for (int k = 0; k < 30000; ++k) {
    double alpha = g.uniform(0.05, 1.95);
    double n = 2.0 + g.uniform(0.0, 62.0);
    LemmaParams lp(alpha, n);
    double s, t;
    if (k % 2 == 0) {
      s = g.uniform(-2.0, 2.0);
      t = g.uniform(-2.0, 2.0);
    } else {
      s = std::copysign(std::exp(g.uniform(-30.0, 30.0)), g.coin() ? 1.0 : -1.0);
      t = std::copysign(std::exp(g.uniform(-30.0, 30.0)), g.coin() ? 1.0 : -1.0);
    }
    KeyBound kb = key_bound_residual({s, t, lp});
    CHECK(kb.margin >= -1e-12 * std::max(1.0, kb.rhs));
    RegionBound rb = region_bound_check({s, t, lp});
    CHECK(rb.margin >= -1e-12 * std::max(1.0, rb.rhs));
  }
}

TEST_CASE("sweep is deterministic and visits every region") {
  std::vector<double> alphas{0.3, 1.0, 1.7};
  std::vector<double> ns{2.0, 4.0};

  SweepReport first = sweep(123, 4000, alphas, ns, SweepDistribution::BreakpointFocused);
  SweepReport second = sweep(123, 4000, alphas, ns, SweepDistribution::BreakpointFocused);
  REQUIRE(first.cells.size() == second.cells.size());
  for (std::size_t i = 0; i < first.cells.size(); ++i) {
    CHECK(first.cells[i].min_key_margin == second.cells[i].min_key_margin);
    CHECK(first.cells[i].key_argmin_s == second.cells[i].key_argmin_s);
    CHECK(first.cells[i].region_counts == second.cells[i].region_counts);
  }
  CHECK(first.total_violations() == 0);
  CHECK(first.all_regions_visited());

  SweepReport heavy = sweep(77, 4000, alphas, ns, SweepDistribution::HeavyTail);
  CHECK(heavy.total_violations() == 0);
  CHECK(heavy.all_regions_visited());

  SweepReport box = sweep(99, 4000, alphas, ns, SweepDistribution::UniformBox);
  CHECK(box.total_violations() == 0);
}

TEST_CASE("sweep csv is stable across thread counts") {
  std::vector<double> alphas{0.5, 1.5};
  std::vector<double> ns{2.0, 16.0};
  LemmaSweeps sweeps = run_lemma_sweeps(5, 2000, alphas, ns,
                                        {SweepDistribution::UniformBox,
                                         SweepDistribution::HeavyTail});
  std::ostringstream a;
  write_sweep_csv(a, sweeps);

  setenv("BREGMAN_THREADS", "1", 1);
  LemmaSweeps again = run_lemma_sweeps(5, 2000, alphas, ns,
                                       {SweepDistribution::UniformBox,
                                        SweepDistribution::HeavyTail});
  unsetenv("BREGMAN_THREADS");
  std::ostringstream b;
  write_sweep_csv(b, again);
  CHECK(a.str() == b.str());
}
