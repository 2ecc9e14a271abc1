#include <doctest.h>

#include <initializer_list>
#include <stdexcept>

#include <cmath>

#include "sbf/hardy_stein.hpp"
#include "sbf/quadrature.hpp"
#include "sbf/rng.hpp"

using namespace sbf;

namespace {

FiniteModel chain2() {
  FiniteModel m;
  m.n = 2;
  m.m = {1.0, 1.0};
  m.L = Mat(2);
  m.L(0, 0) = -1.0;
  m.L(0, 1) = 1.0;
  m.L(1, 0) = 1.0;
  m.L(1, 1) = -1.0;
  return m;
}

}  // namespace

TEST_CASE("adaptive simpson on smooth integrands") {
  auto quad = adaptive_simpson([](double x) { return std::exp(-4.0 * x); }, 0.0, 10.0, 1e-10);
  CHECK(quad.value == doctest::Approx(0.25 * -std::expm1(-40.0)).epsilon(1e-9));

  auto pair = adaptive_simpson_pair(
      [](double t) {
        return std::array<double, 2>{std::sin(t), std::cos(t)};
      },
      0.0, 1.0, 1e-10);
  CHECK(pair.value0 == doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-9));
  CHECK(pair.value1 == doctest::Approx(std::sin(1.0)).epsilon(1e-9));

  // unreachable tolerance on a kink exhausts the cap and reports the estimate
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return std::sqrt(std::abs(x)); }, -1.0, 1.0,
                                   1e-30, 1024),
                  QuadratureError);
}

TEST_CASE("gauss-legendre composite rule") {
  double val = gauss_legendre8([](double x) { return std::cos(x) * std::cos(x); }, 0.0,
                               2.0 * M_PI, 64);
  CHECK(val == doctest::Approx(M_PI).epsilon(1e-13));
}

TEST_CASE("two-state closed form balances") {
  SpectralSemigroup sg(chain2());
  StateFunction u{0.0, 1.0};
  HardySteinReport rep = hardy_stein(sg, u, 2.0, 1e-8);
  CHECK(rep.lhs == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rep.rhs_jump == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(rep.rhs_kill == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep.rhs_local == 0.0);
  CHECK(std::abs(rep.lhs - rep.rhs_total) <= 1e-8);
  CHECK(rep.tail_bound >= 0.0);
  CHECK(rep.tail_bound <= 1e-8);
}

TEST_CASE("harmonic data dissipates nothing") {
  FiniteModel cons = random_model(51, 6, 0.8, false);
  SpectralSemigroup sg(cons);
  StateFunction flat(6, 0.9);
  HardySteinReport rep = hardy_stein(sg, flat, 3.0, 1e-8);
  CHECK(std::abs(rep.lhs) <= 1e-10);
  CHECK(std::abs(rep.rhs_total) <= 1e-10);
}

TEST_CASE("zero generator short-circuits") {
  FiniteModel zero;
  zero.n = 3;
  zero.m = {1.0, 2.0, 0.5};
  zero.L = Mat(3);
  SpectralSemigroup sg(zero);
  StateFunction u{1.0, -1.0, 2.0};
  HardySteinReport rep = hardy_stein(sg, u, 2.0, 1e-8);
  CHECK(rep.lhs == doctest::Approx(0.0));
  CHECK(rep.rhs_total == 0.0);
  CHECK(rep.truncation_time == 0.0);
}

TEST_CASE("pure killing: the kill term alone balances the mass drop") {
  // one state, L = -kappa/m, closed form ||u||_p^p (1 - e^{-p kappa t / m})
  BeurlingDenyData bd;
  bd.n = 1;
  bd.J = Mat(1);
  bd.kappa = {3.0};
  FiniteModel model = assemble(bd, {2.0});
  SpectralSemigroup sg(model);
  StateFunction u{1.5};
  double p = 2.5;
  HardySteinReport rep = hardy_stein(sg, u, p, 1e-9);
  double mass = 2.0 * std::pow(1.5, p);
  CHECK(rep.lhs == doctest::Approx(mass).epsilon(1e-12));
  CHECK(rep.rhs_kill == doctest::Approx(mass).epsilon(1e-6));
  CHECK(std::abs(rep.rhs_jump) <= 1e-12);
}

TEST_CASE("balance holds with and without killing on random instances") {
  SplitMix64 g(52);
  for (int k = 0; k < 12; ++k) {
    int n = 2 + static_cast<int>(g.below(14));
    FiniteModel model = random_model(g.next(), n, 0.5, k % 2 == 0);
    SpectralSemigroup sg(model);
    StateFunction u(n);
    for (int i = 0; i < n; ++i) u[i] = g.uniform(-2.0, 2.0);
    double p = (k % 3 == 0) ? 1.5 : (k % 3 == 1 ? 2.0 : 3.5);

    HardySteinReport rep = hardy_stein(sg, u, p, 1e-8);
    CHECK(rep.rhs_jump >= -1e-12);
    CHECK(rep.rhs_kill >= -1e-12);
    CHECK(rep.rhs_total == rep.rhs_local + rep.rhs_jump + rep.rhs_kill);
    CHECK(std::abs(rep.lhs - rep.rhs_total) <= std::max(1e-7, 1e-6 * (1.0 + rep.lhs)));
  }
}

TEST_CASE("finite-horizon mass drop equals the integrated dissipation") {
  SplitMix64 g(53);
  FiniteModel model = random_model(g.next(), 8, 0.6, true);
  SpectralSemigroup sg(model);
  StateFunction u(8);
  for (int i = 0; i < 8; ++i) u[i] = g.uniform(-2.0, 2.0);
  double p = 2.5;
  double horizon = 1.7;

  auto quad = adaptive_simpson(
      [&](double t) { return p * ep_generator(model, sg.apply(u, t), p); }, 0.0, horizon, 1e-10);
  double drop = lp_norm_pow(model.m, u, p) - lp_norm_pow(model.m, sg.apply(u, horizon), p);
  CHECK(drop == doctest::Approx(quad.value).epsilon(1e-8));
}

TEST_CASE("decay curve columns") {
  SpectralSemigroup sg(chain2());
  StateFunction u{0.0, 1.0};
  std::vector<double> grid{0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  auto curve = decay_curve(sg, u, 2.0, grid);
  REQUIRE(curve.size() == grid.size());

  CHECK(curve[0].norm_pow == doctest::Approx(1.0));
  CHECK(curve[0].dissipation == doctest::Approx(2.0 * ep_generator(chain2(), u, 2.0)));
  for (std::size_t k = 0; k < curve.size(); ++k) {
    // closed form: dissipation 2 e^{-4t}
    CHECK(curve[k].dissipation == doctest::Approx(2.0 * std::exp(-4.0 * grid[k])).epsilon(1e-10));
    if (k > 0) CHECK(curve[k].norm_pow <= curve[k - 1].norm_pow + 1e-12);
  }

  CHECK_THROWS_AS(decay_curve(sg, u, 2.0, std::vector<double>{0.5, 0.25}),
                  std::invalid_argument);
  CHECK_THROWS_AS(decay_curve(sg, u, 2.0, std::vector<double>{-0.5, 0.25}),
                  std::invalid_argument);
}

TEST_CASE("report serializes to json") {
  SpectralSemigroup sg(chain2());
  HardySteinReport rep = hardy_stein(sg, {0.0, 1.0}, 2.0, 1e-8);
  nlohmann::json j = hardy_stein_report_to_json(rep);
  CHECK(j["lhs"].get<double>() == rep.lhs);
  CHECK(j["rhs_jump"].get<double>() == rep.rhs_jump);
  CHECK(j["truncation_time"].get<double>() == rep.truncation_time);
}
