#include <doctest.h>

#include <initializer_list>
#include <stdexcept>

#include <cmath>

#include "sbf/forms.hpp"
#include "sbf/rng.hpp"
#include "sbf/scalar.hpp"

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

TEST_CASE("dirichlet form on the chain") {
  FiniteModel m = chain2();
  StateFunction u{0.0, 1.0};
  CHECK(dirichlet_form(m, u, u) == doctest::Approx(1.0));

  StateFunction c{0.7, 0.7};
  CHECK(dirichlet_form(m, c, c) == doctest::Approx(0.0).epsilon(1e-14));

  CHECK_THROWS_AS(dirichlet_form(m, StateFunction{1.0}, u), std::invalid_argument);

  // symmetry in (u, v)
  SplitMix64 g(31);
  for (int k = 0; k < 100; ++k) {
    FiniteModel model = random_model(g.next(), 8, 0.6, k % 2 == 0);
    StateFunction a(8), b(8);
    for (int i = 0; i < 8; ++i) {
      a[i] = g.uniform(-2.0, 2.0);
      b[i] = g.uniform(-2.0, 2.0);
    }
    double ab = dirichlet_form(model, a, b);
    double ba = dirichlet_form(model, b, a);
    CHECK(std::abs(ab - ba) <= 1e-11 * std::max(1.0, std::abs(ab)));
  }
}

TEST_CASE("breakdown on pinned instances") {
  BeurlingDenyData bd;
  bd.n = 2;
  bd.J = Mat(2);
  bd.J(0, 1) = bd.J(1, 0) = 1.0;
  bd.kappa = {0.0, 0.0};

  FormBreakdown fb = bd_form_p(bd, {0.0, 1.0}, 3.0);
  CHECK(fb.jump == doctest::Approx(1.0));
  CHECK(fb.kill == 0.0);
  CHECK(fb.total == doctest::Approx(1.0));

  FormBreakdown constant = bd_form_p(bd, {0.4, 0.4}, 2.5);
  CHECK(constant.total == 0.0);

  BeurlingDenyData pure_kill;
  pure_kill.n = 2;
  pure_kill.J = Mat(2);
  pure_kill.kappa = {2.0, 0.0};
  FormBreakdown killed = bd_form_p(pure_kill, {3.0, 5.0}, 2.0);
  CHECK(killed.kill == doctest::Approx(18.0));
  CHECK(killed.jump == 0.0);

  CHECK_THROWS_AS(bd_form_p(bd, StateFunction{0.0, 1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("generator route equals the breakdown on random instances") {
  SplitMix64 g(32);
  for (int k = 0; k < 60; ++k) {
    int n = 2 + static_cast<int>(g.below(39));
    FiniteModel model = random_model(g.next(), n, 0.4, k % 2 == 0);
    BeurlingDenyData bd = decompose(model);
    StateFunction u(n);
    for (int i = 0; i < n; ++i) u[i] = g.uniform(-2.0, 2.0);

    for (double p : {1.1, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0}) {
      double ep = ep_generator(model, u, p);
      FormBreakdown fb = bd_form_p(bd, u, p);
      CHECK(std::abs(ep - fb.total) <= 1e-9 * (1.0 + std::abs(ep)));
      CHECK(fb.jump >= 0.0);
      CHECK(fb.kill >= 0.0);
    }
  }
}

TEST_CASE("p = 2 recovers the dirichlet form") {
  SplitMix64 g(33);
  for (int k = 0; k < 50; ++k) {
    int n = 2 + static_cast<int>(g.below(20));
    FiniteModel model = random_model(g.next(), n, 0.5, k % 2 == 0);
    BeurlingDenyData bd = decompose(model);
    StateFunction u(n);
    for (int i = 0; i < n; ++i) u[i] = g.uniform(-2.0, 2.0);
    double direct = dirichlet_form(model, u, u);
    double via_p = bd_form_p(bd, u, 2.0).total;
    CHECK(std::abs(direct - via_p) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("jump part equals the divergence form") {
  SplitMix64 g(34);
  for (int k = 0; k < 50; ++k) {
    int n = 2 + static_cast<int>(g.below(15));
    FiniteModel model = random_model(g.next(), n, 0.6, false);
    BeurlingDenyData bd = decompose(model);
    StateFunction u(n);
    for (int i = 0; i < n; ++i) u[i] = g.uniform(-2.0, 2.0);
    double p = g.uniform(1.1, 6.0);

    double via_divergence = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) via_divergence += bregman_divergence(p, u[i], u[j]) * bd.J(i, j) / p;

    double jump = bd_form_p(bd, u, p).jump;
    CHECK(std::abs(jump - via_divergence) <= 1e-12 * std::max(1.0, jump));
  }
}

TEST_CASE("approximate forms: two routes agree and converge to the generator") {
  FiniteModel m = chain2();
  SpectralSemigroup sg(m);
  StateFunction u{0.0, 1.0};

  // closed form at t = 1: (1 - e^{-2}) / 2
  ApproxForm af = ep_approx(sg, u, 2.0, 1.0);
  CHECK(af.direct == doctest::Approx(0.43233235838169365).epsilon(1e-12));
  CHECK(af.symmetric == doctest::Approx(af.direct).epsilon(1e-12));

  // conservative model, constant u: zero at every t
  StateFunction c{0.3, 0.3};
  for (double t : {0.1, 1.0, 10.0}) {
    ApproxForm z = ep_approx(sg, c, 2.0, t);
    CHECK(std::abs(z.direct) <= 1e-13);
    CHECK(std::abs(z.symmetric) <= 1e-13);
    CHECK(std::abs(z.kill_term) <= 1e-13);
  }

  CHECK_THROWS_AS(ep_approx(sg, u, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ep_approx(sg, u, 2.0, -1.0), std::invalid_argument);
}

TEST_CASE("approximate forms on random instances") {
  SplitMix64 g(35);
  for (int k = 0; k < 20; ++k) {
    int n = 2 + static_cast<int>(g.below(15));
    FiniteModel model = random_model(g.next(), n, 0.6, k % 2 == 1);
    SpectralSemigroup sg(model);
    StateFunction u(n);
    for (int i = 0; i < n; ++i) u[i] = g.uniform(-2.0, 2.0);
    double p = g.uniform(1.2, 5.0);

    double ep = ep_generator(model, u, p);
    double prev_err = -1.0;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
      ApproxForm af = ep_approx(sg, u, p, t);
      CHECK(std::abs(af.direct - af.symmetric) <=
            1e-10 * std::max(1.0, std::abs(af.direct)));
      double err = std::abs(af.direct - ep);
      if (prev_err >= 0.0) CHECK(err <= prev_err + 1e-9 * std::max(1.0, std::abs(ep)));
      prev_err = err;
    }
    ApproxForm tiny = ep_approx(sg, u, p, 1e-8);
    CHECK(std::abs(tiny.direct - ep) <= 1e-6 * (1.0 + std::abs(ep)));
  }
}

TEST_CASE("comparability brackets the p-form") {
  FiniteModel m = chain2();
  StateFunction zero{0.0, 0.0};
  Comparability z = comparability_check(m, zero, 3.0);
  CHECK(z.lower == 0.0);
  CHECK(z.middle == 0.0);
  CHECK(z.upper == 0.0);

  SplitMix64 g(36);
  for (int k = 0; k < 100; ++k) {
    int n = 2 + static_cast<int>(g.below(30));
    FiniteModel model = random_model(g.next(), n, 0.5, k % 2 == 0);
    StateFunction u(n);
    for (int i = 0; i < n; ++i) u[i] = g.uniform(-2.0, 2.0);

    Comparability c3 = comparability_check(model, u, 3.0);
    double slack = 1e-12 * std::max(1.0, c3.upper);
    CHECK(c3.lower_margin >= -slack);
    CHECK(c3.upper_margin >= -slack);

    // the lower constant is 1 at p = 2: equality, bitwise by construction
    Comparability c2 = comparability_check(model, u, 2.0);
    CHECK(c2.lower_margin == 0.0);
  }
}

TEST_CASE("domain witness ratio lands in the bracket") {
  SplitMix64 g(37);
  for (int k = 0; k < 60; ++k) {
    int n = 2 + static_cast<int>(g.below(12));
    FiniteModel model = random_model(g.next(), n, 0.7, k % 2 == 0);
    StateFunction u(n);
    for (int i = 0; i < n; ++i) u[i] = g.uniform(-2.0, 2.0);
    double p = g.uniform(1.2, 6.0);

    DomainWitness w = ep_domain_witness(model, u, p);
    if (w.dirichlet_half_power > 0.0) {
      double lo = 4.0 * (p - 1.0) / (p * p);
      CHECK(w.ratio >= lo - 1e-10);
      CHECK(w.ratio <= 2.0 + 1e-10);
    } else {
      CHECK(std::abs(w.ep) <= 1e-12);
    }
  }

  // constant u on a conservative model: both vanish together
  FiniteModel cons = random_model(11, 5, 0.9, false);
  DomainWitness w = ep_domain_witness(cons, StateFunction(5, 1.3), 2.5);
  CHECK(std::abs(w.dirichlet_half_power) <= 1e-12);
  CHECK(std::abs(w.ep) <= 1e-12);
  CHECK(std::isnan(w.ratio));
}
