#include "sbf/forms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sbf/scalar.hpp"

namespace sbf {

namespace {

// p in (1, inf) with a conditioning guard near p = 1.
void require_p(double p) {
  if (!(p - 1.0 >= 1e-6) || std::isinf(p))
    throw std::invalid_argument("p must lie in (1, infinity), at least 1e-6 above 1");
}

StateFunction signed_power_of(const StateFunction& u, double alpha) {
  StateFunction g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = signed_pow(u[i], alpha);
  return g;
}

}  // namespace

double dirichlet_form(const FiniteModel& model, const StateFunction& u, const StateFunction& v) {
  require_state_function(model, u);
  require_state_function(model, v);
  StateFunction lu = model.L.apply(u);
  double acc = 0.0;
  for (int i = 0; i < model.n; ++i) acc -= model.m[i] * lu[i] * v[i];
  return acc;
}

FormBreakdown bd_form_p(const BeurlingDenyData& bd, const StateFunction& u, double p) {
  require_p(p);
  if (static_cast<int>(u.size()) != bd.n) throw std::invalid_argument("bd_form_p: dimension mismatch");

  StateFunction g = signed_power_of(u, p - 1.0);
  FormBreakdown out;
  for (int i = 0; i < bd.n; ++i)
    for (int j = i + 1; j < bd.n; ++j)
      out.jump += (u[j] - u[i]) * (g[j] - g[i]) * bd.J(i, j);
  for (int i = 0; i < bd.n; ++i) out.kill += bd.kappa[i] * std::pow(std::abs(u[i]), p);
  out.local = 0.0;
  out.total = out.local + out.jump + out.kill;
  return out;
}

double ep_generator(const FiniteModel& model, const StateFunction& u, double p) {
  require_p(p);
  require_state_function(model, u);
  StateFunction lu = model.L.apply(u);
  double acc = 0.0;
  for (int i = 0; i < model.n; ++i) acc -= model.m[i] * lu[i] * signed_pow(u[i], p - 1.0);
  return acc;
}

double ep_approx_direct(const SpectralSemigroup& sg, const StateFunction& u, double p, double t) {
  require_p(p);
  if (!(t > 0.0)) throw std::invalid_argument("ep_approx: t must be > 0");
  const FiniteModel& model = sg.model();
  StateFunction d = sg.apply_deficiency(u, t);
  double acc = 0.0;
  for (int i = 0; i < model.n; ++i) acc += model.m[i] * d[i] * signed_pow(u[i], p - 1.0);
  return acc / t;
}

ApproxForm ep_approx(const SpectralSemigroup& sg, const StateFunction& u, double p, double t) {
  require_p(p);
  if (!(t > 0.0)) throw std::invalid_argument("ep_approx: t must be > 0");
  const FiniteModel& model = sg.model();
  require_state_function(model, u);
  const int n = model.n;

  ApproxForm out;
  out.direct = ep_approx_direct(sg, u, p, t);

  StateFunction g = signed_power_of(u, p - 1.0);
  Mat k = sg.kernel_pair_measure(t);
  double jump = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) jump += (u[i] - u[j]) * (g[i] - g[j]) * k(i, j);
  out.jump_term = jump / t;  // 1/(2t) over ordered pairs = 1/t over i < j

  StateFunction ones(n, 1.0);
  StateFunction defic = sg.apply_deficiency(ones, t);
  double kill = 0.0;
  for (int i = 0; i < n; ++i) kill += model.m[i] * std::pow(std::abs(u[i]), p) * defic[i];
  out.kill_term = kill / t;

  out.symmetric = out.jump_term + out.kill_term;
  return out;
}

Comparability comparability_check(const FiniteModel& model, const StateFunction& u, double p) {
  require_p(p);
  StateFunction w = signed_power_of(u, p / 2.0);
  double ground = dirichlet_form(model, w, w);
  Comparability c;
  c.lower = (4.0 * (p - 1.0) / (p * p)) * ground;
  c.middle = ep_generator(model, u, p);
  c.upper = 2.0 * ground;
  c.lower_margin = c.middle - c.lower;
  c.upper_margin = c.upper - c.middle;
  return c;
}

DomainWitness ep_domain_witness(const FiniteModel& model, const StateFunction& u, double p) {
  require_p(p);
  StateFunction w = signed_power_of(u, p / 2.0);
  DomainWitness witness;
  witness.dirichlet_half_power = dirichlet_form(model, w, w);
  witness.ep = ep_generator(model, u, p);
  witness.ratio = witness.dirichlet_half_power > 0.0
                      ? witness.ep / witness.dirichlet_half_power
                      : std::numeric_limits<double>::quiet_NaN();
  return witness;
}

}  // namespace sbf
