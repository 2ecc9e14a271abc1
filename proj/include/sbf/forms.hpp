#pragma once

#include "sbf/model.hpp"
#include "sbf/semigroup.hpp"

namespace sbf {

/// Local / jump / killing split of a form value. The local part is always 0
/// for finite models; continuum evaluations fill it in.
struct FormBreakdown {
  double local = 0.0;
  double jump = 0.0;
  double kill = 0.0;
  double total = 0.0;
};

/// Quadratic pairing -<Lu, v>_m. Symmetric, nonnegative on the diagonal.
double dirichlet_form(const FiniteModel& model, const StateFunction& u, const StateFunction& v);

/// Explicit decomposition of the p-form:
///   jump = 1/2 sum_{i != j} (u_j - u_i)(u_j^<p-1> - u_i^<p-1>) J_ij,
///   kill = sum_i |u_i|^p kappa_i.
/// Both parts are nonnegative term by term. Requires p > 1 (guarded at p - 1 >= 1e-6).
FormBreakdown bd_form_p(const BeurlingDenyData& bd, const StateFunction& u, double p);

/// Generator route: E_p(u) = <-Lu, u^<p-1>>_m. For bounded generators this is
/// the exact t -> 0 limit of the approximate forms.
double ep_generator(const FiniteModel& model, const StateFunction& u, double p);

/// Approximate form at time t > 0, both as the direct pairing
/// (1/t) <u - T_t u, u^<p-1>>_m and as the symmetric kernel expression
/// (pair double sum plus deficiency term). The two routes agree analytically.
struct ApproxForm {
  double direct = 0.0;
  double symmetric = 0.0;
  double jump_term = 0.0;  // symmetric double sum against the pair measure
  double kill_term = 0.0;  // deficiency term (1/t) <(1 - T_t 1), |u|^p>_m
};
ApproxForm ep_approx(const SpectralSemigroup& sg, const StateFunction& u, double p, double t);

/// Direct pairing only; cheap enough for dense t-grids.
double ep_approx_direct(const SpectralSemigroup& sg, const StateFunction& u, double p, double t);

/// Two-sided comparison with the Dirichlet form of u^<p/2>:
///   (4(p-1)/p^2) E(u^<p/2>) <= E_p(u) <= 2 E(u^<p/2>).
struct Comparability {
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;
  double lower_margin = 0.0;  // middle - lower
  double upper_margin = 0.0;  // upper - middle
};
Comparability comparability_check(const FiniteModel& model, const StateFunction& u, double p);

/// Domain witness: E(u^<p/2>), E_p(u), and their ratio (NaN when the
/// reference form vanishes; then E_p vanishes with it).
struct DomainWitness {
  double dirichlet_half_power = 0.0;
  double ep = 0.0;
  double ratio = 0.0;
};
DomainWitness ep_domain_witness(const FiniteModel& model, const StateFunction& u, double p);

}  // namespace sbf
