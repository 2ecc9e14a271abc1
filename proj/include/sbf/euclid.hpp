#pragma once

#include <functional>
#include <vector>

#include "sbf/forms.hpp"
#include "sbf/model.hpp"

namespace sbf {

enum class Boundary { Periodic, DirichletExterior };

/// Uniform 1-D grid of cell centers on [a, b].
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  int cells = 2;
  Boundary boundary = Boundary::Periodic;

  double h() const { return (b - a) / cells; }
  double node(int i) const { return a + (i + 0.5) * h(); }
  std::vector<double> nodes() const;
  void validate() const;
};

/// Coefficients of a 1-D form: diffusion density nu(x) >= 0, symmetric jump
/// density, killing density, and the exponent p.
struct EuclideanSpec {
  std::function<double(double)> nu;
  std::function<double(double, double)> jump_density;
  std::function<double(double)> kill_density;
  double p = 2.0;
};

/// Function with an analytic derivative, for continuum quadrature.
struct SmoothFunction {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

/// Three-point divergence-form discretization of (nu u')' with cell measure
/// m_i = h and arithmetic-mean face coefficients. Dirichlet-exterior folds the
/// boundary flux into killing weights; periodic wraps the end faces.
FiniteModel build_diffusion(const Grid1D& grid, const std::function<double(double)>& nu);

/// Kernel constant of the 1-D fractional generator of order s in (0, 1).
double fractional_order_constant(double s);

/// Pure-jump discretization with J_ij = c_s |x_i - x_j|^{-1-2s} h^2 between
/// cell centers (diagonal dropped). Periodic keeps the kernel truncated to the
/// box with no killing; dirichlet-exterior adds the closed-form exterior mass
///   kappa_i = h c_s ((x_i - a)^{-2s} + (b - x_i)^{-2s}) / (2s).
FiniteModel build_fractional(const Grid1D& grid, double s);

/// Continuum form value by composite Gauss-Legendre quadrature:
///   local = (p-1) int nu |u|^{p-2} (u')^2,  kill = int |u|^p k,
///   jump  = 1/2 double integral with an |x-y| >= delta cutoff plus a
///           second-moment correction using the local-limit integrand.
/// Throws std::domain_error naming the node when |u|^{p-2} blows up (p < 2
/// at a zero of u).
FormBreakdown continuum_ep(const EuclideanSpec& spec, double a, double b, const SmoothFunction& u,
                           int quad_panels);

/// Density 2 nu(x_i) (v'(x_i))^2 with central differences (ghost zeros at a
/// dirichlet-exterior boundary). Integrates to twice the local form of v.
struct EnergyMeasureDensity {
  std::vector<double> values;
  double cell_width = 0.0;
  double integral() const;
};
EnergyMeasureDensity energy_measure(const Grid1D& grid, const std::function<double(double)>& nu,
                                    const StateFunction& v);

/// Both evaluations of the chain-rule identity for the local form:
///   1/2 sum phi'(v_i) psi'(v_i) density_i h  vs  the discrete form of
///   (phi(v), psi(v)). Agreement is O(h) for Lipschitz phi, psi.
struct LeJanCheck {
  double via_density = 0.0;
  double via_form = 0.0;
  double gap = 0.0;
};
LeJanCheck lejan_check(const Grid1D& grid, const std::function<double(double)>& nu,
                       const StateFunction& v, const std::function<double(double)>& phi_fn,
                       const std::function<double(double)>& phi_deriv,
                       const std::function<double(double)>& psi_fn,
                       const std::function<double(double)>& psi_deriv);

/// One refinement row of the local-constant study.
struct StudyRow {
  int cells = 0;
  double h = 0.0;
  double discrete = 0.0;
  double target = 0.0;
  double error = 0.0;
  double observed_order = 0.0;  // NaN in the first row
};

/// Discrete E_p on periodic diffusion grids against the continuum value
/// (p-1) int nu |u|^{p-2} (u')^2 dx, with observed convergence orders.
/// Requires u > 0 on [a, b]; the target is computed with target_panels
/// Gauss-Legendre panels (8 points each).
std::vector<StudyRow> local_constant_study(const SmoothFunction& u, double p,
                                           const std::vector<int>& grid_sizes, double a, double b,
                                           const std::function<double(double)>& nu,
                                           int target_panels = 20000);

}  // namespace sbf
