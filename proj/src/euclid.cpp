#include "sbf/euclid.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sbf/quadrature.hpp"
#include "sbf/scalar.hpp"

namespace sbf {

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(cells);
  for (int i = 0; i < cells; ++i) xs[i] = node(i);
  return xs;
}

void Grid1D::validate() const {
  if (cells < 2) throw std::invalid_argument("Grid1D: at least 2 cells required");
  if (!(b > a)) throw std::invalid_argument("Grid1D: empty interval");
}

FiniteModel build_diffusion(const Grid1D& grid, const std::function<double(double)>& nu) {
  grid.validate();
  const int n = grid.cells;
  const double h = grid.h();

  std::vector<double> coeff(n);
  for (int i = 0; i < n; ++i) {
    coeff[i] = nu(grid.node(i));
    if (!(coeff[i] >= 0.0)) {
      std::ostringstream os;
      os << "build_diffusion: negative coefficient at x = " << grid.node(i);
      throw std::invalid_argument(os.str());
    }
  }

  BeurlingDenyData bd;
  bd.n = n;
  bd.J = Mat(n);
  bd.kappa.assign(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    double face = 0.5 * (coeff[i] + coeff[i + 1]);
    bd.J(i, i + 1) += face / h;  // J = m L = h * face/h^2
    bd.J(i + 1, i) += face / h;
  }
  if (grid.boundary == Boundary::Periodic) {
    // Wrap face; for n = 2 it stacks onto the interior face between the same cells.
    double face = 0.5 * (coeff[n - 1] + coeff[0]);
    bd.J(n - 1, 0) += face / h;
    bd.J(0, n - 1) += face / h;
  } else {
    // Exterior ghost cells carry u = 0; their flux becomes killing mass.
    bd.kappa[0] = coeff[0] / h;
    bd.kappa[n - 1] = coeff[n - 1] / h;
  }

  return assemble(bd, std::vector<double>(n, h));
}

double fractional_order_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("fractional order s must lie in (0, 1)");
  return std::pow(2.0, 2.0 * s) * s * std::tgamma(s + 0.5) /
         (std::sqrt(M_PI) * std::tgamma(1.0 - s));
}

FiniteModel build_fractional(const Grid1D& grid, double s) {
  grid.validate();
  const int n = grid.cells;
  const double h = grid.h();
  const double c = fractional_order_constant(s);

  BeurlingDenyData bd;
  bd.n = n;
  bd.J = Mat(n);
  bd.kappa.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = grid.node(j) - grid.node(i);
      double w = c * std::pow(d, -1.0 - 2.0 * s) * h * h;
      bd.J(i, j) = w;
      bd.J(j, i) = w;
    }
  if (grid.boundary == Boundary::DirichletExterior) {
    for (int i = 0; i < n; ++i) {
      double left = grid.node(i) - grid.a;
      double right = grid.b - grid.node(i);
      bd.kappa[i] =
          h * c * (std::pow(left, -2.0 * s) + std::pow(right, -2.0 * s)) / (2.0 * s);
    }
  }

  return assemble(bd, std::vector<double>(n, h));
}

namespace {

double local_limit_integrand(const EuclideanSpec& spec, const SmoothFunction& u, double x) {
  double ux = u.value(x);
  double dux = u.deriv(x);
  double weight = std::pow(std::abs(ux), spec.p - 2.0);
  double val = (spec.p - 1.0) * weight * dux * dux;
  if (!std::isfinite(val)) {
    std::ostringstream os;
    os << "continuum_ep: singular integrand |u|^{p-2} at x = " << x;
    throw std::domain_error(os.str());
  }
  return val;
}

}  // namespace

FormBreakdown continuum_ep(const EuclideanSpec& spec, double a, double b, const SmoothFunction& u,
                           int quad_panels) {
  if (!(b > a)) throw std::invalid_argument("continuum_ep: empty interval");
  if (quad_panels < 1) throw std::invalid_argument("continuum_ep: quad_panels must be >= 1");
  if (!(spec.p - 1.0 >= 1e-6)) throw std::invalid_argument("continuum_ep: p must be > 1");

  FormBreakdown out;

  if (spec.nu) {
    out.local = gauss_legendre8(
        [&](double x) { return spec.nu(x) * local_limit_integrand(spec, u, x); }, a, b, quad_panels);
  }

  if (spec.kill_density) {
    out.kill = gauss_legendre8(
        [&](double x) { return spec.kill_density(x) * std::pow(std::abs(u.value(x)), spec.p); }, a,
        b, quad_panels);
  }

  if (spec.jump_density) {
    const double delta = 10.0 * (b - a) / quad_panels;
    auto pair_integrand = [&](double x, double y) {
      return (u.value(y) - u.value(x)) *
             (signed_pow(u.value(y), spec.p - 1.0) - signed_pow(u.value(x), spec.p - 1.0)) *
             spec.jump_density(x, y);
    };
    // Far field: 1/2 double integral over |x - y| >= delta.
    auto inner = [&](double x) {
      double acc = 0.0;
      double lo = a, hi = x - delta;
      if (hi > lo) {
        int panels = std::max(1, static_cast<int>(quad_panels * (hi - lo) / (b - a)));
        acc += gauss_legendre8([&](double y) { return pair_integrand(x, y); }, lo, hi, panels);
      }
      lo = x + delta, hi = b;
      if (hi > lo) {
        int panels = std::max(1, static_cast<int>(quad_panels * (hi - lo) / (b - a)));
        acc += gauss_legendre8([&](double y) { return pair_integrand(x, y); }, lo, hi, panels);
      }
      return acc;
    };
    double far = 0.5 * gauss_legendre8(inner, a, b, quad_panels);

    // Near-diagonal correction: the pair integrand behaves like the local
    // limit (p-1)|u|^{p-2}(u')^2 (y-x)^2 J(x,y) for |y - x| < delta. The
    // second moment is integrated on geometrically graded panels so
    // integrable kernel singularities at y = x are resolved.
    auto half_second_moment = [&](double x) {
      double acc = 0.0;
      for (int side = 0; side < 2; ++side) {
        double reach = side == 0 ? std::min(delta, x - a) : std::min(delta, b - x);
        if (reach <= 0.0) continue;
        double hi = reach;
        for (int level = 0; level < 24 && hi > 0.0; ++level) {
          double lo = (level == 23) ? 0.0 : hi * 0.5;
          auto f = [&](double r) {
            double y = side == 0 ? x - r : x + r;
            return r * r * spec.jump_density(x, y);
          };
          acc += gauss_legendre8(f, lo, hi, 1);
          hi = lo;
        }
      }
      return 0.5 * acc;
    };
    double near = gauss_legendre8(
        [&](double x) { return local_limit_integrand(spec, u, x) * half_second_moment(x); }, a, b,
        quad_panels);

    out.jump = far + near;
  }

  out.total = out.local + out.jump + out.kill;
  return out;
}

double EnergyMeasureDensity::integral() const {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * cell_width;
}

EnergyMeasureDensity energy_measure(const Grid1D& grid, const std::function<double(double)>& nu,
                                    const StateFunction& v) {
  grid.validate();
  const int n = grid.cells;
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("energy_measure: size mismatch");
  const double h = grid.h();

  EnergyMeasureDensity density;
  density.cell_width = h;
  density.values.resize(n);
  for (int i = 0; i < n; ++i) {
    double left, right;
    if (grid.boundary == Boundary::Periodic) {
      left = v[(i + n - 1) % n];
      right = v[(i + 1) % n];
    } else {
      left = i > 0 ? v[i - 1] : 0.0;  // exterior ghost values
      right = i + 1 < n ? v[i + 1] : 0.0;
    }
    double dv = (right - left) / (2.0 * h);
    density.values[i] = 2.0 * nu(grid.node(i)) * dv * dv;
  }
  return density;
}

LeJanCheck lejan_check(const Grid1D& grid, const std::function<double(double)>& nu,
                       const StateFunction& v, const std::function<double(double)>& phi_fn,
                       const std::function<double(double)>& phi_deriv,
                       const std::function<double(double)>& psi_fn,
                       const std::function<double(double)>& psi_deriv) {
  EnergyMeasureDensity density = energy_measure(grid, nu, v);
  const int n = grid.cells;

  LeJanCheck check;
  for (int i = 0; i < n; ++i)
    check.via_density += 0.5 * phi_deriv(v[i]) * psi_deriv(v[i]) * density.values[i] * grid.h();

  FiniteModel model = build_diffusion(grid, nu);
  StateFunction pv(n), sv(n);
  for (int i = 0; i < n; ++i) {
    pv[i] = phi_fn(v[i]);
    sv[i] = psi_fn(v[i]);
  }
  check.via_form = dirichlet_form(model, pv, sv);
  check.gap = std::abs(check.via_density - check.via_form);
  return check;
}

std::vector<StudyRow> local_constant_study(const SmoothFunction& u, double p,
                                           const std::vector<int>& grid_sizes, double a, double b,
                                           const std::function<double(double)>& nu,
                                           int target_panels) {
  if (!(p - 1.0 >= 1e-6)) throw std::invalid_argument("local_constant_study: p must be > 1");
  if (grid_sizes.empty()) throw std::invalid_argument("local_constant_study: no grid sizes");

  // Strict positivity keeps |u|^{p-2} regular for every p.
  for (int k = 0; k <= 4096; ++k) {
    double x = a + (b - a) * k / 4096.0;
    if (!(u.value(x) > 0.0)) {
      std::ostringstream os;
      os << "local_constant_study: u must be strictly positive, u(" << x << ") = " << u.value(x);
      throw std::invalid_argument(os.str());
    }
  }

  double target = (p - 1.0) * gauss_legendre8(
                                  [&](double x) {
                                    double du = u.deriv(x);
                                    return nu(x) * std::pow(u.value(x), p - 2.0) * du * du;
                                  },
                                  a, b, target_panels);

  std::vector<StudyRow> rows;
  double prev_error = 0.0;
  int prev_cells = 0;
  for (int cells : grid_sizes) {
    Grid1D grid{a, b, cells, Boundary::Periodic};
    FiniteModel model = build_diffusion(grid, nu);
    StateFunction uh(cells);
    for (int i = 0; i < cells; ++i) uh[i] = u.value(grid.node(i));
    double discrete = ep_generator(model, uh, p);

    StudyRow row;
    row.cells = cells;
    row.h = grid.h();
    row.discrete = discrete;
    row.target = target;
    row.error = std::abs(discrete - target);
    row.observed_order =
        rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                     : std::log(prev_error / row.error) / std::log(double(cells) / prev_cells);
    prev_error = row.error;
    prev_cells = cells;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sbf
