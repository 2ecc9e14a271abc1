#include "sbf/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sbf {

EigenDecomposition jacobi_eigensolver(Mat a, int max_sweeps, double tol_factor) {
  const int n = a.size();
  Mat q = Mat::identity(n);
  const double norm = a.frobenius_norm();
  // Aim for the machine floor; tol_factor * norm is the contractual residual
  // checked at the end. Stopping early at the contract level would leak
  // O(residual) into long-time kernel projections.
  const double target = 1e-15 * norm;

  int sweep = 0;
  double off = a.offdiag_frobenius_norm();
  double prev_off = std::numeric_limits<double>::infinity();
  while (off > target && norm > 0.0 && off < prev_off) {
    if (sweep >= max_sweeps) {
      std::ostringstream os;
      os << "jacobi_eigensolver: no convergence after " << max_sweeps
         << " sweeps, off-diagonal residual " << off;
      throw std::runtime_error(os.str());
    }
    prev_off = off;
    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        double apr = a(p, r);
        if (apr == 0.0) continue;
        double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);  // avoid overflow in theta^2
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);

        double app = a(p, p), arr = a(r, r);
        a(p, p) = app - t * apr;
        a(r, r) = arr + t * apr;
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k != p && k != r) {
            double akp = a(k, p), akr = a(k, r);
            a(k, p) = akp - s * (akr + tau * akp);
            a(p, k) = a(k, p);
            a(k, r) = akr + s * (akp - tau * akr);
            a(r, k) = a(k, r);
          }
          double qkp = q(k, p), qkr = q(k, r);
          q(k, p) = qkp - s * (qkr + tau * qkp);
          q(k, r) = qkr + s * (qkp - tau * qkr);
        }
      }
    }
    ++sweep;
    off = a.offdiag_frobenius_norm();
  }
  if (off > tol_factor * norm) {
    std::ostringstream os;
    os << "jacobi_eigensolver: stalled at off-diagonal residual " << off << " (norm " << norm
       << ")";
    throw std::runtime_error(os.str());
  }

  EigenDecomposition dec;
  dec.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) dec.eigenvalues[i] = a(i, i);
  dec.vectors = std::move(q);
  dec.sweeps = sweep;
  dec.offdiagonal_norm = off;
  return dec;
}

SpectralSemigroup::SpectralSemigroup(FiniteModel model) : model_(std::move(model)) {
  ValidationReport rep = validate_model(model_);
  if (!rep.ok()) throw ModelInvariantError("SpectralSemigroup: invalid model\n" + rep.summary());

  const int n = model_.n;
  sqrt_m_.resize(n);
  for (int i = 0; i < n; ++i) sqrt_m_[i] = std::sqrt(model_.m[i]);

  // S = M^{1/2} L M^{-1/2}; m-symmetry makes it symmetric up to rounding,
  // which the explicit averaging removes before the rotation loop.
  Mat s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = sqrt_m_[i] * model_.L(i, j) / sqrt_m_[j];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double avg = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }

  EigenDecomposition dec = jacobi_eigensolver(std::move(s));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return dec.eigenvalues[a] > dec.eigenvalues[b]; });
  eigenvalues_.resize(n);
  q_ = Mat(n);
  for (int k = 0; k < n; ++k) {
    eigenvalues_[k] = dec.eigenvalues[order[k]];
    for (int i = 0; i < n; ++i) q_(i, k) = dec.vectors(i, order[k]);
  }
  // The spectrum is nonpositive; positive values inside the zero threshold are
  // rotation rounding and would otherwise grow as exp(t lambda) for large t.
  for (double& ev : eigenvalues_)
    if (ev > 0.0 && ev <= zero_threshold()) ev = 0.0;
}

std::vector<double> SpectralSemigroup::to_symmetrized(const StateFunction& u) const {
  const int n = model_.n;
  std::vector<double> w(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += q_(i, k) * sqrt_m_[i] * u[i];
    w[k] = acc;
  }
  return w;
}

StateFunction SpectralSemigroup::eigenfunction(int k) const {
  const int n = model_.n;
  if (k < 0 || k >= n) throw std::out_of_range("eigenfunction index");
  StateFunction v(n);
  for (int i = 0; i < n; ++i) v[i] = q_(i, k) / sqrt_m_[i];
  return v;
}

double SpectralSemigroup::spectral_radius() const {
  double r = 0.0;
  for (double ev : eigenvalues_) r = std::max(r, std::abs(ev));
  return r;
}

double SpectralSemigroup::zero_threshold() const { return 1e-10 * std::max(1.0, spectral_radius()); }

double SpectralSemigroup::spectral_gap() const {
  double thr = zero_threshold();
  double gap = 0.0;
  for (double ev : eigenvalues_) {
    double a = std::abs(ev);
    if (a > thr && (gap == 0.0 || a < gap)) gap = a;
  }
  return gap;
}

StateFunction SpectralSemigroup::apply(const StateFunction& u, double t) const {
  require_state_function(model_, u);
  if (t < 0.0) throw std::invalid_argument("apply: negative time");
  if (t == 0.0) return u;
  const int n = model_.n;
  std::vector<double> w = to_symmetrized(u);
  for (int k = 0; k < n; ++k) w[k] *= std::exp(t * eigenvalues_[k]);
  StateFunction out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += q_(i, k) * w[k];
    out[i] = acc / sqrt_m_[i];
  }
  return out;
}

StateFunction SpectralSemigroup::apply_deficiency(const StateFunction& u, double t) const {
  require_state_function(model_, u);
  if (t < 0.0) throw std::invalid_argument("apply_deficiency: negative time");
  const int n = model_.n;
  if (t == 0.0) return StateFunction(n, 0.0);
  std::vector<double> w = to_symmetrized(u);
  for (int k = 0; k < n; ++k) w[k] *= -std::expm1(t * eigenvalues_[k]);
  StateFunction out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += q_(i, k) * w[k];
    out[i] = acc / sqrt_m_[i];
  }
  return out;
}

Mat SpectralSemigroup::kernel_pair_measure(double t) const {
  if (t < 0.0) throw std::invalid_argument("kernel_pair_measure: negative time");
  const int n = model_.n;
  // K = M^{1/2} (I + Q expm1(t Lambda) Q^T) M^{1/2}
  std::vector<double> e(n);
  for (int k = 0; k < n; ++k) e[k] = std::expm1(t * eigenvalues_[k]);
  Mat kmat(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += q_(i, k) * e[k] * q_(j, k);
      double v = sqrt_m_[i] * sqrt_m_[j] * acc;
      if (i == j) v += model_.m[i];
      kmat(i, j) = v;
      kmat(j, i) = v;
    }
  return kmat;
}

Mat SpectralSemigroup::kernel_matrix(double t) const {
  Mat kmat = kernel_pair_measure(t);
  const int n = model_.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) kmat(i, j) /= model_.m[i];
  return kmat;
}

StateFunction SpectralSemigroup::limit_infinity(const StateFunction& u) const {
  require_state_function(model_, u);
  const int n = model_.n;
  const double thr = zero_threshold();
  std::vector<double> w = to_symmetrized(u);
  for (int k = 0; k < n; ++k)
    if (std::abs(eigenvalues_[k]) > thr) w[k] = 0.0;
  StateFunction out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += q_(i, k) * w[k];
    out[i] = acc / sqrt_m_[i];
  }
  return out;
}

Mat SpectralSemigroup::reconstruct_generator() const {
  const int n = model_.n;
  Mat l(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += q_(i, k) * eigenvalues_[k] * q_(j, k);
      l(i, j) = acc * sqrt_m_[j] / sqrt_m_[i];
    }
  return l;
}

double lp_norm_pow(const std::vector<double>& m, const StateFunction& u, double p) {
  if (u.size() != m.size()) throw std::invalid_argument("lp_norm: dimension mismatch");
  if (std::isinf(p)) {
    double mx = 0.0;
    for (double v : u) mx = std::max(mx, std::abs(v));
    return mx;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += m[i] * std::pow(std::abs(u[i]), p);
  return acc;
}

double lp_norm(const std::vector<double>& m, const StateFunction& u, double p) {
  if (std::isinf(p)) return lp_norm_pow(m, u, p);
  return std::pow(lp_norm_pow(m, u, p), 1.0 / p);
}

double inner_m(const std::vector<double>& m, const StateFunction& u, const StateFunction& v) {
  if (u.size() != m.size() || v.size() != m.size())
    throw std::invalid_argument("inner_m: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += m[i] * u[i] * v[i];
  return acc;
}

}  // namespace sbf
