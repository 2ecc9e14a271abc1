#pragma once

#include <vector>

#include "sbf/matrix.hpp"
#include "sbf/model.hpp"

namespace sbf {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // diagonal of Q^T A Q
  Mat vectors;                      // orthogonal Q, eigenvectors in columns
  int sweeps = 0;
  double offdiagonal_norm = 0.0;
};

/// Cyclic Jacobi rotations for a dense symmetric matrix. Stops when the
/// off-diagonal Frobenius norm falls below tol_factor times the Frobenius
/// norm of the input; throws after max_sweeps full passes without converging.
EigenDecomposition jacobi_eigensolver(Mat a, int max_sweeps = 100, double tol_factor = 1e-12);

/// Exact semigroup T_t = e^{tL} through the eigendecomposition of the
/// m-symmetrized generator M^{1/2} L M^{-1/2}. Immutable once built; every
/// operation is a pure function of the cached decomposition.
class SpectralSemigroup {
 public:
  explicit SpectralSemigroup(FiniteModel model);

  const FiniteModel& model() const { return model_; }

  /// Nonpositive spectrum, sorted descending (harmonic modes first).
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

  /// k-th eigenfunction of L, orthonormal in the m-weighted inner product.
  StateFunction eigenfunction(int k) const;

  double spectral_radius() const;
  /// Smallest nonzero |eigenvalue|; 0 when the whole spectrum is (numerically) zero.
  double spectral_gap() const;
  /// |lambda| at or below this counts as a harmonic mode.
  double zero_threshold() const;

  /// T_t u. Requires t >= 0; t = 0 returns u unchanged.
  StateFunction apply(const StateFunction& u, double t) const;

  /// u - T_t u, evaluated through expm1 so small-t values keep full relative
  /// accuracy (no cancellation against the identity part).
  StateFunction apply_deficiency(const StateFunction& u, double t) const;

  /// Operator matrix (T_t)_ij.
  Mat kernel_matrix(double t) const;

  /// Pair weights K_ij = m_i (T_t)_ij of the kernel measure; symmetric, and
  /// off the diagonal accurate relative to t (expm1 route).
  Mat kernel_pair_measure(double t) const;

  /// m-orthogonal projection onto the harmonic modes; the t -> infinity limit.
  StateFunction limit_infinity(const StateFunction& u) const;

  /// Rebuild L from the decomposition (reconstruction checks in tests).
  Mat reconstruct_generator() const;

 private:
  std::vector<double> to_symmetrized(const StateFunction& u) const;  // Q^T M^{1/2} u

  FiniteModel model_;
  std::vector<double> eigenvalues_;
  Mat q_;  // columns: eigenvectors of the symmetrized generator
  std::vector<double> sqrt_m_;
};

/// Weighted p-norm (sum_i m_i |u_i|^p)^{1/p}; p = infinity gives max |u_i|.
double lp_norm(const std::vector<double>& m, const StateFunction& u, double p);

/// sum_i m_i |u_i|^p without the final root (the quantity Hardy-Stein tracks).
double lp_norm_pow(const std::vector<double>& m, const StateFunction& u, double p);

double inner_m(const std::vector<double>& m, const StateFunction& u, const StateFunction& v);

}  // namespace sbf
