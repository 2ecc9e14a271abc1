#pragma once

namespace sbf {

/// Signed power s^<alpha> = |s|^alpha * sign(s). Total on the reals; alpha >= 0.
/// alpha = 0 degenerates to sign(s) with sign(0) = 0, alpha = 1 returns s bitwise.
double signed_pow(double s, double alpha);

/// Bregman divergence of |.|^p:  F_p(xi, eta) = |eta|^p - |xi|^p - p xi^<p-1> (eta - xi).
/// Nonnegative, zero exactly on the diagonal. Requires p > 1.
double bregman_divergence(double p, double xi, double eta);

/// Parameters of the truncated-power estimates: alpha in (0, 2), n >= 2.
struct LemmaParams {
  double alpha;
  double n;

  LemmaParams(double alpha, double n);

  /// 8 n^{-min(alpha, 2 - alpha)}
  double epsilon() const;

  /// Coefficient of the plateau term in the key bound.
  static constexpr double psi_constant = 180.0;
};

/// s^<alpha>, the smooth reference curve.
double phi(double alpha, double s);

/// Truncated version: identity core (|s| < 1), signed power middle,
/// clipped to n^{4 alpha} sign(s) for |s| >= n^4. Odd, continuous, nondecreasing.
double phi_n(const LemmaParams& lp, double s);

/// Plateau ramp: identity for |s| < n, flat at n sign(s) up to n^3, then the
/// identity shifted back by n^3 - n. Odd, continuous, 1-Lipschitz.
double psi_n(double n, double s);

}  // namespace sbf
