#include "sbf/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbf {

double signed_pow(double s, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("signed_pow: alpha must be >= 0");
  if (alpha == 0.0) return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
  if (alpha == 1.0) return s;  // keeps u^<1> == u bitwise
  if (s == 0.0) return 0.0;
  double r = std::pow(std::abs(s), alpha);
  return s > 0.0 ? r : -r;
}

double bregman_divergence(double p, double xi, double eta) {
  if (!(p > 1.0)) throw std::invalid_argument("bregman_divergence: p must be > 1");
  return std::pow(std::abs(eta), p) - std::pow(std::abs(xi), p) -
         p * signed_pow(xi, p - 1.0) * (eta - xi);
}

LemmaParams::LemmaParams(double alpha_, double n_) : alpha(alpha_), n(n_) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("LemmaParams: alpha must lie in (0, 2)");
  if (!(n >= 2.0)) throw std::invalid_argument("LemmaParams: n must be >= 2");
}

double LemmaParams::epsilon() const { return 8.0 * std::pow(n, -std::min(alpha, 2.0 - alpha)); }

double phi(double alpha, double s) { return signed_pow(s, alpha); }

double phi_n(const LemmaParams& lp, double s) {
  double x = std::abs(s);
  if (x < 1.0) return s;
  double n4 = lp.n * lp.n * lp.n * lp.n;
  if (x < n4) return signed_pow(s, lp.alpha);
  // Ties at |s| = n^4 land here; pow(n4, alpha) equals the middle branch value.
  double cap = std::pow(n4, lp.alpha);
  return s > 0.0 ? cap : -cap;
}

double psi_n(double n, double s) {
  if (!(n >= 2.0)) throw std::invalid_argument("psi_n: n must be >= 2");
  double x = std::abs(s);
  if (x < n) return s;
  double n3 = n * n * n;
  if (x < n3) return s > 0.0 ? n : -n;
  double y = x - (n3 - n);
  return s > 0.0 ? y : -y;
}

}  // namespace sbf
