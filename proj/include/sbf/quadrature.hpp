#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace sbf {

struct QuadratureError : std::runtime_error {
  double achieved_estimate;
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_estimate(achieved) {}
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  long intervals = 0;
};

namespace detail {

inline double simpson(double h, double fa, double fc, double fb) {
  return (fa + 4.0 * fc + fb) * (h / 6.0);
}

template <class F>
double adaptive_step(const F& f, double a, double c, double b, double fa, double fc, double fb,
                     double whole, double tol, long& budget, QuadratureResult& out, int depth) {
  double ca = 0.5 * (a + c);
  double cb = 0.5 * (c + b);
  double fca = f(ca);
  double fcb = f(cb);
  out.evaluations += 2;
  double h2 = 0.5 * (b - a);
  double left = simpson(h2, fa, fca, fc);
  double right = simpson(h2, fc, fcb, fb);
  double err = (left + right - whole) / 15.0;
  if (std::abs(err) <= tol || depth >= 52) {
    out.error_estimate += std::abs(err);
    out.intervals += 2;
    return left + right + err;
  }
  if (--budget <= 0) {
    std::ostringstream os;
    os << "adaptive_simpson: subdivision cap reached on [" << a << ", " << b
       << "], achieved error estimate " << std::abs(err);
    throw QuadratureError(os.str(), std::abs(err));
  }
  return adaptive_step(f, a, ca, c, fa, fca, fc, left, 0.5 * tol, budget, out, depth + 1) +
         adaptive_step(f, c, cb, b, fc, fcb, fb, right, 0.5 * tol, budget, out, depth + 1);
}

}  // namespace detail

/// Recursive adaptive Simpson to absolute tolerance tol, with at most
/// max_intervals leaf intervals (default 2^20). Throws QuadratureError with
/// the achieved estimate when the cap is hit.
template <class F>
QuadratureResult adaptive_simpson(const F& f, double a, double b, double tol,
                                  long max_intervals = 1L << 20) {
  QuadratureResult out;
  if (a == b) return out;
  double c = 0.5 * (a + b);
  double fa = f(a), fc = f(c), fb = f(b);
  out.evaluations = 3;
  double whole = detail::simpson(b - a, fa, fc, fb);
  long budget = max_intervals;
  out.value = detail::adaptive_step(f, a, c, b, fa, fc, fb, whole, tol, budget, out, 0);
  return out;
}

/// Adaptive Simpson for a two-component integrand (shared sample points,
/// combined refinement criterion). Returns component values in .value0/.value1.
struct QuadraturePairResult {
  double value0 = 0.0, value1 = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  long intervals = 0;
};

namespace detail {

template <class F>
void adaptive_pair_step(const F& f, double a, double c, double b, std::array<double, 2> fa,
                        std::array<double, 2> fc, std::array<double, 2> fb,
                        std::array<double, 2> whole, double tol, long& budget,
                        QuadraturePairResult& out, int depth) {
  double ca = 0.5 * (a + c);
  double cb = 0.5 * (c + b);
  std::array<double, 2> fca = f(ca);
  std::array<double, 2> fcb = f(cb);
  out.evaluations += 2;
  double h2 = 0.5 * (b - a);
  std::array<double, 2> left{}, right{}, err{};
  for (int k = 0; k < 2; ++k) {
    left[k] = simpson(h2, fa[k], fca[k], fc[k]);
    right[k] = simpson(h2, fc[k], fcb[k], fb[k]);
    err[k] = (left[k] + right[k] - whole[k]) / 15.0;
  }
  double err_total = std::abs(err[0]) + std::abs(err[1]);
  if (err_total <= tol || depth >= 52) {
    out.value0 += left[0] + right[0] + err[0];
    out.value1 += left[1] + right[1] + err[1];
    out.error_estimate += err_total;
    out.intervals += 2;
    return;
  }
  if (--budget <= 0) {
    std::ostringstream os;
    os << "adaptive_simpson: subdivision cap reached on [" << a << ", " << b
       << "], achieved error estimate " << err_total;
    throw QuadratureError(os.str(), err_total);
  }
  adaptive_pair_step(f, a, ca, c, fa, fca, fc, left, 0.5 * tol, budget, out, depth + 1);
  adaptive_pair_step(f, c, cb, b, fc, fcb, fb, right, 0.5 * tol, budget, out, depth + 1);
}

}  // namespace detail

template <class F>
QuadraturePairResult adaptive_simpson_pair(const F& f, double a, double b, double tol,
                                           long max_intervals = 1L << 20) {
  QuadraturePairResult out;
  if (a == b) return out;
  double c = 0.5 * (a + b);
  std::array<double, 2> fa = f(a), fc = f(c), fb = f(b);
  out.evaluations = 3;
  std::array<double, 2> whole{};
  for (int k = 0; k < 2; ++k) whole[k] = detail::simpson(b - a, fa[k], fc[k], fb[k]);
  long budget = max_intervals;
  detail::adaptive_pair_step(f, a, c, b, fa, fc, fb, whole, tol, budget, out, 0);
  return out;
}

/// Composite 8-point Gauss-Legendre over `panels` equal panels.
template <class F>
double gauss_legendre8(const F& f, double a, double b, int panels) {
  static constexpr double kNodes[4] = {0.18343464249564980494, 0.52553240991632898582,
                                       0.79666647741362673959, 0.96028985649753623168};
  static constexpr double kWeights[4] = {0.36268378337836198297, 0.31370664587788728734,
                                         0.22238103445337447054, 0.10122853629037625915};
  if (panels < 1) throw std::invalid_argument("gauss_legendre8: panels must be >= 1");
  double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    double half = 0.5 * h;
    double panel = 0.0;
    for (int k = 0; k < 4; ++k)
      panel += kWeights[k] * (f(mid + half * kNodes[k]) + f(mid - half * kNodes[k]));
    acc += panel * half;
  }
  return acc;
}

}  // namespace sbf
