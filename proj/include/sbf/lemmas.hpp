#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sbf/scalar.hpp"

namespace sbf {

/// Two-sided power-pairing bound:
///   alpha(2-alpha)(t-s)^2 <= (t^<a> - s^<a>)(t^<2-a> - s^<2-a>) <= 2(t-s)^2.
struct StroockBounds {
  double lower, middle, upper;
};
StroockBounds stroock_check(double alpha, double s, double t);

struct LemmaSample {
  double s, t;
  LemmaParams params;
};

/// |Phi_{alpha,n} - Phi_alpha| against eps_{alpha,n} (t-s)^2 + 180 Psi_n.
/// margin = rhs - lhs; the contract is margin >= -1e-12 max(1, rhs).
struct KeyBound {
  double lhs, rhs, margin;
};
KeyBound key_bound_residual(const LemmaSample& sample);

/// Half-plane cells cut by the thresholds 1, n, n^3, n^4 after normalizing
/// to |s| <= t. Boundary ties resolve to the alphabetically earliest tag.
enum class Region : int { A = 0, B, C, D, E, F, G };
char region_label(Region r);
Region classify_region(double s, double t, double n);

/// Sharper per-cell bound: A generic is 3 Psi_n, B 4 Psi_n, C 8 n^{-min(a,2-a)} (t-s)^2,
/// D 180 Psi_n, E 0 exactly, F 36 Psi_n, G 4 Psi_n.
struct RegionBound {
  Region region;
  double lhs, rhs, margin;
};
RegionBound region_bound_check(const LemmaSample& sample);

enum class SweepDistribution { UniformBox, HeavyTail, BreakpointFocused };
const char* to_string(SweepDistribution d);
SweepDistribution sweep_distribution_from_string(const std::string& name);

/// One (alpha, n) grid cell of a sweep. Margins are normalized by
/// max(1, rhs) so they compare across magnitudes; a violation is a
/// normalized margin below -1e-12.
struct SweepCell {
  double alpha = 0.0;
  double n = 0.0;
  long count = 0;
  double min_stroock_margin = 0.0;
  double min_key_margin = 0.0;
  double key_argmin_s = 0.0, key_argmin_t = 0.0;
  double min_region_margin = 0.0;
  std::array<long, 7> region_counts{};
  long violations = 0;
};

struct SweepReport {
  std::uint64_t seed = 0;
  SweepDistribution distribution = SweepDistribution::UniformBox;
  long count_per_cell = 0;
  std::vector<SweepCell> cells;

  long total_violations() const;
  std::array<long, 7> total_region_counts() const;
  bool all_regions_visited() const;
  double worst_margin() const;
};

/// Deterministic in (seed, cell index, sample index); cells may be evaluated
/// concurrently. Heavy-tail draws |s|, |t| = exp(U[-30, 30]) to reach every
/// region for n up to 64; breakpoint-focused perturbs the thresholds by
/// relative offsets {0, +-1e-12, +-1e-6}.
SweepReport sweep(std::uint64_t seed, long count_per_cell, const std::vector<double>& alphas,
                  const std::vector<double>& ns, SweepDistribution distribution,
                  double box_halfwidth = 2.0);

}  // namespace sbf
