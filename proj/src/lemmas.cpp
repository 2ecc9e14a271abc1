#include "sbf/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sbf/parallel.hpp"
#include "sbf/rng.hpp"

namespace sbf {

namespace {

constexpr double kSlack = 1e-12;

double phi_pair(double alpha, double s, double t) {
  return (phi(alpha, t) - phi(alpha, s)) * (phi(2.0 - alpha, t) - phi(2.0 - alpha, s));
}

// Same pairing evaluated without subtractive cancellation: near-diagonal
// same-sign samples make the naive power differences lose most digits right
// where the lower Stroock bound becomes tight.
double phi_pair_stable(double alpha, double s, double t) {
  if (s == t) return 0.0;
  if (s == 0.0) return t * t;  // |t|^alpha |t|^{2-alpha} with matching signs
  if (t == 0.0) return s * s;
  if ((s > 0.0) != (t > 0.0)) {
    // opposite signs: both factors add magnitudes, nothing cancels
    double as = std::abs(s), at = std::abs(t);
    return (std::pow(at, alpha) + std::pow(as, alpha)) *
           (std::pow(at, 2.0 - alpha) + std::pow(as, 2.0 - alpha));
  }
  double a = std::min(std::abs(s), std::abs(t));
  double b = std::max(std::abs(s), std::abs(t));
  double log_ratio = std::log1p((b - a) / a);
  return a * a * std::expm1(alpha * log_ratio) * std::expm1((2.0 - alpha) * log_ratio);
}

double phi_n_pair(const LemmaParams& lp, double s, double t) {
  LemmaParams mirror(2.0 - lp.alpha, lp.n);
  return (phi_n(lp, t) - phi_n(lp, s)) * (phi_n(mirror, t) - phi_n(mirror, s));
}

double psi_pair(double n, double s, double t) {
  double d = psi_n(n, t) - psi_n(n, s);
  return d * d;
}

}  // namespace

StroockBounds stroock_check(double alpha, double s, double t) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("stroock_check: alpha must lie in (0, 2)");
  double d = t - s;
  return {alpha * (2.0 - alpha) * d * d, phi_pair_stable(alpha, s, t), 2.0 * d * d};
}

KeyBound key_bound_residual(const LemmaSample& sample) {
  double lhs = std::abs(phi_n_pair(sample.params, sample.s, sample.t) -
                        phi_pair(sample.params.alpha, sample.s, sample.t));
  double d = sample.t - sample.s;
  double rhs = sample.params.epsilon() * d * d +
               LemmaParams::psi_constant * psi_pair(sample.params.n, sample.s, sample.t);
  return {lhs, rhs, rhs - lhs};
}

char region_label(Region r) { return static_cast<char>('A' + static_cast<int>(r)); }

Region classify_region(double s, double t, double n) {
  if (!(n >= 2.0)) throw std::invalid_argument("classify_region: n must be >= 2");
  // Normalization: |s| <= |t|, then t >= 0. The bound is invariant under both.
  if (std::abs(s) > std::abs(t)) std::swap(s, t);
  if (t < 0.0) {
    s = -s;
    t = -t;
  }
  double as = std::abs(s);
  double n4 = n * n * n * n;
  if (as <= t && t <= 1.0) return Region::A;
  if (as <= 1.0 && t <= n) return Region::B;
  if (as <= 1.0 && t <= n4) return Region::C;
  if (as <= 1.0) return Region::D;
  if (t <= n4) return Region::E;
  if (as <= n4) return Region::F;
  return Region::G;
}

RegionBound region_bound_check(const LemmaSample& sample) {
  const LemmaParams& lp = sample.params;
  Region r = classify_region(sample.s, sample.t, lp.n);
  double lhs = std::abs(phi_n_pair(lp, sample.s, sample.t) - phi_pair(lp.alpha, sample.s, sample.t));
  double d2 = (sample.t - sample.s) * (sample.t - sample.s);
  double psi = psi_pair(lp.n, sample.s, sample.t);
  double rhs = 0.0;
  switch (r) {
    case Region::A: rhs = 3.0 * psi; break;
    case Region::B: rhs = 4.0 * psi; break;
    case Region::C: rhs = lp.epsilon() * d2; break;  // 8 n^{-min(alpha, 2-alpha)}
    case Region::D: rhs = 180.0 * psi; break;
    case Region::E: rhs = 0.0; break;
    case Region::F: rhs = 36.0 * psi; break;
    case Region::G: rhs = 4.0 * psi; break;
  }
  return {r, lhs, rhs, rhs - lhs};
}

const char* to_string(SweepDistribution d) {
  switch (d) {
    case SweepDistribution::UniformBox: return "uniform-box";
    case SweepDistribution::HeavyTail: return "heavy-tail";
    case SweepDistribution::BreakpointFocused: return "breakpoint-focused";
  }
  return "?";
}

SweepDistribution sweep_distribution_from_string(const std::string& name) {
  if (name == "uniform-box") return SweepDistribution::UniformBox;
  if (name == "heavy-tail") return SweepDistribution::HeavyTail;
  if (name == "breakpoint-focused") return SweepDistribution::BreakpointFocused;
  throw std::invalid_argument("unknown sweep distribution: " + name);
}

long SweepReport::total_violations() const {
  long v = 0;
  for (const auto& c : cells) v += c.violations;
  return v;
}

std::array<long, 7> SweepReport::total_region_counts() const {
  std::array<long, 7> acc{};
  for (const auto& c : cells)
    for (int r = 0; r < 7; ++r) acc[r] += c.region_counts[r];
  return acc;
}

bool SweepReport::all_regions_visited() const {
  for (long c : total_region_counts())
    if (c == 0) return false;
  return true;
}

double SweepReport::worst_margin() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& c : cells)
    w = std::min({w, c.min_stroock_margin, c.min_key_margin, c.min_region_margin});
  return w;
}

namespace {

void draw_sample(SplitMix64& g, SweepDistribution dist, double n, double box, double& s, double& t) {
  switch (dist) {
    case SweepDistribution::UniformBox:
      s = g.uniform(-box, box);
      t = g.uniform(-box, box);
      return;
    case SweepDistribution::HeavyTail: {
      double ms = std::exp(g.uniform(-30.0, 30.0));
      double mt = std::exp(g.uniform(-30.0, 30.0));
      s = g.coin() ? ms : -ms;
      t = g.coin() ? mt : -mt;
      return;
    }
    case SweepDistribution::BreakpointFocused: {
      // Relative perturbations: absolute 1e-12 is below one ulp at n^4 for large n.
      static constexpr double kDeltas[5] = {0.0, 1e-12, -1e-12, 1e-6, -1e-6};
      const double bases[4] = {1.0, n, n * n * n, n * n * n * n};
      double bs = bases[g.below(4)] * (1.0 + kDeltas[g.below(5)]);
      double bt = bases[g.below(4)] * (1.0 + kDeltas[g.below(5)]);
      s = g.coin() ? bs : -bs;
      t = g.coin() ? bt : -bt;
      return;
    }
  }
}

}  // namespace

SweepReport sweep(std::uint64_t seed, long count_per_cell, const std::vector<double>& alphas,
                  const std::vector<double>& ns, SweepDistribution distribution, double box_halfwidth) {
  if (count_per_cell < 1) throw std::invalid_argument("sweep: count must be >= 1");
  if (alphas.empty() || ns.empty()) throw std::invalid_argument("sweep: alpha and n lists must be nonempty");

  SweepReport report;
  report.seed = seed;
  report.distribution = distribution;
  report.count_per_cell = count_per_cell;
  report.cells.resize(alphas.size() * ns.size());

  long cell_count = static_cast<long>(report.cells.size());
  parallel_for(cell_count, [&](long ci) {
    double alpha = alphas[ci / ns.size()];
    double n = ns[ci % ns.size()];
    LemmaParams lp(alpha, n);

    SweepCell cell;
    cell.alpha = alpha;
    cell.n = n;
    cell.count = count_per_cell;
    cell.min_stroock_margin = std::numeric_limits<double>::infinity();
    cell.min_key_margin = std::numeric_limits<double>::infinity();
    cell.min_region_margin = std::numeric_limits<double>::infinity();

    for (long k = 0; k < count_per_cell; ++k) {
      SplitMix64 g(derive_stream(seed, static_cast<std::uint64_t>(ci), static_cast<std::uint64_t>(k)));
      double s = 0.0, t = 0.0;
      draw_sample(g, distribution, n, box_halfwidth, s, t);

      StroockBounds sb = stroock_check(alpha, s, t);
      double stroock_margin =
          std::min(sb.middle - sb.lower, sb.upper - sb.middle) / std::max(1.0, sb.upper);

      LemmaSample sample{s, t, lp};
      KeyBound kb = key_bound_residual(sample);
      double key_margin = kb.margin / std::max(1.0, kb.rhs);

      RegionBound rb = region_bound_check(sample);
      double region_margin = rb.margin / std::max(1.0, rb.rhs);

      cell.region_counts[static_cast<int>(rb.region)]++;
      if (stroock_margin < cell.min_stroock_margin) cell.min_stroock_margin = stroock_margin;
      if (key_margin < cell.min_key_margin) {
        cell.min_key_margin = key_margin;
        cell.key_argmin_s = s;
        cell.key_argmin_t = t;
      }
      if (region_margin < cell.min_region_margin) cell.min_region_margin = region_margin;
      if (stroock_margin < -kSlack || key_margin < -kSlack || region_margin < -kSlack)
        cell.violations++;
    }
    report.cells[ci] = cell;
  });

  return report;
}

}  // namespace sbf
