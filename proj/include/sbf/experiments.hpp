#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "sbf/euclid.hpp"
#include "sbf/forms.hpp"
#include "sbf/hardy_stein.hpp"
#include "sbf/lemmas.hpp"

namespace sbf {

/// One seeded instance of a batch: model plus a test function. Deterministic
/// in (seed, index); batch items are independent streams.
struct RandomInstance {
  std::uint64_t model_seed = 0;
  int n = 0;
  bool killing = false;
  FiniteModel model;
  StateFunction u;
};

RandomInstance random_instance(std::uint64_t seed, long index, int size_lo, int size_hi,
                               double density, bool killing);

/// Same, but rates rescaled to unit Gershgorin radius (time unit of order one)
/// and guaranteed to carry at least one jump edge. Used by the dynamic checks
/// so nothing decays below measurable scale on t of order 1.
RandomInstance normalized_instance(std::uint64_t seed, long index, int size_lo, int size_hi,
                                   double density, bool killing);

// --- generator identity and comparability -------------------------------

struct IdentityRow {
  std::uint64_t model_seed = 0;
  int n = 0;
  bool killing = false;
  double p = 0.0;
  double ep = 0.0, jump = 0.0, kill = 0.0, dirichlet_half = 0.0;
  double identity_gap = 0.0, identity_allowance = 0.0;
  double lower_margin = 0.0, upper_margin = 0.0, comparability_slack = 0.0;
  bool identity_ok = true, comparability_ok = true, p2_equality_ok = true;
};

struct IdentityBatch {
  std::vector<IdentityRow> rows;
  long identity_violations = 0;
  long comparability_violations = 0;
  long p2_violations = 0;
  double worst_identity_ratio = 0.0;  // max gap / allowance
  bool ok() const { return identity_violations + comparability_violations + p2_violations == 0; }
};

IdentityBatch run_identity_batch(std::uint64_t seed, int count, int size_lo, int size_hi,
                                 const std::vector<double>& ps, double density = 0.35);
void write_identity_csv(std::ostream& os, const IdentityBatch& batch);

// --- lemma sweeps --------------------------------------------------------

struct LemmaSweeps {
  std::vector<SweepReport> reports;
  long total_violations() const;
  bool heavy_tail_all_regions() const;
};

/// samples_total is the per-distribution budget, split evenly over the
/// (alpha, n) grid (rounded up).
LemmaSweeps run_lemma_sweeps(std::uint64_t seed, long samples_total,
                             const std::vector<double>& alphas, const std::vector<double>& ns,
                             const std::vector<SweepDistribution>& distributions,
                             double box_halfwidth = 2.0);
void write_sweep_csv(std::ostream& os, const LemmaSweeps& sweeps);
nlohmann::json sweeps_to_json(const LemmaSweeps& sweeps);

// --- approximate forms: small-t limit, monotonicity, recovery ------------

struct ApproxRow {
  std::uint64_t model_seed = 0;
  int n = 0;
  double p = 0.0;
  double slope = 0.0;
  bool monotone = false;
  double kill_rel_err = 0.0, jump_rel_err = 0.0;
  bool slope_ok = false, recovery_ok = false;
};

struct ApproxBatch {
  std::vector<ApproxRow> rows;
  long violations = 0;
  bool ok() const { return violations == 0; }
};

ApproxBatch run_approx_convergence(std::uint64_t seed, int count, const std::vector<double>& t_list,
                                   const std::vector<double>& ps, double recovery_t = 1e-6,
                                   double recovery_tol = 1e-4);
void write_approx_csv(std::ostream& os, const ApproxBatch& batch);

// --- Hardy-Stein balance --------------------------------------------------

struct HardySteinRow {
  std::uint64_t model_seed = 0;
  int n = 0;
  bool killing = false;
  double p = 0.0;
  HardySteinReport report;
  double gap = 0.0, allowance = 0.0;
  bool ok = true;
};

struct HardySteinBatch {
  std::vector<HardySteinRow> rows;
  long violations = 0;
  bool ok() const { return violations == 0; }
};

HardySteinBatch run_hardy_stein_batch(std::uint64_t seed, int count, int size_lo, int size_hi,
                                      const std::vector<double>& ps, double tol = 1e-8);
void write_hardy_stein_csv(std::ostream& os, const HardySteinBatch& batch);

// --- semigroup axioms -----------------------------------------------------

struct SemigroupAxioms {
  long checks = 0;
  long violations = 0;
  std::string worst_description;
  double worst_excess = 0.0;
  bool ok() const { return violations == 0; }
};

SemigroupAxioms run_semigroup_axioms(std::uint64_t seed, int count, int size_lo, int size_hi,
                                     const std::vector<double>& t_list,
                                     const std::vector<double>& ps);

// --- Euclidean convergence study ------------------------------------------

struct EuclidStudy {
  double p = 0.0;
  std::vector<StudyRow> rows;
  double final_order = 0.0;
};

/// Canonical instance: u = 2 + sin on [0, 2 pi], unit diffusion coefficient,
/// periodic boundary.
std::vector<EuclidStudy> run_euclid_study(const std::vector<double>& ps,
                                          const std::vector<int>& grids);
void write_euclid_csv(std::ostream& os, const std::vector<EuclidStudy>& studies);

// --- norm-decay derivative identity ----------------------------------------

struct DerivativeRow {
  std::uint64_t model_seed = 0;
  int n = 0;
  double p = 0.0, t = 0.0;
  double finite_difference = 0.0, exact = 0.0, rel_err = 0.0;
  bool ok = true;
};

struct DerivativeBatch {
  std::vector<DerivativeRow> rows;
  long violations = 0;
  bool ok() const { return violations == 0; }
};

DerivativeBatch run_derivative_identity(std::uint64_t seed, int count,
                                        const std::vector<double>& t_list,
                                        const std::vector<double>& ps, double rel_tol = 1e-6);

// --- decay curves -----------------------------------------------------------

void write_decay_csv(std::ostream& os, const std::vector<DecayPoint>& curve);

}  // namespace sbf
