#include "sbf/experiments.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "sbf/csv.hpp"
#include "sbf/parallel.hpp"
#include "sbf/rng.hpp"
#include "sbf/scalar.hpp"

namespace sbf {

namespace {

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

/// Least-squares slope of log(err) against log(t).
double loglog_slope(const std::vector<double>& ts, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(errs[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    double x = std::log(ts[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

RandomInstance random_instance(std::uint64_t seed, long index, int size_lo, int size_hi,
                               double density, bool killing) {
  RandomInstance inst;
  SplitMix64 g(derive_stream(seed, static_cast<std::uint64_t>(index)));
  inst.model_seed = g.next();
  inst.n = size_lo + static_cast<int>(index % (size_hi - size_lo + 1));
  inst.killing = killing;
  inst.model = random_model(inst.model_seed, inst.n, density, killing);
  inst.u.resize(inst.n);
  for (int i = 0; i < inst.n; ++i) inst.u[i] = g.uniform(-2.0, 2.0);
  return inst;
}

RandomInstance normalized_instance(std::uint64_t seed, long index, int size_lo, int size_hi,
                                   double density, bool killing) {
  for (long attempt = 0;; ++attempt) {
    RandomInstance inst =
        random_instance(derive_stream(seed, 0x7363616c65ull, attempt), index, size_lo, size_hi,
                        density, killing);
    BeurlingDenyData bd = decompose(inst.model);
    bool has_edge = false;
    double radius = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      double row = 0.0;
      for (int j = 0; j < inst.n; ++j) {
        row += std::abs(inst.model.L(i, j));
        if (i != j && bd.J(i, j) > 0.0) has_edge = true;
      }
      radius = std::max(radius, row);
    }
    if (!has_edge || radius == 0.0) continue;  // redraw; measure-zero unless density is tiny
    for (int i = 0; i < inst.n; ++i) {
      bd.kappa[i] /= radius;
      for (int j = 0; j < inst.n; ++j) bd.J(i, j) /= radius;
    }
    inst.model = assemble(bd, inst.model.m);
    return inst;
  }
}

// --- identity / comparability ----------------------------------------------

IdentityBatch run_identity_batch(std::uint64_t seed, int count, int size_lo, int size_hi,
                                 const std::vector<double>& ps, double density) {
  IdentityBatch batch;
  batch.rows.resize(static_cast<std::size_t>(count) * ps.size());

  parallel_for(count, [&](long i) {
    RandomInstance inst = random_instance(seed, i, size_lo, size_hi, density, i % 2 == 1);
    BeurlingDenyData bd = decompose(inst.model);
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      double p = ps[pi];
      IdentityRow row;
      row.model_seed = inst.model_seed;
      row.n = inst.n;
      row.killing = inst.killing;
      row.p = p;

      FormBreakdown fb = bd_form_p(bd, inst.u, p);
      row.ep = ep_generator(inst.model, inst.u, p);
      row.jump = fb.jump;
      row.kill = fb.kill;
      row.identity_gap = std::abs(row.ep - fb.total);
      row.identity_allowance = 1e-9 * (1.0 + std::abs(row.ep));
      row.identity_ok = row.identity_gap <= row.identity_allowance;

      Comparability comp = comparability_check(inst.model, inst.u, p);
      row.dirichlet_half = 0.5 * comp.upper;
      row.lower_margin = comp.lower_margin;
      row.upper_margin = comp.upper_margin;
      row.comparability_slack = 1e-12 * std::max(1.0, comp.upper);
      row.comparability_ok = row.lower_margin >= -row.comparability_slack &&
                             row.upper_margin >= -row.comparability_slack;
      row.p2_equality_ok = p != 2.0 || std::abs(row.lower_margin) <= 1e-12;

      batch.rows[i * ps.size() + pi] = row;
    }
  });

  for (const auto& row : batch.rows) {
    if (!row.identity_ok) batch.identity_violations++;
    if (!row.comparability_ok) batch.comparability_violations++;
    if (!row.p2_equality_ok) batch.p2_violations++;
    batch.worst_identity_ratio =
        std::max(batch.worst_identity_ratio, row.identity_gap / row.identity_allowance);
  }
  return batch;
}

void write_identity_csv(std::ostream& os, const IdentityBatch& batch) {
  CsvWriter csv(os);
  csv.row({"seed", "n", "p", "ep", "jump", "kill", "e_half", "lower_margin", "upper_margin"});
  for (const auto& r : batch.rows)
    csv.row({r.model_seed, r.n, r.p, r.ep, r.jump, r.kill, r.dirichlet_half, r.lower_margin,
             r.upper_margin});
}

// --- lemma sweeps -----------------------------------------------------------

long LemmaSweeps::total_violations() const {
  long v = 0;
  for (const auto& r : reports) v += r.total_violations();
  return v;
}

bool LemmaSweeps::heavy_tail_all_regions() const {
  for (const auto& r : reports)
    if (r.distribution == SweepDistribution::HeavyTail && r.all_regions_visited()) return true;
  return false;
}

LemmaSweeps run_lemma_sweeps(std::uint64_t seed, long samples_total,
                             const std::vector<double>& alphas, const std::vector<double>& ns,
                             const std::vector<SweepDistribution>& distributions,
                             double box_halfwidth) {
  long cells = static_cast<long>(alphas.size() * ns.size());
  long per_cell = (samples_total + cells - 1) / cells;
  LemmaSweeps out;
  for (std::size_t d = 0; d < distributions.size(); ++d) {
    out.reports.push_back(sweep(derive_stream(seed, d), per_cell, alphas, ns, distributions[d],
                                box_halfwidth));
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const LemmaSweeps& sweeps) {
  CsvWriter csv(os);
  csv.row({"distribution", "alpha", "n", "count", "min_stroock_margin", "min_key_margin",
           "argmin_s", "argmin_t", "min_region_margin", "region_A", "region_B", "region_C",
           "region_D", "region_E", "region_F", "region_G", "violations"});
  for (const auto& rep : sweeps.reports)
    for (const auto& c : rep.cells)
      csv.row({to_string(rep.distribution), c.alpha, c.n, c.count, c.min_stroock_margin,
               c.min_key_margin, c.key_argmin_s, c.key_argmin_t, c.min_region_margin,
               c.region_counts[0], c.region_counts[1], c.region_counts[2], c.region_counts[3],
               c.region_counts[4], c.region_counts[5], c.region_counts[6], c.violations});
}

nlohmann::json sweeps_to_json(const LemmaSweeps& sweeps) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& rep : sweeps.reports) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : rep.cells) {
      cells.push_back({{"alpha", c.alpha},
                       {"n", c.n},
                       {"count", c.count},
                       {"min_stroock_margin", c.min_stroock_margin},
                       {"min_key_margin", c.min_key_margin},
                       {"argmin_s", c.key_argmin_s},
                       {"argmin_t", c.key_argmin_t},
                       {"min_region_margin", c.min_region_margin},
                       {"region_counts", c.region_counts},
                       {"violations", c.violations}});
    }
    out.push_back({{"distribution", to_string(rep.distribution)},
                   {"seed", rep.seed},
                   {"count_per_cell", rep.count_per_cell},
                   {"total_violations", rep.total_violations()},
                   {"cells", cells}});
  }
  return out;
}

// --- approximate forms -------------------------------------------------------

ApproxBatch run_approx_convergence(std::uint64_t seed, int count, const std::vector<double>& t_list,
                                   const std::vector<double>& ps, double recovery_t,
                                   double recovery_tol) {
  ApproxBatch batch;
  batch.rows.resize(count);

  parallel_for(count, [&](long i) {
    RandomInstance inst = normalized_instance(seed, i, 3, 24, 0.85, true);
    SpectralSemigroup sg(inst.model);
    BeurlingDenyData bd = decompose(inst.model);
    double p = ps[i % ps.size()];

    ApproxRow row;
    row.model_seed = inst.model_seed;
    row.n = inst.n;
    row.p = p;

    // Small-t limit: |E_p^(t) - E_p| should vanish at first order in t.
    double ep = ep_generator(inst.model, inst.u, p);
    std::vector<double> errs;
    for (double t : t_list) errs.push_back(std::abs(ep_approx_direct(sg, inst.u, p, t) - ep));
    row.slope = loglog_slope(t_list, errs);
    row.slope_ok = row.slope >= 0.9 && row.slope <= 1.1;

    // E_2^(t) nonincreasing along a geometric grid.
    row.monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 20; ++k) {
      double t = 1e-2 * std::pow(1000.0, k / 19.0);
      double val = ep_approx_direct(sg, inst.u, 2.0, t);
      if (val > prev + 1e-12 * std::max(1.0, std::abs(prev))) row.monotone = false;
      prev = val;
    }

    // Killing and resurrected-form recovery from the kernel at small t.
    FormBreakdown fb2 = bd_form_p(bd, inst.u, 2.0);
    ApproxForm af = ep_approx(sg, inst.u, 2.0, recovery_t);
    row.kill_rel_err = std::abs(af.kill_term - fb2.kill) / fb2.kill;
    row.jump_rel_err = std::abs(af.jump_term - fb2.jump) / fb2.jump;
    row.recovery_ok = row.kill_rel_err <= recovery_tol && row.jump_rel_err <= recovery_tol;

    batch.rows[i] = row;
  });

  for (const auto& r : batch.rows)
    if (!r.slope_ok || !r.monotone || !r.recovery_ok) batch.violations++;
  return batch;
}

void write_approx_csv(std::ostream& os, const ApproxBatch& batch) {
  CsvWriter csv(os);
  csv.row({"seed", "n", "p", "slope", "monotone", "kill_rel_err", "jump_rel_err"});
  for (const auto& r : batch.rows)
    csv.row({r.model_seed, r.n, r.p, r.slope, r.monotone ? "1" : "0", r.kill_rel_err,
             r.jump_rel_err});
}

// --- Hardy-Stein --------------------------------------------------------------

HardySteinBatch run_hardy_stein_batch(std::uint64_t seed, int count, int size_lo, int size_hi,
                                      const std::vector<double>& ps, double tol) {
  HardySteinBatch batch;
  batch.rows.resize(count);

  parallel_for(count, [&](long i) {
    RandomInstance inst = random_instance(seed, i, size_lo, size_hi, 0.35, i % 2 == 1);
    SpectralSemigroup sg(inst.model);
    double p = ps[i % ps.size()];

    HardySteinRow row;
    row.model_seed = inst.model_seed;
    row.n = inst.n;
    row.killing = inst.killing;
    row.p = p;
    row.report = hardy_stein(sg, inst.u, p, tol);
    row.gap = std::abs(row.report.lhs - row.report.rhs_total);
    row.allowance = std::max(10.0 * tol, 1e-6 * (1.0 + row.report.lhs));
    row.ok = row.gap <= row.allowance;
    batch.rows[i] = row;
  });

  for (const auto& r : batch.rows)
    if (!r.ok) batch.violations++;
  return batch;
}

void write_hardy_stein_csv(std::ostream& os, const HardySteinBatch& batch) {
  CsvWriter csv(os);
  csv.row({"seed", "n", "killing", "p", "lhs", "rhs_total", "rhs_jump", "rhs_kill",
           "truncation_time", "tail_bound", "gap", "allowance"});
  for (const auto& r : batch.rows)
    csv.row({r.model_seed, r.n, r.killing ? "1" : "0", r.p, r.report.lhs, r.report.rhs_total,
             r.report.rhs_jump, r.report.rhs_kill, r.report.truncation_time, r.report.tail_bound,
             r.gap, r.allowance});
}

// --- semigroup axioms ----------------------------------------------------------

SemigroupAxioms run_semigroup_axioms(std::uint64_t seed, int count, int size_lo, int size_hi,
                                     const std::vector<double>& t_list,
                                     const std::vector<double>& ps) {
  SemigroupAxioms out;
  std::mutex merge;

  parallel_for(count, [&](long i) {
    RandomInstance inst = random_instance(seed, i, size_lo, size_hi, 0.35, i % 2 == 1);
    SpectralSemigroup sg(inst.model);
    const auto& m = inst.model.m;
    const int n = inst.n;

    SplitMix64 g(derive_stream(seed, 0x6178696f6dull, i));
    StateFunction w(n), uabs(n);
    for (int k = 0; k < n; ++k) w[k] = g.uniform(-2.0, 2.0);
    for (int k = 0; k < n; ++k) uabs[k] = std::abs(inst.u[k]);
    StateFunction ones(n, 1.0);

    long checks = 0, violations = 0;
    double worst_excess = 0.0;
    std::string worst;
    auto record = [&](bool pass, double excess, const std::string& what) {
      ++checks;
      if (!pass) {
        ++violations;
        if (excess > worst_excess) {
          worst_excess = excess;
          worst = what;
        }
      }
    };

    for (double t : t_list) {
      StateFunction ut = sg.apply(inst.u, t);

      for (double p : ps) {
        double before = lp_norm(m, inst.u, p);
        double after = lp_norm(m, ut, p);
        record(after <= before * (1.0 + 1e-12), after - before, "contraction");
      }

      StateFunction pos = sg.apply(uabs, t);
      double min_pos = 0.0;
      for (double v : pos) min_pos = std::min(min_pos, v);
      record(min_pos >= -1e-12, -min_pos, "positivity");

      StateFunction mass = sg.apply(ones, t);
      for (double v : mass)
        record(v >= -1e-12 && v <= 1.0 + 1e-12, std::max(-v, v - 1.0), "sub-markov");

      double a = inner_m(m, ut, w);
      double b = inner_m(m, inst.u, sg.apply(w, t));
      record(rel_gap(a, b) <= 1e-10, rel_gap(a, b), "symmetry");

      StateFunction twice = sg.apply(ut, t);
      StateFunction direct = sg.apply(inst.u, 2.0 * t);
      double scale = 1.0, gap = 0.0;
      for (int k = 0; k < n; ++k) {
        scale = std::max(scale, std::abs(direct[k]));
        gap = std::max(gap, std::abs(twice[k] - direct[k]));
      }
      record(gap <= 1e-10 * scale, gap / scale, "semigroup-law");
    }

    std::lock_guard<std::mutex> lock(merge);
    out.checks += checks;
    out.violations += violations;
    if (worst_excess > out.worst_excess) {
      out.worst_excess = worst_excess;
      out.worst_description = worst;
    }
  });

  return out;
}

// --- Euclidean study -------------------------------------------------------------

std::vector<EuclidStudy> run_euclid_study(const std::vector<double>& ps,
                                          const std::vector<int>& grids) {
  SmoothFunction u{[](double x) { return 2.0 + std::sin(x); },
                   [](double x) { return std::cos(x); }};
  auto unit = [](double) { return 1.0; };

  std::vector<EuclidStudy> studies;
  for (double p : ps) {
    EuclidStudy study;
    study.p = p;
    study.rows = local_constant_study(u, p, grids, 0.0, 2.0 * M_PI, unit);
    study.final_order = study.rows.size() > 1 ? study.rows.back().observed_order
                                              : std::numeric_limits<double>::quiet_NaN();
    studies.push_back(std::move(study));
  }
  return studies;
}

void write_euclid_csv(std::ostream& os, const std::vector<EuclidStudy>& studies) {
  CsvWriter csv(os);
  csv.row({"p", "N", "h", "discrete", "target", "error", "observed_order"});
  for (const auto& st : studies)
    for (const auto& r : st.rows)
      csv.row({st.p, r.cells, r.h, r.discrete, r.target, r.error, r.observed_order});
}

// --- derivative identity -----------------------------------------------------------

DerivativeBatch run_derivative_identity(std::uint64_t seed, int count,
                                        const std::vector<double>& t_list,
                                        const std::vector<double>& ps, double rel_tol) {
  DerivativeBatch batch;
  batch.rows.resize(static_cast<std::size_t>(count) * t_list.size());

  parallel_for(count, [&](long i) {
    RandomInstance inst = normalized_instance(seed, i, 3, 24, 0.85, i % 2 == 1);
    SpectralSemigroup sg(inst.model);
    double p = ps[i % ps.size()];

    for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
      double t = t_list[ti];
      DerivativeRow row;
      row.model_seed = inst.model_seed;
      row.n = inst.n;
      row.p = p;
      row.t = t;

      double h = 1e-5 * t;
      double above = lp_norm_pow(inst.model.m, sg.apply(inst.u, t + h), p);
      double below = lp_norm_pow(inst.model.m, sg.apply(inst.u, t - h), p);
      row.finite_difference = (above - below) / (2.0 * h);
      row.exact = -p * ep_generator(inst.model, sg.apply(inst.u, t), p);
      row.rel_err = std::abs(row.finite_difference - row.exact) / std::abs(row.exact);
      row.ok = row.rel_err <= rel_tol;
      batch.rows[i * t_list.size() + ti] = row;
    }
  });

  for (const auto& r : batch.rows)
    if (!r.ok) batch.violations++;
  return batch;
}

// --- decay curves ---------------------------------------------------------------------

void write_decay_csv(std::ostream& os, const std::vector<DecayPoint>& curve) {
  CsvWriter csv(os);
  csv.row({"t", "norm_p", "dissipation"});
  for (const auto& pt : curve) csv.row({pt.t, pt.norm_pow, pt.dissipation});
}

}  // namespace sbf
