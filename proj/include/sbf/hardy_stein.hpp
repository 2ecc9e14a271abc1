#pragma once

#include <vector>

#include "sbf/forms.hpp"
#include "sbf/semigroup.hpp"

#include <json.hpp>

namespace sbf {

/// Both sides of the dissipation balance: the L^p mass drop of the semigroup
/// against the time integral of p times the jump and killing parts along it.
/// rhs_total covers [0, truncation_time]; tail_bound certifies what the
/// truncation can miss, and quadrature_error_estimate what the quadrature can.
struct HardySteinReport {
  double lhs = 0.0;
  double rhs_total = 0.0;
  double rhs_jump = 0.0;
  double rhs_kill = 0.0;
  double rhs_local = 0.0;  // identically 0 for finite models, kept for report shape
  double truncation_time = 0.0;
  double tail_bound = 0.0;
  double quadrature_error_estimate = 0.0;
};

nlohmann::json hardy_stein_report_to_json(const HardySteinReport& report);

/// Computes the report with adaptive Simpson on [0, T*], where T* is chosen
/// from the spectral gap so the neglected tail mass stays below tol.
/// Throws when the quadrature cannot reach tol within the subdivision cap.
HardySteinReport hardy_stein(const SpectralSemigroup& sg, const StateFunction& u, double p,
                             double tol = 1e-8);

struct DecayPoint {
  double t = 0.0;
  double norm_pow = 0.0;     // ||T_t u||_p^p
  double dissipation = 0.0;  // p E_p(T_t u)
};

/// Tabulates the norm and the instantaneous dissipation along an increasing,
/// nonnegative t grid. The norm column is nonincreasing.
std::vector<DecayPoint> decay_curve(const SpectralSemigroup& sg, const StateFunction& u, double p,
                                    const std::vector<double>& t_grid);

}  // namespace sbf
