#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbf/matrix.hpp"

namespace sbf {

/// A function on states is just its vector of values.
using StateFunction = std::vector<double>;

/// Finite state space with reference measure m and generator rates L.
/// Valid instances satisfy m_i > 0, L_ij >= 0 off the diagonal, m-symmetry
/// m_i L_ij = m_j L_ji, and nonpositive row sums (sub-Markov).
struct FiniteModel {
  int n = 0;
  std::vector<double> m;
  Mat L;
  std::vector<std::string> labels;  // display only; math uses indices 0..n-1
};

/// Jump weights and killing masses extracted from a generator:
/// J_ij = m_i L_ij off the diagonal (symmetric), kappa_i = -m_i * row_sum_i.
struct BeurlingDenyData {
  int n = 0;
  Mat J;
  std::vector<double> kappa;
};

struct ModelInvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantCheck {
  std::string name;
  bool pass = true;
  int i = -1, j = -1;     // worst offending entry, -1 if none
  double magnitude = 0.0; // size of the worst violation (0 when passing)
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  bool ok() const;
  std::string summary() const;
};

/// Report-only check of all FiniteModel invariants.
ValidationReport validate_model(const FiniteModel& model);

/// Extract (J, kappa). Throws ModelInvariantError when validation fails.
/// Row deficiencies within tolerance of zero are clamped to kappa_i = 0.
BeurlingDenyData decompose(const FiniteModel& model);

/// Rebuild the generator: L_ij = J_ij / m_i, diagonal balances jumps plus killing.
FiniteModel assemble(const BeurlingDenyData& bd, const std::vector<double>& m);

/// Deterministic random instance: m_i ~ U[0.5, 2], symmetric edges present with
/// probability `density` and weights in (0, 1], optional kappa_i ~ U[0, 1].
FiniteModel random_model(std::uint64_t seed, int n, double density, bool killing);

/// Throws std::invalid_argument unless u has length model.n and finite entries.
void require_state_function(const FiniteModel& model, const StateFunction& u);

}  // namespace sbf
