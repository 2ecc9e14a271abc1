#include "sbf/model.hpp"

#include <cmath>
#include <sstream>

#include "sbf/rng.hpp"

namespace sbf {

namespace {

constexpr double kRelTol = 1e-12;  // slack covers rounding only; decompositions are exact algebra

std::vector<double> row_max_abs(const Mat& L) {
  std::vector<double> r(L.size(), 0.0);
  for (int i = 0; i < L.size(); ++i)
    for (int j = 0; j < L.size(); ++j) r[i] = std::max(r[i], std::abs(L(i, j)));
  return r;
}

}  // namespace

bool ValidationReport::ok() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "pass " : "FAIL ") << c.name;
    if (!c.pass) {
      os << " worst entry (" << c.i;
      if (c.j >= 0) os << "," << c.j;
      os << ") magnitude " << c.magnitude;
    }
    os << "\n";
  }
  return os.str();
}

ValidationReport validate_model(const FiniteModel& model) {
  ValidationReport rep;

  InvariantCheck shape{"shape", true, -1, -1, 0.0};
  if (model.n < 1 || static_cast<int>(model.m.size()) != model.n || model.L.size() != model.n) {
    shape.pass = false;
    shape.magnitude = static_cast<double>(model.n);
  }
  rep.checks.push_back(shape);
  if (!shape.pass) return rep;

  InvariantCheck finite{"finite-entries", true, -1, -1, 0.0};
  for (int i = 0; i < model.n && finite.pass; ++i) {
    if (!std::isfinite(model.m[i])) finite = {"finite-entries", false, i, -1, model.m[i]};
    for (int j = 0; j < model.n && finite.pass; ++j)
      if (!std::isfinite(model.L(i, j))) finite = {"finite-entries", false, i, j, model.L(i, j)};
  }
  rep.checks.push_back(finite);
  if (!finite.pass) return rep;

  InvariantCheck measure{"measure-positive", true, -1, -1, 0.0};
  for (int i = 0; i < model.n; ++i) {
    if (!(model.m[i] > 0.0) && (measure.pass || model.m[i] < measure.magnitude)) {
      measure = {"measure-positive", false, i, -1, model.m[i]};
    }
  }
  rep.checks.push_back(measure);

  InvariantCheck offdiag{"offdiagonal-nonnegative", true, -1, -1, 0.0};
  for (int i = 0; i < model.n; ++i)
    for (int j = 0; j < model.n; ++j)
      if (i != j && model.L(i, j) < 0.0 && -model.L(i, j) > offdiag.magnitude)
        offdiag = {"offdiagonal-nonnegative", false, i, j, -model.L(i, j)};
  rep.checks.push_back(offdiag);

  const auto rmax = row_max_abs(model.L);

  // m_i L_ij = m_j L_ji within 1e-12 of the participating row scales.
  InvariantCheck sym{"m-symmetry", true, -1, -1, 0.0};
  if (measure.pass) {
    for (int i = 0; i < model.n; ++i)
      for (int j = i + 1; j < model.n; ++j) {
        double gap = std::abs(model.m[i] * model.L(i, j) - model.m[j] * model.L(j, i));
        double tol = kRelTol * std::max(model.m[i] * rmax[i], model.m[j] * rmax[j]);
        if (gap > tol && gap > sym.magnitude) sym = {"m-symmetry", false, i, j, gap};
      }
  }
  rep.checks.push_back(sym);

  // Row sums <= 0 within 1e-12 of the row scale; the deficiency is the killing rate.
  InvariantCheck rows{"sub-markov-rows", true, -1, -1, 0.0};
  for (int i = 0; i < model.n; ++i) {
    NeumaierAccumulator acc;
    for (int j = 0; j < model.n; ++j) acc.add(model.L(i, j));
    double excess = acc.value();
    if (excess > kRelTol * rmax[i] && excess > rows.magnitude)
      rows = {"sub-markov-rows", false, i, -1, excess};
  }
  rep.checks.push_back(rows);

  return rep;
}

BeurlingDenyData decompose(const FiniteModel& model) {
  ValidationReport rep = validate_model(model);
  if (!rep.ok()) throw ModelInvariantError("decompose: invalid model\n" + rep.summary());

  BeurlingDenyData bd;
  bd.n = model.n;
  bd.J = Mat(model.n);
  bd.kappa.assign(model.n, 0.0);
  for (int i = 0; i < model.n; ++i)
    for (int j = i + 1; j < model.n; ++j) {
      double w = 0.5 * (model.m[i] * model.L(i, j) + model.m[j] * model.L(j, i));
      bd.J(i, j) = w;
      bd.J(j, i) = w;
    }
  const auto rmax = row_max_abs(model.L);
  for (int i = 0; i < model.n; ++i) {
    NeumaierAccumulator acc;
    for (int j = 0; j < model.n; ++j) acc.add(model.L(i, j));
    double k = -model.m[i] * acc.value();
    // deficiencies within rounding tolerance of zero are zero
    bd.kappa[i] = k > kRelTol * model.m[i] * rmax[i] ? k : 0.0;
  }
  return bd;
}

FiniteModel assemble(const BeurlingDenyData& bd, const std::vector<double>& m) {
  if (bd.n < 1 || bd.J.size() != bd.n || static_cast<int>(bd.kappa.size()) != bd.n)
    throw ModelInvariantError("assemble: inconsistent BeurlingDenyData shape");
  if (static_cast<int>(m.size()) != bd.n) throw ModelInvariantError("assemble: measure size mismatch");
  for (int i = 0; i < bd.n; ++i) {
    if (!(m[i] > 0.0) || !std::isfinite(m[i])) throw ModelInvariantError("assemble: measure must be positive");
    if (!(bd.kappa[i] >= 0.0)) throw ModelInvariantError("assemble: negative killing weight");
    if (bd.J(i, i) != 0.0) throw ModelInvariantError("assemble: nonzero jump diagonal");
    for (int j = 0; j < bd.n; ++j) {
      if (!(bd.J(i, j) >= 0.0)) throw ModelInvariantError("assemble: negative jump weight");
      if (bd.J(i, j) != bd.J(j, i)) throw ModelInvariantError("assemble: jump matrix not symmetric");
    }
  }

  FiniteModel model;
  model.n = bd.n;
  model.m = m;
  model.L = Mat(bd.n);
  for (int i = 0; i < bd.n; ++i) {
    NeumaierAccumulator acc;
    for (int j = 0; j < bd.n; ++j) {
      if (j == i) continue;
      model.L(i, j) = bd.J(i, j) / m[i];
      acc.add(bd.J(i, j));
    }
    acc.add(bd.kappa[i]);
    model.L(i, i) = -acc.value() / m[i];
  }
  return model;
}

FiniteModel random_model(std::uint64_t seed, int n, double density, bool killing) {
  if (n < 1) throw std::invalid_argument("random_model: n must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("random_model: density must lie in (0, 1]");

  SplitMix64 g(derive_stream(seed, 0x6d6f64656cull));
  BeurlingDenyData bd;
  bd.n = n;
  bd.J = Mat(n);
  bd.kappa.assign(n, 0.0);

  std::vector<double> m(n);
  for (int i = 0; i < n; ++i) m[i] = g.uniform(0.5, 2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (g.uniform01() < density) {
        double w = g.uniform01_open_closed();
        bd.J(i, j) = w;
        bd.J(j, i) = w;
      }
    }
  if (killing)
    for (int i = 0; i < n; ++i) bd.kappa[i] = g.uniform01();

  return assemble(bd, m);
}

void require_state_function(const FiniteModel& model, const StateFunction& u) {
  if (static_cast<int>(u.size()) != model.n)
    throw std::invalid_argument("state function length does not match the model");
  for (double v : u)
    if (!std::isfinite(v)) throw std::invalid_argument("state function has non-finite entries");
}

}  // namespace sbf
