// Experiment driver: seeded batches over random finite models, lemma sweeps,
// dissipation balances, and grid convergence studies, emitted as CSV or JSON.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbf/csv.hpp"
#include "sbf/experiments.hpp"
#include "sbf/model_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitViolation = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

/// "2..40" or a single integer.
void parse_sizes(const std::string& text, int& lo, int& hi) {
  auto pos = text.find("..");
  if (pos == std::string::npos) {
    lo = hi = std::stoi(text);
  } else {
    lo = std::stoi(text.substr(0, pos));
    hi = std::stoi(text.substr(pos + 2));
  }
  if (lo < 1 || hi < lo) throw std::invalid_argument("bad size range: " + text);
}

/// "start:stop:step" (inclusive, rounded count) or a comma list.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_double_list(text);
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() != 3 || parts[2] <= 0.0) throw std::invalid_argument("bad grid spec: " + text);
  int count = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 0.5)) + 1;
  if (count < 1) throw std::invalid_argument("empty grid spec: " + text);
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = parts[0] + k * parts[2];
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

sbf::FiniteModel load_model_checked(const std::string& path) {
  {
    std::ifstream probe(path);
    if (!probe) throw IoError("cannot open model file: " + path);
  }
  return sbf::load_model(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet and Sobolev-Bregman form laboratory for finite Markov generators"};
  app.require_subcommand(1);

  // check-identity / check-comparability
  std::uint64_t seed = 1;
  int count = 200;
  std::string sizes = "2..40";
  std::string p_list = "1.1,1.5,2,2.5,3,5,10";
  double density = 0.35;
  std::string out_path;
  std::string format = "csv";

  auto add_batch_options = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--count", count, "number of random models");
    cmd->add_option("--sizes", sizes, "state count range, e.g. 2..40");
    cmd->add_option("--p", p_list, "comma list of exponents");
    cmd->add_option("--density", density, "edge density in (0,1]");
    cmd->add_option("--out", out_path, "output file (default <command>.<format>)");
    cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* identity = app.add_subcommand(
      "check-identity", "generator route against the jump/killing breakdown on random models");
  add_batch_options(identity);
  CLI::App* compare = app.add_subcommand(
      "check-comparability", "two-sided bounds against the form of u^<p/2> on random models");
  add_batch_options(compare);

  // check-lemmas
  std::uint64_t lemma_seed = 1;
  long samples = 1000000;
  std::string alphas_spec = "0.1:1.9:0.1";
  std::string ns_spec = "2,4,16,64";
  std::string dists_spec = "uniform-box,heavy-tail,breakpoint-focused";
  double box = 2.0;
  std::string lemma_out;
  std::string lemma_format = "csv";
  CLI::App* lemmas = app.add_subcommand("check-lemmas",
                                        "inequality sweeps over the (alpha, n) grid");
  lemmas->add_option("--seed", lemma_seed, "base seed");
  lemmas->add_option("--samples", samples, "samples per distribution (split over the grid)");
  lemmas->add_option("--alphas", alphas_spec, "alpha grid, start:stop:step or comma list");
  lemmas->add_option("--ns", ns_spec, "n grid, comma list");
  lemmas->add_option("--distributions", dists_spec, "comma list of sample distributions");
  lemmas->add_option("--box", box, "half-width of the uniform box");
  lemmas->add_option("--out", lemma_out, "output file");
  lemmas->add_option("--format", lemma_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // approx-convergence
  std::uint64_t approx_seed = 1;
  int approx_count = 20;
  std::string approx_t = "1e-1,1e-2,1e-3,1e-4";
  std::string approx_p = "1.5,2,3";
  std::string approx_out;
  CLI::App* approx = app.add_subcommand(
      "approx-convergence", "small-t limit, monotonicity, and kernel recovery checks");
  approx->add_option("--seed", approx_seed, "base seed");
  approx->add_option("--count", approx_count, "number of random models");
  approx->add_option("--t-grid", approx_t, "t values for the limit study");
  approx->add_option("--p", approx_p, "comma list of exponents");
  approx->add_option("--out", approx_out, "output file");

  // hardy-stein
  std::string hs_model_path;
  std::string hs_u;
  double hs_p = 2.0;
  double hs_tol = 1e-8;
  std::string hs_out;
  std::string hs_format = "json";
  CLI::App* hardy = app.add_subcommand("hardy-stein",
                                       "L^p mass balance along the semigroup for one model");
  hardy->add_option("--model", hs_model_path, "model JSON file")->required();
  hardy->add_option("--u", hs_u, "comma list of state values")->required();
  hardy->add_option("--p", hs_p, "exponent");
  hardy->add_option("--tol", hs_tol, "quadrature tolerance");
  hardy->add_option("--out", hs_out, "output file");
  hardy->add_option("--format", hs_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // euclid-study
  std::string euclid_p = "1.5,2,3";
  std::string euclid_grids = "32,64,128,256,512";
  std::string euclid_out;
  CLI::App* euclid = app.add_subcommand(
      "euclid-study", "grid convergence of the diffusion p-form to its continuum value");
  euclid->add_option("--p", euclid_p, "comma list of exponents");
  euclid->add_option("--grids", euclid_grids, "comma list of cell counts");
  euclid->add_option("--out", euclid_out, "output file");

  // decay-curve
  std::string decay_model_path;
  std::string decay_u;
  double decay_p = 2.0;
  std::string decay_t = "0:5:0.25";
  std::string decay_out;
  CLI::App* decay = app.add_subcommand("decay-curve",
                                       "norm and dissipation along the semigroup for one model");
  decay->add_option("--model", decay_model_path, "model JSON file")->required();
  decay->add_option("--u", decay_u, "comma list of state values")->required();
  decay->add_option("--p", decay_p, "exponent");
  decay->add_option("--t-grid", decay_t, "time grid, start:stop:step or comma list");
  decay->add_option("--out", decay_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (identity->parsed() || compare->parsed()) {
      int lo, hi;
      parse_sizes(sizes, lo, hi);
      std::vector<double> ps = parse_double_list(p_list);
      sbf::IdentityBatch batch = sbf::run_identity_batch(seed, count, lo, hi, ps, density);

      std::ostringstream body;
      sbf::write_identity_csv(body, batch);
      std::string path = out_path.empty()
                             ? (identity->parsed() ? "check-identity.csv" : "check-comparability.csv")
                             : out_path;
      write_text_file(path, body.str());

      std::cout << "instances " << count << ", rows " << batch.rows.size() << "\n"
                << "identity violations " << batch.identity_violations
                << " (worst gap/allowance " << sbf::fmt17(batch.worst_identity_ratio) << ")\n"
                << "comparability violations " << batch.comparability_violations
                << ", p=2 equality violations " << batch.p2_violations << "\n"
                << "wrote " << path << "\n";
      return batch.ok() ? kExitOk : kExitViolation;
    }

    if (lemmas->parsed()) {
      std::vector<double> alphas = parse_grid(alphas_spec);
      std::vector<double> ns = parse_double_list(ns_spec);
      std::vector<sbf::SweepDistribution> dists;
      for (const auto& name : [&] {
             std::vector<std::string> names;
             std::stringstream ss(dists_spec);
             std::string item;
             while (std::getline(ss, item, ',')) names.push_back(item);
             return names;
           }())
        dists.push_back(sbf::sweep_distribution_from_string(name));

      sbf::LemmaSweeps sweeps = sbf::run_lemma_sweeps(lemma_seed, samples, alphas, ns, dists, box);

      std::string path = lemma_out.empty() ? ("check-lemmas." + lemma_format) : lemma_out;
      if (lemma_format == "json") {
        write_text_file(path, sbf::sweeps_to_json(sweeps).dump(2) + "\n");
      } else {
        std::ostringstream body;
        sbf::write_sweep_csv(body, sweeps);
        write_text_file(path, body.str());
      }

      long violations = sweeps.total_violations();
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& rep : sweeps.reports) worst = std::min(worst, rep.worst_margin());
      std::cout << "distributions " << sweeps.reports.size() << ", samples per distribution >= "
                << samples << "\n"
                << "violations " << violations << ", worst normalized margin " << sbf::fmt17(worst)
                << "\n"
                << "wrote " << path << "\n";
      return violations == 0 ? kExitOk : kExitViolation;
    }

    if (approx->parsed()) {
      sbf::ApproxBatch batch = sbf::run_approx_convergence(
          approx_seed, approx_count, parse_grid(approx_t), parse_double_list(approx_p));
      std::ostringstream body;
      sbf::write_approx_csv(body, batch);
      std::string path = approx_out.empty() ? "approx-convergence.csv" : approx_out;
      write_text_file(path, body.str());

      std::cout << "instances " << approx_count << ", violations " << batch.violations << "\n"
                << "wrote " << path << "\n";
      return batch.ok() ? kExitOk : kExitViolation;
    }

    if (hardy->parsed()) {
      sbf::FiniteModel model = load_model_checked(hs_model_path);
      sbf::StateFunction u = parse_double_list(hs_u);
      sbf::SpectralSemigroup sg(model);
      sbf::HardySteinReport report = sbf::hardy_stein(sg, u, hs_p, hs_tol);

      std::string path = hs_out.empty() ? ("hardy-stein." + hs_format) : hs_out;
      if (hs_format == "json") {
        write_text_file(path, sbf::hardy_stein_report_to_json(report).dump(2) + "\n");
      } else {
        std::ostringstream body;
        sbf::CsvWriter csv(body);
        csv.row({"lhs", "rhs_total", "rhs_jump", "rhs_kill", "rhs_local", "truncation_time",
                 "tail_bound", "quadrature_error_estimate"});
        csv.row({report.lhs, report.rhs_total, report.rhs_jump, report.rhs_kill, report.rhs_local,
                 report.truncation_time, report.tail_bound, report.quadrature_error_estimate});
        write_text_file(path, body.str());
      }

      double gap = std::abs(report.lhs - report.rhs_total);
      double allowance = std::max(10.0 * hs_tol, 1e-6 * (1.0 + report.lhs));
      std::cout << "lhs " << sbf::fmt17(report.lhs) << ", rhs " << sbf::fmt17(report.rhs_total)
                << " (jump " << sbf::fmt17(report.rhs_jump) << ", kill "
                << sbf::fmt17(report.rhs_kill) << ")\n"
                << "gap " << sbf::fmt17(gap) << ", allowance " << sbf::fmt17(allowance) << "\n"
                << "wrote " << path << "\n";
      return gap <= allowance ? kExitOk : kExitViolation;
    }

    if (euclid->parsed()) {
      std::vector<sbf::EuclidStudy> studies =
          sbf::run_euclid_study(parse_double_list(euclid_p), parse_int_list(euclid_grids));
      std::ostringstream body;
      sbf::write_euclid_csv(body, studies);
      std::string path = euclid_out.empty() ? "euclid-study.csv" : euclid_out;
      write_text_file(path, body.str());

      bool pass = true;
      for (const auto& st : studies) {
        std::cout << "p " << st.p << ": final observed order " << sbf::fmt17(st.final_order)
                  << ", last error " << sbf::fmt17(st.rows.back().error) << "\n";
        if (!(st.final_order >= 1.9)) pass = false;
      }
      std::cout << "wrote " << path << "\n";
      return pass ? kExitOk : kExitViolation;
    }

    if (decay->parsed()) {
      sbf::FiniteModel model = load_model_checked(decay_model_path);
      sbf::StateFunction u = parse_double_list(decay_u);
      sbf::SpectralSemigroup sg(model);
      std::vector<sbf::DecayPoint> curve = sbf::decay_curve(sg, u, decay_p, parse_grid(decay_t));

      std::ostringstream body;
      sbf::write_decay_csv(body, curve);
      std::string path = decay_out.empty() ? "decay-curve.csv" : decay_out;
      write_text_file(path, body.str());

      bool monotone = true;
      for (std::size_t k = 1; k < curve.size(); ++k)
        if (curve[k].norm_pow >
            curve[k - 1].norm_pow + 1e-12 * std::max(1.0, curve[k - 1].norm_pow))
          monotone = false;
      std::cout << "points " << curve.size() << ", norm column "
                << (monotone ? "nonincreasing" : "NOT nonincreasing") << "\n"
                << "wrote " << path << "\n";
      return monotone ? kExitOk : kExitViolation;
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const sbf::ModelParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sbf::ModelSchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sbf::ModelInvariantError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  return kExitConfig;
}
