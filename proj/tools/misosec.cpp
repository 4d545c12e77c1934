// misosec: command-line front end for the secrecy beamforming solvers.
//
// Exit codes: 0 optimal or complete, 1 usage or parse error, 2 infeasible,
// 3 solver stopped without convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "misosec/channel.hpp"
#include "misosec/error.hpp"
#include "misosec/oracle.hpp"
#include "misosec/robust.hpp"
#include "misosec/secrecy.hpp"
#include "misosec/simulate.hpp"

namespace {

using json = nlohmann::json;
using namespace misosec;

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kNoConvergence = 3 };

struct Options {
  std::string instance;
  std::string config;
  std::string design;
  std::string out;
  std::optional<double> rate;
  std::optional<std::uint64_t> seed;
  double tol = kDefaultTol;
  bool tol_given = false;
  bool as_json = false;
  int grid = 200;
  int powers = 20;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
  return a;
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complex_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where, "expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

// Accepts {"w": [[[re, im], ...], ...]} or {"beamformer": [[re, im], ...]};
// the output of the solve-* subcommands qualifies.
HermitianMatrix load_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
  if (doc.contains("w")) {
    const json& rows = doc["w"];
    if (!rows.is_array() || rows.empty()) throw ParseError(path + ".w", "expected a square nested array");
    const auto n = static_cast<Eigen::Index>(rows.size());
    CMatrix w(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw ParseError(path + ".w[" + std::to_string(r) + "]", "matrix is not square");
      }
      for (Eigen::Index c = 0; c < n; ++c) {
        w(r, c) = complex_from(row[static_cast<std::size_t>(c)],
                               path + ".w[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    }
    return HermitianMatrix(w);
  }
  if (doc.contains("beamformer") && doc["beamformer"].is_array()) {
    const json& b = doc["beamformer"];
    CVector v(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = complex_from(b[i], path + ".beamformer[" + std::to_string(i) + "]");
    }
    return HermitianMatrix::outer(v);
  }
  throw ParseError(path, "expected a 'w' or 'beamformer' field");
}

json design_json(const TransmitDesign& d) {
  json j;
  j["status"] = to_string(d.status);
  j["solver_status"] = sdp::to_string(d.solver_status);
  j["iterations"] = d.solver_iterations;
  j["rate"] = d.rate;
  j["power"] = d.power_used;
  j["rank_ratio"] = d.rank_ratio;
  j["w"] = matrix_json(d.w.matrix());
  j["beamformer"] = d.beamformer ? vector_json(*d.beamformer) : json(nullptr);
  return j;
}

int exit_code(const TransmitDesign& d) {
  switch (d.status) {
    case DesignStatus::Optimal: return kOk;
    case DesignStatus::Infeasible: return kInfeasible;
    case DesignStatus::SolverFailure: return kNoConvergence;
  }
  return kNoConvergence;
}

void print(const json& j, bool as_json) {
  if (as_json) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "w") continue;
    std::cout << key << ": ";
    if (value.is_number_float()) {
      std::cout << fmt(value.get<double>());
    } else if (value.is_string()) {
      std::cout << value.get<std::string>();
    } else {
      std::cout << value.dump();
    }
    std::cout << '\n';
  }
}

int report(const TransmitDesign& d, const Options& o, json extra = json::object()) {
  json j = design_json(d);
  for (auto& [k, v] : extra.items()) j[k] = v;
  print(j, o.as_json);
  return exit_code(d);
}

int report_robust(const RobustDesign& r, const Options& o) {
  json extra;
  extra["worst_case_rate"] = r.worst_case_rate;
  extra["lambda_b"] = r.lambda_b;
  extra["lambda_e"] = r.lambda_e;
  extra["theta"] = r.theta;
  extra["xi"] = r.xi;
  extra["tau"] = r.tau;
  return report(r.design, o, extra);
}

int eval_worst_case(const Options& o) {
  const UncertaintySpec spec = load_uncertainty(o.instance);
  HermitianMatrix w = HermitianMatrix::zero(spec.n_t());
  if (!o.design.empty()) {
    w = load_design(o.design);
    if (w.dim() != spec.n_t()) throw InvalidInput("design dimension differs from N_t");
  } else {
    // Without a design, evaluate the perfect-CSI design at the channel means.
    const TransmitDesign d = solve_srm(spec.nominal(), o.tol);
    if (d.status != DesignStatus::Optimal) return exit_code(d);
    w = d.w;
  }
  const WorstCaseTerms t = worst_case_terms(w, spec, o.tol);
  json j;
  j["worst_case_rate"] = t.rate();
  j["tau_bob"] = t.tau_bob;
  j["tau_eve"] = t.tau_eve;
  j["nominal_rate"] = secrecy_rate(w, spec.nominal());
  print(j, o.as_json);
  return kOk;
}

int simulate(const Options& o) {
  ExperimentConfig cfg = load_experiment_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.tol_given) cfg.tol = o.tol;
  const ExperimentResult res = run_experiment(cfg);
  if (!o.out.empty()) write_csv(o.out, res.rows);
  if (o.as_json) {
    json rows = json::array();
    for (const auto& r : res.rows) {
      rows.push_back({{"experiment", r.experiment},   {"sweep_value", r.sweep_value}, {"method", r.method},
                      {"mean_rate", r.mean_rate},     {"std_rate", r.std_rate},       {"frac_nonneg", r.frac_nonneg},
                      {"trials", r.trials},           {"failures", r.failures}});
    }
    std::cout << rows.dump(2) << '\n';
  } else if (o.out.empty()) {
    write_csv(std::cout, res.rows);
  }
  return kOk;
}

int oracle(const Options& o) {
  const ChannelInstance inst = load_instance(o.instance);
  json j;
  j["brute_force_rate"] = brute_force_srm(inst, o.grid, o.powers);
  const TransmitDesign d = solve_srm(inst, o.tol);
  j["sdp_rate"] = d.rate;
  j["sdp_status"] = to_string(d.status);
  print(j, o.as_json);
  return exit_code(d);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy beamforming for the MISO wiretap channel with multiple eavesdroppers"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "SDP relative tolerance in [1e-10, 1e-4]")->capture_default_str();
    sub->add_flag("--json", o.as_json, "Machine-readable output");
  };

  auto* srm = app.add_subcommand("solve-srm", "Maximize the secrecy rate under the power budget");
  srm->add_option("--instance", o.instance, "Channel instance JSON")->required()->check(CLI::ExistingFile);
  common(srm);

  auto* src = app.add_subcommand("solve-src", "Minimize power subject to a secrecy-rate floor");
  src->add_option("--instance", o.instance, "Channel instance JSON")->required()->check(CLI::ExistingFile);
  src->add_option("--rate", o.rate, "Secrecy-rate floor R (bits/s/Hz)")->required();
  common(src);

  auto* rsrm = app.add_subcommand("solve-robust-srm", "Maximize the worst-case secrecy rate");
  rsrm->add_option("--instance", o.instance, "Uncertainty spec JSON")->required()->check(CLI::ExistingFile);
  common(rsrm);

  auto* rsrc = app.add_subcommand("solve-robust-src", "Minimize power subject to a worst-case rate floor");
  rsrc->add_option("--instance", o.instance, "Uncertainty spec JSON")->required()->check(CLI::ExistingFile);
  rsrc->add_option("--rate", o.rate, "Worst-case secrecy-rate floor R > 0")->required();
  common(rsrc);

  auto* wc = app.add_subcommand("eval-worst-case", "Worst-case secrecy rate of a rank-one design");
  wc->add_option("--instance", o.instance, "Uncertainty spec JSON")->required()->check(CLI::ExistingFile);
  wc->add_option("--design", o.design, "Design JSON with 'w' or 'beamformer' (default: perfect-CSI design)")
      ->check(CLI::ExistingFile);
  common(wc);

  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment and write CSV");
  sim->add_option("--config", o.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", o.out, "CSV output path (default: stdout)");
  sim->add_option("--seed", o.seed, "Override the config seed");
  common(sim);

  auto* orc = app.add_subcommand("oracle", "Brute-force grid search for N_t = 2 next to the SDP");
  orc->add_option("--instance", o.instance, "Channel instance JSON")->required()->check(CLI::ExistingFile);
  orc->add_option("--grid", o.grid, "Grid points per angle")->capture_default_str();
  orc->add_option("--powers", o.powers, "Power grid points")->capture_default_str();
  common(orc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  o.tol_given = sim->count("--tol") > 0;
  try {
    if (srm->parsed()) return report(solve_srm(load_instance(o.instance), o.tol), o);
    if (src->parsed()) return report(solve_src(load_instance(o.instance), *o.rate, o.tol), o);
    if (rsrm->parsed()) return report_robust(solve_robust_srm(load_uncertainty(o.instance), o.tol), o);
    if (rsrc->parsed()) return report_robust(solve_robust_src(load_uncertainty(o.instance), *o.rate, o.tol), o);
    if (wc->parsed()) return eval_worst_case(o);
    if (sim->parsed()) return simulate(o);
    if (orc->parsed()) return oracle(o);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Unsupported& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const InternalInconsistency& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoConvergence;
  }
  return kUsage;
}
