#include "misosec/simulate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "json_io.hpp"
#include "misosec/error.hpp"
#include "misosec/robust.hpp"
#include "misosec/secrecy.hpp"

namespace misosec {

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 6> kExperiments{{
    {Experiment::SweepK, "sweep-k"},
    {Experiment::SweepRho, "sweep-rho"},
    {Experiment::SweepPower, "sweep-power"},
    {Experiment::RobustSweepAlphaE, "robust-sweep-alpha-e"},
    {Experiment::RobustSweepPower, "robust-sweep-power"},
    {Experiment::RobustSweepRho, "robust-sweep-rho"},
}};

constexpr std::array<std::pair<Method, const char*>, 5> kMethods{{
    {Method::Sdp, "sdp"},
    {Method::ProjectedMrt, "projected-mrt"},
    {Method::PlainMrt, "plain-mrt"},
    {Method::RobustSdp, "robust-sdp"},
    {Method::OneEve, "one-eve"},
}};

constexpr double kNonnegSlack = 1e-9;
constexpr double kMaxFailureFraction = 0.1;

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, name] : kExperiments) {
    if (k == e) return name;
  }
  return "unknown";
}

std::string to_string(Method m) {
  for (const auto& [k, name] : kMethods) {
    if (k == m) return name;
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& s) {
  for (const auto& [k, name] : kExperiments) {
    if (s == name) return k;
  }
  throw InvalidInput("unknown experiment '" + s + "'");
}

Method parse_method(const std::string& s) {
  for (const auto& [k, name] : kMethods) {
    if (s == name) return k;
  }
  throw InvalidInput("unknown method '" + s + "'");
}

bool is_robust(Experiment e) {
  return e == Experiment::RobustSweepAlphaE || e == Experiment::RobustSweepPower ||
         e == Experiment::RobustSweepRho;
}

// ---------------------------------------------------------------------------
// Config

namespace {

struct Point {
  int num_eves;
  double rho_e_sq;
  double power;
  double alpha_e;
};

Point sweep_point(const ExperimentConfig& c, double s) {
  Point p{c.num_eves, c.rho_e_sq, db_to_linear(c.power_db), c.alpha_e};
  switch (c.experiment) {
    case Experiment::SweepK: p.num_eves = static_cast<int>(s); break;
    case Experiment::SweepRho:
    case Experiment::RobustSweepRho: p.rho_e_sq = s; break;
    case Experiment::SweepPower:
    case Experiment::RobustSweepPower: p.power = db_to_linear(s); break;
    case Experiment::RobustSweepAlphaE: p.alpha_e = s; break;
  }
  return p;
}

}  // namespace

int ExperimentConfig::max_eves() const {
  if (experiment != Experiment::SweepK) return num_eves;
  int k = 0;
  for (double s : sweep) k = std::max(k, static_cast<int>(s));
  return k;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidInput("config: trials must be at least 1");
  if (sweep.empty()) throw InvalidInput("config: sweep grid is empty");
  if (methods.empty()) throw InvalidInput("config: no methods");
  if (n_t < 1) throw InvalidInput("config: n_t must be at least 1");
  if (eve_antennas < 1) throw InvalidInput("config: eve_antennas must be at least 1");
  if (num_eves < 0) throw InvalidInput("config: num_eves must be nonnegative");
  if (threads < 1) throw InvalidInput("config: threads must be at least 1");
  if (!(tol >= 1e-10 && tol <= 1e-4)) throw InvalidInput("config: tol must lie in [1e-10, 1e-4]");
  if (!std::isfinite(power_db)) throw InvalidInput("config: power_db must be finite");
  if (!(rho_e_sq > 0.0) || !std::isfinite(rho_e_sq)) throw InvalidInput("config: rho_e_sq must be positive");
  if (!(alpha_b >= 0.0) || !(alpha_e >= 0.0)) throw InvalidInput("config: alpha_b, alpha_e must be nonnegative");
  if (std::set<Method>(methods.begin(), methods.end()).size() != methods.size()) {
    throw InvalidInput("config: duplicate method");
  }
  for (double s : sweep) {
    if (!std::isfinite(s)) throw InvalidInput("config: non-finite sweep value");
    switch (experiment) {
      case Experiment::SweepK:
        if (s < 0.0 || s != std::floor(s)) throw InvalidInput("config: K values must be nonnegative integers");
        break;
      case Experiment::SweepRho:
      case Experiment::RobustSweepRho:
        if (!(s > 0.0)) throw InvalidInput("config: rho_e^2 values must be positive");
        break;
      case Experiment::RobustSweepAlphaE:
        if (s < 0.0) throw InvalidInput("config: alpha_e values must be nonnegative");
        break;
      default: break;
    }
  }
  for (Method m : methods) {
    if (m == Method::RobustSdp && !is_robust(experiment)) {
      throw InvalidInput("config: robust-sdp needs a robust experiment");
    }
    if (m == Method::OneEve) {
      for (double s : sweep) {
        if (sweep_point(*this, s).num_eves != 1) throw InvalidInput("config: one-eve needs K = 1");
      }
    }
  }
  if (instance) {
    instance->validate();
    if (instance->n_t() != n_t) throw InvalidInput("config: instance N_t differs from n_t");
    if (instance->num_eves() < max_eves()) throw InvalidInput("config: instance has too few Eves");
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  using detail::json;
  const json doc = detail::read_json(path);
  const std::string w = path.string();
  if (!doc.is_object()) throw ParseError(w, "expected a JSON object");

  static const std::set<std::string> known{
      "experiment", "n_t",     "eve_antennas", "num_eves", "sweep", "k_values", "power_db", "rho_e_sq",
      "alpha_b",    "alpha_e", "trials",       "seed",     "methods", "tol",    "threads",  "instance"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ParseError(w + "." + key, "unknown field");
  }

  auto integer = [&](const char* key, auto& out) {
    if (!doc.contains(key)) return;
    const json& j = doc[key];
    if (!j.is_number_integer()) throw ParseError(w + "." + key, "expected an integer");
    out = j.get<std::remove_reference_t<decltype(out)>>();
  };
  auto real = [&](const char* key, double& out) {
    if (doc.contains(key)) out = detail::number(doc[key], w + "." + key);
  };

  ExperimentConfig c;
  const json& exp = detail::field(doc, "experiment", w);
  if (!exp.is_string()) throw ParseError(w + ".experiment", "expected a string");
  try {
    c.experiment = parse_experiment(exp.get<std::string>());
  } catch (const InvalidInput& e) {
    throw ParseError(w + ".experiment", e.what());
  }
  integer("n_t", c.n_t);
  integer("eve_antennas", c.eve_antennas);
  integer("num_eves", c.num_eves);
  integer("trials", c.trials);
  integer("threads", c.threads);
  if (doc.contains("seed")) {
    const json& j = doc["seed"];
    if (!j.is_number_unsigned()) throw ParseError(w + ".seed", "expected a nonnegative integer");
    c.seed = j.get<std::uint64_t>();
  }
  real("power_db", c.power_db);
  real("rho_e_sq", c.rho_e_sq);
  real("alpha_b", c.alpha_b);
  real("alpha_e", c.alpha_e);
  real("tol", c.tol);

  const char* grid_key = doc.contains("sweep") ? "sweep" : "k_values";
  if (doc.contains("sweep") && doc.contains("k_values")) {
    throw ParseError(w, "give either sweep or k_values, not both");
  }
  const json& grid = detail::field(doc, grid_key, w);
  if (!grid.is_array()) throw ParseError(w + "." + grid_key, "expected an array");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    c.sweep.push_back(detail::number(grid[i], w + "." + grid_key + "[" + std::to_string(i) + "]"));
  }

  if (doc.contains("methods")) {
    const json& ms = doc["methods"];
    if (!ms.is_array()) throw ParseError(w + ".methods", "expected an array");
    c.methods.clear();
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string where = w + ".methods[" + std::to_string(i) + "]";
      if (!ms[i].is_string()) throw ParseError(where, "expected a string");
      try {
        c.methods.push_back(parse_method(ms[i].get<std::string>()));
      } catch (const InvalidInput& e) {
        throw ParseError(where, e.what());
      }
    }
  }

  if (doc.contains("instance")) {
    const json& j = doc["instance"];
    if (!j.is_string()) throw ParseError(w + ".instance", "expected a path string");
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = path.parent_path() / p;
    c.instance = load_instance(p);
  }

  try {
    c.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(w, e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

// Eves are drawn with unit variance and scaled per sweep point, so every
// sweep value sees the same underlying draws.
ChannelInstance base_channel(const ExperimentConfig& c, int trial) {
  if (c.instance) return *c.instance;
  Rng rng(c.seed, static_cast<std::uint64_t>(trial));
  return sample_channel(rng, c.n_t, std::vector<int>(static_cast<std::size_t>(c.max_eves()), c.eve_antennas),
                        1.0);
}

ChannelInstance at_point(const ChannelInstance& base, const Point& p) {
  ChannelInstance inst;
  inst.h = base.h;
  inst.power = p.power;
  const double scale = std::sqrt(p.rho_e_sq);
  for (int k = 0; k < p.num_eves; ++k) inst.eves.push_back(base.eves[static_cast<std::size_t>(k)] * scale);
  return inst;
}

TransmitDesign design_for(Method m, const ChannelInstance& inst, const UncertaintySpec* spec, double tol) {
  switch (m) {
    case Method::Sdp: return solve_srm(inst, tol);
    case Method::ProjectedMrt: return projected_mrt(inst);
    case Method::PlainMrt: return plain_mrt(inst);
    case Method::OneEve: return one_eve_closed_form(inst.h, inst.eves.front(), inst.power);
    case Method::RobustSdp: return solve_robust_srm(*spec, tol).design;
  }
  throw InvalidInput("unknown method");
}

struct Outcome {
  bool ok = false;
  double rate = 0.0;
  std::string status;
};

Outcome run_method(const ExperimentConfig& c, Method m, const ChannelInstance& inst, const Point& p) {
  Outcome out;
  try {
    std::optional<UncertaintySpec> spec;
    if (is_robust(c.experiment)) spec = uncertainty_from_ratios(inst, c.alpha_b, p.alpha_e, p.rho_e_sq);
    const TransmitDesign d = design_for(m, inst, spec ? &*spec : nullptr, c.tol);
    if (d.status != DesignStatus::Optimal) {
      out.status = to_string(d.status) + " (" + sdp::to_string(d.solver_status) + ")";
      return out;
    }
    out.rate = spec ? worst_case_secrecy_rate(d.w, *spec, c.tol) : d.rate;
    out.ok = true;
    out.status = "ok";
  } catch (const SolverError& e) {
    out.status = e.what();
  } catch (const InternalInconsistency& e) {
    out.status = e.what();
  } catch (const InvalidInput& e) {
    // The worst-case evaluator rejects designs that are not rank one.
    out.status = e.what();
  }
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_sweep = config.sweep.size();
  const std::size_t n_meth = config.methods.size();
  const auto n_trials = static_cast<std::size_t>(config.trials);

  // outcomes[trial][sweep * n_meth + method]
  std::vector<std::vector<Outcome>> outcomes(n_trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t t = next++; t < n_trials; t = next++) {
      try {
        const ChannelInstance base = base_channel(config, static_cast<int>(t));
        std::vector<Outcome> row;
        row.reserve(n_sweep * n_meth);
        for (double s : config.sweep) {
          const Point p = sweep_point(config, s);
          const ChannelInstance inst = at_point(base, p);
          for (Method m : config.methods) row.push_back(run_method(config, m, inst, p));
        }
        outcomes[t] = std::move(row);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_trials;
      }
    }
  };

  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(config.threads), n_trials);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result;
  for (std::size_t si = 0; si < n_sweep; ++si) {
    for (std::size_t mi = 0; mi < n_meth; ++mi) {
      ResultRow row;
      row.experiment = to_string(config.experiment);
      row.sweep_value = config.sweep[si];
      row.method = to_string(config.methods[mi]);
      std::vector<double> rates;
      for (std::size_t t = 0; t < n_trials; ++t) {
        const Outcome& o = outcomes[t][si * n_meth + mi];
        result.records.push_back({si, config.methods[mi], static_cast<int>(t), o.ok, o.rate, o.status});
        if (o.ok) {
          rates.push_back(o.rate);
        } else {
          ++row.failures;
        }
      }
      if (row.failures > kMaxFailureFraction * static_cast<double>(n_trials)) {
        throw SolverError("run aborted: " + std::to_string(row.failures) + " of " + std::to_string(n_trials) +
                          " trials failed for " + row.method + " at " + format_double(row.sweep_value));
      }
      row.trials = static_cast<int>(rates.size());
      if (!rates.empty()) {
        double sum = 0.0;
        for (double r : rates) sum += r;
        row.mean_rate = sum / static_cast<double>(rates.size());
        double ss = 0.0;
        for (double r : rates) ss += (r - row.mean_rate) * (r - row.mean_rate);
        row.std_rate = rates.size() > 1 ? std::sqrt(ss / static_cast<double>(rates.size() - 1)) : 0.0;
        const auto nonneg = std::count_if(rates.begin(), rates.end(), [](double r) { return r >= -kNonnegSlack; });
        row.frac_nonneg = static_cast<double>(nonneg) / static_cast<double>(rates.size());
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "experiment,sweep_value,method,mean_rate,std_rate,frac_nonneg,trials,failures\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << format_double(r.sweep_value) << ',' << r.method << ',' << format_double(r.mean_rate)
       << ',' << format_double(r.std_rate) << ',' << format_double(r.frac_nonneg) << ',' << std::to_string(r.trials)
       << ',' << std::to_string(r.failures) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  write_csv(out, rows);
  if (!out) throw InvalidInput("failed writing " + path.string());
}

}  // namespace misosec
