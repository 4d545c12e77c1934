#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "misosec/channel.hpp"

namespace misosec {

enum class Experiment {
  SweepK,
  SweepRho,
  SweepPower,
  RobustSweepAlphaE,
  RobustSweepPower,
  RobustSweepRho,
};

enum class Method { Sdp, ProjectedMrt, PlainMrt, RobustSdp, OneEve };

std::string to_string(Experiment e);
std::string to_string(Method m);
Experiment parse_experiment(const std::string& s);
Method parse_method(const std::string& s);
bool is_robust(Experiment e);

/// Monte Carlo experiment. `sweep` holds the swept variable (K, rho_e^2,
/// P in dB or alpha_e); the remaining scalars are held fixed.
struct ExperimentConfig {
  Experiment experiment = Experiment::SweepK;
  int n_t = 10;
  int eve_antennas = 3;
  int num_eves = 3;  // ignored by sweep-k
  std::vector<double> sweep;
  double power_db = 3.0;
  double rho_e_sq = 1.0;
  double alpha_b = 0.03;
  double alpha_e = 0.1;
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::Sdp};
  double tol = 1e-9;
  int threads = 1;
  /// Fixed channel used by every trial instead of random draws.
  std::optional<ChannelInstance> instance;

  /// Throws InvalidInput on empty grids or methods, trials < 1 and so on.
  void validate() const;
  /// Largest number of Eves needed by any sweep point.
  int max_eves() const;
};

/// Reads a JSON config; a relative "instance" path resolves against the config's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ResultRow {
  std::string experiment;
  double sweep_value = 0.0;
  std::string method;
  double mean_rate = 0.0;
  double std_rate = 0.0;    // sample standard deviation, 0 for a single trial
  double frac_nonneg = 0.0; // trials with rate >= -1e-9
  int trials = 0;           // successful trials entering the statistics
  int failures = 0;
};

/// One solve of one method at one sweep point. `rate` is the nominal secrecy
/// rate for perfect-CSI experiments and the worst-case rate otherwise.
struct TrialRecord {
  std::size_t sweep_index = 0;
  Method method = Method::Sdp;
  int trial = 0;
  bool ok = false;
  double rate = 0.0;
  std::string status;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;       // ordered by sweep value, then method
  std::vector<TrialRecord> records;  // ordered by sweep value, method, trial
};

/// Runs all trials. Deterministic for a fixed config regardless of `threads`.
/// Throws SolverError if more than 10% of the trials of any row fail.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

}  // namespace misosec
