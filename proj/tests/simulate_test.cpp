#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "misosec/error.hpp"
#include "misosec/simulate.hpp"

using namespace misosec;
namespace fs = std::filesystem;

namespace {

fs::path fixture(const std::string& name) { return fs::path(MISOSEC_FIXTURE_DIR) / name; }

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "misosec_simulate_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

ExperimentConfig small_sweep_k() {
  ExperimentConfig c;
  c.experiment = Experiment::SweepK;
  c.n_t = 4;
  c.eve_antennas = 1;
  c.sweep = {1, 2, 3};
  c.trials = 4;
  c.seed = 7;
  c.methods = {Method::Sdp, Method::ProjectedMrt, Method::PlainMrt};
  return c;
}

std::string csv(const ExperimentResult& r) {
  std::ostringstream os;
  write_csv(os, r.rows);
  return os.str();
}

// rate of (sweep index, method, trial)
std::map<std::tuple<std::size_t, Method, int>, double> by_key(const ExperimentResult& r) {
  std::map<std::tuple<std::size_t, Method, int>, double> m;
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.ok) << rec.status;
    m[{rec.sweep_index, rec.method, rec.trial}] = rec.rate;
  }
  return m;
}

}  // namespace

TEST(Simulate, ZeroEveFixtureGivesInterferenceFreeRate) {
  const ExperimentConfig c = load_experiment_config(fixture("zero_eve_sim.json"));
  ASSERT_TRUE(c.instance.has_value());
  const double expected = std::log2(1.0 + db_to_linear(3.0) * c.instance->h.squaredNorm());
  const ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.mean_rate, expected, 1e-6) << row.method;
    EXPECT_EQ(row.trials, 1);
    EXPECT_EQ(row.std_rate, 0.0);
  }
}

TEST(Simulate, ProjectedMrtVanishesOnceEvesSpanTheArray) {
  ExperimentConfig c;
  c.experiment = Experiment::SweepK;
  c.n_t = 10;
  c.eve_antennas = 3;
  c.sweep = {3, 4, 5};
  c.trials = 5;
  c.methods = {Method::ProjectedMrt};
  const ExperimentResult r = run_experiment(c);
  EXPECT_GT(r.rows[0].mean_rate, 0.0);
  EXPECT_EQ(r.rows[1].mean_rate, 0.0);
  EXPECT_EQ(r.rows[2].mean_rate, 0.0);
  EXPECT_EQ(r.rows[2].frac_nonneg, 1.0);
}

TEST(Simulate, RowAndRecordCounts) {
  const ExperimentConfig c = small_sweep_k();
  const ExperimentResult r = run_experiment(c);
  EXPECT_EQ(r.rows.size(), 9u);
  EXPECT_EQ(r.records.size(), 36u);
  EXPECT_EQ(r.rows[0].sweep_value, 1.0);
  EXPECT_EQ(r.rows[1].method, "projected-mrt");
  const std::string text = csv(r);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "experiment,sweep_value,method,mean_rate,std_rate,frac_nonneg,trials,failures");
}

TEST(Simulate, DeterministicAcrossRunsAndThreads) {
  ExperimentConfig c = small_sweep_k();
  const std::string a = csv(run_experiment(c));
  EXPECT_EQ(a, csv(run_experiment(c)));
  c.threads = 3;
  EXPECT_EQ(a, csv(run_experiment(c)));
  c.seed = 8;
  EXPECT_NE(a, csv(run_experiment(c)));
}

TEST(Simulate, StatisticsMatchRecords) {
  const ExperimentResult r = run_experiment(small_sweep_k());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    std::vector<double> rates;
    for (std::size_t t = 0; t < 4; ++t) rates.push_back(r.records[i * 4 + t].rate);
    double mean = 0.0;
    for (double v : rates) mean += v / 4.0;
    double ss = 0.0;
    for (double v : rates) ss += (v - mean) * (v - mean);
    EXPECT_NEAR(r.rows[i].mean_rate, mean, 1e-12);
    EXPECT_NEAR(r.rows[i].std_rate, std::sqrt(ss / 3.0), 1e-12);
    EXPECT_EQ(r.rows[i].failures, 0);
  }
}

TEST(Simulate, SdpDominatesAndDecreasesWithK) {
  const ExperimentResult r = run_experiment(small_sweep_k());
  const auto m = by_key(r);
  for (int t = 0; t < 4; ++t) {
    for (std::size_t s = 0; s < 3; ++s) {
      const double sdp = m.at({s, Method::Sdp, t});
      EXPECT_GE(sdp, m.at({s, Method::ProjectedMrt, t}) - 1e-6);
      EXPECT_GE(sdp, m.at({s, Method::PlainMrt, t}) - 1e-6);
      // Eve sets are nested along the sweep, so each trial is monotone.
      if (s > 0) EXPECT_LE(sdp, m.at({s - 1, Method::Sdp, t}) + 1e-6);
    }
  }
}

TEST(Simulate, RobustDesignKeepsWorstCaseNonnegative) {
  ExperimentConfig c;
  c.experiment = Experiment::RobustSweepAlphaE;
  c.n_t = 4;
  c.eve_antennas = 2;
  c.num_eves = 2;
  c.power_db = 10.0;
  c.sweep = {0.05, 0.2};
  c.trials = 3;
  c.methods = {Method::Sdp, Method::RobustSdp};
  const ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows[1].frac_nonneg, 1.0);
  EXPECT_EQ(r.rows[3].frac_nonneg, 1.0);
  const auto m = by_key(r);
  for (int t = 0; t < 3; ++t) {
    for (std::size_t s = 0; s < 2; ++s) {
      EXPECT_GE(m.at({s, Method::RobustSdp, t}), m.at({s, Method::Sdp, t}) - 1e-5);
    }
  }
}

TEST(SimulateConfig, LoadsFixture) {
  const ExperimentConfig c = load_experiment_config(fixture("fig2a.json"));
  EXPECT_EQ(c.experiment, Experiment::SweepK);
  EXPECT_EQ(c.sweep, std::vector<double>({1, 2, 3, 4}));
  EXPECT_EQ(c.seed, 2024u);
  EXPECT_EQ(c.trials, 5);
  EXPECT_EQ(c.methods.size(), 3u);
  EXPECT_EQ(c.max_eves(), 4);
}

TEST(SimulateConfig, RejectsBadFiles) {
  const std::string base = R"("experiment": "sweep-k", "n_t": 4, "k_values": [1])";
  auto rejects = [&](const std::string& name, const std::string& body) {
    EXPECT_THROW(load_experiment_config(write_config(name, body)), ParseError) << body;
  };
  EXPECT_NO_THROW(load_experiment_config(write_config("ok.json", "{" + base + "}")));
  rejects("unknown.json", "{" + base + R"(, "colour": 1})");
  rejects("both.json", "{" + base + R"(, "sweep": [1]})");
  rejects("method.json", "{" + base + R"(, "methods": ["magic"]})");
  rejects("robust.json", "{" + base + R"(, "methods": ["robust-sdp"]})");
  rejects("oneeve.json", R"({"experiment": "sweep-k", "n_t": 4, "k_values": [2], "methods": ["one-eve"]})");
  rejects("fracK.json", R"({"experiment": "sweep-k", "n_t": 4, "k_values": [1.5]})");
  rejects("seed.json", "{" + base + R"(, "seed": -1})");
  rejects("tol.json", "{" + base + R"(, "tol": 0.1})");
  rejects("trials.json", "{" + base + R"(, "trials": 0})");
  rejects("dup.json", "{" + base + R"(, "methods": ["sdp", "sdp"]})");
  rejects("experiment.json", R"({"experiment": "sweep-q", "k_values": [1]})");
  rejects("syntax.json", "{" + base);
}

TEST(SimulateConfig, InstanceMustFit) {
  const fs::path dir = fs::temp_directory_path() / "misosec_simulate_test";
  fs::create_directories(dir);
  fs::copy_file(fixture("orthogonal.json"), dir / "orth.json", fs::copy_options::overwrite_existing);
  EXPECT_THROW(load_experiment_config(write_config(
                   "fit_nt.json", R"({"experiment": "sweep-k", "n_t": 3, "k_values": [1], "instance": "orth.json"})")),
               ParseError);
  EXPECT_THROW(load_experiment_config(write_config(
                   "fit_k.json", R"({"experiment": "sweep-k", "n_t": 2, "k_values": [2], "instance": "orth.json"})")),
               ParseError);
  EXPECT_NO_THROW(load_experiment_config(write_config(
      "fit_ok.json", R"({"experiment": "sweep-k", "n_t": 2, "k_values": [1], "instance": "orth.json"})")));
}

TEST(SimulateNames, RoundTrip) {
  for (auto e : {Experiment::SweepK, Experiment::SweepRho, Experiment::SweepPower, Experiment::RobustSweepAlphaE,
                 Experiment::RobustSweepPower, Experiment::RobustSweepRho}) {
    EXPECT_EQ(parse_experiment(to_string(e)), e);
  }
  for (auto m : {Method::Sdp, Method::ProjectedMrt, Method::PlainMrt, Method::RobustSdp, Method::OneEve}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("mrt"), InvalidInput);
}
