#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "misosec/hermitian.hpp"

namespace misosec {

/// Nominal scenario: Bob channel h (N_t), Eve channels G_k (N_t x N_{e,k}),
/// total power P in linear units. All noise variances are one.
struct ChannelInstance {
  CVector h;
  std::vector<CMatrix> eves;
  double power = 1.0;

  int n_t() const { return static_cast<int>(h.size()); }
  int num_eves() const { return static_cast<int>(eves.size()); }
  /// Throws InvalidInput on inconsistent dimensions or non-positive power.
  void validate() const;
  /// [G_1, ..., G_K]
  CMatrix aggregate_eves() const;
};

/// Spherical channel uncertainty around the means h_bar, G_bar_k.
struct UncertaintySpec {
  CVector h_bar;
  std::vector<CMatrix> g_bars;
  double eps_b = 0.0;
  std::vector<double> eps_e;
  double power = 1.0;

  int n_t() const { return static_cast<int>(h_bar.size()); }
  int num_eves() const { return static_cast<int>(g_bars.size()); }
  void validate() const;
  /// The channel means as a nominal instance.
  ChannelInstance nominal() const;
};

/// Reproducible normal stream. Identical (seed, stream) pairs give identical draws.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  double normal();
  double uniform();  // [0, 1)
  /// Circular complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// i.i.d. CN(0,1) Bob channel and CN(0, rho_e_sq) Eve channels; power is left at 1.
ChannelInstance sample_channel(Rng& rng, int n_t, const std::vector<int>& eve_dims,
                               double rho_e_sq);

double db_to_linear(double p_db);
double linear_to_db(double p);

/// Radii from uncertainty ratios using the ensemble expectations of the
/// i.i.d. generator: eps_b = alpha_b sqrt(N_t), eps_e,k = alpha_e sqrt(N_t N_e,k rho_e^2).
UncertaintySpec uncertainty_from_ratios(const ChannelInstance& means, double alpha_b,
                                        double alpha_e, double rho_e_sq);

// JSON files, schema in docs/file_formats.md.
ChannelInstance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const ChannelInstance& inst);
UncertaintySpec load_uncertainty(const std::filesystem::path& path);
void save_uncertainty(const std::filesystem::path& path, const UncertaintySpec& spec);

}  // namespace misosec
