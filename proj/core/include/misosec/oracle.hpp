#pragma once

#include "misosec/channel.hpp"
#include "misosec/hermitian.hpp"

namespace misosec {

/// Grid search over rank-one W = p v v^H with v = (cos t, sin t e^{i phi}),
/// t in [0, pi/2], phi in [0, 2 pi), p log-spaced in [1e-3 P, P] (P included).
/// Returns the best worst-Eve secrecy rate, clamped at 0. N_t must be 2.
double brute_force_srm(const ChannelInstance& inst, int n_dir, int n_pow);

struct Lemma1Check {
  double lhs = 1.0;  // det(I + A)
  double rhs = 1.0;  // 1 + Tr(A)
  bool tight = true;  // lambda_2 <= 1e-9 lambda_1
};

/// Compares det(I + A) with 1 + Tr(A) for A >= 0 (within -1e-9).
Lemma1Check lemma1_check(const HermitianMatrix& a);

/// Uniform draw from the complex ball {x in C^n : ||x|| <= radius}.
CVector sample_ball(Rng& rng, Eigen::Index n, double radius);

/// Perturbed channel with every error drawn uniformly from its ball.
ChannelInstance sample_ball_instance(const UncertaintySpec& spec, Rng& rng);

/// Empirical minimum secrecy rate of a rank-one W over n ball-sampled
/// channels plus the analytic boundary candidates along the beamformer.
double sample_worst_case(const HermitianMatrix& w, const UncertaintySpec& spec, int n, Rng& rng);

}  // namespace misosec
