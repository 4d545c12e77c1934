#pragma once

#include <optional>
#include <string>

#include "misosec/channel.hpp"
#include "misosec/hermitian.hpp"
#include "misosec/sdp.hpp"

namespace misosec {

/// Outcome tag of a design routine. Closed-form designs always report Optimal.
enum class DesignStatus { Optimal, Infeasible, SolverFailure };

std::string to_string(DesignStatus s);
DesignStatus from_solver(sdp::SolveStatus s);

struct TransmitDesign {
  HermitianMatrix w;                   // transmit covariance
  std::optional<CVector> beamformer;   // present iff rank-one (see extract_beamformer)
  double rate = 0.0;                   // bits/s/Hz
  double rank_ratio = 0.0;             // lambda_2 / lambda_1, 0 for W = 0
  double power_used = 0.0;
  DesignStatus status = DesignStatus::Optimal;
  sdp::SolveStatus solver_status = sdp::SolveStatus::Optimal;
  int solver_iterations = 0;
};

/// Secrecy rates are log2 based.
constexpr double kZeroRateThreshold = 1e-9;
constexpr double kBeamformerRankTol = 1e-4;
constexpr double kDefaultTol = 1e-9;

/// min_k [log2(1 + h^H W h) - log2 det(I + G_k^H W G_k)].
/// With no Eves the Eve term is zero.
double secrecy_rate(const HermitianMatrix& w, const ChannelInstance& inst);

/// Per-Eve secrecy rate f_k(W).
double secrecy_rate_eve(const HermitianMatrix& w, const CVector& h, const CMatrix& g);

struct BeamformerExtraction {
  std::optional<CVector> w;
  double rank_ratio = 0.0;
};

/// Principal eigenvector scaled so that ||w||^2 = Tr(W); returned iff
/// lambda_2 / lambda_1 <= tol (and W != 0).
BeamformerExtraction extract_beamformer(const HermitianMatrix& w, double tol = kBeamformerRankTol);

/// Charnes-Cooper SDP for the worst-Eve secrecy-rate maximization.
TransmitDesign solve_srm(const ChannelInstance& inst, double tol = kDefaultTol);

/// Minimum-power design meeting secrecy rate R (power field of inst is ignored).
TransmitDesign solve_src(const ChannelInstance& inst, double rate, double tol = kDefaultTol);

/// Bisection on the relaxed quasi-convex ratio gamma.
TransmitDesign solve_srm_bisection(const ChannelInstance& inst, double tol_gamma = 1e-6,
                                   double tol = kDefaultTol);

/// Closed form for a single (multi-antenna) Eve; W = P q q^H or W = 0.
TransmitDesign one_eve_closed_form(const CVector& h, const CMatrix& g, double power);

/// Maximum-ratio transmission after nulling every Eve.
TransmitDesign projected_mrt(const ChannelInstance& inst);

/// Maximum-ratio transmission along h, ignoring Eves; W = 0 if the rate is not positive.
TransmitDesign plain_mrt(const ChannelInstance& inst);

/// Fills beamformer, rank_ratio, power_used, rate from W. When a beamformer
/// is extracted, the returned covariance is exactly w w^H (same trace as W).
TransmitDesign make_design(const HermitianMatrix& w, const ChannelInstance& inst);

}  // namespace misosec
