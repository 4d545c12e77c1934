#include "misosec/secrecy.hpp"

#include <algorithm>
#include <cmath>

#include "misosec/error.hpp"
#include "misosec/lmi_builder.hpp"

namespace misosec {

std::string to_string(DesignStatus s) {
  switch (s) {
    case DesignStatus::Optimal: return "optimal";
    case DesignStatus::Infeasible: return "infeasible";
    case DesignStatus::SolverFailure: return "solver-failure";
  }
  return "unknown";
}

DesignStatus from_solver(sdp::SolveStatus s) {
  switch (s) {
    case sdp::SolveStatus::Optimal: return DesignStatus::Optimal;
    case sdp::SolveStatus::PrimalInfeasible: return DesignStatus::Infeasible;
    default: return DesignStatus::SolverFailure;
  }
}

double secrecy_rate_eve(const HermitianMatrix& w, const CVector& h, const CMatrix& g) {
  if (w.dim() != h.size() || g.rows() != h.size()) {
    throw InvalidInput("secrecy_rate: dimension mismatch");
  }
  const double bob = std::log2(1.0 + w.quad(h));
  const HermitianMatrix leak(g.adjoint() * w.matrix() * g);
  return bob - log2_det_identity_plus(leak);
}

double secrecy_rate(const HermitianMatrix& w, const ChannelInstance& inst) {
  if (w.dim() != inst.h.size()) throw InvalidInput("secrecy_rate: dimension mismatch");
  const double bob = std::log2(1.0 + w.quad(inst.h));
  double worst_eve = 0.0;
  for (const auto& g : inst.eves) {
    if (g.rows() != inst.h.size()) throw InvalidInput("secrecy_rate: dimension mismatch");
    const HermitianMatrix leak(g.adjoint() * w.matrix() * g);
    worst_eve = std::max(worst_eve, log2_det_identity_plus(leak));
  }
  return bob - worst_eve;
}

BeamformerExtraction extract_beamformer(const HermitianMatrix& w, double tol) {
  BeamformerExtraction out;
  const HermitianEig e = hermitian_eig(w);
  const double l1 = e.values(0);
  if (!(l1 > 0.0)) return out;
  const double l2 = e.values.size() > 1 ? std::max(e.values(1), 0.0) : 0.0;
  out.rank_ratio = l2 / l1;
  if (out.rank_ratio <= tol) {
    CVector v = e.vectors.col(0) * std::sqrt(std::max(w.trace(), 0.0));
    normalize_phase(v);
    out.w = std::move(v);
  }
  return out;
}

TransmitDesign make_design(const HermitianMatrix& w, const ChannelInstance& inst) {
  TransmitDesign d;
  const auto bf = extract_beamformer(w);
  d.w = bf.w ? HermitianMatrix::outer(*bf.w) : w;
  d.rate = secrecy_rate(d.w, inst);
  d.power_used = d.w.trace();
  d.beamformer = bf.w;
  d.rank_ratio = bf.rank_ratio;
  return d;
}

namespace {

TransmitDesign zero_design(const ChannelInstance& inst) {
  return make_design(HermitianMatrix::zero(inst.n_t()), inst);
}

TransmitDesign failed_design(const ChannelInstance& inst, const sdp::SdpSolution& sol) {
  TransmitDesign d = zero_design(inst);
  d.status = from_solver(sol.status);
  d.solver_status = sol.status;
  d.solver_iterations = sol.iterations;
  return d;
}

// With no Eves the secrecy problems behave as if a single zero-gain Eve were present.
std::vector<CMatrix> effective_eves(const ChannelInstance& inst) {
  if (!inst.eves.empty()) return inst.eves;
  return {CMatrix::Zero(inst.n_t(), 1)};
}

// Clears tiny negative eigenvalues left by the interior-point iterate.
HermitianMatrix psd_part(const HermitianMatrix& w) {
  const HermitianEig e = hermitian_eig(w);
  if (e.values.minCoeff() >= 0.0) return w;
  const RVector clipped = e.values.cwiseMax(0.0);
  return HermitianMatrix(e.vectors * clipped.cast<Complex>().asDiagonal() *
                         e.vectors.adjoint());
}

// Real coefficient of Tr(A Z) for each Hermitian basis element of Z.
AffineHermitian trace_term(const HermitianVariable& z, const CMatrix& a, double scale) {
  AffineHermitian e(1);
  e.add_linear(z, [&](const CMatrix& basis) {
    return CMatrix::Constant(1, 1, scale * (a * basis).trace().real());
  });
  return e;
}

}  // namespace

TransmitDesign solve_srm(const ChannelInstance& inst, double tol) {
  inst.validate();
  const int nt = inst.n_t();
  const CMatrix hh = inst.h * inst.h.adjoint();

  ProblemBuilder pb;
  const HermitianVariable z = pb.add_hermitian_variable(nt);
  const int xi = pb.add_scalar_variable();
  const int tau = pb.add_scalar_variable();
  pb.set_objective(tau, 1.0);

  pb.add_psd(AffineHermitian(nt).add_linear(z, [](const CMatrix& e) { return e; }));
  pb.add_nonnegative(AffineHermitian(1).add_scalar(xi, CMatrix::Ones(1, 1)));
  for (const auto& g : effective_eves(inst)) {
    // tau - xi - Tr(G G^H Z) >= 0
    AffineHermitian e = trace_term(z, g * g.adjoint(), -1.0);
    e.add_scalar(tau, CMatrix::Ones(1, 1)).add_scalar(xi, -CMatrix::Ones(1, 1));
    pb.add_nonnegative(e);
  }
  {
    // xi P - Tr(Z) >= 0
    AffineHermitian e = trace_term(z, CMatrix::Identity(nt, nt), -1.0);
    e.add_scalar(xi, CMatrix::Constant(1, 1, inst.power));
    pb.add_nonnegative(e);
  }
  {
    // xi + Tr(h h^H Z) = 1
    std::vector<std::pair<int, double>> coeffs{{xi, 1.0}};
    for (int k = 0; k < z.num_params(); ++k) {
      coeffs.emplace_back(z.offset + k, (hh * z.basis(k)).trace().real());
    }
    pb.add_equality(coeffs, 1.0);
  }

  const sdp::SdpSolution sol = sdp::solve(pb.build(), tol);
  if (sol.status != sdp::SolveStatus::Optimal) return failed_design(inst, sol);

  const double xi_val = sol.x(xi);
  if (xi_val < 1e-12) {
    throw InternalInconsistency("solve_srm: Charnes-Cooper scale vanished at the optimum");
  }
  HermitianMatrix w = psd_part(z.value(sol.x) * (1.0 / xi_val));
  if (w.trace() > inst.power) w = w * (inst.power / w.trace());

  TransmitDesign d = make_design(w, inst);
  if (d.rate <= kZeroRateThreshold) d = zero_design(inst);
  d.solver_status = sol.status;
  d.solver_iterations = sol.iterations;
  return d;
}

TransmitDesign solve_src(const ChannelInstance& inst, double rate, double tol) {
  if (!std::isfinite(rate) || rate < 0.0) throw InvalidInput("solve_src: rate must be finite, >= 0");
  if (inst.h.size() < 1) throw InvalidInput("solve_src: empty Bob channel");
  if (rate == 0.0) return zero_design(inst);
  const int nt = inst.n_t();
  const double two_r = std::exp2(rate);
  const CMatrix hh = inst.h * inst.h.adjoint();

  ProblemBuilder pb;
  const HermitianVariable w = pb.add_hermitian_variable(nt);
  pb.add_trace_objective(w, 1.0);
  pb.add_psd(AffineHermitian(nt).add_linear(w, [](const CMatrix& e) { return e; }));
  for (const auto& g : effective_eves(inst)) {
    // 1 + Tr(h h^H W) - 2^R (1 + Tr(G G^H W)) >= 0
    const CMatrix a = hh - two_r * (g * g.adjoint());
    AffineHermitian e = trace_term(w, a, 1.0);
    e.add_constant(CMatrix::Constant(1, 1, 1.0 - two_r));
    pb.add_nonnegative(e);
  }

  const sdp::SdpSolution sol = sdp::solve(pb.build(), tol);
  if (sol.status != sdp::SolveStatus::Optimal) return failed_design(inst, sol);

  TransmitDesign d = make_design(psd_part(w.value(sol.x)), inst);
  d.solver_status = sol.status;
  d.solver_iterations = sol.iterations;
  return d;
}

namespace {

struct GammaProbe {
  bool solved = false;
  bool feasible = false;
  HermitianMatrix w;
  sdp::SdpSolution sol;
};

// min t  s.t.  gamma (1 + h^H W h) - 1 - Tr(G_k G_k^H W) + t >= 0,  Tr W <= P,  W >= 0.
// The relaxed ratio gamma is attainable iff t* <= 0.
GammaProbe probe_gamma(const ChannelInstance& inst, double gamma, double tol) {
  const int nt = inst.n_t();
  const CMatrix hh = inst.h * inst.h.adjoint();
  ProblemBuilder pb;
  const HermitianVariable w = pb.add_hermitian_variable(nt);
  const int t = pb.add_scalar_variable();
  pb.set_objective(t, 1.0);
  pb.add_psd(AffineHermitian(nt).add_linear(w, [](const CMatrix& e) { return e; }));
  {
    AffineHermitian e = trace_term(w, CMatrix::Identity(nt, nt), -1.0);
    e.add_constant(CMatrix::Constant(1, 1, inst.power));
    pb.add_nonnegative(e);
  }
  for (const auto& g : effective_eves(inst)) {
    AffineHermitian e = trace_term(w, gamma * hh - g * g.adjoint(), 1.0);
    e.add_constant(CMatrix::Constant(1, 1, gamma - 1.0));
    e.add_scalar(t, CMatrix::Ones(1, 1));
    pb.add_nonnegative(e);
  }
  GammaProbe out;
  out.sol = sdp::solve(pb.build(), tol);
  out.solved = out.sol.status == sdp::SolveStatus::Optimal;
  if (out.solved) {
    out.feasible = out.sol.x(t) <= 0.0;
    out.w = psd_part(w.value(out.sol.x));
  }
  return out;
}

}  // namespace

TransmitDesign solve_srm_bisection(const ChannelInstance& inst, double tol_gamma, double tol) {
  inst.validate();
  if (!(tol_gamma > 0.0 && tol_gamma < 1.0)) {
    throw InvalidInput("solve_srm_bisection: tol_gamma must lie in (0, 1)");
  }
  // gamma* lies in [1 / (1 + P ||h||^2), 1].
  double lo = 1.0 / (1.0 + inst.power * inst.h.squaredNorm());
  double hi = 1.0;
  std::optional<HermitianMatrix> best;
  int iterations = 0;
  while (hi - lo > tol_gamma) {
    const double mid = 0.5 * (lo + hi);
    GammaProbe probe = probe_gamma(inst, mid, tol);
    iterations += probe.sol.iterations;
    if (!probe.solved) return failed_design(inst, probe.sol);
    if (probe.feasible) {
      hi = mid;
      best = probe.w;
    } else {
      lo = mid;
    }
  }
  if (!best) {
    TransmitDesign d = zero_design(inst);
    d.solver_iterations = iterations;
    return d;
  }
  // The minimum-power design at the attained ratio is the rank-one representative.
  TransmitDesign d = solve_src(inst, std::log2(1.0 / hi), tol);
  if (d.status != DesignStatus::Optimal || d.power_used > inst.power * (1.0 + 1e-6)) {
    d = make_design(*best, inst);
  }
  if (d.rate <= kZeroRateThreshold) d = zero_design(inst);
  d.solver_iterations += iterations;
  return d;
}

TransmitDesign one_eve_closed_form(const CVector& h, const CMatrix& g, double power) {
  if (g.rows() != h.size()) throw InvalidInput("one_eve_closed_form: dimension mismatch");
  if (!(power > 0.0)) throw InvalidInput("one_eve_closed_form: power must be positive");
  const auto nt = h.size();
  const ChannelInstance inst{h, {g}, power};
  const HermitianMatrix a(CMatrix::Identity(nt, nt) + power * h * h.adjoint());
  const HermitianMatrix b(CMatrix::Identity(nt, nt) + power * g * g.adjoint());
  const CVector q = principal_generalized_eigvec(a, b);
  const HermitianMatrix w = HermitianMatrix::outer(q) * power;
  if (secrecy_rate(w, inst) > 0.0) return make_design(w, inst);
  return zero_design(inst);
}

TransmitDesign projected_mrt(const ChannelInstance& inst) {
  inst.validate();
  const HermitianMatrix proj = orthogonal_complement_projector(inst.aggregate_eves());
  const CVector ph = proj.matrix() * inst.h;
  const double norm = ph.norm();
  if (norm <= 1e-10) return zero_design(inst);
  const CVector w = std::sqrt(inst.power) * ph / norm;
  return make_design(HermitianMatrix::outer(w), inst);
}

TransmitDesign plain_mrt(const ChannelInstance& inst) {
  inst.validate();
  const double hn = inst.h.squaredNorm();
  if (hn <= 0.0) return zero_design(inst);
  const HermitianMatrix w = HermitianMatrix::outer(inst.h) * (inst.power / hn);
  TransmitDesign d = make_design(w, inst);
  if (d.rate > 0.0) return d;
  return zero_design(inst);
}

}  // namespace misosec
