#include "misosec/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "misosec/error.hpp"

namespace misosec {

namespace {

CMatrix one(double v) { return CMatrix::Constant(1, 1, v); }

// V = [sqrt(s) I_n, v], so that V^H X V = [[s X, sqrt(s) X v], [sqrt(s) v^H X, v^H X v]].
CMatrix lift(const CVector& v, double s = 1.0) {
  const auto n = v.size();
  CMatrix out = CMatrix::Zero(n, n + 1);
  out.leftCols(n).diagonal().setConstant(std::sqrt(s));
  out.col(n) = v;
  return out;
}

// diag(I_n, -eps^2 / s): the multiplier pattern of the ball constraint ||d||^2 <= eps^2.
CMatrix ball_pattern(Eigen::Index n, double eps, double s = 1.0) {
  CMatrix out = CMatrix::Zero(n + 1, n + 1);
  out.topLeftCorner(n, n).setIdentity();
  out(n, n) = -eps * eps / s;
  return out;
}

// The solvers use the congruence D^H T D with D = diag(sqrt(s) I, 1) and the
// multiplier t = s lambda. With s = eps the block stays bounded as eps -> 0,
// where lambda itself grows like 1 / eps.
double lmi_scale(double eps) { return std::min(1.0, eps); }

CMatrix corner(Eigen::Index dim, double v) {
  CMatrix out = CMatrix::Zero(dim, dim);
  out(dim - 1, dim - 1) = v;
  return out;
}

CMatrix block_diag_copies(const CMatrix& w, Eigen::Index copies) {
  return kron(CMatrix::Identity(copies, copies), w);
}

AffineHermitian bob_part(const HermitianVariable& w, int lambda, const CVector& h_bar, double eps,
                         double s = 1.0) {
  const auto n = h_bar.size();
  const CMatrix v = lift(h_bar, s);
  AffineHermitian e(static_cast<int>(n + 1));
  e.add_linear(w, [&](const CMatrix& x) -> CMatrix { return v.adjoint() * x * v; });
  e.add_scalar(lambda, ball_pattern(n, eps, s));
  return e;
}

AffineHermitian eve_part(const HermitianVariable& w, int lambda, const CMatrix& g_bar, double eps,
                         double s = 1.0) {
  const CVector g = vec(g_bar);
  const auto copies = g_bar.cols();
  const CMatrix v = lift(g, s);
  AffineHermitian e(static_cast<int>(g.size() + 1));
  e.add_linear(w, [&](const CMatrix& x) -> CMatrix {
    return -(v.adjoint() * block_diag_copies(x, copies) * v);
  });
  e.add_scalar(lambda, ball_pattern(g.size(), eps, s));
  return e;
}

AffineHermitian bob_src_block(const HermitianVariable& w, int lambda_b, int theta, const CVector& h_bar,
                              double eps_b, double s) {
  AffineHermitian e = bob_part(w, lambda_b, h_bar, eps_b, s);
  const auto dim = e.dim();
  e.add_constant(corner(dim, 1.0));
  e.add_scalar(theta, corner(dim, -1.0));
  return e;
}

AffineHermitian eve_src_block(const HermitianVariable& w, int lambda_e, int theta, const CMatrix& g_bar,
                              double eps_e, double rate, double s) {
  AffineHermitian e = eve_part(w, lambda_e, g_bar, eps_e, s);
  const auto dim = e.dim();
  e.add_constant(corner(dim, -1.0));
  e.add_scalar(theta, corner(dim, std::exp2(-rate)));
  return e;
}

AffineHermitian bob_srm_block(const HermitianVariable& z, int lambda_b, int xi, const CVector& h_bar,
                              double eps_b, double s) {
  AffineHermitian e = bob_part(z, lambda_b, h_bar, eps_b, s);
  const auto dim = e.dim();
  e.add_constant(corner(dim, -1.0));
  e.add_scalar(xi, corner(dim, 1.0));
  return e;
}

AffineHermitian eve_srm_block(const HermitianVariable& z, int lambda_e, int xi, int tau, const CMatrix& g_bar,
                              double eps_e, double s) {
  AffineHermitian e = eve_part(z, lambda_e, g_bar, eps_e, s);
  const auto dim = e.dim();
  e.add_scalar(xi, corner(dim, -1.0));
  e.add_scalar(tau, corner(dim, 1.0));
  return e;
}

AffineHermitian trace_term(const HermitianVariable& z, const CMatrix& a, double scale) {
  AffineHermitian e(1);
  e.add_linear(z, [&](const CMatrix& basis) {
    return one(scale * (a * basis).trace().real());
  });
  return e;
}

AffineHermitian identity_map(const HermitianVariable& z) {
  return AffineHermitian(z.dim).add_linear(z, [](const CMatrix& e) { return e; });
}

RobustDesign zero_robust(const UncertaintySpec& spec) {
  RobustDesign r;
  r.design = make_design(HermitianMatrix::zero(spec.n_t()), spec.nominal());
  r.lambda_e.assign(spec.g_bars.size(), 0.0);
  return r;
}

RobustDesign failed_robust(const UncertaintySpec& spec, const sdp::SdpSolution& sol) {
  RobustDesign r = zero_robust(spec);
  r.design.status = from_solver(sol.status);
  r.design.solver_status = sol.status;
  r.design.solver_iterations = sol.iterations;
  return r;
}

HermitianMatrix psd_part(const HermitianMatrix& w) {
  const HermitianEig e = hermitian_eig(w);
  if (e.values.minCoeff() >= 0.0) return w;
  const RVector clipped = e.values.cwiseMax(0.0);
  return HermitianMatrix(e.vectors * clipped.cast<Complex>().asDiagonal() * e.vectors.adjoint());
}

double closed_form_or_nan(const TransmitDesign& d, const UncertaintySpec& spec) {
  if (d.w.trace() <= 0.0) return 0.0;
  if (!d.beamformer) return std::numeric_limits<double>::quiet_NaN();
  return worst_case_secrecy_rate_closed_form(*d.beamformer, spec);
}

}  // namespace

AffineHermitian bob_lmi_src(const HermitianVariable& w, int lambda_b, int theta, const CVector& h_bar,
                            double eps_b) {
  return bob_src_block(w, lambda_b, theta, h_bar, eps_b, 1.0);
}

AffineHermitian eve_lmi_src(const HermitianVariable& w, int lambda_e, int theta, const CMatrix& g_bar,
                            double eps_e, double rate) {
  return eve_src_block(w, lambda_e, theta, g_bar, eps_e, rate, 1.0);
}

AffineHermitian bob_lmi_srm(const HermitianVariable& z, int lambda_b, int xi, const CVector& h_bar,
                            double eps_b) {
  return bob_srm_block(z, lambda_b, xi, h_bar, eps_b, 1.0);
}

AffineHermitian eve_lmi_srm(const HermitianVariable& z, int lambda_e, int xi, int tau,
                            const CMatrix& g_bar, double eps_e) {
  return eve_srm_block(z, lambda_e, xi, tau, g_bar, eps_e, 1.0);
}

namespace {

RobustDesign robust_src(const UncertaintySpec& spec, double rate, double tol, bool scaled) {
  const auto scale = [scaled](double eps) { return scaled ? lmi_scale(eps) : 1.0; };
  const int nt = spec.n_t();
  const double two_mr = std::exp2(-rate);

  ProblemBuilder pb;
  const HermitianVariable w = pb.add_hermitian_variable(nt);
  const int theta = pb.add_scalar_variable();
  pb.add_trace_objective(w, 1.0);
  pb.add_psd(identity_map(w));

  int lambda_b = -1;
  if (spec.eps_b > 0.0) {
    lambda_b = pb.add_scalar_variable();
    pb.add_nonnegative(AffineHermitian(1).add_scalar(lambda_b, one(1.0)));
    pb.add_psd(bob_src_block(w, lambda_b, theta, spec.h_bar, spec.eps_b, scale(spec.eps_b)));
  } else {
    // 1 + h^H W h - theta >= 0
    AffineHermitian e = trace_term(w, spec.h_bar * spec.h_bar.adjoint(), 1.0);
    e.add_constant(one(1.0)).add_scalar(theta, one(-1.0));
    pb.add_nonnegative(e);
  }

  std::vector<int> lambda_e(spec.g_bars.size(), -1);
  for (std::size_t k = 0; k < spec.g_bars.size(); ++k) {
    const CMatrix& g = spec.g_bars[k];
    if (spec.eps_e[k] > 0.0) {
      lambda_e[k] = pb.add_scalar_variable();
      pb.add_nonnegative(AffineHermitian(1).add_scalar(lambda_e[k], one(1.0)));
      pb.add_psd(eve_src_block(w, lambda_e[k], theta, g, spec.eps_e[k], rate, scale(spec.eps_e[k])));
    } else {
      // 2^-R theta - 1 - Tr(G^H W G) >= 0
      AffineHermitian e = trace_term(w, g * g.adjoint(), -1.0);
      e.add_constant(one(-1.0)).add_scalar(theta, one(two_mr));
      pb.add_nonnegative(e);
    }
  }
  if (spec.g_bars.empty()) {
    pb.add_nonnegative(AffineHermitian(1).add_constant(one(-1.0)).add_scalar(theta, one(two_mr)));
  }

  const sdp::SdpSolution sol = sdp::solve(pb.build(), tol);
  if (sol.status != sdp::SolveStatus::Optimal) return failed_robust(spec, sol);

  RobustDesign r;
  r.design = make_design(psd_part(w.value(sol.x)), spec.nominal());
  r.design.solver_status = sol.status;
  r.design.solver_iterations = sol.iterations;
  r.theta = sol.x(theta);
  r.lambda_b = lambda_b >= 0 ? sol.x(lambda_b) / scale(spec.eps_b) : 0.0;
  for (std::size_t k = 0; k < lambda_e.size(); ++k) {
    r.lambda_e.push_back(lambda_e[k] >= 0 ? sol.x(lambda_e[k]) / scale(spec.eps_e[k]) : 0.0);
  }
  r.worst_case_rate = closed_form_or_nan(r.design, spec);
  return r;
}

RobustDesign robust_srm(const UncertaintySpec& spec, double tol, bool scaled) {
  const auto scale = [scaled](double eps) { return scaled ? lmi_scale(eps) : 1.0; };
  const int nt = spec.n_t();

  ProblemBuilder pb;
  const HermitianVariable z = pb.add_hermitian_variable(nt);
  const int xi = pb.add_scalar_variable();
  const int tau = pb.add_scalar_variable();
  pb.set_objective(tau, 1.0);
  pb.add_psd(identity_map(z));
  pb.add_nonnegative(AffineHermitian(1).add_scalar(xi, one(1.0)));
  {
    AffineHermitian e = trace_term(z, CMatrix::Identity(nt, nt), -1.0);
    e.add_scalar(xi, one(spec.power));
    pb.add_nonnegative(e);
  }

  int lambda_b = -1;
  if (spec.eps_b > 0.0) {
    lambda_b = pb.add_scalar_variable();
    pb.add_nonnegative(AffineHermitian(1).add_scalar(lambda_b, one(1.0)));
    pb.add_psd(bob_srm_block(z, lambda_b, xi, spec.h_bar, spec.eps_b, scale(spec.eps_b)));
  } else {
    // h^H Z h + xi - 1 >= 0
    AffineHermitian e = trace_term(z, spec.h_bar * spec.h_bar.adjoint(), 1.0);
    e.add_constant(one(-1.0)).add_scalar(xi, one(1.0));
    pb.add_nonnegative(e);
  }

  std::vector<int> lambda_e(spec.g_bars.size(), -1);
  for (std::size_t k = 0; k < spec.g_bars.size(); ++k) {
    const CMatrix& g = spec.g_bars[k];
    if (spec.eps_e[k] > 0.0) {
      lambda_e[k] = pb.add_scalar_variable();
      pb.add_nonnegative(AffineHermitian(1).add_scalar(lambda_e[k], one(1.0)));
      pb.add_psd(eve_srm_block(z, lambda_e[k], xi, tau, g, spec.eps_e[k], scale(spec.eps_e[k])));
    } else {
      // tau - xi - Tr(G^H Z G) >= 0
      AffineHermitian e = trace_term(z, g * g.adjoint(), -1.0);
      e.add_scalar(tau, one(1.0)).add_scalar(xi, one(-1.0));
      pb.add_nonnegative(e);
    }
  }
  if (spec.g_bars.empty()) {
    pb.add_nonnegative(AffineHermitian(1).add_scalar(tau, one(1.0)).add_scalar(xi, one(-1.0)));
  }

  const sdp::SdpSolution sol = sdp::solve(pb.build(), tol);
  if (sol.status != sdp::SolveStatus::Optimal) return failed_robust(spec, sol);

  const double xi_val = sol.x(xi);
  if (xi_val <= 1e-12) {
    throw InternalInconsistency("solve_robust_srm: Charnes-Cooper scale vanished at the optimum");
  }
  const double tau_val = sol.x(tau);
  const double wc = -std::log2(tau_val);

  RobustDesign r = zero_robust(spec);
  r.design.solver_status = sol.status;
  r.design.solver_iterations = sol.iterations;
  r.xi = xi_val;
  r.tau = tau_val;
  if (wc <= kZeroRateThreshold) return r;

  HermitianMatrix w = psd_part(z.value(sol.x) * (1.0 / xi_val));
  if (w.trace() > spec.power) w = w * (spec.power / w.trace());
  TransmitDesign d = make_design(w, spec.nominal());
  // A degenerate optimal face near zero rate can leave a higher-rank iterate.
  if (d.rank_ratio > kBeamformerRankTol && wc <= 1e-6) return r;

  r.design = d;
  r.design.solver_status = sol.status;
  r.design.solver_iterations = sol.iterations;
  r.lambda_b = lambda_b >= 0 ? sol.x(lambda_b) / (xi_val * scale(spec.eps_b)) : 0.0;
  r.lambda_e.clear();
  for (std::size_t k = 0; k < lambda_e.size(); ++k) {
    r.lambda_e.push_back(lambda_e[k] >= 0 ? sol.x(lambda_e[k]) / (xi_val * scale(spec.eps_e[k])) : 0.0);
  }
  r.worst_case_rate = wc;
  return r;
}

// The scaled LMIs suit small radii. When they stall, the unscaled form is
// tried before giving up.
bool stalled(const RobustDesign& r) { return r.design.solver_status == sdp::SolveStatus::SlowProgress; }

}  // namespace

RobustDesign solve_robust_src(const UncertaintySpec& spec, double rate, double tol) {
  spec.validate();
  if (!std::isfinite(rate) || rate <= 0.0) throw InvalidInput("solve_robust_src: R must be > 0");
  RobustDesign r = robust_src(spec, rate, tol, true);
  if (stalled(r)) {
    RobustDesign retry = robust_src(spec, rate, tol, false);
    if (!stalled(retry)) r = std::move(retry);
  }
  return r;
}

RobustDesign solve_robust_srm(const UncertaintySpec& spec, double tol) {
  spec.validate();
  RobustDesign r = robust_srm(spec, tol, true);
  if (stalled(r)) {
    RobustDesign retry = robust_srm(spec, tol, false);
    if (!stalled(retry)) r = std::move(retry);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Worst-case secrecy rate

double WorstCaseTerms::rate() const { return std::log2(tau_bob) - std::log2(tau_eve); }

WorstCaseTerms worst_case_terms(const HermitianMatrix& w, const UncertaintySpec& spec, double tol) {
  spec.validate();
  if (w.dim() != spec.n_t()) throw InvalidInput("worst_case_secrecy_rate: dimension mismatch");
  const auto bf = extract_beamformer(w);
  if (bf.rank_ratio > kBeamformerRankTol) {
    throw InvalidInput("worst_case_secrecy_rate: W is not rank one");
  }
  WorstCaseTerms out;
  if (!(hermitian_eig(w).values(0) > 0.0)) return out;
  const int nt = spec.n_t();
  const CMatrix& wm = w.matrix();

  // tau_bob: max tau1 s.t. [[l I + W, W h], [h^H W, h^H W h + 1 - tau1 - l eps^2]] >= 0, l >= 0.
  if (spec.eps_b > 0.0) {
    ProblemBuilder pb;
    const int t1 = pb.add_scalar_variable();
    const int lb = pb.add_scalar_variable();
    pb.set_objective(t1, -1.0);
    const CMatrix v = lift(spec.h_bar);
    AffineHermitian e(nt + 1);
    e.add_constant(v.adjoint() * wm * v);
    e.add_constant(corner(nt + 1, 1.0));
    e.add_scalar(t1, corner(nt + 1, -1.0));
    e.add_scalar(lb, ball_pattern(nt, spec.eps_b));
    pb.add_psd(e);
    pb.add_nonnegative(AffineHermitian(1).add_scalar(lb, one(1.0)));
    const auto sol = sdp::solve(pb.build(), tol);
    if (sol.status != sdp::SolveStatus::Optimal) {
      throw SolverError("worst_case_secrecy_rate: Bob subproblem " + sdp::to_string(sol.status));
    }
    out.tau_bob = sol.x(t1);
  } else {
    out.tau_bob = 1.0 + w.quad(spec.h_bar);
  }

  // tau_eve: min tau2 s.t. one S-procedure LMI per Eve. Zero-radius Eves
  // contribute the exact leakage bound.
  if (spec.g_bars.empty()) return out;
  if (std::all_of(spec.eps_e.begin(), spec.eps_e.end(), [](double e) { return e == 0.0; })) {
    for (const CMatrix& g : spec.g_bars) {
      out.tau_eve = std::max(out.tau_eve, 1.0 + (g.adjoint() * wm * g).trace().real());
    }
    return out;
  }
  ProblemBuilder pb;
  const int t2 = pb.add_scalar_variable();
  pb.set_objective(t2, 1.0);
  for (std::size_t k = 0; k < spec.g_bars.size(); ++k) {
    const CMatrix& g = spec.g_bars[k];
    if (spec.eps_e[k] > 0.0) {
      const int le = pb.add_scalar_variable();
      const CVector gv = vec(g);
      const CMatrix v = lift(gv);
      const auto dim = gv.size() + 1;
      AffineHermitian e(static_cast<int>(dim));
      e.add_constant(-(v.adjoint() * block_diag_copies(wm, g.cols()) * v));
      e.add_constant(corner(dim, -1.0));
      e.add_scalar(t2, corner(dim, 1.0));
      e.add_scalar(le, ball_pattern(gv.size(), spec.eps_e[k]));
      pb.add_psd(e);
      pb.add_nonnegative(AffineHermitian(1).add_scalar(le, one(1.0)));
    } else {
      const double leak = (g.adjoint() * wm * g).trace().real();
      pb.add_nonnegative(AffineHermitian(1).add_scalar(t2, one(1.0)).add_constant(one(-1.0 - leak)));
    }
  }
  const auto sol = sdp::solve(pb.build(), tol);
  if (sol.status != sdp::SolveStatus::Optimal) {
    throw SolverError("worst_case_secrecy_rate: Eve subproblem " + sdp::to_string(sol.status));
  }
  out.tau_eve = sol.x(t2);
  return out;
}

double worst_case_secrecy_rate(const HermitianMatrix& w, const UncertaintySpec& spec, double tol) {
  return worst_case_terms(w, spec, tol).rate();
}

WorstCaseTerms worst_case_terms_closed_form(const CVector& w, const UncertaintySpec& spec) {
  spec.validate();
  if (w.size() != spec.n_t()) throw InvalidInput("worst_case_terms_closed_form: dimension mismatch");
  const double wn = w.norm();
  WorstCaseTerms out;
  const double bob = std::max(0.0, std::abs(spec.h_bar.dot(w)) - spec.eps_b * wn);
  out.tau_bob = 1.0 + bob * bob;
  for (std::size_t k = 0; k < spec.g_bars.size(); ++k) {
    const double eve = (spec.g_bars[k].adjoint() * w).norm() + spec.eps_e[k] * wn;
    out.tau_eve = std::max(out.tau_eve, 1.0 + eve * eve);
  }
  return out;
}

double worst_case_secrecy_rate_closed_form(const CVector& w, const UncertaintySpec& spec) {
  return worst_case_terms_closed_form(w, spec).rate();
}

double nonneg_rate_probability(const std::vector<double>& worst_case_rates) {
  if (worst_case_rates.empty()) throw InvalidInput("nonneg_rate_probability: empty ensemble");
  const auto n = std::count_if(worst_case_rates.begin(), worst_case_rates.end(),
                               [](double r) { return r >= -1e-9; });
  return static_cast<double>(n) / static_cast<double>(worst_case_rates.size());
}

double nonneg_rate_probability(const std::vector<HermitianMatrix>& designs,
                               const std::vector<UncertaintySpec>& specs, double tol) {
  if (designs.size() != specs.size()) {
    throw InvalidInput("nonneg_rate_probability: designs and specs differ in length");
  }
  std::vector<double> rates;
  rates.reserve(designs.size());
  for (std::size_t i = 0; i < designs.size(); ++i) {
    rates.push_back(worst_case_secrecy_rate(designs[i], specs[i], tol));
  }
  return nonneg_rate_probability(rates);
}

}  // namespace misosec
