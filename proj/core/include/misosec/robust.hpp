#pragma once

#include <vector>

#include "misosec/channel.hpp"
#include "misosec/lmi_builder.hpp"
#include "misosec/secrecy.hpp"

namespace misosec {

/// Robust design: the covariance plus the S-procedure multipliers and slacks
/// of the SDP that produced it.
struct RobustDesign {
  TransmitDesign design;  // rate field: secrecy rate at the channel means
  double lambda_b = 0.0;
  std::vector<double> lambda_e;
  double theta = 0.0;  // robust SRC slack
  double xi = 0.0;     // robust SRM Charnes-Cooper scale
  double tau = 0.0;    // robust SRM epigraph value
  double worst_case_rate = 0.0;
};

// LMI builders. Each returns the affine Hermitian block in the decision vector.

/// T_b(W, lambda_b, theta) = [[lambda_b I + W, W h], [h^H W, h^H W h + 1 - theta - lambda_b eps_b^2]]
AffineHermitian bob_lmi_src(const HermitianVariable& w, int lambda_b, int theta, const CVector& h_bar,
                            double eps_b);
/// T_e(W, lambda_e, theta) = [[lambda_e I - Wk, -Wk g], [-g^H Wk, 2^-R theta - 1 - lambda_e eps^2 - g^H Wk g]],
/// Wk = I (x) W, g = vec(G_bar).
AffineHermitian eve_lmi_src(const HermitianVariable& w, int lambda_e, int theta, const CMatrix& g_bar,
                            double eps_e, double rate);
/// M_b(Z, lambda_b, xi) = [[lambda_b I + Z, Z h], [h^H Z, h^H Z h + xi - lambda_b eps_b^2 - 1]]
AffineHermitian bob_lmi_srm(const HermitianVariable& z, int lambda_b, int xi, const CVector& h_bar,
                            double eps_b);
/// M_e(Z, lambda_e, xi, tau) = [[lambda_e I - Zk, -Zk g], [-g^H Zk, tau - xi - lambda_e eps^2 - g^H Zk g]]
AffineHermitian eve_lmi_srm(const HermitianVariable& z, int lambda_e, int xi, int tau,
                            const CMatrix& g_bar, double eps_e);

/// Minimum power meeting worst-case secrecy rate R over the uncertainty balls.
/// Zero radii use the exact nominal constraint instead of an S-procedure LMI.
RobustDesign solve_robust_src(const UncertaintySpec& spec, double rate, double tol = kDefaultTol);

/// Worst-case secrecy-rate maximization (Charnes-Cooper + S-procedure SDP).
RobustDesign solve_robust_srm(const UncertaintySpec& spec, double tol = kDefaultTol);

struct WorstCaseTerms {
  double tau_bob = 1.0;  // min over the Bob ball of 1 + h^H W h
  double tau_eve = 1.0;  // max over k and the Eve balls of 1 + Tr(G^H W G)
  double rate() const;
};

/// Worst-case secrecy rate psi(W) through the two S-procedure SDPs.
/// W must be rank one (lambda_2/lambda_1 <= 1e-4) or zero; otherwise InvalidInput.
/// Throws SolverError if either SDP does not reach optimality.
double worst_case_secrecy_rate(const HermitianMatrix& w, const UncertaintySpec& spec,
                               double tol = kDefaultTol);
WorstCaseTerms worst_case_terms(const HermitianMatrix& w, const UncertaintySpec& spec,
                                double tol = kDefaultTol);

/// Closed form for W = w w^H:
/// tau_bob = 1 + max(0, |h^H w| - eps_b ||w||)^2, tau_eve = max_k 1 + (||G_k^H w|| + eps_k ||w||)^2.
WorstCaseTerms worst_case_terms_closed_form(const CVector& w, const UncertaintySpec& spec);
double worst_case_secrecy_rate_closed_form(const CVector& w, const UncertaintySpec& spec);

/// Fraction of worst-case rates that are >= -1e-9. Throws InvalidInput if empty.
double nonneg_rate_probability(const std::vector<double>& worst_case_rates);
/// Evaluates psi for each (W, spec) pair first.
double nonneg_rate_probability(const std::vector<HermitianMatrix>& designs,
                               const std::vector<UncertaintySpec>& specs, double tol = kDefaultTol);

}  // namespace misosec
