#include "misosec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "misosec/error.hpp"
#include "misosec/secrecy.hpp"

namespace misosec {

double brute_force_srm(const ChannelInstance& inst, int n_dir, int n_pow) {
  inst.validate();
  if (inst.n_t() != 2) throw Unsupported("brute_force_srm: only N_t = 2 is supported");
  if (n_dir < 2 || n_pow < 1) throw InvalidInput("brute_force_srm: grid too small");

  std::vector<double> powers(static_cast<std::size_t>(n_pow));
  for (int l = 0; l < n_pow; ++l) {
    const double e = n_pow == 1 ? 0.0 : -3.0 + 3.0 * l / (n_pow - 1);
    powers[static_cast<std::size_t>(l)] = l == n_pow - 1 ? inst.power : inst.power * std::pow(10.0, e);
  }

  double best = 0.0;
  std::vector<double> leak(inst.eves.size());
  CVector v(2);
  for (int i = 0; i < n_dir; ++i) {
    const double t = 0.5 * std::numbers::pi * i / (n_dir - 1);
    for (int j = 0; j < n_dir; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_dir;
      v << std::cos(t), std::sin(t) * std::polar(1.0, phi);
      const double gain = std::norm(inst.h.dot(v));
      for (std::size_t k = 0; k < inst.eves.size(); ++k) {
        leak[k] = (inst.eves[k].adjoint() * v).squaredNorm();
      }
      const double worst_leak = leak.empty() ? 0.0 : *std::max_element(leak.begin(), leak.end());
      for (double p : powers) {
        best = std::max(best, std::log2(1.0 + p * gain) - std::log2(1.0 + p * worst_leak));
      }
    }
  }
  return best;
}

Lemma1Check lemma1_check(const HermitianMatrix& a) {
  const RVector ev = hermitian_eig(a).values;  // descending
  if (ev.minCoeff() < -1e-9) throw InvalidInput("lemma1_check: matrix is not positive semidefinite");
  Lemma1Check out;
  out.lhs = 1.0;
  for (double l : ev) out.lhs *= 1.0 + l;
  out.rhs = 1.0 + ev.sum();
  out.tight = ev.size() < 2 || ev(1) <= 1e-9 * ev(0);
  return out;
}

CVector sample_ball(Rng& rng, Eigen::Index n, double radius) {
  CVector x(n);
  if (radius <= 0.0 || n == 0) return CVector::Zero(n);
  double nrm = 0.0;
  while (nrm == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.complex_normal(1.0);
    nrm = x.norm();
  }
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(2 * n));
  return x * (r / nrm);
}

ChannelInstance sample_ball_instance(const UncertaintySpec& spec, Rng& rng) {
  ChannelInstance inst = spec.nominal();
  inst.h += sample_ball(rng, inst.h.size(), spec.eps_b);
  for (std::size_t k = 0; k < inst.eves.size(); ++k) {
    CMatrix& g = inst.eves[k];
    const CVector d = sample_ball(rng, g.size(), spec.eps_e[k]);
    g += Eigen::Map<const CMatrix>(d.data(), g.rows(), g.cols());
  }
  return inst;
}

namespace {

// Channel on the ball boundaries that attains the rank-one worst case: Bob's
// gain shrinks along w, every Eve's leakage grows along w.
ChannelInstance adversarial_instance(const CVector& w, const UncertaintySpec& spec) {
  ChannelInstance inst = spec.nominal();
  const double wn = w.norm();
  const CVector u = w / wn;
  const Complex a = spec.h_bar.dot(w);  // h^H w
  const double shrink = std::min(spec.eps_b, std::abs(a) / wn);
  const Complex phase = std::abs(a) > 0.0 ? a / std::abs(a) : Complex(1.0, 0.0);
  // (h + c u)^H w = a + conj(c) wn, so c = -shrink * conj(phase).
  inst.h += -shrink * std::conj(phase) * u;
  for (std::size_t k = 0; k < inst.eves.size(); ++k) {
    CMatrix& g = inst.eves[k];
    CVector v = g.adjoint() * w;
    if (v.norm() > 0.0) {
      v /= v.norm();
    } else {
      v = CVector::Unit(g.cols(), 0);
    }
    g += spec.eps_e[k] * u * v.adjoint();
  }
  return inst;
}

}  // namespace

double sample_worst_case(const HermitianMatrix& w, const UncertaintySpec& spec, int n, Rng& rng) {
  spec.validate();
  const auto bf = extract_beamformer(w);
  if (bf.rank_ratio > kBeamformerRankTol) throw InvalidInput("sample_worst_case: W is not rank one");
  double best = secrecy_rate(w, spec.nominal());
  if (bf.w) best = std::min(best, secrecy_rate(w, adversarial_instance(*bf.w, spec)));
  for (int i = 0; i < n; ++i) best = std::min(best, secrecy_rate(w, sample_ball_instance(spec, rng)));
  return best;
}

}  // namespace misosec
