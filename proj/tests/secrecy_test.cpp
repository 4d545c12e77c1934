#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "misosec/error.hpp"
#include "misosec/oracle.hpp"
#include "misosec/secrecy.hpp"
#include "test_support.hpp"

using namespace misosec;
using misosec::testing::dominated_instance;
using misosec::testing::orthogonal_instance;
using misosec::testing::random_instance;

namespace {

// Secrecy rate from determinants computed by Eigen, independent of the
// library's eigenvalue path.
double reference_rate(const HermitianMatrix& w, const ChannelInstance& inst) {
  const double bob = std::log2(1.0 + w.quad(inst.h));
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& g : inst.eves) {
    const CMatrix m = CMatrix::Identity(g.cols(), g.cols()) + g.adjoint() * w.matrix() * g;
    worst = std::min(worst, bob - std::log2(m.determinant().real()));
  }
  return inst.eves.empty() ? bob : worst;
}

void expect_design_invariants(const TransmitDesign& d, const ChannelInstance& inst) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(d.w.matrix(), Eigen::EigenvaluesOnly);
  EXPECT_GE(es.eigenvalues()(0), -1e-8);
  EXPECT_LE(d.w.trace(), inst.power * (1.0 + 1e-6));
  EXPECT_NEAR(d.rate, secrecy_rate(d.w, inst), 1e-6);
  if (d.beamformer) {
    EXPECT_LE(d.rank_ratio, 1e-4);
    const CMatrix ww = *d.beamformer * d.beamformer->adjoint();
    EXPECT_LE((d.w.matrix() - ww).norm(), 1e-4 * d.w.trace());
  }
}

}  // namespace

TEST(SecrecyRate, ZeroCovariance) {
  EXPECT_EQ(secrecy_rate(HermitianMatrix::zero(2), orthogonal_instance()), 0.0);
}

TEST(SecrecyRate, OrthogonalEve) {
  CMatrix w = CMatrix::Zero(2, 2);
  w(0, 0) = 1.0;
  EXPECT_NEAR(secrecy_rate(HermitianMatrix(w), orthogonal_instance()), 1.0, 1e-14);
}

TEST(SecrecyRate, MatchesDeterminantOracle) {
  Rng rng(31, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const ChannelInstance inst = random_instance(31, static_cast<std::uint64_t>(trial) + 1, 4, 2, 2, 1.0);
    const HermitianMatrix w = misosec::testing::random_psd(rng, 4, 1 + trial % 4);
    EXPECT_NEAR(secrecy_rate(w, inst), reference_rate(w, inst), 1e-10);
  }
}

TEST(SecrecyRate, DimensionMismatch) {
  EXPECT_THROW(secrecy_rate(HermitianMatrix::zero(3), orthogonal_instance()), InvalidInput);
}

TEST(SolveSrm, OrthogonalEveUsesFullPowerOnBob) {
  const TransmitDesign d = solve_srm(orthogonal_instance());
  ASSERT_EQ(d.status, DesignStatus::Optimal);
  EXPECT_NEAR(d.rate, 1.0, 1e-7);
  EXPECT_NEAR(std::abs(d.w(0, 0) - 1.0), 0.0, 1e-6);
  EXPECT_LE(std::abs(d.w(1, 1)) + std::abs(d.w(0, 1)), 1e-6);
  expect_design_invariants(d, orthogonal_instance());
}

TEST(SolveSrm, DominatedEveShutsDown) {
  const TransmitDesign d = solve_srm(dominated_instance());
  ASSERT_EQ(d.status, DesignStatus::Optimal);
  EXPECT_EQ(d.rate, 0.0);
  EXPECT_EQ(d.w.trace(), 0.0);
  EXPECT_FALSE(d.beamformer.has_value());
}

TEST(SolveSrm, AgreesWithGridSearch) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const ChannelInstance inst = random_instance(32, s, 2, 2, 1, 2.0);
    const TransmitDesign d = solve_srm(inst);
    ASSERT_EQ(d.status, DesignStatus::Optimal);
    const double grid = brute_force_srm(inst, 200, 20);
    EXPECT_GE(d.rate, grid - 1e-9);
    EXPECT_LE(d.rate, grid + 1e-2);
  }
}

TEST(SolveSrm, InvariantsOnRandomInstances) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ChannelInstance inst = random_instance(33, s, 3 + static_cast<int>(s % 5), 1 + static_cast<int>(s % 4),
                                                 1 + static_cast<int>(s % 3), 0.5 + static_cast<double>(s));
    const TransmitDesign d = solve_srm(inst);
    ASSERT_EQ(d.status, DesignStatus::Optimal);
    expect_design_invariants(d, inst);
    EXPECT_GE(d.rate, 0.0);
    if (d.rate > 1e-3) {
      EXPECT_LE(d.rank_ratio, 1e-5);
      // The trace form of an Eve term is exact at rank one.
      for (const auto& g : inst.eves) {
        const HermitianMatrix gwg((g.adjoint() * d.w.matrix() * g).eval());
        EXPECT_NEAR(log2_det_identity_plus(gwg), std::log2(1.0 + gwg.trace()), 1e-9);
      }
    }
  }
}

TEST(SolveSrm, DominatesBaselines) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int k = 1 + static_cast<int>(s % 3);
    const ChannelInstance inst = random_instance(34, s, 4, k, 1, 3.0);
    const double sdp = solve_srm(inst).rate;
    EXPECT_GE(sdp, projected_mrt(inst).rate - 1e-6);
    EXPECT_GE(sdp, plain_mrt(inst).rate - 1e-6);
    if (k == 1) EXPECT_GE(sdp, one_eve_closed_form(inst.h, inst.eves[0], inst.power).rate - 1e-6);
  }
}

TEST(SolveSrm, NondecreasingInPower) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    ChannelInstance inst = random_instance(35, s, 4, 2, 2, 1.0 + static_cast<double>(s % 5));
    const double r1 = solve_srm(inst).rate;
    inst.power *= 2.0;
    EXPECT_GE(solve_srm(inst).rate, r1 - 1e-7) << "seed stream " << s;
  }
}

TEST(SolveSrc, ZeroRateGivesZeroDesign) {
  const TransmitDesign d = solve_src(orthogonal_instance(), 0.0);
  EXPECT_EQ(d.status, DesignStatus::Optimal);
  EXPECT_EQ(d.power_used, 0.0);
}

TEST(SolveSrc, OrthogonalEveClosedForm) {
  for (double r : {0.5, 1.0, 2.0}) {
    const TransmitDesign d = solve_src(orthogonal_instance(), r);
    ASSERT_EQ(d.status, DesignStatus::Optimal);
    EXPECT_NEAR(d.power_used, std::exp2(r) - 1.0, 1e-6);
    EXPECT_GE(d.rate, r - 1e-6);
    EXPECT_LE(d.rank_ratio, 1e-5);
  }
}

TEST(SolveSrc, DominatedEveIsInfeasible) {
  for (double r : {0.1, 0.5, 2.0}) {
    const TransmitDesign d = solve_src(dominated_instance(), r);
    EXPECT_EQ(d.status, DesignStatus::Infeasible);
    EXPECT_EQ(d.solver_status, sdp::SolveStatus::PrimalInfeasible);
  }
}

TEST(SolveSrc, InvertsSrm) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ChannelInstance inst = random_instance(36, s, 4, 2, 2, 1.0);
    const TransmitDesign srm = solve_srm(inst);
    if (srm.rate <= 1e-3) continue;
    const TransmitDesign src = solve_src(inst, srm.rate);
    ASSERT_EQ(src.status, DesignStatus::Optimal);
    EXPECT_NEAR(src.power_used / inst.power, 1.0, 1e-4);
    EXPECT_GE(src.rate, srm.rate - 1e-6);
    EXPECT_LE(src.rank_ratio, 1e-5);
  }
}

TEST(SolveSrc, NonfiniteRateRejected) {
  EXPECT_THROW(solve_src(orthogonal_instance(), std::nan("")), InvalidInput);
}

TEST(Bisection, OrthogonalAndDominated) {
  EXPECT_NEAR(solve_srm_bisection(orthogonal_instance()).rate, 1.0, 1e-4);
  const TransmitDesign d = solve_srm_bisection(dominated_instance());
  EXPECT_EQ(d.rate, 0.0);
  EXPECT_EQ(d.w.trace(), 0.0);
}

TEST(Bisection, AgreesWithCharnesCooper) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const ChannelInstance inst = random_instance(37, s, 5, 3, 2, 2.0);
    EXPECT_NEAR(solve_srm_bisection(inst).rate, solve_srm(inst).rate, 1e-4);
  }
}

TEST(OneEve, OrthogonalAndDominated) {
  const ChannelInstance o = orthogonal_instance();
  const TransmitDesign d = one_eve_closed_form(o.h, o.eves[0], 1.0);
  EXPECT_NEAR(d.rate, 1.0, 1e-12);
  ASSERT_TRUE(d.beamformer.has_value());
  EXPECT_NEAR(std::abs((*d.beamformer)(0)), 1.0, 1e-12);
  const ChannelInstance dom = dominated_instance();
  const TransmitDesign z = one_eve_closed_form(dom.h, dom.eves[0], 1.0);
  EXPECT_EQ(z.rate, 0.0);
  EXPECT_EQ(z.w.trace(), 0.0);
}

TEST(OneEve, MatchesSdp) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ChannelInstance inst = random_instance(38, s, 4, 1, 2, 2.0);
    EXPECT_NEAR(one_eve_closed_form(inst.h, inst.eves[0], 2.0).rate, solve_srm(inst).rate, 1e-5);
  }
}

TEST(ProjectedMrt, OrthogonalEve) {
  const TransmitDesign d = projected_mrt(orthogonal_instance(3.0));
  EXPECT_NEAR(d.rate, std::log2(4.0), 1e-12);
  ASSERT_TRUE(d.beamformer.has_value());
  EXPECT_NEAR(std::abs((*d.beamformer)(0)), std::sqrt(3.0), 1e-12);
}

TEST(ProjectedMrt, SpanningEvesLeaveNoFreedom) {
  ChannelInstance inst = orthogonal_instance();
  inst.eves.push_back(CMatrix(CVector::Unit(2, 0)));
  const TransmitDesign d = projected_mrt(inst);
  EXPECT_EQ(d.rate, 0.0);
  EXPECT_EQ(d.w.trace(), 0.0);
}

TEST(ProjectedMrt, NullsEveryEve) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ChannelInstance inst = random_instance(39, s, 6, 2, 2, 2.0);
    const TransmitDesign d = projected_mrt(inst);
    for (const auto& g : inst.eves) EXPECT_LE((g.adjoint() * d.w.matrix() * g).trace().real(), 1e-9);
    EXPECT_LE(d.rate, solve_srm(inst).rate + 1e-6);
  }
}

TEST(PlainMrt, NoEveGain) {
  ChannelInstance inst = random_instance(40, 0, 3, 1, 1, 2.0);
  inst.eves[0].setZero();
  EXPECT_NEAR(plain_mrt(inst).rate, std::log2(1.0 + 2.0 * inst.h.squaredNorm()), 1e-12);
}

TEST(PlainMrt, DominatedShutsDown) {
  const TransmitDesign d = plain_mrt(dominated_instance());
  EXPECT_EQ(d.rate, 0.0);
  EXPECT_EQ(d.w.trace(), 0.0);
}

TEST(PlainMrt, BelowSdp) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ChannelInstance inst = random_instance(41, s, 4, 3, 1, 2.0);
    EXPECT_LE(plain_mrt(inst).rate, solve_srm(inst).rate + 1e-6);
  }
}

TEST(ExtractBeamformer, RankOne) {
  Rng rng(42, 0);
  const CVector v = misosec::testing::random_vector(rng, 3);
  const auto e = extract_beamformer(HermitianMatrix::outer(v));
  ASSERT_TRUE(e.w.has_value());
  EXPECT_LE(e.rank_ratio, 1e-14);
  EXPECT_NEAR(std::abs(e.w->dot(v)), v.squaredNorm(), 1e-12);
  EXPECT_NEAR(e.w->norm(), v.norm(), 1e-12);
}

TEST(ExtractBeamformer, IdentityHasNoBeamformer) {
  const auto e = extract_beamformer(HermitianMatrix::identity(2));
  EXPECT_FALSE(e.w.has_value());
  EXPECT_NEAR(e.rank_ratio, 1.0, 1e-14);
}

TEST(ExtractBeamformer, SmallIsotropicPerturbation) {
  Rng rng(43, 0);
  const CVector v = misosec::testing::random_vector(rng, 3);
  const auto e = extract_beamformer(HermitianMatrix::outer(v) + HermitianMatrix::identity(3) * 1e-6);
  EXPECT_NEAR(e.rank_ratio, 1e-6 / (v.squaredNorm() + 1e-6), 1e-12);
  EXPECT_TRUE(e.w.has_value());
  EXPECT_EQ(extract_beamformer(HermitianMatrix::zero(2)).rank_ratio, 0.0);
}
