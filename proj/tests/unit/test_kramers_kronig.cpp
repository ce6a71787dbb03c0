#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "kkscatter/errors.hpp"
#include "kkscatter/kramers_kronig.hpp"
#include "oracles.hpp"

using namespace kkscatter;

namespace {

std::vector<double> lorentzian_samples(std::size_t n, double x0, double w, double length) {
  std::vector<double> f(n);
  const double h = length / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = (static_cast<double>(j) + 0.5) * h - x0;
    f[j] = w / (s * s + w * w);
  }
  return f;
}

}  // namespace

TEST(PvHilbert, MatchesClosedFormLorentzian) {
  const double length = 1.0, x0 = 0.4, w = 0.08;
  const auto f = lorentzian_samples(8192, x0, w, length);
  double worst = 0.0;
  for (double x : {0.05, 0.2, 0.33, 0.4, 0.41, 0.5, 0.77, 0.95}) {
    const double want = oracle::lorentzian_hilbert(x, x0, w, length);
    const double got = pv_hilbert(f, length, x);
    worst = std::max(worst, std::fabs(got - want));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(PvHilbert, ErrorShrinksWithResolution) {
  const double length = 1.0, x0 = 0.55, w = 0.1, x = 0.3;
  const double want = oracle::lorentzian_hilbert(x, x0, w, length);
  const double e1 = std::fabs(pv_hilbert(lorentzian_samples(1024, x0, w, length), length, x) - want);
  const double e2 = std::fabs(pv_hilbert(lorentzian_samples(4096, x0, w, length), length, x) - want);
  EXPECT_LT(e2, 0.5 * e1);
}

TEST(PvHilbert, RejectsBoundaryAndTinyInputs) {
  const std::vector<double> f(16, 1.0);
  EXPECT_THROW(pv_hilbert(f, 1.0, 0.0), DomainError);
  EXPECT_THROW(pv_hilbert(f, 1.0, 1.0), DomainError);
  EXPECT_THROW(pv_hilbert(std::vector<double>{1.0}, 1.0, 0.5), DomainError);
}

TEST(DkkFromSamples, ConstantSusceptibilityGivesOne) {
  for (double re : {0.3, 2.0}) {
    const std::vector<cdouble> chi(4096, cdouble(re, 0.7));
    EXPECT_NEAR(d_kk_from_samples(chi, 5e-6), 1.0, 1e-3);
  }
  const std::vector<cdouble> neg(4096, cdouble(-0.5, 0.2));
  EXPECT_NEAR(d_kk_from_samples(neg, 5e-6), -1.0, 1e-3);
}

TEST(DkkFromSamples, ZeroRealIntegralIsSingular) {
  const std::vector<cdouble> chi(64, cdouble(0.0, 1.0));
  EXPECT_THROW(d_kk_from_samples(chi, 1.0), SingularError);
}

TEST(DkkFromSamples, FiniteIntervalHilbertPairIsUnbroken) {
  // Im chi Lorentzian, Re chi its exact Hilbert transform on [0, L].
  const double length = 1.0, x0 = 0.4, w = 0.05;
  const std::size_t n = 16384;
  std::vector<cdouble> chi(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(n) * length;
    const double a = x - x0;
    chi[j] = cdouble(oracle::lorentzian_hilbert(x, x0, w, length), w / (a * a + w * w));
  }
  EXPECT_LT(std::fabs(d_kk_from_samples(chi, length)), 0.01);
}

TEST(ClassifyPhase, Thresholds) {
  EXPECT_EQ(classify_phase(0.0), KKPhase::kUnbroken);
  EXPECT_EQ(classify_phase(-0.1), KKPhase::kUnbroken);
  EXPECT_EQ(classify_phase(0.5), KKPhase::kTransition);
  EXPECT_EQ(classify_phase(-0.95), KKPhase::kBroken);
  EXPECT_EQ(classify_phase(1.0), KKPhase::kBroken);
  EXPECT_EQ(classify_phase(0.3, KKThresholds{0.4, 0.8}), KKPhase::kUnbroken);
  EXPECT_THROW(classify_phase(std::nan("")), DomainError);
  EXPECT_EQ(to_string(KKPhase::kTransition), "TRANSITION");
}

TEST(Dkk, UnbrokenAcrossTheBand) {
  const MediumParams p;
  for (double delta : {-180.0, -140.0, -60.0, -20.0}) {
    const KKMetricResult r = d_kk(p, delta);
    EXPECT_LT(std::fabs(r.d_kk), 0.1) << "delta=" << delta;
    EXPECT_EQ(r.phase, KKPhase::kUnbroken);
  }
}

TEST(Dkk, MagnitudeIsContinuousThroughTheVanishingDenominator) {
  // int Re chi changes sign at Delta = -delta0 / 2, so only |D_kk| is continuous there.
  const MediumParams p;
  const KKMetricResult mid = d_kk(p, -p.delta0 / 2.0);
  EXPECT_TRUE(mid.removable_limit);
  EXPECT_TRUE(std::isfinite(mid.d_kk));
  for (double step : {-0.5, -0.01, 0.01, 0.5}) {
    const double near = d_kk(p, -p.delta0 / 2.0 + step).d_kk;
    EXPECT_NEAR(std::fabs(mid.d_kk), std::fabs(near), 1e-4) << step;
  }
}

TEST(Dkk, LeavesUnbrokenPhaseOutsideTheBand) {
  const MediumParams p;
  EXPECT_NE(d_kk(p, 5.0).phase, KKPhase::kUnbroken);
  EXPECT_EQ(d_kk(p, 20.0).phase, KKPhase::kBroken);
}

TEST(Dkk, RejectsBadResolution) {
  const MediumParams p;
  EXPECT_THROW(d_kk(p, -100.0, 16), DomainError);
}
