#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "kkscatter/errors.hpp"
#include "kkscatter/simd/kernels.hpp"
#include "kkscatter/transfer_matrix.hpp"
#include "oracles.hpp"

using namespace kkscatter;

namespace {

const double kK = 2.0 * M_PI / 795e-9;

IndexProfile profile_from(const std::function<cdouble(double)>& n, double length,
                          std::size_t layers) {
  std::vector<cdouble> v(layers);
  for (std::size_t j = 0; j < layers; ++j) {
    v[j] = n((static_cast<double>(j) + 0.5) * length / static_cast<double>(layers));
  }
  return IndexProfile(std::move(v), length);
}

}  // namespace

TEST(LayerMatrix, UnimodularOnRandomLayers) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const cdouble n(0.2 + 2.8 * u(rng), u(rng));
    const double d = 1e-9 + 5e-8 * u(rng);
    const auto g = IncidenceGeometry::make(1.3 * u(rng), kK);
    worst = std::max(worst, std::abs(layer_matrix(n, d, g).det() - 1.0));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(LayerMatrix, MatchesInterfaceProduct) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const cdouble n(0.3 + 2.0 * u(rng), 0.3 * u(rng));
    const double d = 1e-8 + 3e-7 * u(rng);
    const double theta = 1.2 * u(rng);
    const TransferMatrix m = layer_matrix(n, d, IncidenceGeometry::make(theta, kK));
    const oracle::Mat o = oracle::interface_product(n, d, theta, kK);
    const double scale = std::max({1.0, std::abs(o.a), std::abs(o.d)});
    EXPECT_NEAR(std::abs(m.m11 - o.a), 0.0, 1e-12 * scale);
    EXPECT_NEAR(std::abs(m.m12 - o.b), 0.0, 1e-12 * scale);
    EXPECT_NEAR(std::abs(m.m21 - o.c), 0.0, 1e-12 * scale);
    EXPECT_NEAR(std::abs(m.m22 - o.d), 0.0, 1e-12 * scale);
  }
}

TEST(LayerMatrix, RejectsDegenerateInput) {
  const auto g = IncidenceGeometry::make(0.5, kK);
  EXPECT_THROW(layer_matrix(cdouble(std::sin(0.5), 0.0), 1e-8, g), SingularError);
  EXPECT_THROW(layer_matrix(cdouble(1.2, 0.0), 0.0, g), DomainError);
  EXPECT_THROW(IncidenceGeometry::make(M_PI / 2, kK), DomainError);
  EXPECT_THROW(IncidenceGeometry::make(0.1, -1.0), DomainError);
}

TEST(TotalMatrix, UniformSlabIsReciprocalAndMatchesAiry) {
  for (double theta : {0.0, 0.3, 0.9}) {
    for (cdouble n : {cdouble(1.3, 0.05), cdouble(2.1, 0.0), cdouble(0.9, 0.4)}) {
      const double d = 2e-6;
      const IndexProfile slab(std::vector<cdouble>(300, n), d);
      const auto c = scattering_coefficients(total_matrix(slab, IncidenceGeometry::make(theta, kK)));
      const auto a = oracle::airy_slab(n, d, theta, kK);
      EXPECT_NEAR(std::abs(c.r_l_complex - c.r_r_complex), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(c.r_l_complex - a.r_l), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(c.t_complex - a.t), 0.0, 1e-10);
    }
  }
}

TEST(TotalMatrix, AgreesWithHelmholtzIntegration) {
  const double length = 5e-6;
  const double theta = 0.35;
  const std::vector<std::function<cdouble(double)>> profiles{
      [&](double x) { return cdouble(1.2 + 0.3 * x / length, 0.02); },
      [&](double x) {
        const double u = (x - 0.4 * length) / (0.15 * length);
        return cdouble(1.0 + 0.4 * std::exp(-u * u), 0.05 * std::exp(-u * u));
      },
      [&](double x) {
        MediumParams p;
        return refractive_index(4.0 * M_PI * susceptibility(-100.0, x, p));
      },
  };
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const auto c = scattering_coefficients(
        total_matrix(profile_from(profiles[k], length, 65536), IncidenceGeometry::make(theta, kK)));
    const auto o = oracle::helmholtz(profiles[k], length, theta, kK, 40000);
    EXPECT_NEAR(std::abs(c.r_l_complex - o.r_l), 0.0, 1e-4) << "profile " << k;
    EXPECT_NEAR(std::abs(c.r_r_complex - o.r_r), 0.0, 1e-4) << "profile " << k;
    EXPECT_NEAR(std::abs(c.t_complex - o.t), 0.0, 1e-4) << "profile " << k;
  }
}

TEST(TotalMatrix, ReversalSwapsReflectionSides) {
  const MediumParams p;
  const IndexProfile prof = sample_profile(p, -100.0, 2048);
  const auto g = IncidenceGeometry::for_medium(p, 0.2);
  const auto a = scattering_coefficients(total_matrix(prof, g));
  const auto b = scattering_coefficients(total_matrix(prof.reversed(), g));
  EXPECT_NEAR(std::abs(a.r_l_complex - b.r_r_complex), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(a.r_r_complex - b.r_l_complex), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(a.t_complex - b.t_complex), 0.0, 1e-10);
}

TEST(TotalMatrix, ScalarAndVectorPathsAgree) {
  if (!simd::isa_supported(simd::Isa::kAvx2)) GTEST_SKIP() << "AVX2 not available";
  const MediumParams p;
  const auto g = IncidenceGeometry::for_medium(p, 0.4);
  const simd::Isa saved = simd::active_isa();
  for (std::size_t n : {7u, 64u, 1001u, 16384u}) {
    simd::set_active_isa(simd::Isa::kScalar);
    const auto a = scattering_coefficients(total_matrix(sample_profile(p, -80.0, n), g));
    simd::set_active_isa(simd::Isa::kAvx2);
    const auto b = scattering_coefficients(total_matrix(sample_profile(p, -80.0, n), g));
    EXPECT_NEAR(std::abs(a.r_l_complex - b.r_l_complex), 0.0, 1e-11) << n;
    EXPECT_NEAR(std::abs(a.r_r_complex - b.r_r_complex), 0.0, 1e-11) << n;
    EXPECT_NEAR(std::abs(a.t_complex - b.t_complex), 0.0, 1e-11) << n;
  }
  simd::set_active_isa(saved);
}

TEST(Coefficients, PhaseFolding) {
  EXPECT_DOUBLE_EQ(ScatteringCoefficients::phase(cdouble(-1.0, -0.0)), M_PI);
  EXPECT_DOUBLE_EQ(ScatteringCoefficients::phase(cdouble(-1.0, 0.0)), M_PI);
  EXPECT_NEAR(ScatteringCoefficients::phase(cdouble(0.0, -2.0)), -M_PI / 2, 1e-15);
}

TEST(Coefficients, ConvergenceRefinesLayers) {
  const MediumParams p;
  const auto g = IncidenceGeometry::for_medium(p, 0.0);
  const auto c = converged_coefficients(p, -100.0, g, 1e-6);
  EXPECT_GE(c.n_layers, kStartLayers);
  const auto finer = coefficients_at(p, -100.0, g, 4 * c.n_layers);
  EXPECT_NEAR(c.coeffs.r_r(), finer.r_r(), 2e-6);
  EXPECT_NEAR(c.coeffs.t(), finer.t(), 2e-6);
  EXPECT_THROW(converged_coefficients(p, -100.0, g, 0.0), DomainError);
  EXPECT_THROW(converged_coefficients(p, -100.0, g, 1e-300), ConvergenceError);
}

TEST(Coefficients, UnidirectionalReflectionAtTheBandCentre) {
  const MediumParams p;
  const auto c = converged_coefficients(p, -100.0, IncidenceGeometry::for_medium(p, 0.0), 1e-6);
  EXPECT_LT(c.coeffs.r_l(), 0.1 * c.coeffs.r_r());
  EXPECT_GT(c.coeffs.r_r(), 0.05);
}
