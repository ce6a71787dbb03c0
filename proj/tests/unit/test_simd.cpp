#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kkscatter/errors.hpp"
#include "kkscatter/simd/kernels.hpp"

using namespace kkscatter;
using namespace kkscatter::simd;

namespace {

const std::vector<std::size_t> kSizes{0, 1, 3, 4, 5, 8, 17, 1000, 4099};

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!isa_supported(Isa::kAvx2)) GTEST_SKIP() << "AVX2 not available";
  }
  const KernelTable& ref() { return kernels_for(Isa::kScalar); }
  const KernelTable& vec() { return kernels_for(Isa::kAvx2); }
  std::mt19937_64 rng{1234};
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
};

void expect_close(const std::vector<double>& a, const std::vector<double>& b, double rel,
                  const char* what) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], rel * std::max(1.0, std::fabs(a[i]))) << what << " at " << i;
  }
}

}  // namespace

TEST_F(SimdEquivalence, Susceptibility) {
  const SusceptibilityModel m{0.19 * 4 * M_PI, 100.0, 3.5e-4, 0.0};
  for (std::size_t n : kSizes) {
    std::vector<double> d(n);
    for (auto& v : d) v = uniform(-400.0, 400.0);
    if (n > 2) d[1] = 0.0;
    std::vector<double> r1(n), i1(n), r2(n), i2(n);
    ref().susceptibility(m, d, r1, i1);
    vec().susceptibility(m, d, r2, i2);
    expect_close(r1, r2, 1e-14, "re");
    expect_close(i1, i2, 1e-14, "im");
  }
}

TEST_F(SimdEquivalence, SqrtUpperAndLongitudinal) {
  for (std::size_t n : kSizes) {
    std::vector<double> re(n), im(n);
    for (std::size_t j = 0; j < n; ++j) {
      re[j] = uniform(-3.0, 3.0);
      im[j] = j % 7 == 0 ? 0.0 : uniform(-2.0, 2.0);
    }
    std::vector<double> a(n), b(n), c(n), d(n);
    ref().sqrt_upper(re, im, 1.0, a, b);
    vec().sqrt_upper(re, im, 1.0, c, d);
    expect_close(a, c, 1e-15, "sqrt re");
    expect_close(b, d, 1e-15, "sqrt im");
    ref().longitudinal(re, im, 0.6, a, b);
    vec().longitudinal(re, im, 0.6, c, d);
    expect_close(a, c, 1e-15, "long re");
    expect_close(b, d, 1e-15, "long im");
    for (std::size_t j = 0; j < n; ++j) EXPECT_GE(d[j], 0.0);
  }
}

TEST_F(SimdEquivalence, LayerMatrices) {
  for (std::size_t n : kSizes) {
    std::vector<double> pr(n), pi(n);
    for (std::size_t j = 0; j < n; ++j) {
      pr[j] = uniform(0.05, 3.0);
      pi[j] = uniform(0.0, 1.5);
    }
    std::vector<std::vector<double>> a(8, std::vector<double>(n)), b(8, std::vector<double>(n));
    auto arrays = [](std::vector<std::vector<double>>& s) {
      return MatrixArrays{s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7]};
    };
    // k d up to 3: phases well outside the first octant
    const double kd = 3.0;
    ref().layer_matrices(pr, pi, kd, 0.8, arrays(a));
    vec().layer_matrices(pr, pi, kd, 0.8, arrays(b));
    // entries grow like cosh(k d Im n'), so compare against the matrix scale
    for (std::size_t j = 0; j < n; ++j) {
      double scale = 1.0;
      for (int k = 0; k < 8; ++k) scale = std::max(scale, std::fabs(a[k][j]));
      for (int k = 0; k < 8; ++k) EXPECT_NEAR(a[k][j], b[k][j], 1e-15 * scale) << "layer " << j;
    }
  }
}

TEST_F(SimdEquivalence, FoldAndPhaseScanAndPvSum) {
  for (std::size_t n : kSizes) {
    std::vector<double> pr(n), pi(n);
    for (std::size_t j = 0; j < n; ++j) {
      pr[j] = uniform(0.8, 1.4);
      pi[j] = uniform(0.0, 0.05);
    }
    std::vector<std::vector<double>> s(8, std::vector<double>(n));
    ref().layer_matrices(pr, pi, 0.01, 1.0,
                         MatrixArrays{s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7]});
    const ConstMatrixArrays view{s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7]};
    const Matrix2 a = ref().fold(view);
    const Matrix2 b = vec().fold(view);
    const double* pa = &a.m11_re;
    const double* pb = &b.m11_re;
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(pa[k], pb[k], 1e-12 * std::max(1.0, std::fabs(pa[k])));

    std::vector<double> cphi(n), sphi(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(n, 1));
      cphi[k] = std::cos(phi);
      sphi[k] = std::sin(phi);
    }
    const PhaseScanTerms terms{0.3, 0.2, 1.1, 0.7, 0.5, -2.0};
    std::vector<double> l1(n), r1(n), l2(n), r2(n);
    ref().phase_scan(terms, cphi, sphi, l1, r1);
    vec().phase_scan(terms, cphi, sphi, l2, r2);
    expect_close(l1, l2, 1e-15, "s_l");
    expect_close(r1, r2, 1e-15, "s_r");

    std::vector<double> f(n), pos(n);
    for (std::size_t j = 0; j < n; ++j) {
      pos[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      f[j] = std::sin(3.0 * pos[j]);
    }
    const double x = n > 3 ? pos[n / 2] : 0.31;
    const double h = n ? 1.0 / static_cast<double>(n) : 0.0;
    const double s1 = ref().pv_subtracted_sum(f, pos, x, std::sin(3 * x), 3 * std::cos(3 * x), h);
    const double s2 = vec().pv_subtracted_sum(f, pos, x, std::sin(3 * x), 3 * std::cos(3 * x), h);
    EXPECT_NEAR(s1, s2, 1e-12 * std::max(1.0, std::fabs(s1)));
  }
}

TEST(SimdDispatch, SelectionAndParsing) {
  EXPECT_EQ(parse_isa("scalar"), Isa::kScalar);
  EXPECT_EQ(parse_isa("auto"), detected_isa());
  EXPECT_THROW(parse_isa("neon"), ConfigError);
  const Isa saved = active_isa();
  set_active_isa(Isa::kScalar);
  EXPECT_EQ(&kernels(), &kernels_for(Isa::kScalar));
  set_active_isa(saved);
  if (!isa_supported(Isa::kAvx2)) {
    EXPECT_THROW(set_active_isa(Isa::kAvx2), DomainError);
  }
}
