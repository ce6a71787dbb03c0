#include "kkscatter/kramers_kronig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kkscatter/constants.hpp"
#include "kkscatter/errors.hpp"
#include "kkscatter/simd/kernels.hpp"

namespace kkscatter {

std::string_view to_string(KKPhase phase) {
  switch (phase) {
    case KKPhase::kUnbroken:
      return "UNBROKEN";
    case KKPhase::kTransition:
      return "TRANSITION";
    case KKPhase::kBroken:
      return "BROKEN";
  }
  return "UNKNOWN";
}

namespace {

struct ValueSlope {
  double value;
  double slope;
};

// Piecewise-linear reconstruction through the midpoint samples.
ValueSlope interpolate(std::span<const double> f, double h, double x) {
  const std::size_t n = f.size();
  const double u = x / h - 0.5;  // fractional sample index
  const double k_floor = std::floor(u);
  if (k_floor == u && u >= 0.0 && u <= static_cast<double>(n - 1)) {
    const auto k = static_cast<std::size_t>(u);
    double slope;
    if (k == 0) {
      slope = (f[1] - f[0]) / h;
    } else if (k == n - 1) {
      slope = (f[n - 1] - f[n - 2]) / h;
    } else {
      slope = (f[k + 1] - f[k - 1]) / (2.0 * h);
    }
    return {f[k], slope};
  }
  std::size_t k = 0;
  if (u > 0.0) k = std::min(static_cast<std::size_t>(k_floor), n - 2);
  const double slope = (f[k + 1] - f[k]) / h;
  const double xk = (static_cast<double>(k) + 0.5) * h;
  return {f[k] + slope * (x - xk), slope};
}

std::vector<double> midpoints(std::size_t n, double length) {
  std::vector<double> s(n);
  const double h = length / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = (static_cast<double>(j) + 0.5) * h;
  return s;
}

}  // namespace

double pv_hilbert(std::span<const double> samples, double length, double x) {
  if (samples.size() < 2) throw DomainError("pv_hilbert needs at least two samples");
  if (!(x > 0.0 && x < length)) {
    throw DomainError("pv_hilbert evaluation point must lie strictly inside (0, L)");
  }
  const double h = length / static_cast<double>(samples.size());
  const std::vector<double> s = midpoints(samples.size(), length);
  const ValueSlope fx = interpolate(samples, h, x);
  const double regular =
      simd::kernels().pv_subtracted_sum(samples, s, x, fx.value, fx.slope, h);
  return (regular + fx.value * std::log((length - x) / x)) / constants::kPi;
}

KKIntegrals kk_integrals(std::span<const cdouble> chi, double length) {
  const std::size_t n = chi.size();
  if (n < 2) throw DomainError("kk_integrals needs at least two samples");
  const double h = length / static_cast<double>(n);
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = chi[j].imag();
  const std::vector<double> s = midpoints(n, length);
  const auto& k = simd::kernels();

  KKIntegrals out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s[i];
    double slope;
    if (i == 0) {
      slope = (f[1] - f[0]) / h;
    } else if (i == n - 1) {
      slope = (f[n - 1] - f[n - 2]) / h;
    } else {
      slope = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    const double regular = k.pv_subtracted_sum(f, s, x, f[i], slope, h);
    const double hilbert = (regular + f[i] * std::log((length - x) / x)) / constants::kPi;
    const double re = chi[i].real();
    out.numerator += (re - hilbert) * h;
    out.re_integral += re * h;
    out.abs_re_integral += std::fabs(re) * h;
  }
  return out;
}

double d_kk_from_samples(std::span<const cdouble> chi, double length) {
  const KKIntegrals in = kk_integrals(chi, length);
  if (!(std::fabs(in.re_integral) > 1e-300)) {
    throw SingularError("degenerate D_kk denominator: int Re[chi] dx vanishes");
  }
  return in.numerator / std::fabs(in.re_integral);
}

KKPhase classify_phase(double d_kk, const KKThresholds& thresholds) {
  if (!std::isfinite(d_kk)) throw DomainError("classify_phase: non-finite D_kk");
  const double a = std::fabs(d_kk);
  if (a <= thresholds.lower) return KKPhase::kUnbroken;
  if (a >= thresholds.upper) return KKPhase::kBroken;
  return KKPhase::kTransition;
}

namespace {

// Relative size below which int Re[chi] is treated as an exact cancellation.
constexpr double kCancellation = 1e-8;

struct Evaluation {
  double value;
  bool limit;
};

Evaluation evaluate(const MediumParams& params, double delta, std::size_t n) {
  const std::vector<cdouble> chi = sample_susceptibility(params, delta, n);
  const KKIntegrals in = kk_integrals(chi, params.length);
  if (std::fabs(in.re_integral) > kCancellation * in.abs_re_integral &&
      std::fabs(in.re_integral) > 1e-300) {
    return {in.numerator / std::fabs(in.re_integral), false};
  }
  // 0/0 (e.g. Delta = -delta0/2 where Re[chi] is odd about L/2): both
  // integrals are linear in chi, so take the ratio of their Delta-derivatives.
  std::vector<cdouble> dchi(n);
  const double h = params.length / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = (static_cast<double>(j) + 0.5) * h;
    dchi[j] = susceptibility_detuning_derivative(delta, x, params);
  }
  const KKIntegrals d = kk_integrals(dchi, params.length);
  if (!(std::fabs(d.re_integral) > kCancellation * d.abs_re_integral) ||
      !(std::fabs(d.re_integral) > 1e-300)) {
    throw SingularError("degenerate D_kk denominator at delta = " + std::to_string(delta));
  }
  return {d.numerator / std::fabs(d.re_integral), true};
}

}  // namespace

KKMetricResult d_kk(const MediumParams& params, double delta, std::size_t resolution,
                    const KKThresholds& thresholds) {
  if (resolution < 64) throw DomainError("d_kk resolution must be >= 64");
  validate(params);
  std::size_t n = resolution;
  Evaluation coarse = evaluate(params, delta, n);
  double previous = std::numeric_limits<double>::quiet_NaN();
  while (true) {
    if (2 * n > std::max(kMaxKKResolution, resolution)) {
      throw ConvergenceError("D_kk did not converge below 1e-3 by resolution " +
                                 std::to_string(n),
                             coarse.value, previous);
    }
    const Evaluation fine = evaluate(params, delta, 2 * n);
    if (std::fabs(fine.value - coarse.value) < 1e-3) {
      return {fine.value, classify_phase(fine.value, thresholds), 2 * n, fine.limit};
    }
    previous = coarse.value;
    coarse = fine;
    n *= 2;
  }
}

}  // namespace kkscatter
