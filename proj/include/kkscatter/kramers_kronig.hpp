#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

#include "kkscatter/medium.hpp"

namespace kkscatter {

enum class KKPhase { kUnbroken, kTransition, kBroken };

std::string_view to_string(KKPhase phase);

struct KKThresholds {
  double lower = 0.1;  // |D| <= lower: unbroken
  double upper = 0.9;  // |D| >= upper: broken
};

struct KKMetricResult {
  double d_kk = 0.0;
  KKPhase phase = KKPhase::kBroken;
  std::size_t resolution = 0;
  // True when int Re[chi] vanished and the value is the limit taken along Delta.
  bool removable_limit = false;
};

/// (1/pi) P int_0^L f(s) / (s - x) ds for f sampled on the midpoints of [0, L].
///
/// Singularity subtraction: int [f(s) - f(x)] / (s - x) ds by the midpoint rule
/// plus the exact f(x) ln((L - x) / x). f(x) and f'(x) come from linear
/// interpolation of the samples.
double pv_hilbert(std::span<const double> samples, double length, double x);

/// Raw pieces of the spatial-KK figure of merit for midpoint samples of chi.
struct KKIntegrals {
  double numerator = 0.0;     // int (Re chi - H[Im chi]) dx
  double re_integral = 0.0;   // int Re chi dx (signed)
  double abs_re_integral = 0.0;  // int |Re chi| dx
};

KKIntegrals kk_integrals(std::span<const cdouble> chi, double length);

/// numerator / |int Re chi|; throws SingularError when the denominator underflows.
double d_kk_from_samples(std::span<const cdouble> chi, double length);

KKPhase classify_phase(double d_kk, const KKThresholds& thresholds = {});

inline constexpr std::size_t kDefaultKKResolution = 4096;
inline constexpr std::size_t kMaxKKResolution = 65536;

/// Figure of merit at probe detuning delta (gamma31 units), refined by
/// doubling until two successive values differ by less than 1e-3.
KKMetricResult d_kk(const MediumParams& params, double delta,
                    std::size_t resolution = kDefaultKKResolution,
                    const KKThresholds& thresholds = {});

}  // namespace kkscatter
