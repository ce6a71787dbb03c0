#include "kkscatter/medium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kkscatter/constants.hpp"
#include "kkscatter/errors.hpp"
#include "kkscatter/simd/kernels.hpp"

namespace kkscatter {

std::string_view to_string(IndexConvention convention) {
  return convention == IndexConvention::kSI ? "si" : "gaussian";
}

IndexConvention parse_index_convention(std::string_view text) {
  if (text == "si") return IndexConvention::kSI;
  if (text == "gaussian") return IndexConvention::kGaussian;
  throw ConfigError("unknown index convention '" + std::string(text) + "' (expected si|gaussian)");
}

double index_scale(IndexConvention convention) {
  return convention == IndexConvention::kSI ? 1.0 : 4.0 * constants::kPi;
}

void validate(const MediumParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("invalid medium parameters: ") + what);
  };
  require(std::isfinite(p.gamma31) && p.gamma31 > 0.0, "gamma31 must be > 0");
  require(std::isfinite(p.gamma21) && p.gamma21 > 0.0, "gamma21 must be > 0");
  require(std::isfinite(p.omega_c) && p.omega_c >= 0.0, "omega_c must be >= 0");
  require(std::isfinite(p.delta_c), "delta_c must be finite");
  require(std::isfinite(p.delta0), "delta0 must be finite");
  require(std::isfinite(p.n0) && p.n0 > 0.0, "n0 must be > 0");
  require(std::isfinite(p.d13) && p.d13 > 0.0, "d13 must be > 0");
  require(std::isfinite(p.length) && p.length > 0.0, "length must be > 0");
  require(std::isfinite(p.lambda_probe) && p.lambda_probe > 0.0, "lambda must be > 0");
  if (p.omega_d0 && p.delta_d) {
    require(*p.delta_d != 0.0, "delta_d must be non-zero");
    const double derived = (*p.omega_d0) * (*p.omega_d0) / (*p.delta_d);
    require(std::fabs(derived - p.delta0) <= 1e-12 * std::max(std::fabs(derived), std::fabs(p.delta0)),
            "delta0 must equal omega_d0^2 / delta_d");
  }
}

SusceptibilityPrefactor SusceptibilityPrefactor::from(const MediumParams& p) {
  return {p.n0 * p.d13 * p.d13 / (2.0 * constants::kEpsilon0 * constants::kHbar)};
}

double vacuum_wavenumber(const MediumParams& params) {
  return constants::kTwoPi / params.lambda_probe;
}

double level_shift(double x, const MediumParams& params) {
  if (!(x >= 0.0 && x <= params.length)) {
    throw DomainError("position " + std::to_string(x) + " m is outside [0, L]");
  }
  return params.delta0 * x / params.length;
}

namespace {

// Denominator of chi in gamma31 units and its derivative with respect to Delta'.
cdouble denominator(double dp, const MediumParams& p) {
  const cdouble i(0.0, 1.0);
  return 1.0 - i * dp + p.omega_c * p.omega_c / (p.gamma21 + i * (p.delta_c - dp));
}

cdouble denominator_derivative(double dp, const MediumParams& p) {
  const cdouble i(0.0, 1.0);
  const cdouble q = p.gamma21 + i * (p.delta_c - dp);
  return -i + i * p.omega_c * p.omega_c / (q * q);
}

}  // namespace

cdouble susceptibility_at_detuning(double effective_detuning, const MediumParams& params) {
  const double alpha = SusceptibilityPrefactor::from(params).in_gamma31_units(params);
  return cdouble(0.0, alpha) / denominator(effective_detuning, params);
}

cdouble susceptibility(double delta, double x, const MediumParams& params) {
  return susceptibility_at_detuning(delta + level_shift(x, params), params);
}

cdouble susceptibility_detuning_derivative(double delta, double x, const MediumParams& params) {
  const double alpha = SusceptibilityPrefactor::from(params).in_gamma31_units(params);
  const double dp = delta + level_shift(x, params);
  const cdouble d = denominator(dp, params);
  return -cdouble(0.0, alpha) * denominator_derivative(dp, params) / (d * d);
}

cdouble refractive_index(cdouble chi) {
  cdouble n = std::sqrt(1.0 + chi);
  if (n.imag() < 0.0) n = -n;
  return n;
}

IndexProfile::IndexProfile(std::vector<cdouble> index, double length)
    : index_(std::move(index)), length_(length) {
  if (index_.empty()) throw DomainError("index profile must have at least one layer");
  if (!(length_ > 0.0)) throw DomainError("index profile length must be > 0");
}

IndexProfile IndexProfile::reversed() const {
  std::vector<cdouble> flipped(index_.rbegin(), index_.rend());
  return IndexProfile(std::move(flipped), length_);
}

namespace {

struct SampledChi {
  std::vector<double> re;
  std::vector<double> im;
};

SampledChi sample_chi_arrays(const MediumParams& params, double delta, std::size_t n_layers,
                             double scale) {
  if (n_layers < 2) throw DomainError("n_layers must be >= 2");
  validate(params);
  std::vector<double> detuning(n_layers);
  const double step = params.delta0 / static_cast<double>(n_layers);
  for (std::size_t j = 0; j < n_layers; ++j) {
    detuning[j] = delta + (static_cast<double>(j) + 0.5) * step;
  }
  const simd::SusceptibilityModel model{
      scale * SusceptibilityPrefactor::from(params).in_gamma31_units(params),
      params.omega_c * params.omega_c, params.gamma21, params.delta_c};
  SampledChi out{std::vector<double>(n_layers), std::vector<double>(n_layers)};
  simd::kernels().susceptibility(model, detuning, out.re, out.im);
  return out;
}

}  // namespace

std::vector<cdouble> sample_susceptibility(const MediumParams& params, double delta,
                                           std::size_t n_layers) {
  const SampledChi chi = sample_chi_arrays(params, delta, n_layers, 1.0);
  std::vector<cdouble> out(n_layers);
  for (std::size_t j = 0; j < n_layers; ++j) out[j] = {chi.re[j], chi.im[j]};
  return out;
}

IndexProfile sample_profile(const MediumParams& params, double delta, std::size_t n_layers) {
  const SampledChi chi =
      sample_chi_arrays(params, delta, n_layers, index_scale(params.convention));
  std::vector<double> n_re(n_layers), n_im(n_layers);
  simd::kernels().sqrt_upper(chi.re, chi.im, 1.0, n_re, n_im);
  std::vector<cdouble> index(n_layers);
  for (std::size_t j = 0; j < n_layers; ++j) index[j] = {n_re[j], n_im[j]};
  return IndexProfile(std::move(index), params.length);
}

}  // namespace kkscatter
