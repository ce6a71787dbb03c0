#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace kkscatter {

using cdouble = std::complex<double>;

/// Relation between the atomic susceptibility and the permittivity entering n.
///
/// kSI uses n^2 = 1 + chi. kGaussian uses n^2 = 1 + 4*pi*chi, the relation
/// under which the reference figure values (contrast, CPA plateau, S_R peaks)
/// are reproduced with the SI prefactor N0|d13|^2 / (2 eps0 hbar).
enum class IndexConvention { kSI, kGaussian };

std::string_view to_string(IndexConvention convention);
IndexConvention parse_index_convention(std::string_view text);
double index_scale(IndexConvention convention);

/// Atomic and optical constants of the driven medium.
///
/// gamma31 is stored in rad/s and is the frequency unit of every other rate:
/// gamma21, omega_c, delta_c, delta0 (and the optional omega_d0, delta_d) are
/// dimensionless multiples of gamma31. Lengths are in meters.
struct MediumParams {
  double gamma31 = 2.0 * 3.14159265358979323846 * 2.87e6;
  double gamma21 = 1.0e3 / 2.87e6;
  double omega_c = 10.0;
  double delta_c = 0.0;
  double delta0 = 200.0;
  std::optional<double> omega_d0;
  std::optional<double> delta_d;
  double n0 = 2.0e19;       // m^-3
  double d13 = 1.79e-29;    // C m
  double length = 5.0e-6;   // m
  double lambda_probe = 795e-9;  // m
  IndexConvention convention = IndexConvention::kGaussian;

  bool operator==(const MediumParams&) const = default;
};

/// Throws DomainError when an invariant of MediumParams is violated.
void validate(const MediumParams& params);

/// alpha = N0 |d13|^2 / (2 eps0 hbar).
struct SusceptibilityPrefactor {
  double alpha = 0.0;  // rad/s

  static SusceptibilityPrefactor from(const MediumParams& params);
  double in_gamma31_units(const MediumParams& params) const { return alpha / params.gamma31; }
};

/// Vacuum probe wavenumber 2*pi/lambda in 1/m.
double vacuum_wavenumber(const MediumParams& params);

/// delta(x) = delta0 * x / L, in units of gamma31.
double level_shift(double x, const MediumParams& params);

/// Weak-probe susceptibility of the effective Lambda system as a function of
/// the local detuning Delta' = Delta + delta(x) (gamma31 units).
cdouble susceptibility_at_detuning(double effective_detuning, const MediumParams& params);

/// chi(Delta, x); Delta in units of gamma31, x in meters.
cdouble susceptibility(double delta, double x, const MediumParams& params);

/// d chi / d Delta at fixed x (per unit gamma31).
cdouble susceptibility_detuning_derivative(double delta, double x, const MediumParams& params);

/// n = sqrt(1 + chi) on the absorbing branch (Im n >= 0).
cdouble refractive_index(cdouble chi);

/// Sampled complex index over [0, L] on layer midpoints.
class IndexProfile {
 public:
  IndexProfile(std::vector<cdouble> index, double length);

  std::size_t size() const noexcept { return index_.size(); }
  double length() const noexcept { return length_; }
  double layer_thickness() const noexcept { return length_ / static_cast<double>(index_.size()); }
  double midpoint(std::size_t j) const noexcept {
    return (static_cast<double>(j) + 0.5) * layer_thickness();
  }
  std::span<const cdouble> index() const noexcept { return index_; }
  cdouble operator[](std::size_t j) const noexcept { return index_[j]; }

  /// Same layers in the opposite spatial order.
  IndexProfile reversed() const;

 private:
  std::vector<cdouble> index_;
  double length_;
};

/// chi sampled on the n_layers midpoints (no index convention applied).
std::vector<cdouble> sample_susceptibility(const MediumParams& params, double delta,
                                           std::size_t n_layers);

/// n(x_j) at x_j = (j + 1/2) L / n_layers, using the params' index convention.
IndexProfile sample_profile(const MediumParams& params, double delta, std::size_t n_layers);

}  // namespace kkscatter
