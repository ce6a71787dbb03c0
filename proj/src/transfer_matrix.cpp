#include "kkscatter/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "kkscatter/constants.hpp"
#include "kkscatter/errors.hpp"
#include "kkscatter/simd/kernels.hpp"

namespace kkscatter {

namespace {
constexpr double kDegenerateIndex = 1e-12;
}

IncidenceGeometry IncidenceGeometry::make(double theta, double k_vac) {
  if (!(std::fabs(theta) < constants::kPi / 2.0)) {
    throw DomainError("incidence angle must satisfy |theta| < pi/2");
  }
  if (!(k_vac > 0.0) || !std::isfinite(k_vac)) throw DomainError("k_vac must be > 0");
  return {theta, k_vac};
}

IncidenceGeometry IncidenceGeometry::for_medium(const MediumParams& params, double theta) {
  return make(theta, vacuum_wavenumber(params));
}

double ScatteringCoefficients::phase(cdouble z) {
  const double a = std::arg(z);
  return a == -constants::kPi ? constants::kPi : a;
}

cdouble longitudinal_index(cdouble n, double theta) {
  const double s = std::sin(theta);
  cdouble np = std::sqrt(n * n - s * s);
  if (np.imag() < 0.0 || (np.imag() == 0.0 && np.real() < 0.0)) np = -np;
  return np;
}

TransferMatrix layer_matrix(cdouble n, double d, const IncidenceGeometry& geom) {
  if (!(d > 0.0)) throw DomainError("layer thickness must be > 0");
  const cdouble np = longitudinal_index(n, geom.theta);
  if (std::abs(np) < kDegenerateIndex) throw SingularError("degenerate layer: |n'| ~ 0");
  const double c = std::cos(geom.theta);
  const cdouble w = geom.k_vac * d * np;
  const cdouble cw = std::cos(w);
  const cdouble sw = std::sin(w);
  const cdouble i(0.0, 1.0);
  const cdouble g = (np * np + c * c) / (2.0 * np * c);
  const cdouble h = (np * np - c * c) / (2.0 * np * c);
  return {cw + i * g * sw, i * h * sw, -i * h * sw, cw - i * g * sw};
}

TransferMatrix total_matrix(const IndexProfile& profile, const IncidenceGeometry& geom) {
  const std::size_t n = profile.size();
  std::vector<double> buf(10 * n);
  auto slice = [&](std::size_t k) { return std::span<double>(buf.data() + k * n, n); };
  const auto n_re = slice(0), n_im = slice(1);
  for (std::size_t j = 0; j < n; ++j) {
    n_re[j] = profile[j].real();
    n_im[j] = profile[j].imag();
  }
  const auto& k = simd::kernels();
  const double s = std::sin(geom.theta);
  // n' overwrites n in place
  k.longitudinal(n_re, n_im, s * s, n_re, n_im);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::hypot(n_re[j], n_im[j]) < kDegenerateIndex) {
      throw SingularError("degenerate layer " + std::to_string(j) + ": |n'| ~ 0");
    }
  }
  const simd::MatrixArrays m{slice(2), slice(3), slice(4), slice(5),
                             slice(6), slice(7), slice(8), slice(9)};
  k.layer_matrices(n_re, n_im, geom.k_vac * profile.layer_thickness(), std::cos(geom.theta), m);
  const simd::Matrix2 p = k.fold({m.m11_re, m.m11_im, m.m12_re, m.m12_im,
                                  m.m21_re, m.m21_im, m.m22_re, m.m22_im});
  return {{p.m11_re, p.m11_im}, {p.m12_re, p.m12_im}, {p.m21_re, p.m21_im}, {p.m22_re, p.m22_im}};
}

ScatteringCoefficients scattering_coefficients(const TransferMatrix& m) {
  if (!(std::abs(m.m22) > 1e-300)) {
    throw SingularError("M22 vanishes: scattering coefficients are singular");
  }
  return {-m.m21 / m.m22, m.m12 / m.m22, 1.0 / m.m22};
}

ScatteringCoefficients coefficients_at(const MediumParams& params, double delta,
                                       const IncidenceGeometry& geom, std::size_t n_layers) {
  return scattering_coefficients(total_matrix(sample_profile(params, delta, n_layers), geom));
}

namespace {

double max_modulus_change(const ScatteringCoefficients& a, const ScatteringCoefficients& b) {
  return std::max({std::fabs(a.r_l() - b.r_l()), std::fabs(a.r_r() - b.r_r()),
                   std::fabs(a.t() - b.t())});
}

std::string describe(const ScatteringCoefficients& c) {
  std::ostringstream os;
  os << "(r_l=" << c.r_l() << ", r_r=" << c.r_r() << ", t=" << c.t() << ")";
  return os.str();
}

}  // namespace

ConvergedCoefficients converged_coefficients(const MediumParams& params, double delta,
                                             const IncidenceGeometry& geom, double rel_tol) {
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be > 0");
  std::size_t n = kStartLayers;
  ScatteringCoefficients previous = coefficients_at(params, delta, geom, n);
  while (true) {
    const std::size_t next = 2 * n;
    const ScatteringCoefficients current = coefficients_at(params, delta, geom, next);
    if (max_modulus_change(current, previous) < rel_tol) return {current, next};
    if (next >= kMaxLayers) {
      throw ConvergenceError("transfer matrix did not converge to " + std::to_string(rel_tol) +
                                 " by " + std::to_string(next) + " layers: " +
                                 describe(previous) + " -> " + describe(current),
                             current.t(), previous.t());
    }
    previous = current;
    n = next;
  }
}

}  // namespace kkscatter
