#pragma once

#include <complex>
#include <cstddef>

#include "kkscatter/medium.hpp"

namespace kkscatter {

/// Maps (E+, E-) at x to (E+, E-) at x + d. Unimodular for TE layers.
struct TransferMatrix {
  cdouble m11{1.0, 0.0};
  cdouble m12{0.0, 0.0};
  cdouble m21{0.0, 0.0};
  cdouble m22{1.0, 0.0};

  cdouble det() const { return m11 * m22 - m12 * m21; }

  friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
};

struct IncidenceGeometry {
  double theta = 0.0;   // rad, |theta| < pi/2
  double k_vac = 0.0;   // 1/m

  /// Validating constructor.
  static IncidenceGeometry make(double theta, double k_vac);
  static IncidenceGeometry for_medium(const MediumParams& params, double theta);
};

struct ScatteringCoefficients {
  cdouble r_l_complex;
  cdouble r_r_complex;
  cdouble t_complex;

  double r_l() const { return std::abs(r_l_complex); }
  double r_r() const { return std::abs(r_r_complex); }
  double t() const { return std::abs(t_complex); }
  double phi_l() const { return phase(r_l_complex); }
  double phi_r() const { return phase(r_r_complex); }
  double phi_t() const { return phase(t_complex); }

  /// arg(z) folded into (-pi, pi].
  static double phase(cdouble z);
};

/// n' = n cos(beta) = sqrt(n^2 - sin^2 theta), branch with Im >= 0.
cdouble longitudinal_index(cdouble n, double theta);

/// TE transfer matrix of a homogeneous layer of index n and thickness d.
TransferMatrix layer_matrix(cdouble n, double d, const IncidenceGeometry& geom);

/// M_N ... M_1 with layer 1 at x = 0.
TransferMatrix total_matrix(const IndexProfile& profile, const IncidenceGeometry& geom);

/// r_l = -M21/M22, r_r = M12/M22, t = 1/M22.
ScatteringCoefficients scattering_coefficients(const TransferMatrix& m);

/// Medium profile at detuning delta sampled with n_layers, then transfer matrix.
ScatteringCoefficients coefficients_at(const MediumParams& params, double delta,
                                       const IncidenceGeometry& geom, std::size_t n_layers);

struct ConvergedCoefficients {
  ScatteringCoefficients coeffs;
  std::size_t n_layers = 0;
};

inline constexpr std::size_t kStartLayers = 256;
inline constexpr std::size_t kMaxLayers = 131072;

/// Doubles n_layers from 256 until the moduli (r_l, r_r, t) change by less
/// than rel_tol, or throws ConvergenceError at 131072 layers.
ConvergedCoefficients converged_coefficients(const MediumParams& params, double delta,
                                             const IncidenceGeometry& geom, double rel_tol);

}  // namespace kkscatter
