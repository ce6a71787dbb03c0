#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and an AVX2+FMA variant; the variant is chosen at runtime
// from the CPU features and can be pinned for testing.

#include <cstddef>
#include <span>
#include <string_view>

namespace kkscatter::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);
Isa parse_isa(std::string_view text);  // "scalar", "avx2", "auto"

/// Best ISA supported by this CPU and build.
Isa detected_isa();
bool isa_supported(Isa isa);

/// ISA used by kernels(). Defaults to detected_isa().
Isa active_isa();
/// Throws DomainError if the ISA is not supported here.
void set_active_isa(Isa isa);

/// chi(D') = alpha * i / (1 - i D' + omega_c_sq / (gamma21 + i (delta_c - D'))).
struct SusceptibilityModel {
  double alpha;
  double omega_c_sq;
  double gamma21;
  double delta_c;
};

/// Structure-of-arrays storage for a run of 2x2 complex matrices.
struct MatrixArrays {
  std::span<double> m11_re, m11_im, m12_re, m12_im;
  std::span<double> m21_re, m21_im, m22_re, m22_im;
};

struct ConstMatrixArrays {
  std::span<const double> m11_re, m11_im, m12_re, m12_im;
  std::span<const double> m21_re, m21_im, m22_re, m22_im;
};

struct Matrix2 {
  double m11_re, m11_im, m12_re, m12_im;
  double m21_re, m21_im, m22_re, m22_im;
};

/// Parameters of one two-channel output: S(phi) = mean + amplitude * cos(phi + offset).
struct PhaseScanTerms {
  double l_mean, l_amplitude, l_offset;
  double r_mean, r_amplitude, r_offset;
};

struct KernelTable {
  /// Evaluates chi at each effective detuning.
  void (*susceptibility)(const SusceptibilityModel& model, std::span<const double> detuning,
                         std::span<double> re, std::span<double> im);

  /// out = sqrt(shift + z) on the branch with Im >= 0 (Re >= 0 when Im == 0).
  void (*sqrt_upper)(std::span<const double> re, std::span<const double> im, double shift,
                     std::span<double> out_re, std::span<double> out_im);

  /// out = sqrt(n^2 - sin2) on the same branch.
  void (*longitudinal)(std::span<const double> n_re, std::span<const double> n_im,
                       double sin2, std::span<double> out_re, std::span<double> out_im);

  /// TE layer matrices for longitudinal indices n', phase k_d = K d, cos(theta).
  void (*layer_matrices)(std::span<const double> np_re, std::span<const double> np_im,
                         double k_d, double cos_theta, const MatrixArrays& out);

  /// Ordered product M_{N-1} ... M_1 M_0.
  Matrix2 (*fold)(const ConstMatrixArrays& layers);

  /// S_L and S_R at each phase, given cos/sin tables of phi.
  void (*phase_scan)(const PhaseScanTerms& terms, std::span<const double> cos_phi,
                     std::span<const double> sin_phi, std::span<double> s_l,
                     std::span<double> s_r);

  /// h * sum_j g_j with g_j = (f_j - fx) / (s_j - x), replaced by fpx where s_j == x.
  double (*pv_subtracted_sum)(std::span<const double> f, std::span<const double> s, double x,
                              double fx, double fpx, double h);
};

const KernelTable& kernels();
const KernelTable& kernels_for(Isa isa);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not built
}  // namespace detail

}  // namespace kkscatter::simd
