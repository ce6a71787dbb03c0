#include "kkscatter/simd/kernels.hpp"

#include <cmath>

namespace kkscatter::simd {
namespace {

void susceptibility(const SusceptibilityModel& model, std::span<const double> detuning,
                    std::span<double> re, std::span<double> im) {
  for (std::size_t j = 0; j < detuning.size(); ++j) {
    const double dp = detuning[j];
    const double b = model.delta_c - dp;
    const double inv = 1.0 / (model.gamma21 * model.gamma21 + b * b);
    // D = Dr + i Di; chi = alpha * i / D = alpha (Di + i Dr) / |D|^2
    const double dr = 1.0 + model.omega_c_sq * model.gamma21 * inv;
    const double di = -dp - model.omega_c_sq * b * inv;
    const double scale = model.alpha / (dr * dr + di * di);
    re[j] = scale * di;
    im[j] = scale * dr;
  }
}

inline void sqrt_upper_one(double x, double y, double& u, double& v) {
  const double r = std::sqrt(x * x + y * y);
  if (r == 0.0) {
    u = 0.0;
    v = 0.0;
    return;
  }
  if (x >= 0.0) {
    u = std::sqrt(0.5 * (r + x));
    v = y / (2.0 * u);
  } else {
    const double w = std::sqrt(0.5 * (r - x));
    u = std::fabs(y) / (2.0 * w);
    v = std::copysign(w, y);
  }
  if (v < 0.0) {
    u = -u;
    v = -v;
  }
}

void sqrt_upper(std::span<const double> re, std::span<const double> im, double shift,
                std::span<double> out_re, std::span<double> out_im) {
  for (std::size_t j = 0; j < re.size(); ++j) {
    sqrt_upper_one(shift + re[j], im[j], out_re[j], out_im[j]);
  }
}

void longitudinal(std::span<const double> n_re, std::span<const double> n_im, double sin2,
                  std::span<double> out_re, std::span<double> out_im) {
  for (std::size_t j = 0; j < n_re.size(); ++j) {
    const double a = n_re[j];
    const double b = n_im[j];
    sqrt_upper_one((a - b) * (a + b) - sin2, 2.0 * a * b, out_re[j], out_im[j]);
  }
}

void layer_matrices(std::span<const double> np_re, std::span<const double> np_im, double k_d,
                    double cos_theta, const MatrixArrays& out) {
  for (std::size_t j = 0; j < np_re.size(); ++j) {
    const double pr = np_re[j];
    const double pi = np_im[j];
    // phase w = K d n' = a + i b
    const double a = k_d * pr;
    const double b = k_d * pi;
    const double eb = std::exp(b);
    const double emb = 1.0 / eb;
    const double ch = 0.5 * (eb + emb);
    const double sh = 0.5 * (eb - emb);
    const double sa = std::sin(a);
    const double ca = std::cos(a);
    // cos w, sin w
    const double cw_re = ca * ch;
    const double cw_im = -sa * sh;
    const double sw_re = sa * ch;
    const double sw_im = ca * sh;
    // g = (n'^2 + c^2) / (2 n' c), h = (n'^2 - c^2) / (2 n' c)
    const double c2 = cos_theta * cos_theta;
    const double sq_re = pr * pr - pi * pi;
    const double sq_im = 2.0 * pr * pi;
    const double den_re = 2.0 * cos_theta * pr;
    const double den_im = 2.0 * cos_theta * pi;
    const double inv_den = 1.0 / (den_re * den_re + den_im * den_im);
    const double gp_re = sq_re + c2;
    const double gm_re = sq_re - c2;
    const double g_re = (gp_re * den_re + sq_im * den_im) * inv_den;
    const double g_im = (sq_im * den_re - gp_re * den_im) * inv_den;
    const double h_re = (gm_re * den_re + sq_im * den_im) * inv_den;
    const double h_im = (sq_im * den_re - gm_re * den_im) * inv_den;
    // i g sin w and i h sin w
    const double gs_re = g_re * sw_re - g_im * sw_im;
    const double gs_im = g_re * sw_im + g_im * sw_re;
    const double hs_re = h_re * sw_re - h_im * sw_im;
    const double hs_im = h_re * sw_im + h_im * sw_re;
    out.m11_re[j] = cw_re - gs_im;
    out.m11_im[j] = cw_im + gs_re;
    out.m22_re[j] = cw_re + gs_im;
    out.m22_im[j] = cw_im - gs_re;
    out.m12_re[j] = -hs_im;
    out.m12_im[j] = hs_re;
    out.m21_re[j] = hs_im;
    out.m21_im[j] = -hs_re;
  }
}

Matrix2 fold(const ConstMatrixArrays& l) {
  double a_re = 1.0, a_im = 0.0, b_re = 0.0, b_im = 0.0;
  double c_re = 0.0, c_im = 0.0, d_re = 1.0, d_im = 0.0;
  for (std::size_t j = 0; j < l.m11_re.size(); ++j) {
    const double p_re = l.m11_re[j], p_im = l.m11_im[j];
    const double q_re = l.m12_re[j], q_im = l.m12_im[j];
    const double r_re = l.m21_re[j], r_im = l.m21_im[j];
    const double s_re = l.m22_re[j], s_im = l.m22_im[j];
    // [p q; r s] * [a b; c d]
    const double na_re = p_re * a_re - p_im * a_im + q_re * c_re - q_im * c_im;
    const double na_im = p_re * a_im + p_im * a_re + q_re * c_im + q_im * c_re;
    const double nb_re = p_re * b_re - p_im * b_im + q_re * d_re - q_im * d_im;
    const double nb_im = p_re * b_im + p_im * b_re + q_re * d_im + q_im * d_re;
    const double nc_re = r_re * a_re - r_im * a_im + s_re * c_re - s_im * c_im;
    const double nc_im = r_re * a_im + r_im * a_re + s_re * c_im + s_im * c_re;
    const double nd_re = r_re * b_re - r_im * b_im + s_re * d_re - s_im * d_im;
    const double nd_im = r_re * b_im + r_im * b_re + s_re * d_im + s_im * d_re;
    a_re = na_re; a_im = na_im; b_re = nb_re; b_im = nb_im;
    c_re = nc_re; c_im = nc_im; d_re = nd_re; d_im = nd_im;
  }
  return {a_re, a_im, b_re, b_im, c_re, c_im, d_re, d_im};
}

void phase_scan(const PhaseScanTerms& t, std::span<const double> cos_phi,
                std::span<const double> sin_phi, std::span<double> s_l, std::span<double> s_r) {
  const double cl = std::cos(t.l_offset), sl = std::sin(t.l_offset);
  const double cr = std::cos(t.r_offset), sr = std::sin(t.r_offset);
  for (std::size_t k = 0; k < cos_phi.size(); ++k) {
    s_l[k] = t.l_mean + t.l_amplitude * (cos_phi[k] * cl - sin_phi[k] * sl);
    s_r[k] = t.r_mean + t.r_amplitude * (cos_phi[k] * cr - sin_phi[k] * sr);
  }
}

double pv_subtracted_sum(std::span<const double> f, std::span<const double> s, double x,
                         double fx, double fpx, double h) {
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double ds = s[j] - x;
    sum += ds == 0.0 ? fpx : (f[j] - fx) / ds;
  }
  return sum * h;
}

constexpr KernelTable kScalar{
    &susceptibility, &sqrt_upper, &longitudinal, &layer_matrices,
    &fold,           &phase_scan, &pv_subtracted_sum,
};

}  // namespace

namespace detail {
const KernelTable& scalar_table() { return kScalar; }
}  // namespace detail

}  // namespace kkscatter::simd
