#include "kkscatter/simd/kernels.hpp"

#include <immintrin.h>

#include <array>
#include <cmath>

#include "vecmath_avx2.hpp"

namespace kkscatter::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline std::size_t vector_end(std::size_t n) { return n - n % kLanes; }

void susceptibility(const SusceptibilityModel& model, std::span<const double> detuning,
                    std::span<double> re, std::span<double> im) {
  const std::size_t n = detuning.size();
  const std::size_t nv = vector_end(n);
  const __m256d g21 = _mm256_set1_pd(model.gamma21);
  const __m256d g21sq = _mm256_set1_pd(model.gamma21 * model.gamma21);
  const __m256d dc = _mm256_set1_pd(model.delta_c);
  const __m256d oc2 = _mm256_set1_pd(model.omega_c_sq);
  const __m256d alpha = _mm256_set1_pd(model.alpha);
  const __m256d one = _mm256_set1_pd(1.0);
  for (std::size_t j = 0; j < nv; j += kLanes) {
    const __m256d dp = _mm256_loadu_pd(detuning.data() + j);
    const __m256d b = _mm256_sub_pd(dc, dp);
    const __m256d inv = _mm256_div_pd(one, _mm256_fmadd_pd(b, b, g21sq));
    const __m256d oinv = _mm256_mul_pd(oc2, inv);
    const __m256d dr = _mm256_fmadd_pd(oinv, g21, one);
    const __m256d di = _mm256_fnmadd_pd(oinv, b, _mm256_sub_pd(_mm256_setzero_pd(), dp));
    const __m256d scale = _mm256_div_pd(alpha, _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di)));
    _mm256_storeu_pd(re.data() + j, _mm256_mul_pd(scale, di));
    _mm256_storeu_pd(im.data() + j, _mm256_mul_pd(scale, dr));
  }
  if (nv < n) {
    detail::scalar_table().susceptibility(model, detuning.subspan(nv), re.subspan(nv),
                                          im.subspan(nv));
  }
}

inline void sqrt_upper_pd(__m256d x, __m256d y, __m256d& u, __m256d& v) {
  const __m256d kSignMask = _mm256_set1_pd(-0.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d r = _mm256_sqrt_pd(_mm256_fmadd_pd(x, x, _mm256_mul_pd(y, y)));
  // x >= 0 branch
  const __m256d ua = _mm256_sqrt_pd(_mm256_mul_pd(half, _mm256_add_pd(r, x)));
  const __m256d va = _mm256_div_pd(y, _mm256_add_pd(ua, ua));
  // x < 0 branch
  const __m256d w = _mm256_sqrt_pd(_mm256_mul_pd(half, _mm256_sub_pd(r, x)));
  const __m256d ub = _mm256_div_pd(_mm256_andnot_pd(kSignMask, y), _mm256_add_pd(w, w));
  const __m256d vb = _mm256_or_pd(w, _mm256_and_pd(y, kSignMask));

  const __m256d nonneg = _mm256_cmp_pd(x, zero, _CMP_GE_OQ);
  u = _mm256_blendv_pd(ub, ua, nonneg);
  v = _mm256_blendv_pd(vb, va, nonneg);
  const __m256d is_zero = _mm256_cmp_pd(r, zero, _CMP_EQ_OQ);
  u = _mm256_blendv_pd(u, zero, is_zero);
  v = _mm256_blendv_pd(v, zero, is_zero);
  const __m256d flip = _mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_LT_OQ), kSignMask);
  u = _mm256_xor_pd(u, flip);
  v = _mm256_xor_pd(v, flip);
}

void sqrt_upper(std::span<const double> re, std::span<const double> im, double shift,
                std::span<double> out_re, std::span<double> out_im) {
  const std::size_t n = re.size();
  const std::size_t nv = vector_end(n);
  const __m256d sh = _mm256_set1_pd(shift);
  for (std::size_t j = 0; j < nv; j += kLanes) {
    __m256d u, v;
    sqrt_upper_pd(_mm256_add_pd(sh, _mm256_loadu_pd(re.data() + j)),
                  _mm256_loadu_pd(im.data() + j), u, v);
    _mm256_storeu_pd(out_re.data() + j, u);
    _mm256_storeu_pd(out_im.data() + j, v);
  }
  if (nv < n) {
    detail::scalar_table().sqrt_upper(re.subspan(nv), im.subspan(nv), shift, out_re.subspan(nv),
                                      out_im.subspan(nv));
  }
}

void longitudinal(std::span<const double> n_re, std::span<const double> n_im, double sin2,
                  std::span<double> out_re, std::span<double> out_im) {
  const std::size_t n = n_re.size();
  const std::size_t nv = vector_end(n);
  const __m256d s2 = _mm256_set1_pd(sin2);
  for (std::size_t j = 0; j < nv; j += kLanes) {
    const __m256d a = _mm256_loadu_pd(n_re.data() + j);
    const __m256d b = _mm256_loadu_pd(n_im.data() + j);
    const __m256d x = _mm256_sub_pd(_mm256_mul_pd(_mm256_sub_pd(a, b), _mm256_add_pd(a, b)), s2);
    const __m256d y = _mm256_mul_pd(_mm256_add_pd(a, a), b);
    __m256d u, v;
    sqrt_upper_pd(x, y, u, v);
    _mm256_storeu_pd(out_re.data() + j, u);
    _mm256_storeu_pd(out_im.data() + j, v);
  }
  if (nv < n) {
    detail::scalar_table().longitudinal(n_re.subspan(nv), n_im.subspan(nv), sin2,
                                        out_re.subspan(nv), out_im.subspan(nv));
  }
}

void layer_matrices(std::span<const double> np_re, std::span<const double> np_im, double k_d,
                    double cos_theta, const MatrixArrays& out) {
  const std::size_t n = np_re.size();
  const std::size_t nv = vector_end(n);
  const __m256d kd = _mm256_set1_pd(k_d);
  const __m256d c2 = _mm256_set1_pd(cos_theta * cos_theta);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two_ct = _mm256_set1_pd(2.0 * cos_theta);
  for (std::size_t j = 0; j < nv; j += kLanes) {
    const __m256d pr = _mm256_loadu_pd(np_re.data() + j);
    const __m256d pi = _mm256_loadu_pd(np_im.data() + j);
    const __m256d a = _mm256_mul_pd(kd, pr);
    const __m256d b = _mm256_mul_pd(kd, pi);
    const __m256d eb = avx2::exp_pd(b);
    const __m256d emb = _mm256_div_pd(one, eb);
    const __m256d ch = _mm256_mul_pd(half, _mm256_add_pd(eb, emb));
    const __m256d sh = _mm256_mul_pd(half, _mm256_sub_pd(eb, emb));
    __m256d sa, ca;
    avx2::sincos_pd(a, sa, ca);
    const __m256d cw_re = _mm256_mul_pd(ca, ch);
    const __m256d cw_im = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(sa, sh));
    const __m256d sw_re = _mm256_mul_pd(sa, ch);
    const __m256d sw_im = _mm256_mul_pd(ca, sh);

    const __m256d sq_re = _mm256_fmsub_pd(pr, pr, _mm256_mul_pd(pi, pi));
    const __m256d sq_im = _mm256_mul_pd(_mm256_add_pd(pr, pr), pi);
    const __m256d den_re = _mm256_mul_pd(two_ct, pr);
    const __m256d den_im = _mm256_mul_pd(two_ct, pi);
    const __m256d inv_den =
        _mm256_div_pd(one, _mm256_fmadd_pd(den_re, den_re, _mm256_mul_pd(den_im, den_im)));
    const __m256d gp_re = _mm256_add_pd(sq_re, c2);
    const __m256d gm_re = _mm256_sub_pd(sq_re, c2);
    const __m256d g_re = _mm256_mul_pd(_mm256_fmadd_pd(gp_re, den_re, _mm256_mul_pd(sq_im, den_im)), inv_den);
    const __m256d g_im = _mm256_mul_pd(_mm256_fmsub_pd(sq_im, den_re, _mm256_mul_pd(gp_re, den_im)), inv_den);
    const __m256d h_re = _mm256_mul_pd(_mm256_fmadd_pd(gm_re, den_re, _mm256_mul_pd(sq_im, den_im)), inv_den);
    const __m256d h_im = _mm256_mul_pd(_mm256_fmsub_pd(sq_im, den_re, _mm256_mul_pd(gm_re, den_im)), inv_den);

    const __m256d gs_re = _mm256_fmsub_pd(g_re, sw_re, _mm256_mul_pd(g_im, sw_im));
    const __m256d gs_im = _mm256_fmadd_pd(g_re, sw_im, _mm256_mul_pd(g_im, sw_re));
    const __m256d hs_re = _mm256_fmsub_pd(h_re, sw_re, _mm256_mul_pd(h_im, sw_im));
    const __m256d hs_im = _mm256_fmadd_pd(h_re, sw_im, _mm256_mul_pd(h_im, sw_re));

    _mm256_storeu_pd(out.m11_re.data() + j, _mm256_sub_pd(cw_re, gs_im));
    _mm256_storeu_pd(out.m11_im.data() + j, _mm256_add_pd(cw_im, gs_re));
    _mm256_storeu_pd(out.m22_re.data() + j, _mm256_add_pd(cw_re, gs_im));
    _mm256_storeu_pd(out.m22_im.data() + j, _mm256_sub_pd(cw_im, gs_re));
    const __m256d zero = _mm256_setzero_pd();
    _mm256_storeu_pd(out.m12_re.data() + j, _mm256_sub_pd(zero, hs_im));
    _mm256_storeu_pd(out.m12_im.data() + j, hs_re);
    _mm256_storeu_pd(out.m21_re.data() + j, hs_im);
    _mm256_storeu_pd(out.m21_im.data() + j, _mm256_sub_pd(zero, hs_re));
  }
  if (nv < n) {
    const MatrixArrays tail{out.m11_re.subspan(nv), out.m11_im.subspan(nv),
                            out.m12_re.subspan(nv), out.m12_im.subspan(nv),
                            out.m21_re.subspan(nv), out.m21_im.subspan(nv),
                            out.m22_re.subspan(nv), out.m22_im.subspan(nv)};
    detail::scalar_table().layer_matrices(np_re.subspan(nv), np_im.subspan(nv), k_d, cos_theta,
                                          tail);
  }
}

Matrix2 multiply(const Matrix2& l, const Matrix2& r) {
  using C = std::array<double, 2>;
  auto mul = [](C x, C y) { return C{x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]}; };
  auto add = [](C x, C y) { return C{x[0] + y[0], x[1] + y[1]}; };
  const C a{l.m11_re, l.m11_im}, b{l.m12_re, l.m12_im}, c{l.m21_re, l.m21_im}, d{l.m22_re, l.m22_im};
  const C e{r.m11_re, r.m11_im}, f{r.m12_re, r.m12_im}, g{r.m21_re, r.m21_im}, h{r.m22_re, r.m22_im};
  const C p = add(mul(a, e), mul(b, g));
  const C q = add(mul(a, f), mul(b, h));
  const C s = add(mul(c, e), mul(d, g));
  const C t = add(mul(c, f), mul(d, h));
  return {p[0], p[1], q[0], q[1], s[0], s[1], t[0], t[1]};
}

// Complex multiply-accumulate helpers on split re/im vectors.
inline __m256d cmul_re(__m256d ar, __m256d ai, __m256d br, __m256d bi) {
  return _mm256_fmsub_pd(ar, br, _mm256_mul_pd(ai, bi));
}
inline __m256d cmul_im(__m256d ar, __m256d ai, __m256d br, __m256d bi) {
  return _mm256_fmadd_pd(ar, bi, _mm256_mul_pd(ai, br));
}

// Four contiguous blocks are folded in parallel lanes and then combined in
// order; matrix products are associative so only rounding differs from the
// sequential reference.
Matrix2 fold(const ConstMatrixArrays& l) {
  const std::size_t n = l.m11_re.size();
  const std::size_t block = n / kLanes;
  if (block < 8) return detail::scalar_table().fold(l);

  const __m256i idx = _mm256_set_epi64x(static_cast<long long>(3 * block),
                                        static_cast<long long>(2 * block),
                                        static_cast<long long>(block), 0);
  __m256d a_re = _mm256_set1_pd(1.0), a_im = _mm256_setzero_pd();
  __m256d b_re = _mm256_setzero_pd(), b_im = _mm256_setzero_pd();
  __m256d c_re = _mm256_setzero_pd(), c_im = _mm256_setzero_pd();
  __m256d d_re = _mm256_set1_pd(1.0), d_im = _mm256_setzero_pd();
  for (std::size_t i = 0; i < block; ++i) {
    const __m256d p_re = _mm256_i64gather_pd(l.m11_re.data() + i, idx, 8);
    const __m256d p_im = _mm256_i64gather_pd(l.m11_im.data() + i, idx, 8);
    const __m256d q_re = _mm256_i64gather_pd(l.m12_re.data() + i, idx, 8);
    const __m256d q_im = _mm256_i64gather_pd(l.m12_im.data() + i, idx, 8);
    const __m256d r_re = _mm256_i64gather_pd(l.m21_re.data() + i, idx, 8);
    const __m256d r_im = _mm256_i64gather_pd(l.m21_im.data() + i, idx, 8);
    const __m256d s_re = _mm256_i64gather_pd(l.m22_re.data() + i, idx, 8);
    const __m256d s_im = _mm256_i64gather_pd(l.m22_im.data() + i, idx, 8);

    const __m256d na_re = _mm256_add_pd(cmul_re(p_re, p_im, a_re, a_im), cmul_re(q_re, q_im, c_re, c_im));
    const __m256d na_im = _mm256_add_pd(cmul_im(p_re, p_im, a_re, a_im), cmul_im(q_re, q_im, c_re, c_im));
    const __m256d nb_re = _mm256_add_pd(cmul_re(p_re, p_im, b_re, b_im), cmul_re(q_re, q_im, d_re, d_im));
    const __m256d nb_im = _mm256_add_pd(cmul_im(p_re, p_im, b_re, b_im), cmul_im(q_re, q_im, d_re, d_im));
    const __m256d nc_re = _mm256_add_pd(cmul_re(r_re, r_im, a_re, a_im), cmul_re(s_re, s_im, c_re, c_im));
    const __m256d nc_im = _mm256_add_pd(cmul_im(r_re, r_im, a_re, a_im), cmul_im(s_re, s_im, c_re, c_im));
    const __m256d nd_re = _mm256_add_pd(cmul_re(r_re, r_im, b_re, b_im), cmul_re(s_re, s_im, d_re, d_im));
    const __m256d nd_im = _mm256_add_pd(cmul_im(r_re, r_im, b_re, b_im), cmul_im(s_re, s_im, d_re, d_im));
    a_re = na_re; a_im = na_im; b_re = nb_re; b_im = nb_im;
    c_re = nc_re; c_im = nc_im; d_re = nd_re; d_im = nd_im;
  }

  alignas(32) double v[8][kLanes];
  _mm256_store_pd(v[0], a_re); _mm256_store_pd(v[1], a_im);
  _mm256_store_pd(v[2], b_re); _mm256_store_pd(v[3], b_im);
  _mm256_store_pd(v[4], c_re); _mm256_store_pd(v[5], c_im);
  _mm256_store_pd(v[6], d_re); _mm256_store_pd(v[7], d_im);

  Matrix2 total{v[0][0], v[1][0], v[2][0], v[3][0], v[4][0], v[5][0], v[6][0], v[7][0]};
  for (std::size_t k = 1; k < kLanes; ++k) {
    const Matrix2 part{v[0][k], v[1][k], v[2][k], v[3][k], v[4][k], v[5][k], v[6][k], v[7][k]};
    total = multiply(part, total);
  }
  for (std::size_t j = kLanes * block; j < n; ++j) {
    const Matrix2 layer{l.m11_re[j], l.m11_im[j], l.m12_re[j], l.m12_im[j],
                        l.m21_re[j], l.m21_im[j], l.m22_re[j], l.m22_im[j]};
    total = multiply(layer, total);
  }
  return total;
}

void phase_scan(const PhaseScanTerms& t, std::span<const double> cos_phi,
                std::span<const double> sin_phi, std::span<double> s_l, std::span<double> s_r) {
  const std::size_t n = cos_phi.size();
  const std::size_t nv = vector_end(n);
  const __m256d lm = _mm256_set1_pd(t.l_mean);
  const __m256d rm = _mm256_set1_pd(t.r_mean);
  const __m256d lc = _mm256_set1_pd(t.l_amplitude * std::cos(t.l_offset));
  const __m256d ls = _mm256_set1_pd(t.l_amplitude * std::sin(t.l_offset));
  const __m256d rc = _mm256_set1_pd(t.r_amplitude * std::cos(t.r_offset));
  const __m256d rs = _mm256_set1_pd(t.r_amplitude * std::sin(t.r_offset));
  for (std::size_t k = 0; k < nv; k += kLanes) {
    const __m256d c = _mm256_loadu_pd(cos_phi.data() + k);
    const __m256d s = _mm256_loadu_pd(sin_phi.data() + k);
    _mm256_storeu_pd(s_l.data() + k, _mm256_fnmadd_pd(s, ls, _mm256_fmadd_pd(c, lc, lm)));
    _mm256_storeu_pd(s_r.data() + k, _mm256_fnmadd_pd(s, rs, _mm256_fmadd_pd(c, rc, rm)));
  }
  if (nv < n) {
    detail::scalar_table().phase_scan(t, cos_phi.subspan(nv), sin_phi.subspan(nv),
                                      s_l.subspan(nv), s_r.subspan(nv));
  }
}

double pv_subtracted_sum(std::span<const double> f, std::span<const double> s, double x,
                         double fx, double fpx, double h) {
  const std::size_t n = f.size();
  const std::size_t nv = vector_end(n);
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vfx = _mm256_set1_pd(fx);
  const __m256d vfpx = _mm256_set1_pd(fpx);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t j = 0; j < nv; j += kLanes) {
    const __m256d ds = _mm256_sub_pd(_mm256_loadu_pd(s.data() + j), vx);
    const __m256d num = _mm256_sub_pd(_mm256_loadu_pd(f.data() + j), vfx);
    const __m256d same = _mm256_cmp_pd(ds, zero, _CMP_EQ_OQ);
    const __m256d q = _mm256_div_pd(num, _mm256_blendv_pd(ds, _mm256_set1_pd(1.0), same));
    acc = _mm256_add_pd(acc, _mm256_blendv_pd(q, vfpx, same));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t j = nv; j < n; ++j) {
    const double ds = s[j] - x;
    sum += ds == 0.0 ? fpx : (f[j] - fx) / ds;
  }
  return sum * h;
}

constexpr KernelTable kAvx2{
    &susceptibility, &sqrt_upper, &longitudinal, &layer_matrices,
    &fold,           &phase_scan, &pv_subtracted_sum,
};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2; }
}  // namespace detail

}  // namespace kkscatter::simd
