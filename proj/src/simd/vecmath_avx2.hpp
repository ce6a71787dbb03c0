#pragma once

// Double-precision exp and sincos for __m256d, Cephes polynomials.
// Only include from translation units compiled with -mavx2 -mfma.

#include <immintrin.h>

namespace kkscatter::simd::avx2 {

inline __m256d polevl(__m256d x, const double* coef, int degree) {
  __m256d acc = _mm256_set1_pd(coef[0]);
  for (int i = 1; i <= degree; ++i) {
    acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(coef[i]));
  }
  return acc;
}

/// exp(x) for |x| <= 708; arguments outside are clamped.
inline __m256d exp_pd(__m256d x) {
  static constexpr double kP[] = {1.26177193074810590878e-4, 3.02994407707441961300e-2,
                                  9.99999999999999999910e-1};
  static constexpr double kQ[] = {3.00198505138664455042e-6, 2.52448340349684104192e-3,
                                  2.27265548208155028766e-1, 2.00000000000000000009e0};
  const __m256d kLog2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d kC1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d kC2 = _mm256_set1_pd(1.42860682030941723212e-6);

  x = _mm256_min_pd(x, _mm256_set1_pd(708.0));
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));

  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, kLog2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, kC1, x);
  r = _mm256_fnmadd_pd(n, kC2, r);

  const __m256d rr = _mm256_mul_pd(r, r);
  const __m256d px = _mm256_mul_pd(r, polevl(rr, kP, 2));
  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(polevl(rr, kQ, 3), px));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // 2^n via the exponent field
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i bits = _mm256_cvtepi32_epi64(_mm_add_epi32(n32, _mm_set1_epi32(1023)));
  bits = _mm256_slli_epi64(bits, 52);
  return _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
}

/// sin(x) and cos(x) with Cody-Waite reduction by pi/4; accurate for |x| < 1e8.
inline void sincos_pd(__m256d x, __m256d& s, __m256d& c) {
  static constexpr double kSin[] = {1.58962301576546568060e-10, -2.50507477628578072866e-8,
                                    2.75573136213857245213e-6,  -1.98412698295895385996e-4,
                                    8.33333333332211858878e-3,  -1.66666666666666307295e-1};
  static constexpr double kCos[] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9,
                                    -2.75573141792967388112e-7, 2.48015872888517045348e-5,
                                    -1.38888888888730564116e-3, 4.16666666666665929218e-2};
  const __m256d kDp1 = _mm256_set1_pd(7.85398125648498535156e-1);
  const __m256d kDp2 = _mm256_set1_pd(3.77489470793079817668e-8);
  const __m256d kDp3 = _mm256_set1_pd(2.69515142907905952645e-15);
  const __m256d kFourOverPi = _mm256_set1_pd(1.27323954473516268615);
  const __m256d kSignMask = _mm256_set1_pd(-0.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d six = _mm256_set1_pd(6.0);
  const __m256d half = _mm256_set1_pd(0.5);

  const __m256d sign_x = _mm256_and_pd(x, kSignMask);
  const __m256d ax = _mm256_andnot_pd(kSignMask, x);

  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, kFourOverPi));
  // round odd octants up to the next even one
  const __m256d odd = _mm256_sub_pd(y, _mm256_mul_pd(two, _mm256_floor_pd(_mm256_mul_pd(y, half))));
  y = _mm256_add_pd(y, odd);
  const __m256d j = _mm256_sub_pd(
      y, _mm256_mul_pd(_mm256_set1_pd(8.0), _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.125)))));

  __m256d z = _mm256_fnmadd_pd(y, kDp1, ax);
  z = _mm256_fnmadd_pd(y, kDp2, z);
  z = _mm256_fnmadd_pd(y, kDp3, z);
  const __m256d zz = _mm256_mul_pd(z, z);

  const __m256d ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), polevl(zz, kSin, 5), z);
  __m256d pc = _mm256_fnmadd_pd(half, zz, one);
  pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), polevl(zz, kCos, 5), pc);

  const __m256d is2 = _mm256_cmp_pd(j, two, _CMP_EQ_OQ);
  const __m256d is4 = _mm256_cmp_pd(j, four, _CMP_EQ_OQ);
  const __m256d is6 = _mm256_cmp_pd(j, six, _CMP_EQ_OQ);
  const __m256d swap = _mm256_or_pd(is2, is6);
  const __m256d sin_neg = _mm256_or_pd(is4, is6);
  const __m256d cos_neg = _mm256_or_pd(is2, is4);

  __m256d sv = _mm256_blendv_pd(ps, pc, swap);
  __m256d cv = _mm256_blendv_pd(pc, ps, swap);
  sv = _mm256_xor_pd(sv, _mm256_and_pd(sin_neg, kSignMask));
  cv = _mm256_xor_pd(cv, _mm256_and_pd(cos_neg, kSignMask));
  s = _mm256_xor_pd(sv, sign_x);
  c = cv;
}

}  // namespace kkscatter::simd::avx2
