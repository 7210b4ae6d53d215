#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kst/kernels.hpp"

// AVX2 variants of the scan kernels (4 double lanes, gathered knot search).
// Lane arithmetic follows the scalar reference expression for expression,
// so outputs are bit-identical; remainders fall through to scalar.

namespace kst::kernels::avx2 {

namespace {

const __m256i kEvenDwords = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);

// 4x64-bit double mask -> 4x32-bit integer mask.
inline __m128i mask_pd_to_epi32(__m256d m) {
  const __m256i wide = _mm256_castpd_si256(m);
  return _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(wide, kEvenDwords));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return std::max(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

}  // namespace

void pl_eval_batch(const double* pos, const double* val, size_t n,
                   const int32_t* seg_hint, size_t nbuckets, double lo,
                   double inv_step, const double* xs, double* out,
                   size_t count) {
  if (n <= 1) {
    scalar::pl_eval_batch(pos, val, n, seg_hint, nbuckets, lo, inv_step, xs, out, count);
    return;
  }
  const __m256d vplo = _mm256_set1_pd(pos[0]);
  const __m256d vphi = _mm256_set1_pd(pos[n - 1]);
  const __m256d v_first = _mm256_set1_pd(val[0]);
  const __m256d v_last = _mm256_set1_pd(val[n - 1]);
  const __m256d v_lo = _mm256_set1_pd(lo);
  const __m256d v_inv = _mm256_set1_pd(inv_step);
  const __m128i one = _mm_set1_epi32(1);
  const __m128i zero = _mm_setzero_si128();
  const __m256d dzero = _mm256_setzero_pd();

  size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs + i);
    const __m256d lo_mask = _mm256_cmp_pd(x, vplo, _CMP_LE_OQ);
    const __m256d hi_mask = _mm256_cmp_pd(x, vphi, _CMP_GE_OQ);

    __m128i s_lo, s_hi;
    if (seg_hint != nullptr) {
      __m128i t = _mm256_cvttpd_epi32(_mm256_mul_pd(_mm256_sub_pd(x, v_lo), v_inv));
      t = _mm_max_epi32(t, zero);
      t = _mm_min_epi32(t, _mm_set1_epi32(static_cast<int32_t>(nbuckets) - 1));
      const __m128i tl = _mm_max_epi32(_mm_sub_epi32(t, one), zero);
      const __m128i th = _mm_min_epi32(_mm_add_epi32(t, _mm_set1_epi32(2)),
                                       _mm_set1_epi32(static_cast<int32_t>(nbuckets)));
      s_lo = _mm_i32gather_epi32(seg_hint, tl, 4);
      s_hi = _mm_i32gather_epi32(seg_hint, th, 4);
    } else {
      s_lo = zero;
      s_hi = _mm_set1_epi32(static_cast<int32_t>(n) - 2);
    }

    // Per-lane bisection for the largest j with pos[j] <= x.
    while (true) {
      const __m128i active = _mm_cmplt_epi32(s_lo, s_hi);
      if (_mm_testz_si128(active, active)) break;
      __m128i mid = _mm_sub_epi32(s_hi, s_lo);
      mid = _mm_srli_epi32(_mm_add_epi32(mid, one), 1);
      mid = _mm_add_epi32(s_lo, mid);
      const __m256d pmid = _mm256_i32gather_pd(pos, mid, 8);
      const __m128i le = mask_pd_to_epi32(_mm256_cmp_pd(pmid, x, _CMP_LE_OQ));
      const __m128i take_lo = _mm_and_si128(le, active);
      const __m128i take_hi = _mm_andnot_si128(le, active);
      s_lo = _mm_blendv_epi8(s_lo, mid, take_lo);
      s_hi = _mm_blendv_epi8(s_hi, _mm_sub_epi32(mid, one), take_hi);
    }

    const __m256d p0 = _mm256_i32gather_pd(pos, s_lo, 8);
    const __m256d p1 = _mm256_i32gather_pd(pos, _mm_add_epi32(s_lo, one), 8);
    const __m256d v0 = _mm256_i32gather_pd(val, s_lo, 8);
    const __m256d v1 = _mm256_i32gather_pd(val, _mm_add_epi32(s_lo, one), 8);
    const __m256d den = _mm256_sub_pd(p1, p0);
    const __m256d den_gt0 = _mm256_cmp_pd(den, dzero, _CMP_GT_OQ);
    const __m256d w_raw = _mm256_div_pd(_mm256_sub_pd(x, p0), den);
    const __m256d w = _mm256_and_pd(w_raw, den_gt0);
    __m256d r = _mm256_add_pd(v0, _mm256_mul_pd(w, _mm256_sub_pd(v1, v0)));
    r = _mm256_blendv_pd(r, v_last, hi_mask);
    r = _mm256_blendv_pd(r, v_first, lo_mask);
    _mm256_storeu_pd(out + i, r);
  }
  if (i < count)
    scalar::pl_eval_batch(pos, val, n, seg_hint, nbuckets, lo, inv_step, xs + i,
                          out + i, count - i);
}

double max_abs_diff(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, _mm256_and_pd(d, kAbsMask));
  }
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const double* a, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask));
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

void add_assign(double* acc, const double* term, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(term + i)));
  for (; i < n; ++i) acc[i] += term[i];
}

}  // namespace kst::kernels::avx2
