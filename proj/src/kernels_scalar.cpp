#include <algorithm>
#include <cmath>

#include "kst/kernels.hpp"

// Scalar reference kernels. The AVX2 variants mirror these operation for
// operation; equivalence tests assert bit-identical outputs.

namespace kst::kernels::scalar {

void pl_eval_batch(const double* pos, const double* val, size_t n,
                   const int32_t* seg_hint, size_t nbuckets, double lo,
                   double inv_step, const double* xs, double* out,
                   size_t count) {
  if (n == 0) {
    std::fill(out, out + count, 0.0);
    return;
  }
  if (n == 1) {
    std::fill(out, out + count, val[0]);
    return;
  }
  const double plo = pos[0];
  const double phi = pos[n - 1];
  for (size_t i = 0; i < count; ++i) {
    const double x = xs[i];
    if (x <= plo) {
      out[i] = val[0];
      continue;
    }
    if (x >= phi) {
      out[i] = val[n - 1];
      continue;
    }
    long s_lo = 0;
    long s_hi = static_cast<long>(n) - 2;
    if (seg_hint != nullptr) {
      long t = static_cast<long>((x - lo) * inv_step);
      t = std::clamp<long>(t, 0, static_cast<long>(nbuckets) - 1);
      // One bucket of padding on each side absorbs float rounding of t.
      const long tl = t > 0 ? t - 1 : 0;
      const long th = std::min<long>(t + 2, static_cast<long>(nbuckets));
      s_lo = seg_hint[tl];
      s_hi = seg_hint[th];
    }
    // Largest j with pos[j] <= x; pos[s_lo] <= x holds on entry.
    while (s_lo < s_hi) {
      const long mid = s_lo + (s_hi - s_lo + 1) / 2;
      if (pos[mid] <= x)
        s_lo = mid;
      else
        s_hi = mid - 1;
    }
    const double p0 = pos[s_lo];
    const double p1 = pos[s_lo + 1];
    const double den = p1 - p0;
    const double w = den > 0.0 ? (x - p0) / den : 0.0;
    out[i] = val[s_lo] + w * (val[s_lo + 1] - val[s_lo]);
  }
}

double max_abs_diff(const double* a, const double* b, size_t n) {
  double m = 0.0;
  for (size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const double* a, size_t n) {
  double m = 0.0;
  for (size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

void add_assign(double* acc, const double* term, size_t n) {
  for (size_t i = 0; i < n; ++i) acc[i] += term[i];
}

}  // namespace kst::kernels::scalar
