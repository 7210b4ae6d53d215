#pragma once

#include <cstddef>
#include <cstdint>

namespace kst::kernels {

enum class Backend { Scalar, Avx2 };

/// Backend in use. Resolved once: the KST_KERNEL env var ("scalar"/"avx2")
/// wins, otherwise runtime CPU detection picks the widest compiled-in path.
Backend active_backend();
const char* backend_name(Backend b);
bool backend_supported(Backend b);
void set_backend(Backend b);  // throws ConfigError if unsupported

/// out[i] = piecewise-linear interpolation of (pos, val) at xs[i], with
/// constant extension outside [pos[0], pos[n-1]]. seg_hint (optional, with
/// nbuckets/lo/inv_step) narrows the knot search; pass nullptr to bisect
/// the full array. Scalar and SIMD backends produce bit-identical results.
void pl_eval_batch(const double* pos, const double* val, size_t n,
                   const int32_t* seg_hint, size_t nbuckets, double lo,
                   double inv_step, const double* xs, double* out,
                   size_t count);

double max_abs_diff(const double* a, const double* b, size_t n);
double max_abs(const double* a, size_t n);
void add_assign(double* acc, const double* term, size_t n);

// Scalar reference implementations (always available; the dispatch table
// falls back to these and the equivalence tests pin SIMD against them).
namespace scalar {
void pl_eval_batch(const double* pos, const double* val, size_t n,
                   const int32_t* seg_hint, size_t nbuckets, double lo,
                   double inv_step, const double* xs, double* out,
                   size_t count);
double max_abs_diff(const double* a, const double* b, size_t n);
double max_abs(const double* a, size_t n);
void add_assign(double* acc, const double* term, size_t n);
}  // namespace scalar

#if defined(KST_HAVE_AVX2)
namespace avx2 {
void pl_eval_batch(const double* pos, const double* val, size_t n,
                   const int32_t* seg_hint, size_t nbuckets, double lo,
                   double inv_step, const double* xs, double* out,
                   size_t count);
double max_abs_diff(const double* a, const double* b, size_t n);
double max_abs(const double* a, size_t n);
void add_assign(double* acc, const double* term, size_t n);
}  // namespace avx2
#endif

}  // namespace kst::kernels
