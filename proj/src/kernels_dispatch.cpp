#include <cstdlib>
#include <string_view>

#include "kst/errors.hpp"
#include "kst/kernels.hpp"

namespace kst::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(KST_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend resolve_initial() {
  if (const char* env = std::getenv("KST_KERNEL")) {
    const std::string_view v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2") {
      if (!cpu_has_avx2()) throw ConfigError("KST_KERNEL=avx2 but AVX2 is unavailable");
      return Backend::Avx2;
    }
    if (v != "auto") throw ConfigError("KST_KERNEL must be scalar, avx2 or auto");
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

Backend& state() {
  static Backend b = resolve_initial();
  return b;
}

}  // namespace

Backend active_backend() { return state(); }

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) {
  return b == Backend::Scalar || cpu_has_avx2();
}

void set_backend(Backend b) {
  if (!backend_supported(b)) throw ConfigError("requested kernel backend is unavailable");
  state() = b;
}

void pl_eval_batch(const double* pos, const double* val, size_t n,
                   const int32_t* seg_hint, size_t nbuckets, double lo,
                   double inv_step, const double* xs, double* out,
                   size_t count) {
#if defined(KST_HAVE_AVX2)
  if (state() == Backend::Avx2) {
    avx2::pl_eval_batch(pos, val, n, seg_hint, nbuckets, lo, inv_step, xs, out, count);
    return;
  }
#endif
  scalar::pl_eval_batch(pos, val, n, seg_hint, nbuckets, lo, inv_step, xs, out, count);
}

double max_abs_diff(const double* a, const double* b, size_t n) {
#if defined(KST_HAVE_AVX2)
  if (state() == Backend::Avx2) return avx2::max_abs_diff(a, b, n);
#endif
  return scalar::max_abs_diff(a, b, n);
}

double max_abs(const double* a, size_t n) {
#if defined(KST_HAVE_AVX2)
  if (state() == Backend::Avx2) return avx2::max_abs(a, n);
#endif
  return scalar::max_abs(a, n);
}

void add_assign(double* acc, const double* term, size_t n) {
#if defined(KST_HAVE_AVX2)
  if (state() == Backend::Avx2) {
    avx2::add_assign(acc, term, n);
    return;
  }
#endif
  scalar::add_assign(acc, term, n);
}

}  // namespace kst::kernels
