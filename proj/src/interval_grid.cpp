#include "kst/interval_grid.hpp"

#include <cmath>

#include "kst/errors.hpp"

namespace kst {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void check_family(int k, int N) {
  if (k < 1 || k > kFamilyCount) throw ConfigError("interval family index k must be in 1..5");
  if (N < 1) throw ConfigError("grid resolution N must be positive");
}

// Exact sign of x*N - a for finite x in [0, 1], integer a, N >= 1.
// Decomposes x into its 53-bit mantissa so the comparison is integral.
int cmp_scaled(double x, long N, long a) {
  if (x == 0.0) return a > 0 ? -1 : (a < 0 ? 1 : 0);
  int e;
  const double fr = std::frexp(x, &e);
  const long m = static_cast<long>(std::ldexp(fr, 53));  // x = m * 2^(e-53)
  const int s = e - 53;                                  // s <= -52 for x <= 1
  const __int128 lhs = static_cast<__int128>(m) * N;     // |lhs| < 2^67
  if (s <= -68) {
    // 0 < x*N < 1: sign against the integer a is immediate.
    return a >= 1 ? -1 : 1;
  }
  const __int128 rhs = static_cast<__int128>(a) << (-s);  // -s <= 67
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

}  // namespace

long family_max_index(int k, int N) {
  check_family(k, N);
  return floor_div(static_cast<long>(N) - k, 5);
}

std::vector<long> index_set(int k, int N) {
  const long jmax = family_max_index(k, N);
  std::vector<long> out;
  out.reserve(static_cast<size_t>(jmax + 2));
  for (long j = -1; j <= jmax; ++j) out.push_back(j);
  return out;
}

bool index_valid(long j, int k, int N) {
  if (k < 1 || k > kFamilyCount || N < 1) return false;
  return j >= -1 && j <= floor_div(static_cast<long>(N) - k, 5);
}

GridInterval interval(const IntervalIndex& idx) {
  if (!index_valid(idx.j, idx.k, idx.N))
    throw ConfigError("interval index j out of Z_k(N)");
  const long base = 5 * idx.j + idx.k;
  Rational left(base, idx.N);
  Rational right(base + 4, idx.N);
  Rational clamped = max(left, Rational(0));
  return {std::move(left), std::move(right), std::move(clamped)};
}

std::optional<long> locate(double x, int k, int N) {
  check_family(k, N);
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("locate: x outside [0, 1]");
  // Membership x in I_{j,k}(N) is 5j+k <= N*x <= 5j+k+4. The float estimate
  // of j is within one of the true index; the exact comparator settles it.
  const long jmax = family_max_index(k, N);
  const long guess = static_cast<long>(std::floor((x * N - k) / 5.0));
  for (long j = guess - 1; j <= guess + 1; ++j) {
    if (j < -1 || j > jmax) continue;
    const long base = 5 * j + k;
    if (cmp_scaled(x, N, base) >= 0 && cmp_scaled(x, N, base + 4) <= 0) return j;
  }
  return std::nullopt;
}

std::optional<long> locate(const Rational& x, int k, int N) {
  check_family(k, N);
  if (x.sign() < 0 || x.cmp(Rational(1)) > 0) throw ConfigError("locate: x outside [0, 1]");
  const long jmax = family_max_index(k, N);
  const long guess = static_cast<long>(std::floor((x.to_double() * N - k) / 5.0));
  for (long j = guess - 1; j <= guess + 1; ++j) {
    if (j < -1 || j > jmax) continue;
    const long base = 5 * j + k;
    // x >= base/N and x <= (base+4)/N, exactly.
    if (x.fits_i64()) {
      const __int128 lhs = static_cast<__int128>(x.num_i64()) * N;
      const __int128 lo = static_cast<__int128>(base) * x.den_i64();
      const __int128 hi = static_cast<__int128>(base + 4) * x.den_i64();
      if (lhs >= lo && lhs <= hi) return j;
    } else {
      if (x.cmp(Rational(base, N)) >= 0 && x.cmp(Rational(base + 4, N)) <= 0) return j;
    }
  }
  return std::nullopt;
}

std::vector<CoverTriple> covering_triples(double x, double y, int N) {
  std::vector<CoverTriple> out;
  out.reserve(kFamilyCount);
  for (int k = 1; k <= kFamilyCount; ++k) {
    const auto i = locate(x, k, N);
    if (!i) continue;
    const auto j = locate(y, k, N);
    if (!j) continue;
    out.push_back({*i, *j, k});
  }
  return out;
}

int coordinate_cover_count(double x, int N) {
  int covered = 0;
  for (int k = 1; k <= kFamilyCount; ++k)
    if (locate(x, k, N)) ++covered;
  return covered;
}

}  // namespace kst
