#include "kst/quadext.hpp"

#include <gmp.h>

#include <ostream>

namespace kst {

int QuadExt::sign() const {
  const int sa = a_.sign();
  const int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: |a| vs sqrt(2)|b|, decided by a^2 vs 2 b^2.
  // Equality is impossible for nonzero rationals (sqrt 2 is irrational).
  const Rational a2 = a_ * a_;
  const Rational b2x2 = b_ * b_ * Rational(2);
  const int c = a2.cmp(b2x2);
  return sa > 0 ? (c > 0 ? 1 : -1) : (c > 0 ? -1 : 1);
}

double QuadExt::to_double() const {
  mpf_t fa, fb, s2;
  mpf_init2(fa, 192);
  mpf_init2(fb, 192);
  mpf_init2(s2, 192);
  mpf_set_q(fa, a_.raw());
  mpf_set_q(fb, b_.raw());
  mpf_sqrt_ui(s2, 2);
  mpf_mul(fb, fb, s2);
  mpf_add(fa, fa, fb);
  const double out = mpf_get_d(fa);
  mpf_clear(fa);
  mpf_clear(fb);
  mpf_clear(s2);
  return out;
}

std::ostream& operator<<(std::ostream& os, const QuadExt& v) {
  return os << v.a() << " + " << v.b() << "*sqrt2";
}

}  // namespace kst
