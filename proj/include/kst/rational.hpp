#pragma once

#include <gmp.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace kst {

/// Arbitrary-precision rational, always held in canonical form:
/// positive denominator, gcd(|num|, den) = 1.
///
/// Values are immutable after construction and all operations are pure,
/// so concurrent reads and cross-thread transfer are safe.
class Rational {
 public:
  Rational() { mpq_init(q_); }
  Rational(long n) {  // NOLINT: implicit on purpose, mirrors integer literals
    mpq_init(q_);
    mpq_set_si(q_, n, 1);
  }
  Rational(long num, long den);

  Rational(const Rational& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rational(Rational&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  Rational& operator=(const Rational& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    if (this != &o) mpq_swap(q_, o.q_);
    return *this;
  }
  ~Rational() { mpq_clear(q_); }

  /// Parses "p/q" or "p" (base 10, optional leading '-'). Throws ConfigError
  /// on malformed text or zero denominator.
  static Rational from_string(std::string_view text);

  /// Exact value of a finite double (every finite double is dyadic).
  static Rational from_double(double x);

  /// Canonical "p/q" text, denominator always explicit ("0/1", "-3/2", ...).
  std::string str() const;

  double to_double() const { return mpq_get_d(q_); }

  int sign() const { return mpq_sgn(q_); }
  bool is_zero() const { return mpq_sgn(q_) == 0; }

  int cmp(const Rational& o) const { return mpq_cmp(q_, o.q_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.q_, b.q_) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.q_, b.q_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    Rational r;
    mpq_add(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    Rational r;
    mpq_sub(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Rational r;
    mpq_mul(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const {
    Rational r;
    mpq_neg(r.q_, q_);
    return r;
  }

  Rational& operator+=(const Rational& o) {
    mpq_add(q_, q_, o.q_);
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    mpq_sub(q_, q_, o.q_);
    return *this;
  }

  Rational abs() const {
    Rational r;
    mpq_abs(r.q_, q_);
    return r;
  }

  /// True when both numerator and denominator fit in a signed 64-bit word.
  bool fits_i64() const;
  long num_i64() const;  // valid only when fits_i64()
  long den_i64() const;

  const __mpq_struct* raw() const { return q_; }

 private:
  mpq_t q_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace kst
