#pragma once

#include <compare>
#include <iosfwd>

#include "kst/rational.hpp"

namespace kst {

/// Nearest double to sqrt(2).
inline constexpr double kSqrt2 = 1.4142135623730950488016887242097;

/// Exact element a + b*sqrt(2) of the quadratic field Q(sqrt 2).
///
/// The representation is unique: a + b*sqrt(2) = a' + b'*sqrt(2) forces
/// a = a' and b = b' because sqrt(2) is irrational. Signs, and hence the
/// ordering of real values, are computed exactly — plateau-image
/// distinctness is certified rather than floated.
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  /// Exact sign of the real value a + b*sqrt(2), in {-1, 0, +1}.
  /// Case split on the component signs; when they oppose, compare a^2
  /// against 2 b^2. Terminating and exact, no interval refinement.
  int sign() const;

  /// Ordering of real values via sign(*this - o); a strict total order.
  int cmp(const QuadExt& o) const { return (*this - o).sign(); }

  friend bool operator==(const QuadExt& u, const QuadExt& v) {
    return u.a_ == v.a_ && u.b_ == v.b_;  // uniqueness of representation
  }
  friend std::strong_ordering operator<=>(const QuadExt& u, const QuadExt& v) {
    const int c = u.cmp(v);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend QuadExt operator+(const QuadExt& u, const QuadExt& v) {
    return {u.a_ + v.a_, u.b_ + v.b_};
  }
  friend QuadExt operator-(const QuadExt& u, const QuadExt& v) {
    return {u.a_ - v.a_, u.b_ - v.b_};
  }
  QuadExt operator-() const { return {-a_, -b_}; }

  /// Nearest-double embedding, evaluated through 192-bit intermediates so
  /// the error stays within 1-2 ulp of the true value even under
  /// cancellation (documented bound: <= 4 ulp for |a|, |b| <= 1e6).
  double to_double() const;

 private:
  Rational a_, b_;
};

std::ostream& operator<<(std::ostream& os, const QuadExt& v);

}  // namespace kst
