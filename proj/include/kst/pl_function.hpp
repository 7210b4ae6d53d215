#pragma once

#include <vector>

#include "kst/pl_curve.hpp"
#include "kst/rational.hpp"

namespace kst {

struct Breakpoint {
  Rational pos;
  Rational value;
};

/// Piecewise-linear function with exact rational breakpoints on a rational
/// domain [lo, hi]. Breakpoint positions are strictly ascending and the
/// first/last breakpoints sit on the domain ends. Evaluation interpolates
/// linearly between adjacent breakpoints; an exact path serves rational
/// arguments and a lowered double curve serves the scan kernels.
class PLFunction {
 public:
  PLFunction(Rational lo, Rational hi, std::vector<Breakpoint> pts);

  const Rational& domain_lo() const { return lo_; }
  const Rational& domain_hi() const { return hi_; }
  const std::vector<Breakpoint>& breakpoints() const { return pts_; }

  /// Exact evaluation; throws outside the domain.
  Rational eval_exact(const Rational& x) const;

  double eval(double x) const { return curve_.eval(x); }
  const PLCurve& curve() const { return curve_; }

 private:
  Rational lo_, hi_;
  std::vector<Breakpoint> pts_;
  PLCurve curve_;
};

}  // namespace kst
