#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kst {

/// Lowered piecewise-linear curve: double knot positions (ascending) with
/// linear interpolation between knots and constant extension beyond the
/// ends. This is the representation the scan kernels evaluate; exactness
/// lives upstream in PLFunction / OuterFunction.
struct PLCurve {
  std::vector<double> pos;
  std::vector<double> val;

  // Uniform-bucket search accelerator: seg_hint[t] bounds the knot index
  // for queries in bucket t, so the per-point search bisects a short range.
  std::vector<int32_t> seg_hint;
  double lo = 0.0;
  double inv_step = 0.0;

  void finalize();  // validates ordering, builds the accelerator

  size_t size() const { return pos.size(); }

  double eval(double x) const;  // scalar one-off
  void eval_batch(std::span<const double> xs, std::span<double> out) const;

  double max_abs_value() const;
  double max_abs_slope() const;  // throws on zero-width segment with a jump
};

}  // namespace kst
