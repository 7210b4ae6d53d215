#include "kst/pl_function.hpp"

#include <algorithm>
#include <cmath>

#include "kst/errors.hpp"
#include "kst/kernels.hpp"

namespace kst {

// ---------------------------------------------------------------------------
// PLCurve
// ---------------------------------------------------------------------------

void PLCurve::finalize() {
  if (pos.size() != val.size()) throw Error("curve: position/value size mismatch");
  for (size_t i = 1; i < pos.size(); ++i)
    if (!(pos[i] >= pos[i - 1])) throw Error("curve: positions not ascending");

  seg_hint.clear();
  inv_step = 0.0;
  const size_t n = pos.size();
  if (n < 32 || !(pos[n - 1] > pos[0])) return;

  // Roughly one knot per bucket; queries then bisect a handful of knots.
  const size_t nb = std::min<size_t>(std::max<size_t>(n, 16), size_t{1} << 22);
  lo = pos[0];
  const double range = pos[n - 1] - lo;
  inv_step = static_cast<double>(nb) / range;
  const double step = range / static_cast<double>(nb);
  seg_hint.resize(nb + 1);
  size_t j = 0;
  for (size_t t = 0; t <= nb; ++t) {
    const double edge = lo + static_cast<double>(t) * step;
    while (j + 1 < n && pos[j + 1] <= edge) ++j;
    seg_hint[t] = static_cast<int32_t>(std::min(j, n - 2));
  }
}

double PLCurve::eval(double x) const {
  double out;
  kernels::scalar::pl_eval_batch(pos.data(), val.data(), pos.size(),
                                 seg_hint.empty() ? nullptr : seg_hint.data(),
                                 seg_hint.empty() ? 0 : seg_hint.size() - 1, lo,
                                 inv_step, &x, &out, 1);
  return out;
}

void PLCurve::eval_batch(std::span<const double> xs, std::span<double> out) const {
  if (xs.size() != out.size()) throw Error("curve: batch size mismatch");
  kernels::pl_eval_batch(pos.data(), val.data(), pos.size(),
                         seg_hint.empty() ? nullptr : seg_hint.data(),
                         seg_hint.empty() ? 0 : seg_hint.size() - 1, lo,
                         inv_step, xs.data(), out.data(), xs.size());
}

double PLCurve::max_abs_value() const {
  return kernels::max_abs(val.data(), val.size());
}

double PLCurve::max_abs_slope() const {
  double m = 0.0;
  for (size_t i = 0; i + 1 < pos.size(); ++i) {
    const double dp = pos[i + 1] - pos[i];
    const double dv = val[i + 1] - val[i];
    if (dp > 0.0) {
      m = std::max(m, std::abs(dv) / dp);
    } else if (dv != 0.0) {
      throw Error("curve: zero-width segment with a value jump");
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// PLFunction
// ---------------------------------------------------------------------------

PLFunction::PLFunction(Rational lo, Rational hi, std::vector<Breakpoint> pts)
    : lo_(std::move(lo)), hi_(std::move(hi)), pts_(std::move(pts)) {
  if (pts_.empty()) throw ConfigError("pl function: no breakpoints");
  if (lo_.cmp(hi_) > 0) throw ConfigError("pl function: empty domain");
  for (size_t i = 1; i < pts_.size(); ++i)
    if (pts_[i - 1].pos.cmp(pts_[i].pos) >= 0)
      throw ConfigError("pl function: breakpoints not strictly ascending");
  if (!(pts_.front().pos == lo_) || !(pts_.back().pos == hi_))
    throw ConfigError("pl function: breakpoints must span the domain");

  curve_.pos.reserve(pts_.size());
  curve_.val.reserve(pts_.size());
  for (const auto& p : pts_) {
    curve_.pos.push_back(p.pos.to_double());
    curve_.val.push_back(p.value.to_double());
  }
  curve_.finalize();
}

Rational PLFunction::eval_exact(const Rational& x) const {
  if (x.cmp(lo_) < 0 || x.cmp(hi_) > 0)
    throw ConfigError("pl function: argument outside domain");
  // Last breakpoint with pos <= x.
  size_t lo = 0, hi = pts_.size() - 1;
  while (lo < hi) {
    const size_t mid = lo + (hi - lo + 1) / 2;
    if (pts_[mid].pos.cmp(x) <= 0)
      lo = mid;
    else
      hi = mid - 1;
  }
  if (pts_[lo].pos == x || lo + 1 == pts_.size()) return pts_[lo].value;
  const Breakpoint& b0 = pts_[lo];
  const Breakpoint& b1 = pts_[lo + 1];
  return b0.value + (x - b0.pos) * (b1.value - b0.value) / (b1.pos - b0.pos);
}

}  // namespace kst
