#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "kst/pl_curve.hpp"

namespace kst {

using F2D = std::function<double(double, double)>;

/// One superposition stage lowered to curves: five inner components and an
/// outer function. The grid engine evaluates sums of these.
struct StageTerm {
  std::array<const PLCurve*, 5> phi;
  const PLCurve* h;
};

/// Worker count for grid scans: KST_THREADS if set, else the hardware
/// concurrency. Results are independent of the partitioning (max-reduce).
int scan_threads();

/// Inclusive uniform grid over [0, 1] with `count` samples (count >= 2).
std::vector<double> unit_grid(int count);

/// sum over terms and k of h(phi_k(x) + sqrt2 * phi_k(y)).
double sum_terms_at(std::span<const StageTerm> terms, double x, double y);

/// max over the g x g inclusive grid of |f - sum_terms|.
double residual_grid_max(const F2D& f, std::span<const StageTerm> terms, int g,
                         int threads = 0);

/// max over the g x g inclusive grid of |f|.
double grid_sup(const F2D& f, int g, int threads = 0);

/// Sampled oscillation of f - sum_terms over sliding boxes of side 4/N,
/// probed 4 points per box edge.
double max_box_oscillation(const F2D& f, std::span<const StageTerm> terms,
                           int N, int threads = 0);

/// Row-major visit of the g x g grid: cb(x, y, f(x,y), sum_terms(x,y)).
void for_each_grid_point(const F2D& f, std::span<const StageTerm> terms, int g,
                         const std::function<void(double, double, double, double)>& cb);

/// out[row * xs.size() + i] = f(xs[i], ys[row]) - sum_terms(xs[i], ys[row]).
std::vector<double> residual_product_grid(const F2D& f,
                                          std::span<const StageTerm> terms,
                                          std::span<const double> xs,
                                          std::span<const double> ys,
                                          int threads = 0);

}  // namespace kst
