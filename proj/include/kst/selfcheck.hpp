#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kst/separators.hpp"

namespace kst {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfCheckOptions {
  uint64_t seed = 20240901;
  int n_lo = 1;
  int n_hi = 40;
  int grid = 128;           // covering sweep grid per axis
  int random_points = 2000;
  int norm_grid = 256;      // contraction / stability scans
  int trials = 20;          // stability perturbation trials
  bool inject_duplicate_plateau = false;  // negative control hook
};

/// Runtime property suites behind the `verify` CLI verb: interval covering
/// (with a brute-force oracle), separator contracts, plateau-image
/// injectivity, one-pass contraction over the builtin registry, and the
/// stability perturbation check.
std::vector<CheckResult> run_selfchecks(const SelfCheckOptions& opts);

/// Copy of `map` with every plateau moved by a random exact rational
/// amount below `margin` (clamped into [0, 1], distinctness preserved).
InnerMap perturb_plateaus(const InnerMap& map, double margin, std::mt19937_64& rng);

}  // namespace kst
