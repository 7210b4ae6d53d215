#include "kst/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "kst/errors.hpp"
#include "kst/interval_grid.hpp"
#include "kst/solver.hpp"
#include "kst/targets.hpp"

namespace kst {

namespace {

// Brute-force covering oracle: scan every interval of the family with exact
// rational membership, independent of locate()'s division arithmetic.
std::optional<long> locate_oracle(double x, int k, int N) {
  const Rational xr = Rational::from_double(x);
  std::optional<long> hit;
  for (long j : index_set(k, N)) {
    const GridInterval seg = interval({j, k, N});
    if (xr.cmp(seg.left) >= 0 && xr.cmp(seg.right) <= 0) {
      if (hit) return std::nullopt;  // overlap would be a geometry bug
      hit = j;
    }
  }
  return hit;
}

CheckResult check_covering(const SelfCheckOptions& opts, std::mt19937_64& rng) {
  CheckResult res{"covering", true, ""};
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  long points = 0;
  for (int N = opts.n_lo; N <= opts.n_hi && res.passed; ++N) {
    const auto xs = unit_grid(opts.grid);
    for (double x : xs) {
      if (coordinate_cover_count(x, N) < 4) {
        res.passed = false;
        res.detail = "coordinate " + std::to_string(x) + " covered by <4 families at N=" +
                     std::to_string(N);
        break;
      }
    }
    for (size_t a = 0; a < xs.size() && res.passed; ++a)
      for (size_t b = 0; b < xs.size(); ++b) {
        if (covering_triples(xs[a], xs[b], N).size() < 3) {
          res.passed = false;
          res.detail = "grid point covered by <3 families at N=" + std::to_string(N);
          break;
        }
        ++points;
      }
    for (int r = 0; r < opts.random_points && res.passed; ++r) {
      const double x = uni(rng), y = uni(rng);
      if (covering_triples(x, y, N).size() < 3) {
        res.passed = false;
        res.detail = "random point covered by <3 families at N=" + std::to_string(N);
      }
      ++points;
    }
  }
  // locate() against the brute-force oracle on random coordinates.
  std::uniform_int_distribution<int> npick(opts.n_lo, opts.n_hi);
  std::uniform_real_distribution<double> uni01(0.0, 1.0);
  for (int r = 0; r < 200 && res.passed; ++r) {
    const int N = npick(rng);
    const double x = r % 7 == 0 ? (r % 2 ? 1.0 : 0.0) : uni01(rng);
    for (int k = 1; k <= 5; ++k) {
      if (locate(x, k, N) != locate_oracle(x, k, N)) {
        res.passed = false;
        res.detail = "locate disagrees with the interval-scan oracle";
        break;
      }
    }
  }
  if (res.passed)
    res.detail = "N in " + std::to_string(opts.n_lo) + ".." + std::to_string(opts.n_hi) + ", " +
                 std::to_string(points) + " points, oracle agreement";
  return res;
}

double map_psi_distance(const InnerMap& m, const std::array<F1D, 5>& psi, int samples) {
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const PLCurve& c = m.component(k).curve();
    for (int i = 0; i < samples; ++i) {
      const double x = static_cast<double>(i) / (samples - 1);
      worst = std::max(worst, std::abs(c.eval(x) - psi[static_cast<size_t>(k - 1)](x)));
    }
  }
  return worst;
}

CheckResult check_separators(const SelfCheckOptions&) {
  CheckResult res{"separator-contract", true, ""};
  try {
    const auto identity = identity_reference();
    const InnerMap a = build_inner_map(identity, 100, 0.3);
    if (map_psi_distance(a, identity, 10000) >= 0.3) {
      res.passed = false;
      res.detail = "identity separator misses the epsilon bound";
      return res;
    }
    std::array<F1D, 5> half;
    for (auto& f : half) f = [](double) { return 0.5; };
    const InnerMap b = build_inner_map(half, 30, 0.2);
    if (map_psi_distance(b, half, 10000) >= 0.2) {
      res.passed = false;
      res.detail = "constant separator misses the epsilon bound";
      return res;
    }
    // Below the admissibility floor the construction must refuse.
    bool rejected = false;
    try {
      build_inner_map(identity, 10, 0.3);
    } catch (const ResolutionError&) {
      rejected = true;
    }
    if (!rejected) {
      res.passed = false;
      res.detail = "N below the separator floor was not rejected";
      return res;
    }
    res.detail = "identity@N=100 and const@N=30 pass; N=10 rejected as too small";
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = e.what();
  }
  return res;
}

CheckResult check_injectivity(const SelfCheckOptions& opts) {
  CheckResult res{"plateau-injectivity", true, ""};
  try {
    const InnerMap a = build_inner_map(identity_reference(), 100, 0.3);
    const PlateauImageTable table = plateau_images(a);
    size_t expect = 0;
    for (int k = 1; k <= 5; ++k) {
      const size_t zk = a.plateaus(k).size();
      expect += zk * zk;
    }
    if (table.size() != expect) {
      res.passed = false;
      res.detail = "table size mismatch";
      return res;
    }
    if (opts.inject_duplicate_plateau) {
      // Negative control: plant a duplicate plateau and demand detection.
      std::vector<PLFunction> comps;
      for (int k = 1; k <= 5; ++k) comps.push_back(a.component(k));
      std::array<std::vector<Rational>, 5> plats;
      for (int k = 1; k <= 5; ++k) plats[static_cast<size_t>(k - 1)] = a.plateaus(k);
      plats[2][5] = plats[0][3];
      const InnerMap tampered = InnerMap::from_parts_unchecked(
          a.resolution(), a.epsilon(), std::move(comps), std::move(plats));
      try {
        plateau_images(tampered);
        res.passed = false;
        res.detail = "planted duplicate plateau went UNDETECTED";
      } catch (const InjectivityError&) {
        res.passed = false;  // detection fired; the run still reports failure
        res.detail = "planted duplicate plateau detected (expected failure)";
      }
      return res;
    }
    res.detail = std::to_string(table.size()) + " images, zero collisions";
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = e.what();
  }
  return res;
}

CheckResult check_contraction(const SelfCheckOptions& opts) {
  CheckResult res{"one-pass-contraction", true, ""};
  std::ostringstream detail;
  for (const auto& target : builtin_targets()) {
    try {
      SolveOptions so;
      so.max_stages = 1;
      so.target_residual = 0.0;
      so.norm_grid = opts.norm_grid;
      const RunResult r = run(target, so);
      const auto& row = r.report.rows.at(0);
      if (!(row.ratio < 6.0 / 7.0)) {
        res.passed = false;
        res.detail = target.name + ": ratio " + std::to_string(row.ratio) + " >= 6/7";
        return res;
      }
      if (row.h_norm > row.res_before / 3.0 + 1e-9) {
        res.passed = false;
        res.detail = target.name + ": ||h|| exceeds residual/3";
        return res;
      }
      detail << target.name << "=" << row.ratio << " ";
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail = target.name + ": " + e.what();
      return res;
    }
  }
  res.detail = "ratios: " + detail.str();
  return res;
}

CheckResult check_stability(const SelfCheckOptions& opts, std::mt19937_64& rng) {
  CheckResult res{"stability-margin", true, ""};
  try {
    const TargetFunction target = make_target("xy");
    SolveOptions so;
    so.max_stages = 1;
    so.target_residual = 0.0;
    so.norm_grid = opts.norm_grid;
    const RunResult r = run(target, so);
    const Stage& st = r.rep.stages.at(0);
    const double margin = stability_margin(target, *st.phi, *st.h, opts.norm_grid);
    if (!(margin > 0.0)) {
      res.passed = false;
      res.detail = "margin not positive";
      return res;
    }
    const double bound = 6.0 / 7.0 * grid_sup(target.f, opts.norm_grid);
    for (int t = 0; t < opts.trials; ++t) {
      const InnerMap moved = perturb_plateaus(*st.phi, margin, rng);
      const StageTerm term = stage_term(moved, *st.h);
      const double resid = residual_grid_max(target.f, {&term, 1}, opts.norm_grid);
      if (!(resid < bound)) {
        res.passed = false;
        res.detail = "perturbation below the margin broke the 6/7 bound (trial " +
                     std::to_string(t) + ")";
        return res;
      }
    }
    res.detail = std::to_string(opts.trials) + "/" + std::to_string(opts.trials) +
                 " perturbations at margin " + std::to_string(margin) + " stay passing";
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = e.what();
  }
  return res;
}

}  // namespace

InnerMap perturb_plateaus(const InnerMap& map, double margin, std::mt19937_64& rng) {
  const long den = 1L << 52;
  const long amp = std::max<long>(0, std::llround(margin * static_cast<double>(den)) - 1);
  std::uniform_int_distribution<long> pick(-amp, amp);
  const int N = map.resolution();
  const Rational zero(0), one(1);

  std::array<std::vector<Rational>, 5> plats;
  std::set<Rational> used;
  for (int k = 1; k <= 5; ++k) {
    const auto& old_plats = map.plateaus(k);
    auto& out = plats[static_cast<size_t>(k - 1)];
    out.reserve(old_plats.size());
    for (const auto& p : old_plats) {
      Rational cand = p;
      for (int attempt = 0; attempt < 64; ++attempt) {
        Rational c = p + Rational(pick(rng), den);
        if (c.cmp(zero) < 0 || c.cmp(one) > 0) continue;
        if (used.count(c)) continue;
        cand = std::move(c);
        break;
      }
      if (used.count(cand)) cand = p;  // fall back to the original value
      used.insert(cand);
      out.push_back(std::move(cand));
    }
  }

  // Rebuild the standard breakpoint layout with the moved plateaus.
  std::vector<PLFunction> comps;
  comps.reserve(5);
  for (int k = 1; k <= 5; ++k) {
    const auto& plat = plats[static_cast<size_t>(k - 1)];
    std::vector<Breakpoint> pts;
    pts.reserve(plat.size() * 2);
    for (size_t a = 0; a < plat.size(); ++a) {
      const long j = static_cast<long>(a) - 1;
      const Rational left = max(Rational(5 * j + k, N), zero);
      const Rational right = min(Rational(5 * j + k + 4, N), one);
      pts.push_back({left, plat[a]});
      if (right.cmp(left) > 0) pts.push_back({right, plat[a]});
    }
    comps.emplace_back(zero, one, std::move(pts));
  }
  InnerMap out = InnerMap::from_parts_unchecked(N, map.epsilon(), std::move(comps), std::move(plats));
  out.validate();
  return out;
}

std::vector<CheckResult> run_selfchecks(const SelfCheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::vector<CheckResult> out;
  out.push_back(check_covering(opts, rng));
  out.push_back(check_separators(opts));
  out.push_back(check_injectivity(opts));
  out.push_back(check_contraction(opts));
  out.push_back(check_stability(opts, rng));
  return out;
}

}  // namespace kst
