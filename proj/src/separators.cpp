#include "kst/separators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "kst/errors.hpp"
#include "kst/interval_grid.hpp"

namespace kst {

namespace {
constexpr long kProbePrime = 1009;
}

int min_resolution(double delta) {
  if (!(delta > 0.0)) throw ConfigError("min_resolution: delta must be positive");
  return static_cast<int>(std::ceil(5.0 / delta));
}

double modulus_delta(const F1D& psi, double half_epsilon, int probes) {
  if (probes < 2) throw ConfigError("modulus_delta: degenerate probe grid");
  if (!(half_epsilon > 0.0)) throw ConfigError("modulus_delta: oscillation bound must be positive");
  const long m = probes;
  std::vector<double> v(static_cast<size_t>(m + 1));
  for (long i = 0; i <= m; ++i) v[static_cast<size_t>(i)] = psi(static_cast<double>(i) / static_cast<double>(m));

  // Largest window width W (in grid steps) whose every slide keeps the
  // sampled oscillation under the bound; monotone in W, so bisect.
  auto feasible = [&](long w) {
    // window of w+1 samples; brute max-min with a monotone deque
    std::vector<size_t> qmax, qmin;
    size_t head_max = 0, head_min = 0;
    qmax.clear();
    qmin.clear();
    for (size_t i = 0; i < v.size(); ++i) {
      while (qmax.size() > head_max && v[qmax.back()] <= v[i]) qmax.pop_back();
      qmax.push_back(i);
      while (qmin.size() > head_min && v[qmin.back()] >= v[i]) qmin.pop_back();
      qmin.push_back(i);
      if (static_cast<long>(i) >= w) {
        while (qmax[head_max] + static_cast<size_t>(w) < i) ++head_max;
        while (qmin[head_min] + static_cast<size_t>(w) < i) ++head_min;
        if (v[qmax[head_max]] - v[qmin[head_min]] >= half_epsilon) return false;
      }
    }
    return true;
  };

  if (feasible(m)) return 1.0;
  long lo = 0, hi = m - 1;
  while (lo < hi) {
    const long mid = lo + (hi - lo + 1) / 2;
    if (feasible(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return static_cast<double>(std::max<long>(lo, 1)) / (2.0 * static_cast<double>(m));
}

Separator build_separator(const SeparatorSpec& spec) {
  if (!(spec.epsilon > 0.0)) throw ConfigError("separator: epsilon must be positive");
  if (spec.k < 1 || spec.k > kFamilyCount) throw ConfigError("separator: family k must be in 1..5");
  const double delta = spec.delta ? *spec.delta
                                  : modulus_delta(spec.psi, spec.epsilon / 2.0, spec.probes);
  const int n0 = min_resolution(delta);
  if (spec.N <= n0)
    throw ResolutionError("separator: N too small for this psi/epsilon (need N > " +
                          std::to_string(n0) + ", got " + std::to_string(spec.N) + ")");

  const int N = spec.N;
  const int k = spec.k;
  const long jmax = family_max_index(k, N);
  const long count = jmax + 2;
  const long denom = 4L * N;

  std::set<Rational> used(spec.forbidden.begin(), spec.forbidden.end());
  std::vector<Rational> plateaus;
  plateaus.reserve(static_cast<size_t>(count));

  const Rational one(1);
  const Rational two(2);
  for (long a = 0; a < count; ++a) {
    const long j = a - 1;
    const long base_num = 5 * j + k;
    const Rational l0 = max(Rational(base_num, N), Rational(0));
    const double psi_at = spec.psi(l0.to_double());
    long t = std::lround(psi_at * static_cast<double>(denom));
    t = std::clamp(t, 0L, denom);
    const Rational base(t, denom);

    // Deterministic probe start indexed by (j, k); consecutive offsets keep
    // first candidates distinct within and across families.
    const long start = 5 * a + k;
    bool placed = false;
    const long probe_limit = 16 * (count * 5 + static_cast<long>(used.size()) + 4);
    for (long p = 0; p < probe_limit; ++p) {
      Rational cand = base + Rational(start + p, denom * kProbePrime);
      if (cand.cmp(one) > 0) cand = two - cand;  // reflect back into [0, 1]
      if (cand.sign() < 0) cand = -cand;
      if (!(std::abs(cand.to_double() - psi_at) < spec.epsilon / 2.0))
        throw ResolutionError("separator: plateau drift exceeded epsilon/2; spec inconsistent");
      if (used.insert(cand).second) {
        plateaus.push_back(std::move(cand));
        placed = true;
        break;
      }
    }
    if (!placed) throw Error("separator: probe limit exhausted");
  }

  // Breakpoints: constant across each clipped interval, linear on gaps.
  std::vector<Breakpoint> pts;
  pts.reserve(static_cast<size_t>(2 * count));
  for (long a = 0; a < count; ++a) {
    const long j = a - 1;
    const long base_num = 5 * j + k;
    const Rational left = max(Rational(base_num, N), Rational(0));
    const Rational right = min(Rational(base_num + 4, N), Rational(1));
    pts.push_back({left, plateaus[static_cast<size_t>(a)]});
    if (right.cmp(left) > 0) pts.push_back({right, plateaus[static_cast<size_t>(a)]});
  }
  PLFunction fn(Rational(0), Rational(1), std::move(pts));
  return {std::move(fn), std::move(plateaus)};
}

// ---------------------------------------------------------------------------
// InnerMap
// ---------------------------------------------------------------------------

InnerMap::InnerMap(int N, double epsilon, std::vector<PLFunction> components,
                   std::array<std::vector<Rational>, 5> plateaus) {
  N_ = N;
  epsilon_ = epsilon;
  components_ = std::move(components);
  plateaus_ = std::move(plateaus);
  fill_float_cache();
  validate();
}

InnerMap InnerMap::from_parts_unchecked(int N, double epsilon,
                                        std::vector<PLFunction> components,
                                        std::array<std::vector<Rational>, 5> plateaus) {
  InnerMap m;
  m.N_ = N;
  m.epsilon_ = epsilon;
  m.components_ = std::move(components);
  m.plateaus_ = std::move(plateaus);
  m.fill_float_cache();
  return m;
}

void InnerMap::fill_float_cache() {
  for (int k = 0; k < 5; ++k) {
    plateaus_f_[static_cast<size_t>(k)].clear();
    plateaus_f_[static_cast<size_t>(k)].reserve(plateaus_[static_cast<size_t>(k)].size());
    for (const auto& p : plateaus_[static_cast<size_t>(k)])
      plateaus_f_[static_cast<size_t>(k)].push_back(p.to_double());
  }
}

const PLFunction& InnerMap::component(int k) const {
  if (k < 1 || k > kComponents) throw ConfigError("inner map: component index out of range");
  return components_[static_cast<size_t>(k - 1)];
}

const std::vector<Rational>& InnerMap::plateaus(int k) const {
  if (k < 1 || k > kComponents) throw ConfigError("inner map: component index out of range");
  return plateaus_[static_cast<size_t>(k - 1)];
}

const std::vector<double>& InnerMap::plateaus_f(int k) const {
  if (k < 1 || k > kComponents) throw ConfigError("inner map: component index out of range");
  return plateaus_f_[static_cast<size_t>(k - 1)];
}

const Rational& InnerMap::plateau(int k, long j) const {
  const auto& v = plateaus(k);
  const long idx = j + 1;
  if (idx < 0 || idx >= static_cast<long>(v.size()))
    throw ConfigError("inner map: plateau index out of Z_k");
  return v[static_cast<size_t>(idx)];
}

std::array<const PLCurve*, 5> InnerMap::curves() const {
  std::array<const PLCurve*, 5> out{};
  for (int k = 1; k <= 5; ++k) out[static_cast<size_t>(k - 1)] = &component(k).curve();
  return out;
}

void InnerMap::validate() const {
  if (N_ < 1) throw Error("inner map: invalid resolution");
  if (components_.size() != kComponents) throw Error("inner map: needs exactly five components");
  const Rational zero(0), one(1);
  std::set<Rational> seen;
  for (int k = 1; k <= kComponents; ++k) {
    const auto& fn = component(k);
    if (!(fn.domain_lo() == zero) || !(fn.domain_hi() == one))
      throw Error("inner map: component domain must be [0, 1]");
    for (const auto& bp : fn.breakpoints())
      if (bp.value.sign() < 0 || bp.value.cmp(one) > 0)
        throw Error("inner map: component leaves [0, 1]");
    const auto& plat = plateaus(k);
    if (static_cast<long>(plat.size()) != family_max_index(k, N_) + 2)
      throw Error("inner map: plateau table size does not match Z_k(N)");
    for (size_t a = 0; a < plat.size(); ++a) {
      const long j = static_cast<long>(a) - 1;
      const auto seg = interval({j, k, N_});
      const Rational right = min(seg.right, one);
      // Constant on the clipped interval, equal to the recorded plateau.
      if (!(fn.eval_exact(seg.left_clamped) == plat[a]) || !(fn.eval_exact(right) == plat[a]))
        throw Error("inner map: component not constant at recorded plateau");
      if (right.cmp(seg.left_clamped) > 0) {
        const Rational mid = (seg.left_clamped + right) / Rational(2);
        if (!(fn.eval_exact(mid) == plat[a]))
          throw Error("inner map: component not constant inside interval");
      }
      if (!seen.insert(plat[a]).second)
        throw Error("inner map: duplicate plateau value across families");
    }
  }
}

InnerMap build_inner_map(const std::array<F1D, 5>& psi, int N, double epsilon) {
  std::vector<PLFunction> comps;
  comps.reserve(5);
  std::array<std::vector<Rational>, 5> plateaus;
  std::vector<Rational> pool;  // accumulated plateau values of earlier components
  for (int k = 1; k <= 5; ++k) {
    SeparatorSpec spec;
    spec.psi = psi[static_cast<size_t>(k - 1)];
    spec.k = k;
    spec.N = N;
    spec.epsilon = epsilon;
    spec.forbidden = pool;
    Separator sep = build_separator(spec);
    pool.insert(pool.end(), sep.plateaus.begin(), sep.plateaus.end());
    plateaus[static_cast<size_t>(k - 1)] = std::move(sep.plateaus);
    comps.push_back(std::move(sep.fn));
  }
  return InnerMap(N, epsilon, std::move(comps), std::move(plateaus));
}

std::array<F1D, 5> identity_reference() {
  std::array<F1D, 5> out;
  for (auto& f : out) f = [](double x) { return x; };
  return out;
}

}  // namespace kst
