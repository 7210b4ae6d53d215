#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "kst/pl_function.hpp"

namespace kst {

using F1D = std::function<double(double)>;

/// Smallest admissible resolution threshold for a continuity gap delta:
/// N must exceed ceil(5/delta) for the separator construction to keep its
/// closeness guarantee.
int min_resolution(double delta);

/// Sampled continuity gap of psi: a delta such that |psi(x) - psi(y)| stays
/// below half_epsilon whenever |x - y| < delta, estimated by scanning
/// oscillations over `probes` uniform samples and halved to hedge the
/// sampling. A function with no visible oscillation yields 1 (the domain).
double modulus_delta(const F1D& psi, double half_epsilon, int probes = 2048);

struct SeparatorSpec {
  F1D psi;                           // continuous reference I -> I
  int k = 1;                         // interval family
  int N = 0;                         // resolution, must exceed the threshold
  double epsilon = 0.25;             // closeness target
  std::vector<Rational> forbidden;   // the set G of excluded plateau values
  std::optional<double> delta;       // known continuity gap, skips the scan
  int probes = 2048;
};

struct Separator {
  PLFunction fn;
  std::vector<Rational> plateaus;  // indexed by j + 1, j in Z_k(N)
};

/// Builds a piecewise-linear function that is constant with a rational
/// value on every interval of family k, linear on the gaps, epsilon-close
/// to psi, with all plateau values pairwise distinct, inside [0, 1] and
/// avoiding the forbidden set.
///
/// Plateau scheme: round psi(l0) to denominator 4N, then separate
/// collisions (within the family, against G, against the [0,1] bounds) by
/// adding multiples of 1/(4N*1009) indexed deterministically by (j, k).
Separator build_separator(const SeparatorSpec& spec);

/// Five separators with one shared distinctness pool: component k avoids
/// every plateau value picked by components 1..k-1, so all plateau values
/// across the whole map are pairwise distinct.
class InnerMap {
 public:
  static constexpr int kComponents = 5;

  InnerMap(int N, double epsilon, std::vector<PLFunction> components,
           std::array<std::vector<Rational>, 5> plateaus);

  /// Skips invariant validation; deserialization calls validate() itself,
  /// and the verification hook uses this to plant a defect.
  static InnerMap from_parts_unchecked(int N, double epsilon,
                                       std::vector<PLFunction> components,
                                       std::array<std::vector<Rational>, 5> plateaus);

  int resolution() const { return N_; }
  double epsilon() const { return epsilon_; }

  const PLFunction& component(int k) const;                 // k in 1..5
  const std::vector<Rational>& plateaus(int k) const;       // index j + 1
  const std::vector<double>& plateaus_f(int k) const;
  const Rational& plateau(int k, long j) const;

  const PLCurve& curve(int k) const { return component(k).curve(); }
  std::array<const PLCurve*, 5> curves() const;

  /// Checks the construction invariants: each component is constant on
  /// every family interval with the recorded plateau, values stay in
  /// [0, 1], and plateaus are globally pairwise distinct. Throws on defect.
  void validate() const;

 private:
  InnerMap() = default;
  int N_ = 0;
  double epsilon_ = 0.0;
  std::vector<PLFunction> components_;
  std::array<std::vector<Rational>, 5> plateaus_;
  std::array<std::vector<double>, 5> plateaus_f_;
  void fill_float_cache();
};

/// Applies the separator construction to psi_1..psi_5 in order, feeding the
/// accumulated plateau set of earlier components into each later one.
InnerMap build_inner_map(const std::array<F1D, 5>& psi, int N, double epsilon);

/// Identity reference map in every slot (the default for the solver).
std::array<F1D, 5> identity_reference();

}  // namespace kst
