#pragma once

#include <optional>
#include <vector>

#include "kst/rational.hpp"

namespace kst {

/// The five shifted families of closed intervals covering I = [0, 1]:
///
///   Z_k(N) = [-1, (N-k)/5] ∩ Z,
///   I_{j,k}(N) = [(5j+k)/N, (5j+k+4)/N],  j in Z_k(N), k in 1..5.
///
/// Within a family the intervals have length 4/N, are pairwise disjoint
/// with gaps 1/N, the first covers 0 and the last covers 1.

inline constexpr int kFamilyCount = 5;

struct IntervalIndex {
  long j;
  int k;
  int N;
};

struct GridInterval {
  Rational left;           // l_{j,k} = (5j+k)/N
  Rational right;          // left + 4/N
  Rational left_clamped;   // l0_{j,k} = max(left, 0)
};

/// Largest j in Z_k(N).
long family_max_index(int k, int N);

/// All of Z_k(N), ascending. Rejects k outside 1..5 or N < 1.
std::vector<long> index_set(int k, int N);

bool index_valid(long j, int k, int N);

GridInterval interval(const IntervalIndex& idx);

/// Unique j with x in I_{j,k}(N), or nullopt when x falls in a gap of
/// family k. O(1) division-with-remainder arithmetic; membership at the
/// closed endpoints is decided exactly (no epsilon slack).
std::optional<long> locate(double x, int k, int N);
std::optional<long> locate(const Rational& x, int k, int N);

struct CoverTriple {
  long i, j;
  int k;
};

/// All (i, j, k) with (x, y) in I_{i,k} x I_{j,k}; at most one per family,
/// and at least three for any point of the unit square.
std::vector<CoverTriple> covering_triples(double x, double y, int N);

/// Number of families whose interval system covers the single coordinate x
/// (at least 4 for any x in I).
int coordinate_cover_count(double x, int N);

}  // namespace kst
