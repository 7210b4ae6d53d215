#include "kst/superposition.hpp"

#include <algorithm>
#include <cmath>

#include "kst/errors.hpp"
#include "kst/interval_grid.hpp"
#include "kst/kernels.hpp"

namespace kst {

namespace {

void check_domain(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
    throw ConfigError("superposition: point outside the unit square");
}

}  // namespace

std::shared_ptr<const PlateauStore> make_plateau_store(const InnerMap& phi) {
  auto store = std::make_shared<PlateauStore>();
  store->N = phi.resolution();
  for (int k = 1; k <= 5; ++k) {
    store->values[static_cast<size_t>(k - 1)] = phi.plateaus(k);
    store->values_f[static_cast<size_t>(k - 1)] = phi.plateaus_f(k);
    auto& corners = store->corners_f[static_cast<size_t>(k - 1)];
    const long jmax = family_max_index(k, phi.resolution());
    corners.reserve(static_cast<size_t>(jmax + 2));
    for (long j = -1; j <= jmax; ++j) {
      const Rational l0 = max(Rational(5 * j + k, phi.resolution()), Rational(0));
      corners.push_back(l0.to_double());
    }
  }
  return store;
}

SupNormEstimate sup_norm(const TargetFunction& f, int grid, int threads) {
  SupNormEstimate est;
  est.value = grid_sup(f.f, grid, threads);
  est.grid = grid;
  if (f.lipschitz) {
    const double reach = kSqrt2 / 2.0 / static_cast<double>(grid - 1);
    est.certified_bound = est.value + *f.lipschitz * reach;
  }
  return est;
}

// ---------------------------------------------------------------------------
// PlateauImageTable
// ---------------------------------------------------------------------------

PlateauImageTable::PlateauImageTable(std::shared_ptr<const PlateauStore> store,
                                     std::vector<Entry> sorted_entries, bool verify)
    : store_(std::move(store)), entries_(std::move(sorted_entries)) {
  if (!verify) return;
  for (size_t idx = 1; idx < entries_.size(); ++idx) {
    const Entry& a = entries_[idx - 1];
    const Entry& b = entries_[idx];
    if (a.pos < b.pos) continue;
    const QuadExt ea = exact(idx - 1);
    const QuadExt eb = exact(idx);
    const int c = ea.cmp(eb);
    if (c > 0) throw Error("plateau image table: entries out of exact order");
    if (c == 0)
      throw InjectivityError(
          "plateau images collide: (i=" + std::to_string(a.i) + ",j=" + std::to_string(a.j) +
          ",k=" + std::to_string(a.k) + ") and (i=" + std::to_string(b.i) + ",j=" +
          std::to_string(b.j) + ",k=" + std::to_string(b.k) + ")");
  }
}

QuadExt PlateauImageTable::exact(size_t idx) const {
  const Entry& e = entries_[idx];
  const auto& vals = store_->values[static_cast<size_t>(e.k - 1)];
  return {vals[static_cast<size_t>(e.i + 1)], vals[static_cast<size_t>(e.j + 1)]};
}

PlateauImageTable plateau_images(const InnerMap& phi) {
  auto store = make_plateau_store(phi);
  size_t total = 0;
  for (int k = 0; k < 5; ++k) total += store->values_f[static_cast<size_t>(k)].size() *
                                       store->values_f[static_cast<size_t>(k)].size();
  std::vector<PlateauImageTable::Entry> entries;
  entries.reserve(total);
  for (int k = 1; k <= 5; ++k) {
    const auto& vf = store->values_f[static_cast<size_t>(k - 1)];
    const int32_t m = static_cast<int32_t>(vf.size());
    for (int32_t ia = 0; ia < m; ++ia) {
      const double pfi = vf[static_cast<size_t>(ia)];
      for (int32_t ja = 0; ja < m; ++ja) {
        // Same rounding as the evaluation path: pfi + (sqrt2 * pfj).
        const double pos = pfi + kSqrt2 * vf[static_cast<size_t>(ja)];
        entries.push_back({pos, ia - 1, ja - 1, k});
      }
    }
  }
  const auto& store_ref = *store;
  std::sort(entries.begin(), entries.end(),
            [&store_ref](const PlateauImageTable::Entry& a, const PlateauImageTable::Entry& b) {
              if (a.pos != b.pos) return a.pos < b.pos;
              const auto& va = store_ref.values[static_cast<size_t>(a.k - 1)];
              const auto& vb = store_ref.values[static_cast<size_t>(b.k - 1)];
              const QuadExt ea(va[static_cast<size_t>(a.i + 1)], va[static_cast<size_t>(a.j + 1)]);
              const QuadExt eb(vb[static_cast<size_t>(b.i + 1)], vb[static_cast<size_t>(b.j + 1)]);
              const int c = ea.cmp(eb);
              if (c != 0) return c < 0;
              // Total order even for (defective) duplicates so the verify
              // pass can report them after sorting.
              return std::tie(a.k, a.i, a.j) < std::tie(b.k, b.i, b.j);
            });
  return PlateauImageTable(std::move(store), std::move(entries), /*verify=*/true);
}

// ---------------------------------------------------------------------------
// OuterFunction
// ---------------------------------------------------------------------------

OuterFunction::OuterFunction(std::vector<ExactKnot> knots) : explicit_(std::move(knots)) {
  if (explicit_.empty()) throw ConfigError("outer function: no knots");
  for (size_t i = 1; i < explicit_.size(); ++i)
    if (explicit_[i - 1].pos.cmp(explicit_[i].pos) >= 0)
      throw ConfigError("outer function: knot positions not strictly ascending");
  curve_.pos.reserve(explicit_.size());
  curve_.val.reserve(explicit_.size());
  for (const auto& kn : explicit_) {
    curve_.pos.push_back(kn.pos.a().to_double() + kSqrt2 * kn.pos.b().to_double());
    curve_.val.push_back(kn.value);
  }
  curve_.finalize();
  norm_ = curve_.max_abs_value();
}

OuterFunction::OuterFunction(PlateauImageTable table, std::vector<double> values)
    : table_(std::move(table)) {
  if (values.size() != table_->size())
    throw Error("outer function: value count does not match knot table");
  curve_.pos.reserve(values.size());
  for (const auto& e : table_->entries()) curve_.pos.push_back(e.pos);
  curve_.val = std::move(values);
  curve_.finalize();
  norm_ = curve_.max_abs_value();
}

QuadExt OuterFunction::exact_position(size_t idx) const {
  if (table_) return table_->exact(idx);
  return explicit_[idx].pos;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

double inner_combined(const InnerMap& phi, int k, double x, double y) {
  check_domain(x, y);
  const PLCurve& c = phi.component(k).curve();
  return c.eval(x) + kSqrt2 * c.eval(y);
}

OuterBuild build_outer_unchecked(const F2D& f, PlateauImageTable table, int threads) {
  const auto& store = *table.store();
  // Residual values on the five corner product grids, then scattered into
  // knot (table) order.
  std::array<std::vector<double>, 5> grids;
  double corner_abs_max = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto& corners = store.corners_f[static_cast<size_t>(k)];
    grids[static_cast<size_t>(k)] = residual_product_grid(f, {}, corners, corners, threads);
    corner_abs_max = std::max(
        corner_abs_max,
        kernels::max_abs(grids[static_cast<size_t>(k)].data(), grids[static_cast<size_t>(k)].size()));
  }
  std::vector<double> values(table.size());
  for (size_t idx = 0; idx < table.size(); ++idx) {
    const auto& e = table.entry(idx);
    const size_t m = store.corners_f[static_cast<size_t>(e.k - 1)].size();
    const double fv =
        grids[static_cast<size_t>(e.k - 1)][static_cast<size_t>(e.j + 1) * m +
                                            static_cast<size_t>(e.i + 1)];
    values[idx] = fv / 3.0;
  }
  return {OuterFunction(std::move(table), std::move(values)), corner_abs_max};
}

OuterFunction build_outer(const TargetFunction& f, const InnerMap& phi,
                          const SupNormEstimate& norm_f) {
  OuterBuild b = build_outer_unchecked(f.f, plateau_images(phi));
  const double effective = norm_f.certified_bound.value_or(norm_f.value);
  if (3.0 * b.h.norm() > effective * (1.0 + 1e-12))
    throw ConfigError("outer: ||h|| exceeds a third of the norm estimate; estimate too small");
  return std::move(b.h);
}

StageTerm stage_term(const InnerMap& phi, const OuterFunction& h) {
  StageTerm t{};
  t.phi = phi.curves();
  t.h = &h.curve();
  return t;
}

double superpose_eval(const InnerMap& phi, const OuterFunction& h, double x, double y) {
  check_domain(x, y);
  const StageTerm t = stage_term(phi, h);
  return sum_terms_at({&t, 1}, x, y);
}

SupNormEstimate residual_norm(const TargetFunction& f, const InnerMap& phi,
                              const OuterFunction& h, int grid) {
  const StageTerm t = stage_term(phi, h);
  SupNormEstimate est;
  est.value = residual_grid_max(f.f, {&t, 1}, grid);
  est.grid = grid;
  return est;
}

double stability_margin(const TargetFunction& f, const InnerMap& psi,
                        const OuterFunction& h, int grid) {
  const double norm_f = grid_sup(f.f, grid);
  if (!(norm_f > 0.0))
    throw ConfigError("stability_margin: defined only for nonzero f");
  const StageTerm t = stage_term(psi, h);
  const double res = residual_grid_max(f.f, {&t, 1}, grid);
  const double bound = 6.0 / 7.0 * norm_f;
  if (!(res < bound))
    throw ConfigError("stability_margin: psi is not a passing map for f");
  const double eps = (bound - res) / 5.0;
  const double span = 1.0 + kSqrt2;
  const double slope = h.curve().max_abs_slope();
  const double delta = slope > 0.0 ? std::min(eps / slope, span) : span;
  return delta / 3.0;
}

}  // namespace kst
