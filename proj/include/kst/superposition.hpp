#pragma once

#include <memory>
#include <optional>
#include <string>

#include "kst/quadext.hpp"
#include "kst/scan.hpp"
#include "kst/separators.hpp"

namespace kst {

struct TargetFunction {
  F2D f;
  std::string name;
  std::optional<double> lipschitz;  // enables a certified sup-norm bound
};

struct SupNormEstimate {
  double value = 0.0;  // max |f| over the sampling grid
  int grid = 0;
  std::optional<double> certified_bound;  // value + L * max grid distance
};

/// Grid estimate of ||f|| over the g x g inclusive grid, with a certified
/// upper bound when the target carries a Lipschitz constant.
SupNormEstimate sup_norm(const TargetFunction& f, int grid = 512, int threads = 0);

/// Exact snapshot of an inner map's plateau values (shared by the image
/// table and outer functions built from it).
struct PlateauStore {
  int N = 0;
  std::array<std::vector<Rational>, 5> values;    // index j + 1
  std::array<std::vector<double>, 5> values_f;
  std::array<std::vector<double>, 5> corners_f;   // l0_{j,k} as double
};

std::shared_ptr<const PlateauStore> make_plateau_store(const InnerMap& phi);

/// All plateau images phi_k(I_{i,k}) + sqrt2 * phi_k(I_{j,k}) over every
/// (i, j, k), sorted ascending by exact Q(sqrt2) order. Injectivity is
/// certified exactly; a collision throws InjectivityError, which signals a
/// defective separator construction.
class PlateauImageTable {
 public:
  struct Entry {
    double pos;  // float key; exact order resolves double ties
    int32_t i, j;
    int32_t k;
  };

  PlateauImageTable(std::shared_ptr<const PlateauStore> store,
                    std::vector<Entry> sorted_entries, bool verify);

  size_t size() const { return entries_.size(); }
  const Entry& entry(size_t idx) const { return entries_[idx]; }
  const std::vector<Entry>& entries() const { return entries_; }
  QuadExt exact(size_t idx) const;
  const std::shared_ptr<const PlateauStore>& store() const { return store_; }

 private:
  std::shared_ptr<const PlateauStore> store_;
  std::vector<Entry> entries_;
};

PlateauImageTable plateau_images(const InnerMap& phi);

/// Piecewise-linear outer function on [0, 1 + sqrt2]: knots sit at exact
/// Q(sqrt2) positions (strictly ascending), evaluation interpolates between
/// knots keyed by doubles and extends constantly beyond the hull.
class OuterFunction {
 public:
  struct ExactKnot {
    QuadExt pos;
    double value;
  };

  /// Hand-built from explicit knots.
  explicit OuterFunction(std::vector<ExactKnot> knots);

  /// Knots at the plateau images of `table`, values in table order.
  OuterFunction(PlateauImageTable table, std::vector<double> values);

  size_t knot_count() const { return curve_.pos.size(); }
  double knot_value(size_t idx) const { return curve_.val[idx]; }
  QuadExt exact_position(size_t idx) const;
  double norm() const { return norm_; }
  double eval(double t) const { return curve_.eval(t); }
  const PLCurve& curve() const { return curve_; }

  bool table_backed() const { return table_.has_value(); }
  const PlateauImageTable& table() const { return *table_; }
  const std::vector<ExactKnot>& explicit_knots() const { return explicit_; }

 private:
  std::optional<PlateauImageTable> table_;
  std::vector<ExactKnot> explicit_;
  PLCurve curve_;
  double norm_ = 0.0;
};

/// phi_k(x) + sqrt2 * phi_k(y); on plateau squares this equals the exact
/// plateau image embedded to float.
double inner_combined(const InnerMap& phi, int k, double x, double y);

/// Outer function of the one-pass construction: knots at all plateau
/// images with values f(l0_i, l0_j)/3. Throws if the resulting ||h||
/// exceeds a third of the supplied norm estimate.
OuterFunction build_outer(const TargetFunction& f, const InnerMap& phi,
                          const SupNormEstimate& norm_f);

struct OuterBuild {
  OuterFunction h;
  double corner_abs_max;  // max |f| over the square corners used for knots
};
/// Norm-check-free builder used by the solver, which folds corner samples
/// into its residual norm estimate before asserting the h-norm bound.
OuterBuild build_outer_unchecked(const F2D& f, PlateauImageTable table, int threads = 0);

/// S_phi h (x, y) = sum_{k=1..5} h(phi_k(x) + sqrt2 phi_k(y)).
double superpose_eval(const InnerMap& phi, const OuterFunction& h, double x, double y);

/// Grid sup of |f - S_phi h|.
SupNormEstimate residual_norm(const TargetFunction& f, const InnerMap& phi,
                              const OuterFunction& h, int grid = 512);

/// Stability radius of a passing map: any inner map within the returned
/// sup-distance of psi still satisfies the 6/7 residual bound. Computed as
/// delta/3 with eps = (6/7 ||f|| - ||f - S_psi h||)/5 and delta the exact
/// modulus of the piecewise-linear h for oscillation eps.
double stability_margin(const TargetFunction& f, const InnerMap& psi,
                        const OuterFunction& h, int grid = 512);

StageTerm stage_term(const InnerMap& phi, const OuterFunction& h);

}  // namespace kst
