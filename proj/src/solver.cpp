#include "kst/solver.hpp"

#include <chrono>
#include <cmath>

#include "kst/errors.hpp"

namespace kst {

namespace {

int choose_resolution_scan(const F2D& f, std::span<const StageTerm> terms,
                           double norm, int floor_N, int cap, int threads) {
  if (floor_N < 0) throw ConfigError("choose_resolution: negative floor");
  if (!(norm > 0.0)) throw ConfigError("choose_resolution: norm must be positive");
  const double bound = norm / 6.0;
  for (long n = static_cast<long>(floor_N) + 1; n <= cap; n *= 2) {
    const double osc = max_box_oscillation(f, terms, static_cast<int>(n), threads);
    if (osc < bound) return static_cast<int>(n);
  }
  throw ResolutionError("choose_resolution: doubling schedule exceeded cap " +
                        std::to_string(cap) + " (pathological residual)");
}

std::string options_json(const TargetFunction& f, const SolveOptions& o) {
  std::string s = "{\"target\":\"" + f.name + "\",\"mode\":\"";
  s += o.mode == SolveMode::Adaptive ? "adaptive" : "fixed";
  s += "\",\"max_stages\":" + std::to_string(o.max_stages);
  s += ",\"target_residual\":" + std::to_string(o.target_residual);
  s += ",\"norm_grid\":" + std::to_string(o.norm_grid);
  s += ",\"epsilon\":" + std::to_string(o.epsilon);
  if (o.mode == SolveMode::Fixed) s += ",\"fixed_N\":" + std::to_string(o.fixed_N);
  s += "}";
  return s;
}

}  // namespace

int choose_resolution(const F2D& residual, double norm, int floor_N, int cap, int threads) {
  return choose_resolution_scan(residual, {}, norm, floor_N, cap, threads);
}

std::vector<StageTerm> KSRepresentation::terms() const {
  std::vector<StageTerm> out;
  out.reserve(stages.size());
  for (const auto& st : stages) out.push_back(stage_term(*st.phi, *st.h));
  return out;
}

double KSRepresentation::evaluate(double x, double y) const {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
    throw ConfigError("evaluate: point outside the unit square");
  const auto ts = terms();
  return sum_terms_at(ts, x, y);
}

RunResult run(const TargetFunction& f, const SolveOptions& opts) {
  if (opts.max_stages < 1) throw ConfigError("run: max_stages must be positive");
  if (opts.norm_grid < 2) throw ConfigError("run: norm grid too small");
  if (!(opts.epsilon > 0.0)) throw ConfigError("run: epsilon must be positive");

  RunResult out;
  out.rep.mode = opts.mode;
  out.rep.target_spec = f.name;
  out.rep.epsilon = opts.epsilon;
  out.report.config_json = options_json(f, opts);

  const int g = opts.norm_grid;
  const int threads = opts.threads;

  SupNormEstimate norm0 = sup_norm(f, g, threads);
  out.rep.norm_f = norm0;
  out.report.norm_f = norm0.value;
  const double target =
      opts.target_residual >= 0.0 ? opts.target_residual : 1e-3 * norm0.value;

  // Separator admissibility floor for the identity reference map.
  const double delta = modulus_delta([](double x) { return x; }, opts.epsilon / 2.0);
  const int floor_N = min_resolution(delta);

  std::shared_ptr<const InnerMap> fixed_phi;
  if (opts.mode == SolveMode::Fixed) {
    if (opts.fixed_N <= floor_N)
      throw ConfigError("run: fixed-mode N must exceed the separator floor " +
                        std::to_string(floor_N));
    fixed_phi = std::make_shared<InnerMap>(
        build_inner_map(identity_reference(), opts.fixed_N, opts.epsilon));
  }

  std::vector<StageTerm> terms;
  double res_grid = norm0.value;
  double norm_op = norm0.value;  // operative ||f||, refined by stage-1 corners

  for (int m = 1; m <= opts.max_stages; ++m) {
    if (res_grid <= target) break;
    const auto t0 = std::chrono::steady_clock::now();

    std::shared_ptr<const InnerMap> phi;
    int N = 0;
    if (opts.mode == SolveMode::Adaptive) {
      N = choose_resolution_scan(f.f, terms, res_grid, floor_N, opts.resolution_cap, threads);
      phi = std::make_shared<InnerMap>(build_inner_map(identity_reference(), N, opts.epsilon));
    } else {
      N = opts.fixed_N;
      phi = fixed_phi;
    }

    OuterBuild built = build_outer_unchecked(
        [&](double x, double y) { return f.f(x, y) - sum_terms_at(terms, x, y); },
        plateau_images(*phi), threads);
    // The knot corners sample the residual off the norm grid; folding them
    // into the stage norm keeps ||h_m|| <= residual_before/3 by construction.
    const double res_before = std::max(res_grid, built.corner_abs_max);
    if (m == 1) {
      norm_op = res_before;
      out.rep.norm_f.value = res_before;
      out.report.norm_f = res_before;
    }

    auto h = std::make_shared<OuterFunction>(std::move(built.h));
    terms.push_back(stage_term(*phi, *h));
    const double res_after = residual_grid_max(f.f, terms, g, threads);
    const bool accepted = res_after < 6.0 / 7.0 * res_before;
    const auto t1 = std::chrono::steady_clock::now();
    const long millis =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

    RunReport::Row row;
    row.m = m;
    row.N = N;
    row.res_before = res_before;
    row.res_after = res_after;
    row.ratio = res_before > 0.0 ? res_after / res_before : 0.0;
    row.h_norm = h->norm();
    row.lambda_bound = std::pow(7.0 / 8.0, m) * norm_op;
    row.millis = millis;
    row.accepted = accepted;
    out.report.rows.push_back(row);

    if (!accepted) {
      terms.pop_back();
      if (opts.mode == SolveMode::Adaptive)
        throw NonContractionError("adaptive stage " + std::to_string(m) +
                                  " violated the 6/7 bound: " + std::to_string(res_after) +
                                  " vs " + std::to_string(6.0 / 7.0 * res_before));
      out.report.diagnostic =
          "fixed map at N=" + std::to_string(N) + " stopped contracting at stage " +
          std::to_string(m) + " (residual " + std::to_string(res_after) + " vs bound " +
          std::to_string(6.0 / 7.0 * res_before) +
          "); the fixed resolution no longer resolves the residual oscillation";
      break;
    }

    Stage st;
    st.m = m;
    st.N = N;
    st.residual_before = {res_before, g, std::nullopt};
    st.residual_after = {res_after, g, std::nullopt};
    st.h_norm = h->norm();
    st.millis = millis;
    st.phi = phi;
    st.h = std::move(h);
    out.rep.stages.push_back(std::move(st));
    res_grid = res_after;
  }
  return out;
}

}  // namespace kst
