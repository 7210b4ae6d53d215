#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kst/superposition.hpp"

namespace kst {

enum class SolveMode { Adaptive, Fixed };

struct SolveOptions {
  SolveMode mode = SolveMode::Adaptive;
  int max_stages = 12;
  double target_residual = -1.0;  // < 0 selects the default 1e-3 * ||f||
  int norm_grid = 512;
  double epsilon = 0.25;          // per-stage separator closeness
  int fixed_N = 0;                // resolution of the shared map (fixed mode)
  int resolution_cap = 1 << 14;
  int threads = 0;
};

struct Stage {
  int m = 0;  // 1-based stage index
  int N = 0;
  SupNormEstimate residual_before;
  SupNormEstimate residual_after;
  double h_norm = 0.0;
  long millis = 0;
  std::shared_ptr<const InnerMap> phi;
  std::shared_ptr<const OuterFunction> h;
};

/// The built representation: f is approximated by the stage sum
/// sum_m S_{phi^(m)} h_m (adaptive) which in fixed mode collapses to
/// S_phi(sum_m h_m). Residual bounds decay geometrically over stages.
struct KSRepresentation {
  SolveMode mode = SolveMode::Adaptive;
  std::string target_spec;
  double epsilon = 0.25;
  SupNormEstimate norm_f;
  std::vector<Stage> stages;

  std::vector<StageTerm> terms() const;
  double evaluate(double x, double y) const;
};

struct RunReport {
  struct Row {
    int m = 0;
    int N = 0;
    double res_before = 0.0;
    double res_after = 0.0;
    double ratio = 0.0;
    double h_norm = 0.0;
    double lambda_bound = 0.0;  // (7/8)^m * ||f||
    long millis = 0;
    bool accepted = true;
  };
  std::vector<Row> rows;
  double norm_f = 0.0;
  std::string diagnostic;    // fixed-mode termination note, empty otherwise
  std::string config_json;   // echo of the run configuration
};

struct RunResult {
  KSRepresentation rep;
  RunReport report;
};

/// Smallest resolution on the doubling schedule past floor_N whose sampled
/// oscillation over 4/N boxes stays under norm/6. Throws ResolutionError
/// when the cap is exceeded (pathological residual).
int choose_resolution(const F2D& residual, double norm, int floor_N,
                      int cap = 1 << 14, int threads = 0);

/// Stage loop deducing the full representation from one-pass contraction:
/// stages are appended while the residual exceeds the target and the stage
/// budget allows; each accepted stage certifies residual_after <
/// (6/7) * residual_before. In adaptive mode a violated bound is an
/// implementation bug and throws NonContractionError; in fixed mode it
/// terminates the run with a diagnostic (the fixed N no longer resolves
/// the residual's oscillation).
RunResult run(const TargetFunction& f, const SolveOptions& opts);

}  // namespace kst
