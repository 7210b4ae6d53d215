// Command-line front end: build inner maps, run approximations, evaluate
// and report models, dump interval grids, and run the verification suites.
//
// Exit codes: 0 success, 2 configuration error, 3 verification failure,
// 4 non-contraction / resolution blow-up.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kst/errors.hpp"
#include "kst/interval_grid.hpp"
#include "kst/selfcheck.hpp"
#include "kst/serialize.hpp"
#include "kst/solver.hpp"
#include "kst/targets.hpp"

namespace {

using namespace kst;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file: " + path);
  os << text;
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::array<F1D, 5> parse_psi(const std::string& spec) {
  if (spec == "identity") return identity_reference();
  if (spec.rfind("const:", 0) == 0) {
    const double v = std::stod(spec.substr(6));
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("--psi const value must be in [0, 1]");
    std::array<F1D, 5> out;
    for (auto& f : out) f = [v](double) { return v; };
    return out;
  }
  throw ConfigError("--psi must be 'identity' or 'const:<v>'");
}

int cmd_build_phi(int N, double epsilon, const std::string& psi, const std::string& out) {
  const InnerMap map = build_inner_map(parse_psi(psi), N, epsilon);
  write_text(out, serialize_inner(map));
  return 0;
}

int cmd_approximate(const std::string& target_spec, const std::string& mode, int stages,
                    double tol, int grid, double epsilon, int fixed_N,
                    const std::string& out, const std::string& report_path) {
  const TargetFunction target = make_target(target_spec);
  SolveOptions opts;
  opts.mode = mode == "fixed" ? SolveMode::Fixed : SolveMode::Adaptive;
  opts.max_stages = stages;
  opts.target_residual = tol < 0 ? -1.0 : tol;
  opts.norm_grid = grid;
  opts.epsilon = epsilon;
  opts.fixed_N = fixed_N;
  const RunResult result = run(target, opts);
  write_text(out, serialize_model(result.rep));
  if (!report_path.empty()) {
    std::ostringstream csv;
    write_report_csv(csv, result.report);
    write_text(report_path, csv.str());
  }
  if (!result.report.diagnostic.empty())
    std::cerr << "note: " << result.report.diagnostic << "\n";
  std::cerr << "stages=" << result.rep.stages.size();
  if (!result.report.rows.empty())
    std::cerr << " final_residual=" << format_double(result.report.rows.back().res_after);
  std::cerr << "\n";
  return 0;
}

int cmd_eval(const std::string& model_path, double x, double y) {
  const KSRepresentation rep = deserialize_model(read_text(model_path));
  std::cout << format_double(rep.evaluate(x, y)) << "\n";
  return 0;
}

int cmd_report(const std::string& model_path, int grid, const std::string& residual_path,
               const std::string& summary_path) {
  const KSRepresentation rep = deserialize_model(read_text(model_path));
  const TargetFunction target = make_target(rep.target_spec);

  std::ostringstream csv;
  write_residual_csv(csv, target.f, rep, grid);
  write_text(residual_path, csv.str());

  nlohmann::json summary;
  summary["target"] = rep.target_spec;
  summary["mode"] = rep.mode == SolveMode::Adaptive ? "adaptive" : "fixed";
  summary["norm_f"] = rep.norm_f.value;
  summary["grid"] = grid;
  bool all_pass = true;
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& st : rep.stages) {
    const double bound = 6.0 / 7.0 * st.residual_before.value;
    const bool pass = st.residual_after.value < bound;
    all_pass = all_pass && pass;
    stages.push_back({{"m", st.m},
                      {"N", st.N},
                      {"residual_before", st.residual_before.value},
                      {"residual_after", st.residual_after.value},
                      {"bound_6_7", bound},
                      {"pass", pass}});
  }
  summary["stages"] = std::move(stages);
  const auto terms = rep.terms();
  summary["final_residual"] = residual_grid_max(target.f, terms, grid);
  summary["pass"] = all_pass;
  write_text(summary_path, summary.dump(1));
  return all_pass ? 0 : 3;
}

int cmd_grid_dump(int N, int k, const std::string& out) {
  std::ostringstream csv;
  csv << "j,left,right,left_clamped\n";
  for (long j : index_set(k, N)) {
    const GridInterval seg = interval({j, k, N});
    csv << j << ',' << seg.left.str() << ',' << seg.right.str() << ','
        << seg.left_clamped.str() << '\n';
  }
  write_text(out, csv.str());
  return 0;
}

int cmd_verify(const SelfCheckOptions& opts) {
  const auto results = run_selfchecks(opts);
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) std::cout << " — " << r.detail;
    std::cout << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kolmogorov superposition engine"};
  app.require_subcommand(1);

  // build-phi
  auto* build = app.add_subcommand("build-phi", "construct a five-component inner map");
  int bp_N = 0;
  double bp_eps = 0.25;
  std::string bp_psi = "identity", bp_out;
  build->add_option("--N", bp_N, "grid resolution")->required();
  build->add_option("--epsilon", bp_eps, "closeness to the reference map");
  build->add_option("--psi", bp_psi, "reference map: identity | const:<v>");
  build->add_option("--out", bp_out, "output path (default stdout)");

  // approximate
  auto* approx = app.add_subcommand("approximate", "iteratively approximate a target");
  std::string ap_target, ap_mode = "adaptive", ap_out = "model.json", ap_report;
  int ap_stages = 12, ap_grid = 512, ap_fixed_N = 0;
  double ap_tol = -1.0, ap_eps = 0.25;
  approx->add_option("--target", ap_target, "registry name or expression")->required();
  approx->add_option("--mode", ap_mode, "adaptive | fixed")
      ->check(CLI::IsMember({"adaptive", "fixed"}));
  approx->add_option("--stages", ap_stages, "stage budget");
  approx->add_option("--tol", ap_tol, "absolute residual target (default 1e-3*||f||)");
  approx->add_option("--grid", ap_grid, "norm grid per axis");
  approx->add_option("--epsilon", ap_eps, "separator closeness per stage");
  approx->add_option("--N", ap_fixed_N, "fixed-mode inner map resolution");
  approx->add_option("--out", ap_out, "model output path");
  approx->add_option("--report", ap_report, "report CSV path");

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a model at a point");
  std::string ev_model;
  double ev_x = 0.0, ev_y = 0.0;
  ev->add_option("--model", ev_model, "model JSON path")->required();
  ev->add_option("--x", ev_x, "x in [0,1]")->required();
  ev->add_option("--y", ev_y, "y in [0,1]")->required();

  // report
  auto* rep = app.add_subcommand("report", "residual CSV and JSON summary for a model");
  std::string rp_model, rp_residual = "residual.csv", rp_summary = "summary.json";
  int rp_grid = 256;
  rep->add_option("--model", rp_model, "model JSON path")->required();
  rep->add_option("--grid", rp_grid, "grid per axis");
  rep->add_option("--residual", rp_residual, "residual CSV path");
  rep->add_option("--summary", rp_summary, "summary JSON path");

  // grid dump
  auto* grid = app.add_subcommand("grid", "interval grid utilities");
  grid->require_subcommand(1);
  auto* dump = grid->add_subcommand("dump", "emit one family as CSV");
  int gd_N = 0, gd_k = 1;
  std::string gd_out;
  dump->add_option("--N", gd_N, "grid resolution")->required();
  dump->add_option("--k", gd_k, "family index 1..5")->required();
  dump->add_option("--out", gd_out, "output path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "run the property suites");
  SelfCheckOptions vo;
  std::string v_range;
  verify->add_option("--seed", vo.seed, "RNG seed");
  verify->add_option("--N-range", v_range, "covering sweep range, e.g. 1..40");
  verify->add_option("--grid", vo.grid, "covering grid per axis");
  verify->add_option("--norm-grid", vo.norm_grid, "contraction scan grid");
  verify->add_option("--trials", vo.trials, "stability perturbation trials");
  verify->add_flag("--inject-duplicate-plateau", vo.inject_duplicate_plateau,
                   "negative control: plant a duplicate plateau");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return cmd_build_phi(bp_N, bp_eps, bp_psi, bp_out);
    if (approx->parsed())
      return cmd_approximate(ap_target, ap_mode, ap_stages, ap_tol, ap_grid, ap_eps,
                             ap_fixed_N, ap_out, ap_report);
    if (ev->parsed()) return cmd_eval(ev_model, ev_x, ev_y);
    if (rep->parsed()) return cmd_report(rp_model, rp_grid, rp_residual, rp_summary);
    if (grid->parsed()) return cmd_grid_dump(gd_N, gd_k, gd_out);
    if (verify->parsed()) {
      if (!v_range.empty()) {
        const auto dots = v_range.find("..");
        if (dots == std::string::npos) throw ConfigError("--N-range wants the form a..b");
        vo.n_lo = std::stoi(v_range.substr(0, dots));
        vo.n_hi = std::stoi(v_range.substr(dots + 2));
        if (vo.n_lo < 1 || vo.n_hi < vo.n_lo) throw ConfigError("--N-range is empty");
      }
      return cmd_verify(vo);
    }
  } catch (const NonContractionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ResolutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
