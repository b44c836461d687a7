// Copyright 2026 The fairselect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: validate models, sweep trade-off curves, solve for
// privacy levels, emit accuracy tables, audit the privacy bound, and ingest
// group score tables. Every file output is paired with a manifest that
// records the resolved invocation; `fairselect rerun <manifest>` repeats it.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairselect/analysis.hpp"
#include "fairselect/exact.hpp"
#include "fairselect/io.hpp"
#include "fairselect/model.hpp"
#include "fairselect/monte_carlo.hpp"
#include "fairselect/sampler.hpp"

namespace {

using fairselect::BudgetExceeded;
using fairselect::FairnessNotion;
using fairselect::PopulationModel;
using fairselect::ScoreKind;
using fairselect::SelectionConfig;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

// Exit codes are a stable contract: 0 success, 2 input error, 3 budget
// exceeded, 4 no root / infeasible.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNoRoot = 4;

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

ScoreKind parse_kind(const std::string& s) {
  if (s == "mean") return ScoreKind::kMean;
  if (s == "rms") return ScoreKind::kRms;
  if (s == "min") return ScoreKind::kMin;
  if (s == "max") return ScoreKind::kMax;
  throw fairselect::Error("unknown score kind: " + s);
}

FairnessNotion parse_notion(const std::string& s) {
  if (s == "eo") return FairnessNotion::kEqualOpportunity;
  if (s == "dp") return FairnessNotion::kDemographicParity;
  throw fairselect::Error("unknown fairness notion: " + s);
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    out.push_back(std::stod(cell));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_double_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<std::string> parse_string_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fairselect::Error("cannot write " + path);
  out << content;
}

// Shared option bundle; each subcommand registers the subset it uses.
struct Options {
  std::string model_path;
  int n = 0;
  int m = 1;
  std::string notion = "eo";
  std::string score_kind = "mean";
  double eps = -1.0;
  std::string eps_grid;
  double eps_max = -1.0;
  int points = 0;
  long samples = 10000;
  std::uint64_t seed = 1;
  std::string engine = "auto";
  std::string out;
  std::string format = "csv";
  double tol = 1e-6;
  double gamma_max = -1.0;
  std::string mode = "fair-root";
  int trials = 20;
  std::string m_list = "1,2,3,4";
  // ingest
  std::string cdf_path, perf_path;
  double raw_min = 350.0, raw_max = 850.0;
  bool percent = false;
  std::string group0, group1, weights0 = "1", weights1 = "1";
  double prior_a0 = 0.5;
  int digits = fairselect::ScoreSupport::kDefaultDigits;
  // rerun
  std::string manifest_path;
};

SelectionConfig make_config(const Options& opt, double eps = 0.0) {
  SelectionConfig cfg;
  cfg.n = opt.n;
  cfg.m = opt.m;
  cfg.score_kind = parse_kind(opt.score_kind);
  cfg.epsilon = eps;
  cfg.validate();
  return cfg;
}

class ManifestWriter {
 public:
  ManifestWriter(std::string command, std::vector<std::string> argv)
      : start_(std::chrono::steady_clock::now()) {
    doc_["tool"] = "fairselect";
    doc_["version"] = kVersion;
    doc_["rng"] = fairselect::Rng::kIdentity;
    doc_["command"] = std::move(command);
    doc_["argv"] = std::move(argv);
  }

  ordered_json& resolved() { return doc_["resolved"]; }
  void set_engine_path(const std::string& p) { doc_["engine_path"] = p; }

  void write(const std::string& out_path) {
    fairselect::exact::ExactBudget budget;
    ordered_json budgets;
    budgets["max_m1_count"] = budget.max_m1_count;
    budgets["max_mean_ops"] = budget.max_mean_ops;
    budgets["max_subsets"] = budget.max_subsets;
    budgets["max_n"] = budget.max_n;
    doc_["budgets"] = budgets;
    std::chrono::duration<double> wall =
        std::chrono::steady_clock::now() - start_;
    doc_["wall_time_s"] = wall.count();
    write_file(out_path + ".manifest.json", doc_.dump(2) + "\n");
  }

 private:
  ordered_json doc_;
  std::chrono::steady_clock::time_point start_;
};

int run(const std::vector<std::string>& args);

// ---------------------------------------------------------------------------
// Subcommand actions
// ---------------------------------------------------------------------------

int cmd_validate(const Options& opt, ManifestWriter& manifest) {
  PopulationModel model = fairselect::io::load_model(opt.model_path);
  fairselect::DerivedMarginals marg = fairselect::derive_marginals(model);
  fairselect::MlrResult mlr = fairselect::check_mlr(model);

  ordered_json report;
  report["valid"] = true;
  report["levels"] = model.support.size();
  report["pr_y1"] = marg.pr_y1;
  report["mean_r_qualified"] = {marg.mean_r_qualified[0],
                                marg.mean_r_qualified[1]};
  ordered_json f_r = ordered_json::array();
  for (Eigen::Index i = 0; i < marg.f_r.size(); ++i) f_r.push_back(marg.f_r[i]);
  report["f_r"] = f_r;
  report["mlr_holds"] = mlr.holds;
  if (mlr.witness) {
    report["mlr_witness"] = {mlr.witness->first, mlr.witness->second};
  }

  std::cout << "model ok: " << model.support.size() << " support levels, "
            << "Pr{Y=1} = " << fmt12(marg.pr_y1) << "\n";
  std::cout << "E{R|A=0,Y=1} = " << fmt12(marg.mean_r_qualified[0])
            << ", E{R|A=1,Y=1} = " << fmt12(marg.mean_r_qualified[1]) << "\n";
  if (mlr.holds) {
    std::cout << "monotone likelihood ratio: holds\n";
  } else {
    std::cout << "warning: monotone likelihood ratio violated at ("
              << mlr.witness->first << ", " << mlr.witness->second
              << "); accuracy need not be monotone in epsilon\n";
  }
  if (!opt.out.empty()) {
    write_file(opt.out, report.dump(2) + "\n");
    manifest.set_engine_path("n/a");
    manifest.write(opt.out);
  }
  return kExitOk;
}

int cmd_curve(const Options& opt, ManifestWriter& manifest) {
  PopulationModel model = fairselect::io::load_model(opt.model_path);
  SelectionConfig cfg = make_config(opt);
  FairnessNotion notion = parse_notion(opt.notion);

  std::vector<double> grid;
  if (!opt.eps_grid.empty()) {
    grid = parse_double_list(opt.eps_grid);
  } else if (opt.eps_max >= 0) {
    int points = opt.points > 1 ? opt.points : 33;
    for (int i = 0; i < points; ++i) {
      grid.push_back(opt.eps_max * i / (points - 1));
    }
  } else if (opt.eps >= 0) {
    grid.push_back(opt.eps);
  } else {
    throw fairselect::Error("curve needs --eps, --eps-grid, or --eps-max");
  }
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw fairselect::Error("epsilon grid must be ascending");
  }

  bool use_exact;
  if (opt.engine == "exact") {
    use_exact = true;
  } else if (opt.engine == "mc") {
    use_exact = false;
  } else {
    use_exact = fairselect::exact::within_budget(model, cfg);
  }

  fairselect::mc::TradeoffCurve curve;
  if (use_exact) {
    curve = fairselect::mc::exact_tradeoff_curve(model, cfg, notion, grid);
  } else {
    fairselect::mc::McOptions mco;
    mco.samples = opt.samples;
    mco.seed = opt.seed;
    curve = fairselect::mc::estimate_tradeoff_curve(model, cfg, notion, grid, mco);
  }
  std::string body = fairselect::io::emit_curve(
      curve, opt.format == "json" ? fairselect::io::CurveFormat::kJson
                                  : fairselect::io::CurveFormat::kCsv);
  manifest.set_engine_path(use_exact ? "exact" : "monte-carlo");
  if (opt.out.empty()) {
    std::cout << body;
  } else {
    write_file(opt.out, body);
    manifest.write(opt.out);
    std::cout << "wrote " << opt.out << " (" << curve.points.size()
              << " points, " << (use_exact ? "exact" : "monte-carlo")
              << " engine)\n";
  }
  return kExitOk;
}

ordered_json solve_result_json(const fairselect::analysis::SolveResult& r) {
  ordered_json j;
  j["kind"] = fairselect::analysis::to_string(r.kind);
  j["status"] = fairselect::analysis::to_string(r.status);
  j["epsilon_star"] = r.epsilon_star;
  j["achieved_gamma"] = r.achieved_gamma;
  j["achieved_theta"] = r.achieved_theta;
  j["bracket"] = {r.bracket.first, r.bracket.second};
  j["evaluations"] = r.evaluations;
  j["mlr_holds"] = r.mlr_holds;
  j["theta_monotonicity_guaranteed"] = r.theta_monotonicity_guaranteed;
  j["degenerate_identically_zero"] = r.degenerate_identically_zero;
  j["non_monotone_gamma"] = r.non_monotone_gamma;
  j["hit_ci_floor"] = r.hit_ci_floor;
  j["gamma_ci_at_root"] = r.gamma_ci_at_root;
  ordered_json changes = ordered_json::array();
  for (const auto& [lo, hi] : r.sign_changes) changes.push_back({lo, hi});
  j["sign_changes"] = changes;
  return j;
}

int cmd_solve(const Options& opt, ManifestWriter& manifest) {
  PopulationModel model = fairselect::io::load_model(opt.model_path);
  SelectionConfig cfg = make_config(opt);
  fairselect::analysis::AnalysisOptions aopts;
  aopts.engine = opt.engine == "exact" ? fairselect::analysis::EnginePath::kExact
                 : opt.engine == "mc"
                     ? fairselect::analysis::EnginePath::kMonteCarlo
                     : fairselect::analysis::EnginePath::kAuto;
  aopts.samples = opt.samples;
  aopts.seed = opt.seed;
  aopts.tol = opt.tol;
  aopts.notion = parse_notion(opt.notion);
  if (opt.eps_max > 0 && opt.mode != "constrained") aopts.hi = opt.eps_max;

  fairselect::analysis::SolveResult result;
  if (opt.mode == "fair-root") {
    result = fairselect::analysis::solve_perfect_fairness(model, cfg, aopts);
  } else if (opt.mode == "constrained") {
    if (opt.eps_max <= 0 || opt.gamma_max < 0) {
      throw fairselect::Error(
          "constrained mode needs --eps-max > 0 and --gamma-max >= 0");
    }
    result = fairselect::analysis::solve_constrained_optimum(
        model, cfg, opt.eps_max, opt.gamma_max, aopts);
  } else if (opt.mode == "threshold") {
    result = fairselect::analysis::fairness_threshold(model, cfg, aopts);
  } else {
    throw fairselect::Error("unknown solve mode: " + opt.mode);
  }

  ordered_json j = solve_result_json(result);
  std::cout << "status: " << fairselect::analysis::to_string(result.status)
            << ", epsilon_star = " << fmt12(result.epsilon_star)
            << ", gamma = " << fmt12(result.achieved_gamma)
            << ", theta = " << fmt12(result.achieved_theta) << "\n";
  manifest.set_engine_path(opt.engine);
  if (!opt.out.empty()) {
    write_file(opt.out, j.dump(2) + "\n");
    manifest.write(opt.out);
  }
  using fairselect::analysis::SolveStatus;
  if (result.status == SolveStatus::kNoRootBracketed ||
      result.status == SolveStatus::kInfeasible) {
    return kExitNoRoot;
  }
  return kExitOk;
}

int cmd_report_table1(const Options& opt, ManifestWriter& manifest) {
  PopulationModel model = fairselect::io::load_model(opt.model_path);
  std::vector<int> m_list = parse_int_list(opt.m_list);
  if (m_list.empty()) throw fairselect::Error("--m-list empty");
  SelectionConfig base;
  base.n = opt.n;
  base.m = 1;
  base.score_kind = parse_kind(opt.score_kind);
  fairselect::analysis::AnalysisOptions aopts;
  aopts.engine = opt.engine == "exact" ? fairselect::analysis::EnginePath::kExact
                 : opt.engine == "mc"
                     ? fairselect::analysis::EnginePath::kMonteCarlo
                     : fairselect::analysis::EnginePath::kAuto;
  aopts.samples = opt.samples;
  aopts.seed = opt.seed;
  aopts.tol = opt.tol;
  std::vector<fairselect::analysis::Table1Row> rows =
      fairselect::analysis::accuracy_reduction_table(model, base, m_list, aopts);

  std::string csv = "m,eps_o,theta_at_eps_o,theta_inf,reduction_pct,status\n";
  ordered_json arr = ordered_json::array();
  for (const auto& row : rows) {
    csv += std::to_string(row.m) + "," + fmt12(row.eps_o) + "," +
           fmt12(row.theta_at_eps_o) + "," + fmt12(row.theta_inf) + "," +
           fmt12(row.reduction_pct) + "," +
           fairselect::analysis::to_string(row.status) + "\n";
    ordered_json r;
    r["m"] = row.m;
    r["eps_o"] = row.eps_o;
    r["theta_at_eps_o"] = row.theta_at_eps_o;
    r["theta_inf"] = row.theta_inf;
    r["reduction_pct"] = row.reduction_pct;
    r["status"] = fairselect::analysis::to_string(row.status);
    arr.push_back(r);
  }
  std::string body = opt.format == "json" ? arr.dump(2) + "\n" : csv;
  manifest.set_engine_path(opt.engine);
  if (opt.out.empty()) {
    std::cout << body;
  } else {
    write_file(opt.out, body);
    manifest.write(opt.out);
    std::cout << csv;
  }
  return kExitOk;
}

int cmd_verify_dp(const Options& opt, ManifestWriter& manifest) {
  PopulationModel model = fairselect::io::load_model(opt.model_path);
  SelectionConfig cfg = make_config(opt, opt.eps < 0 ? 1.0 : opt.eps);
  fairselect::DPReport rep =
      fairselect::verify_dp(model, cfg, opt.trials, opt.seed);
  std::cout << "epsilon = " << fmt12(rep.epsilon)
            << ", bound = " << fmt12(rep.bound)
            << ", max ratio = " << fmt12(rep.max_ratio) << " over "
            << rep.neighbor_pairs << " neighbor pairs ("
            << (rep.pass ? "PASS" : "FAIL") << ")\n";
  if (!opt.out.empty()) {
    ordered_json j;
    j["epsilon"] = rep.epsilon;
    j["bound"] = rep.bound;
    j["max_ratio"] = rep.max_ratio;
    j["trials"] = rep.trials;
    j["neighbor_pairs"] = rep.neighbor_pairs;
    j["pass"] = rep.pass;
    write_file(opt.out, j.dump(2) + "\n");
    manifest.set_engine_path("exact");
    manifest.write(opt.out);
  }
  return rep.pass ? kExitOk : kExitFailure;
}

int cmd_ingest(const Options& opt, ManifestWriter& manifest) {
  fairselect::io::GroupTableOptions topts;
  topts.raw_min = opt.raw_min;
  topts.raw_max = opt.raw_max;
  topts.percent = opt.percent;
  topts.digits = opt.digits;
  fairselect::io::GroupScoreTable table =
      fairselect::io::load_group_tables(opt.cdf_path, opt.perf_path, topts);
  fairselect::io::GroupMergeSpec spec;
  spec.group0 = parse_string_list(opt.group0);
  spec.group1 = parse_string_list(opt.group1);
  spec.weights0 = parse_double_list(opt.weights0);
  spec.weights1 = parse_double_list(opt.weights1);
  if (spec.weights0.size() == 1 && spec.group0.size() > 1) {
    throw fairselect::Error("--weights0 must list one weight per group");
  }
  if (spec.weights1.size() == 1 && spec.group1.size() > 1) {
    throw fairselect::Error("--weights1 must list one weight per group");
  }
  spec.prior_a0 = opt.prior_a0;
  PopulationModel model = fairselect::io::from_group_tables(table, spec);
  fairselect::io::ModelMetadata meta;
  meta.source = "ingested from " + opt.cdf_path + " and " + opt.perf_path;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) {
      if (!s.empty()) s += "+";
      s += x;
    }
    return s;
  };
  meta.group_labels = {join(spec.group0), join(spec.group1)};
  if (opt.out.empty()) throw fairselect::Error("ingest needs --out");
  fairselect::io::save_model(model, opt.out, meta);
  manifest.set_engine_path("n/a");
  manifest.write(opt.out);
  std::cout << "wrote " << opt.out << " (" << model.support.size()
            << " support levels; qual rates " << fmt12(model.qual_rate[0])
            << ", " << fmt12(model.qual_rate[1]) << ")\n";
  return kExitOk;
}

int cmd_rerun(const Options& opt) {
  std::ifstream in(opt.manifest_path);
  if (!in) throw fairselect::Error("cannot open " + opt.manifest_path);
  ordered_json doc = ordered_json::parse(in);
  if (!doc.contains("argv") || !doc["argv"].is_array()) {
    throw fairselect::Error("manifest has no argv record");
  }
  std::vector<std::string> argv;
  for (const auto& a : doc["argv"]) argv.push_back(a.get<std::string>());
  return run(argv);
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args) {
  CLI::App app{"differentially private selection: fairness and accuracy analysis"};
  app.require_subcommand(1);
  Options opt;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", opt.model_path, "model file (v1 json)")
        ->required();
  };
  auto add_pool = [&](CLI::App* sub, bool need_m = true) {
    sub->add_option("--n", opt.n, "applicant pool size")->required();
    if (need_m) sub->add_option("--m", opt.m, "number of selections");
    sub->add_option("--score-kind", opt.score_kind,
                    "subset aggregate: mean|rms|min|max");
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--samples", opt.samples, "Monte Carlo samples per point");
    sub->add_option("--seed", opt.seed, "root seed for all randomness");
    sub->add_option("--engine", opt.engine, "auto|exact|mc");
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "output file (manifest written beside)");
    sub->add_option("--format", opt.format, "csv|json");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a model file");
  add_model(validate);
  validate->add_option("--out", opt.out, "write a json report");

  CLI::App* curve = app.add_subcommand("curve", "trade-off curve over epsilon");
  add_model(curve);
  add_pool(curve);
  curve->add_option("--notion", opt.notion, "fairness notion: eo|dp");
  curve->add_option("--eps", opt.eps, "single epsilon");
  curve->add_option("--eps-grid", opt.eps_grid, "comma-separated grid");
  curve->add_option("--eps-max", opt.eps_max, "linear grid upper end");
  curve->add_option("--points", opt.points, "grid size with --eps-max");
  add_sampling(curve);
  add_out(curve);

  CLI::App* solve = app.add_subcommand("solve", "root / optimum / threshold");
  add_model(solve);
  add_pool(solve);
  solve->add_option("--mode", opt.mode, "fair-root|constrained|threshold");
  solve->add_option("--notion", opt.notion, "fairness notion: eo|dp");
  solve->add_option("--eps-max", opt.eps_max, "constraint or scan cap");
  solve->add_option("--gamma-max", opt.gamma_max, "fairness budget");
  solve->add_option("--tol", opt.tol, "gamma tolerance at a root");
  add_sampling(solve);
  add_out(solve);

  CLI::App* table = app.add_subcommand(
      "report-table1", "accuracy and privacy under perfect fairness, per m");
  add_model(table);
  table->add_option("--n", opt.n, "applicant pool size")->required();
  table->add_option("--m-list", opt.m_list, "comma-separated m values");
  table->add_option("--score-kind", opt.score_kind,
                    "subset aggregate: mean|rms|min|max");
  table->add_option("--tol", opt.tol, "gamma tolerance at a root");
  add_sampling(table);
  add_out(table);

  CLI::App* dp = app.add_subcommand("verify-dp", "audit the privacy bound");
  add_model(dp);
  add_pool(dp);
  dp->add_option("--eps", opt.eps, "privacy parameter")->required();
  dp->add_option("--trials", opt.trials, "random score vectors to audit");
  dp->add_option("--seed", opt.seed, "root seed");
  dp->add_option("--out", opt.out, "write a json report");

  CLI::App* ingest =
      app.add_subcommand("ingest", "build a model from group score tables");
  ingest->add_option("--cdf", opt.cdf_path, "per-group cdf csv")->required();
  ingest->add_option("--perf", opt.perf_path, "per-group performance csv")
      ->required();
  ingest->add_option("--raw-min", opt.raw_min, "raw score at 0");
  ingest->add_option("--raw-max", opt.raw_max, "raw score at 1");
  ingest->add_flag("--percent", opt.percent, "columns are percentages");
  ingest->add_option("--group0", opt.group0, "labels merged into group 0")
      ->required();
  ingest->add_option("--weights0", opt.weights0, "merge weights for group 0");
  ingest->add_option("--group1", opt.group1, "labels merged into group 1")
      ->required();
  ingest->add_option("--weights1", opt.weights1, "merge weights for group 1");
  ingest->add_option("--prior-a0", opt.prior_a0, "Pr{A = group-0 side}")
      ->required();
  ingest->add_option("--digits", opt.digits, "support quantization digits");
  ingest->add_option("--out", opt.out, "model file to write")->required();

  CLI::App* rerun =
      app.add_subcommand("rerun", "repeat the invocation from a manifest");
  rerun->add_option("manifest", opt.manifest_path, "manifest json")->required();

  std::vector<const char*> argv;
  argv.push_back("fairselect");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  std::string command;
  for (CLI::App* sub :
       {validate, curve, solve, table, dp, ingest, rerun}) {
    if (sub->parsed()) command = sub->get_name();
  }

  ManifestWriter manifest(command, args);
  ordered_json& res = manifest.resolved();
  res["model"] = opt.model_path;
  res["n"] = opt.n;
  res["m"] = opt.m;
  res["notion"] = opt.notion;
  res["score_kind"] = opt.score_kind;
  res["eps"] = opt.eps;
  res["eps_grid"] = opt.eps_grid;
  res["eps_max"] = opt.eps_max;
  res["points"] = opt.points;
  res["samples"] = opt.samples;
  res["seed"] = opt.seed;
  res["engine"] = opt.engine;
  res["format"] = opt.format;
  res["tol"] = opt.tol;
  res["gamma_max"] = opt.gamma_max;
  res["mode"] = opt.mode;
  res["trials"] = opt.trials;
  res["m_list"] = opt.m_list;

  try {
    if (validate->parsed()) return cmd_validate(opt, manifest);
    if (curve->parsed()) return cmd_curve(opt, manifest);
    if (solve->parsed()) return cmd_solve(opt, manifest);
    if (table->parsed()) return cmd_report_table1(opt, manifest);
    if (dp->parsed()) return cmd_verify_dp(opt, manifest);
    if (ingest->parsed()) return cmd_ingest(opt, manifest);
    if (rerun->parsed()) return cmd_rerun(opt);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const fairselect::LimitExceeded& e) {
    std::cerr << "limit exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const fairselect::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}
