#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtrcv/common.hpp"
#include "dtrcv/csv.hpp"
#include "dtrcv/studies.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(const dtrcv::Error& e) {
  switch (e.kind()) {
    case dtrcv::ErrorKind::config:
      return 2;
    case dtrcv::ErrorKind::bad_data:
    case dtrcv::ErrorKind::empty_arm:
    case dtrcv::ErrorKind::non_finite:
    case dtrcv::ErrorKind::length_mismatch:
      return 3;
    default:
      return 4;
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  dtrcv::require(out.good(), dtrcv::ErrorKind::config, "cannot open " + path.string());
  out << content;
  out.flush();
  dtrcv::require(out.good(), dtrcv::ErrorKind::config, "write failed for " + path.string());
}

fs::path make_run_dir(const std::string& out, const std::string& subcommand,
                      const std::string& name) {
  const fs::path dir = fs::path(out) / subcommand / name;
  std::error_code ec;
  fs::create_directories(dir, ec);
  dtrcv::require(!ec, dtrcv::ErrorKind::config, "cannot create " + dir.string());
  return dir;
}

using Setter = std::function<void(const json&)>;

json load_config_section(const std::string& path, const std::string& section) {
  std::ifstream in(path);
  dtrcv::require(in.good(), dtrcv::ErrorKind::config, "cannot open config " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    dtrcv::fail(dtrcv::ErrorKind::config, "config " + path + ": " + e.what());
  }
  dtrcv::require(doc.is_object(), dtrcv::ErrorKind::config,
                 "config root must be an object of per-subcommand sections");
  static const std::vector<std::string> known = {"var-study", "dtr-study", "analyze",
                                                 "appendix-b"};
  for (const auto& [key, value] : doc.items()) {
    dtrcv::require(std::find(known.begin(), known.end(), key) != known.end(),
                   dtrcv::ErrorKind::config, "config: unknown section '" + key + "'");
    dtrcv::require(value.is_object(), dtrcv::ErrorKind::config,
                   "config section '" + key + "' must be an object");
  }
  if (!doc.contains(section)) return json::object();
  return doc[section];
}

void apply_config(const CLI::App* sub, const std::string& config_path,
                  const std::map<std::string, Setter>& setters) {
  if (config_path.empty()) return;
  const json section = load_config_section(config_path, sub->get_name());
  for (const auto& [key, value] : section.items()) {
    const auto it = setters.find(key);
    dtrcv::require(it != setters.end(), dtrcv::ErrorKind::config,
                   "config [" + sub->get_name() + "]: unknown key '" + key + "'");
    if (sub->count("--" + key) > 0) continue;
    try {
      it->second(value);
    } catch (const json::exception& e) {
      dtrcv::fail(dtrcv::ErrorKind::config,
                  "config [" + sub->get_name() + "] key '" + key + "': " + e.what());
    }
  }
}

struct CommonOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out = "out";
  std::string name = "run";
  std::string config_path;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--seed", opts.seed, "master seed (default 0)");
  sub->add_option("--threads", opts.threads, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", opts.out, "output directory root (default ./out)");
  sub->add_option("--name", opts.name, "run name under <out>/<subcommand>/ (default 'run')");
  sub->add_option("--config", opts.config_path,
                  "JSON config file; flat per-subcommand sections; flags win");
}

std::map<std::string, Setter> common_setters(CommonOpts& opts) {
  return {
      {"seed", [&](const json& v) { opts.seed = v.get<std::uint64_t>(); }},
      {"threads", [&](const json& v) { opts.threads = v.get<int>(); }},
      {"out", [&](const json& v) { opts.out = v.get<std::string>(); }},
      {"name", [&](const json& v) { opts.name = v.get<std::string>(); }},
  };
}

json tree_config_json(const dtrcv::TreeParams& tree) {
  return json{{"min-leaf", tree.min_leaf_per_arm}, {"max-depth", tree.max_depth}};
}

void report_written(const fs::path& dir, const std::vector<std::string>& files) {
  std::cerr << "wrote";
  for (const auto& f : files) std::cerr << ' ' << (dir / f).string();
  std::cerr << '\n';
}

int run_var_cmd(const CLI::App* sub, const CommonOpts& common_in,
                const dtrcv::VarStudyConfig& cfg_in) {
  CommonOpts common = common_in;
  dtrcv::VarStudyConfig cfg = cfg_in;
  auto setters = common_setters(common);
  setters["reps"] = [&](const json& v) { cfg.reps = v.get<int>(); };
  setters["j"] = [&](const json& v) { cfg.j_splits = v.get<int>(); };
  setters["q"] = [&](const json& v) { cfg.q = v.get<double>(); };
  setters["b"] = [&](const json& v) { cfg.half_reps = v.get<int>(); };
  setters["n"] = [&](const json& v) { cfg.sizes = v.get<std::vector<int>>(); };
  setters["scenario"] = [&](const json& v) {
    cfg.scenarios = v.get<std::vector<std::string>>();
  };
  setters["matched-n2"] = [&](const json& v) { cfg.matched_n2 = v.get<bool>(); };
  setters["min-leaf"] = [&](const json& v) { cfg.tree.min_leaf_per_arm = v.get<int>(); };
  setters["max-depth"] = [&](const json& v) { cfg.tree.max_depth = v.get<int>(); };
  apply_config(sub, common.config_path, setters);
  cfg.seed = common.seed;
  cfg.threads = common.threads;

  std::cerr << "var-study: " << cfg.sizes.size() * cfg.scenarios.size() << " cells x "
            << cfg.reps << " replicates\n";
  const dtrcv::VarStudyResult result = dtrcv::run_var_study(cfg);

  const fs::path dir = make_run_dir(common.out, sub->get_name(), common.name);
  json echo{{"seed", cfg.seed},
            {"threads", cfg.threads},
            {"reps", cfg.reps},
            {"j", cfg.j_splits},
            {"q", cfg.q},
            {"b", cfg.half_reps},
            {"n", cfg.sizes},
            {"scenario", cfg.scenarios},
            {"matched-n2", cfg.matched_n2},
            {"tree", tree_config_json(cfg.tree)}};
  write_file(dir / "summary.csv", result.summary_csv);
  write_file(dir / "replicates.csv", result.replicates_csv);
  write_file(dir / "run-config.json", echo.dump(2) + "\n");
  report_written(dir, {"summary.csv", "replicates.csv", "run-config.json"});
  return 0;
}

int run_dtr_cmd(const CLI::App* sub, const CommonOpts& common_in,
                const dtrcv::DtrStudyConfig& cfg_in) {
  CommonOpts common = common_in;
  dtrcv::DtrStudyConfig cfg = cfg_in;
  auto setters = common_setters(common);
  setters["reps"] = [&](const json& v) { cfg.reps = v.get<int>(); };
  setters["j"] = [&](const json& v) { cfg.j_splits = v.get<int>(); };
  setters["q"] = [&](const json& v) { cfg.q = v.get<double>(); };
  setters["b"] = [&](const json& v) { cfg.half_reps = v.get<int>(); };
  setters["p0"] = [&](const json& v) { cfg.p0 = v.get<double>(); };
  setters["n"] = [&](const json& v) { cfg.n = v.get<int>(); };
  setters["case"] = [&](const json& v) { cfg.cases = v.get<std::vector<std::string>>(); };
  setters["method"] = [&](const json& v) { cfg.methods = v.get<std::vector<std::string>>(); };
  setters["eval-draws"] = [&](const json& v) { cfg.eval_draws = v.get<int>(); };
  setters["min-leaf"] = [&](const json& v) { cfg.tree.min_leaf_per_arm = v.get<int>(); };
  setters["max-depth"] = [&](const json& v) { cfg.tree.max_depth = v.get<int>(); };
  apply_config(sub, common.config_path, setters);
  cfg.seed = common.seed;
  cfg.threads = common.threads;

  std::cerr << "dtr-study: " << cfg.cases.size() << " cases x " << cfg.methods.size()
            << " methods x " << cfg.reps << " replicates, n=" << cfg.n << "\n";
  const dtrcv::DtrStudyResult result = dtrcv::run_dtr_study(cfg);

  const fs::path dir = make_run_dir(common.out, sub->get_name(), common.name);
  json echo{{"seed", cfg.seed},   {"threads", cfg.threads},
            {"reps", cfg.reps},   {"j", cfg.j_splits},
            {"q", cfg.q},         {"b", cfg.half_reps},
            {"p0", cfg.p0},       {"n", cfg.n},
            {"case", cfg.cases},  {"method", cfg.methods},
            {"eval-draws", cfg.eval_draws}, {"tree", tree_config_json(cfg.tree)}};
  write_file(dir / "summary.csv", result.summary_csv);
  write_file(dir / "replicates.csv", result.replicates_csv);
  write_file(dir / "run-config.json", echo.dump(2) + "\n");
  report_written(dir, {"summary.csv", "replicates.csv", "run-config.json"});
  return 0;
}

int run_analyze_cmd(const CLI::App* sub, const CommonOpts& common_in,
                    const dtrcv::AnalyzeConfig& cfg_in, const std::string& data_in,
                    const std::string& mode_in) {
  CommonOpts common = common_in;
  dtrcv::AnalyzeConfig cfg = cfg_in;
  std::string data_path = data_in;
  std::string mode = mode_in;
  auto setters = common_setters(common);
  setters["j"] = [&](const json& v) { cfg.j_splits = v.get<int>(); };
  setters["q"] = [&](const json& v) { cfg.q = v.get<double>(); };
  setters["b"] = [&](const json& v) { cfg.half_reps = v.get<int>(); };
  setters["p0"] = [&](const json& v) { cfg.p0 = v.get<double>(); };
  setters["data"] = [&](const json& v) { data_path = v.get<std::string>(); };
  setters["mode"] = [&](const json& v) { mode = v.get<std::string>(); };
  apply_config(sub, common.config_path, setters);
  cfg.seed = common.seed;
  cfg.threads = common.threads;
  dtrcv::require(!data_path.empty(), dtrcv::ErrorKind::config,
                 "analyze needs --data <trial csv>");
  if (mode == "point") {
    cfg.mode = dtrcv::SelectionMode::point;
  } else if (mode == "test") {
    cfg.mode = dtrcv::SelectionMode::test;
  } else {
    dtrcv::fail(dtrcv::ErrorKind::config, "mode must be 'point' or 'test', got '" + mode + "'");
  }

  const dtrcv::TrialDataset trial = dtrcv::load_trial_csv(data_path);
  std::cerr << "analyze: " << trial.n() << " rows, " << trial.n_stages() << " stages, mode="
            << mode << "\n";
  const dtrcv::AnalyzeResult result = dtrcv::run_analyze(trial, cfg);

  const fs::path dir = make_run_dir(common.out, sub->get_name(), common.name);
  json echo{{"seed", cfg.seed}, {"threads", cfg.threads}, {"j", cfg.j_splits},
            {"q", cfg.q},       {"b", cfg.half_reps},     {"p0", cfg.p0},
            {"data", data_path}, {"mode", mode}};
  write_file(dir / "summary.csv", result.summary_csv);
  write_file(dir / "regime.json", result.regime_json);
  write_file(dir / "report.txt", result.report_text);
  write_file(dir / "run-config.json", echo.dump(2) + "\n");
  report_written(dir, {"summary.csv", "regime.json", "report.txt", "run-config.json"});
  std::cout << result.report_text;
  return 0;
}

int run_appendix_cmd(const CLI::App* sub, const CommonOpts& common_in,
                     const dtrcv::AppendixConfig& cfg_in) {
  CommonOpts common = common_in;
  dtrcv::AppendixConfig cfg = cfg_in;
  auto setters = common_setters(common);
  setters["reps"] = [&](const json& v) { cfg.reps = v.get<int>(); };
  setters["j"] = [&](const json& v) { cfg.j_splits = v.get<int>(); };
  setters["q"] = [&](const json& v) { cfg.q = v.get<double>(); };
  setters["n"] = [&](const json& v) { cfg.n = v.get<int>(); };
  setters["min-leaf"] = [&](const json& v) { cfg.min_leaf = v.get<int>(); };
  setters["max-depth"] = [&](const json& v) { cfg.max_depth = v.get<int>(); };
  apply_config(sub, common.config_path, setters);
  cfg.seed = common.seed;
  cfg.threads = common.threads;

  std::cerr << "appendix-b: n=" << cfg.n << ", " << cfg.reps << " replicates\n";
  const dtrcv::AppendixResult result = dtrcv::run_appendix(cfg);

  const fs::path dir = make_run_dir(common.out, sub->get_name(), common.name);
  json echo{{"seed", cfg.seed},     {"threads", cfg.threads}, {"reps", cfg.reps},
            {"j", cfg.j_splits},    {"q", cfg.q},             {"n", cfg.n},
            {"min-leaf", cfg.min_leaf}, {"max-depth", cfg.max_depth}};
  write_file(dir / "summary.csv", result.summary_csv);
  write_file(dir / "replicates.csv", result.replicates_csv);
  write_file(dir / "run-config.json", echo.dump(2) + "\n");
  report_written(dir, {"summary.csv", "replicates.csv", "run-config.json"});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app(
      "dtrcv: cross-validated contrast-model selection with a variance-calibrated "
      "cross-validation metric, plus backward-induction regime fitting and the "
      "matching simulation studies.\n\n"
      "Outputs go to <out>/<subcommand>/<name>/ as summary.csv, replicates.csv\n"
      "(regime.json and report.txt for analyze) and run-config.json. Runs are\n"
      "deterministic in (config, seed) for any thread count.");
  app.require_subcommand(1);

  CommonOpts var_common, dtr_common, ana_common, app_common;
  dtrcv::VarStudyConfig var_cfg;
  dtrcv::DtrStudyConfig dtr_cfg;
  dtrcv::AnalyzeConfig ana_cfg;
  dtrcv::AppendixConfig app_cfg;
  std::string ana_data, ana_mode = "point";

  CLI::App* var_sub = app.add_subcommand(
      "var-study",
      "Variance-estimator study on the single-stage generator.\n"
      "summary.csv: n,scenario,reps,av_r_cv,var_star,rho_half,var_rho_half,rho_adj,"
      "var_rho_adj,var_rho0,var_rhoq,var_half,var_matched_n2 (one row per cell).\n"
      "replicates.csv: the same quantities per replicate.");
  add_common(var_sub, var_common);
  var_sub->add_option("--reps", var_cfg.reps, "replicates per cell (default 200)");
  var_sub->add_option("--j", var_cfg.j_splits, "cross-validation splits (default 100)");
  var_sub->add_option("--q", var_cfg.q, "validation proportion (default 0.2)");
  var_sub->add_option("--b", var_cfg.half_reps, "half-sample repetitions (default 50)");
  var_sub->add_option("--n", var_cfg.sizes, "sample sizes (default 200 500 1000 2000)");
  var_sub->add_option("--scenario", var_cfg.scenarios, "scenario labels (default d e f)");
  var_sub->add_flag("--matched-n2,!--no-matched-n2", var_cfg.matched_n2,
                    "also estimate the variance at the matched validation size (default on)");
  var_sub->add_option("--min-leaf", var_cfg.tree.min_leaf_per_arm,
                      "minimum per-arm leaf size for tree candidates (default 10)");
  var_sub->add_option("--max-depth", var_cfg.tree.max_depth, "tree depth cap (default 5)");

  CLI::App* dtr_sub = app.add_subcommand(
      "dtr-study",
      "Two-stage regime-selection study.\n"
      "summary.csv: case,method,reps,acc1_mean,acc1_sd,acc2_mean,acc2_sd,both_mean,"
      "both_sd,value_mean,value_sd,tree_pct_stage1,tree_pct_stage2 (one row per "
      "case x method; NA selection columns for forced methods).\n"
      "replicates.csv: per-replicate value, accuracies and tree-selection flags.");
  add_common(dtr_sub, dtr_common);
  dtr_sub->add_option("--reps", dtr_cfg.reps, "replicates per case (default 200)");
  dtr_sub->add_option("--j", dtr_cfg.j_splits, "cross-validation splits (default 100)");
  dtr_sub->add_option("--q", dtr_cfg.q, "validation proportion (default 0.2)");
  dtr_sub->add_option("--b", dtr_cfg.half_reps, "half-sample repetitions (default 50)");
  dtr_sub->add_option("--p0", dtr_cfg.p0, "test-mode significance threshold (default 0.05)");
  dtr_sub->add_option("--n", dtr_cfg.n, "sample size per replicate (default 1000)");
  dtr_sub->add_option("--case", dtr_cfg.cases, "case labels (default i ii iii iv)");
  dtr_sub->add_option("--method", dtr_cfg.methods,
                      "methods (default mccv_p mccv linear tree)");
  dtr_sub->add_option("--eval-draws", dtr_cfg.eval_draws,
                      "fresh trajectories per regime evaluation (default 100000)");
  dtr_sub->add_option("--min-leaf", dtr_cfg.tree.min_leaf_per_arm,
                      "minimum per-arm leaf size for tree candidates (default 10)");
  dtr_sub->add_option("--max-depth", dtr_cfg.tree.max_depth, "tree depth cap (default 5)");

  CLI::App* ana_sub = app.add_subcommand(
      "analyze",
      "Backward-induction model selection on a trial CSV.\n"
      "Trial schema: id, s<k>_<name> feature columns, a<k> actions in {0,1}, y, and "
      "optional reached_s<k> flags; stage-k rows with reached_s<k>=0 may leave that "
      "stage's fields empty.\n"
      "summary.csv: stage,row,name,vs,r_cv,sd,rho_adj,p_value,degenerate,chosen "
      "(candidate rows plus one pairwise test row per stage).\n"
      "regime.json: fitted decision rules; report.txt: the same tables as text.");
  add_common(ana_sub, ana_common);
  ana_sub->add_option("--data", ana_data, "trial CSV path (required)");
  ana_sub->add_option("--mode", ana_mode, "selection mode: point or test (default point)");
  ana_sub->add_option("--j", ana_cfg.j_splits, "cross-validation splits (default 100)");
  ana_sub->add_option("--q", ana_cfg.q, "validation proportion (default 0.2)");
  ana_sub->add_option("--b", ana_cfg.half_reps, "half-sample repetitions (default 50)");
  ana_sub->add_option("--p0", ana_cfg.p0, "test-mode significance threshold (default 0.05)");

  CLI::App* app_sub = app.add_subcommand(
      "appendix-b",
      "Mean-regression benchmark with direct response labels.\n"
      "summary.csv: model,reps,av_r_cv,var_star,var_rhoq for models 1, 1+x1, 1+x1+x2, "
      "tree and the two comparison rows.\n"
      "replicates.csv: model,rep,r_cv,var_rhoq.");
  add_common(app_sub, app_common);
  app_sub->add_option("--reps", app_cfg.reps, "replicates (default 200)");
  app_sub->add_option("--j", app_cfg.j_splits, "cross-validation splits (default 100)");
  app_sub->add_option("--q", app_cfg.q, "validation proportion (default 0.2)");
  app_sub->add_option("--n", app_cfg.n, "sample size per replicate (default 200)");
  app_sub->add_option("--min-leaf", app_cfg.min_leaf,
                      "minimum per-arm leaf size for the tree row (default 10)");
  app_sub->add_option("--max-depth", app_cfg.max_depth, "tree depth cap (default 5)");

  try {
    app.parse(argc, argv);
    if (var_sub->parsed()) return run_var_cmd(var_sub, var_common, var_cfg);
    if (dtr_sub->parsed()) return run_dtr_cmd(dtr_sub, dtr_common, dtr_cfg);
    if (ana_sub->parsed())
      return run_analyze_cmd(ana_sub, ana_common, ana_cfg, ana_data, ana_mode);
    if (app_sub->parsed()) return run_appendix_cmd(app_sub, app_common, app_cfg);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const dtrcv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
