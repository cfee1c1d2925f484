#include "dtrcv/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dtrcv/parallel.hpp"
#include "dtrcv/rng.hpp"
#include "dtrcv/serialize.hpp"
#include "dtrcv/stats.hpp"

namespace dtrcv {

namespace {

constexpr std::uint64_t kVarGenTag = 0x56415247ULL;
constexpr std::uint64_t kVarCvTag = 0x56415243ULL;
constexpr std::uint64_t kDtrGenTag = 0x44545247ULL;
constexpr std::uint64_t kDtrSelTag = 0x44545253ULL;
constexpr std::uint64_t kDtrEvalTag = 0x44545245ULL;
constexpr std::uint64_t kAppGenTag = 0x41505047ULL;
constexpr std::uint64_t kAppCvTag = 0x41505043ULL;
constexpr std::uint64_t kStageTag = 0x414e4c5aULL;
constexpr std::uint64_t kTableTag = 0x7461626cULL;
constexpr std::uint64_t kPairTag = 0x70616972ULL;

std::string opt_g(double value, bool present) { return present ? format_g(value) : "NA"; }

double catalog_mean(const std::vector<VarReplicate>& reps, const std::string& key,
                    bool* all_present = nullptr) {
  MomentAccumulator acc;
  bool present = true;
  for (const auto& rep : reps) {
    const auto it = rep.rho.catalog.find(key);
    if (it == rep.rho.catalog.end()) {
      present = false;
      continue;
    }
    acc.add(it->second);
  }
  if (all_present != nullptr) *all_present = present && acc.n > 0;
  return acc.n > 0 ? acc.mean() : 0.0;
}

double catalog_or_zero(const RhoReport& rho, const std::string& key) {
  const auto it = rho.catalog.find(key);
  return it == rho.catalog.end() ? 0.0 : it->second;
}

}  // namespace

VarStudyResult run_var_study(const VarStudyConfig& cfg) {
  require(cfg.reps >= 1, ErrorKind::config, "need at least one replicate");
  require(!cfg.sizes.empty() && !cfg.scenarios.empty(), ErrorKind::config,
          "need at least one sample size and one scenario");
  std::vector<std::pair<int, ScenarioParams>> cells;
  for (const int n : cfg.sizes) {
    require(n >= 50, ErrorKind::config, "sample sizes below 50 are not supported");
    for (const auto& label : cfg.scenarios) {
      cells.emplace_back(n, scenario_by_label(label));
    }
  }

  const int n_cells = static_cast<int>(cells.size());
  const int jobs = n_cells * cfg.reps;
  std::vector<VarReplicate> flat(static_cast<std::size_t>(jobs));
  parallel_for(jobs, cfg.threads, [&](int idx) {
    const int cell = idx / cfg.reps;
    const int rep = idx % cfg.reps;
    const auto& [n, params] = cells[static_cast<std::size_t>(cell)];
    Rng gen_rng(derive_seed(cfg.seed, kVarGenTag, static_cast<std::uint64_t>(cell),
                            static_cast<std::uint64_t>(rep)));
    const SingleStageDraw draw = gen_single_stage(n, params, gen_rng);
    SplitPlan plan;
    plan.j_splits = cfg.j_splits;
    plan.q = cfg.q;
    plan.seed = derive_seed(cfg.seed, kVarCvTag, static_cast<std::uint64_t>(cell),
                            static_cast<std::uint64_t>(rep));
    plan.threads = 1;
    const LossSpec loss = difference_loss(make_candidate(linear_spec({"l1", "l2"})),
                                          make_candidate(tree_spec({"l1", "l2"}, cfg.tree)));
    const VariancePipeline pipe =
        run_variance_pipeline(draw.data, plan, loss, cfg.half_reps, cfg.matched_n2);
    auto& slot = flat[static_cast<std::size_t>(idx)];
    slot.r_cv = pipe.cv.r_cv;
    slot.s_r_sq = pipe.cv.s_r_sq;
    slot.s_u_sq = pipe.cv.s_u_sq;
    slot.rho = pipe.rho;
  });

  VarStudyResult result;
  std::ostringstream summary, replicates;
  summary << "n,scenario,reps," << rho_report_csv_header() << '\n';
  replicates << "n,scenario,rep,r_cv,s_r_sq,s_u_sq,rho_half,inflation,rho_adj,var_rho_half,"
                "var_rho_adj,var_rho0,var_rhoq,var_half,var_matched_n2\n";
  for (int cell = 0; cell < n_cells; ++cell) {
    VarCell out_cell;
    out_cell.n = cells[static_cast<std::size_t>(cell)].first;
    out_cell.scenario = cfg.scenarios[static_cast<std::size_t>(cell) % cfg.scenarios.size()];
    MomentAccumulator rho_h, infl, rho_a;
    std::vector<double> r_cvs;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const auto& slot = flat[static_cast<std::size_t>(cell * cfg.reps + rep)];
      out_cell.replicates.push_back(slot);
      rho_h.add(slot.rho.rho_half);
      infl.add(slot.rho.inflation);
      rho_a.add(slot.rho.rho_adj);
      r_cvs.push_back(slot.r_cv);
      replicates << out_cell.n << ',' << out_cell.scenario << ',' << rep << ','
                 << format_g(slot.r_cv) << ',' << format_g(slot.s_r_sq) << ','
                 << format_g(slot.s_u_sq) << ',' << format_g(slot.rho.rho_half) << ','
                 << format_g(slot.rho.inflation) << ',' << format_g(slot.rho.rho_adj) << ','
                 << format_g(catalog_or_zero(slot.rho, "proposed_half")) << ','
                 << format_g(catalog_or_zero(slot.rho, "proposed_adj")) << ','
                 << format_g(catalog_or_zero(slot.rho, "rho0")) << ','
                 << format_g(catalog_or_zero(slot.rho, "rhoq")) << ','
                 << format_g(catalog_or_zero(slot.rho, "half_naive")) << ','
                 << opt_g(catalog_or_zero(slot.rho, "matched_n2"),
                          slot.rho.catalog.count("matched_n2") > 0)
                 << '\n';
    }
    RhoReport mean_rho;
    mean_rho.rho_half = rho_h.mean();
    mean_rho.inflation = infl.mean();
    mean_rho.rho_adj = rho_a.mean();
    for (const char* key : {"proposed_half", "proposed_adj", "rho0", "rhoq", "half_naive"}) {
      mean_rho.catalog[key] = catalog_mean(out_cell.replicates, key);
    }
    bool have_matched = false;
    const double matched = catalog_mean(out_cell.replicates, "matched_n2", &have_matched);
    if (have_matched) mean_rho.catalog["matched_n2"] = matched;
    const std::optional<double> var_star =
        cfg.reps >= 2 ? std::optional<double>(sample_variance(r_cvs)) : std::nullopt;
    summary << out_cell.n << ',' << out_cell.scenario << ',' << cfg.reps << ','
            << rho_report_csv_row(mean_rho, mean(r_cvs), var_star) << '\n';
    result.cells.push_back(std::move(out_cell));
  }
  result.summary_csv = summary.str();
  result.replicates_csv = replicates.str();
  return result;
}

namespace {

SelectionPolicy make_method_policy(const std::string& method, const DtrStudyConfig& cfg) {
  const ModelSpec lin = linear_spec({"l1", "l2"});
  const ModelSpec tre = tree_spec({"l1", "l2"}, cfg.tree);
  SelectionPolicy policy;
  policy.p0 = cfg.p0;
  policy.half_reps = cfg.half_reps;
  if (method == "mccv_p") {
    policy.mode = SelectionMode::test;
    policy.stage_candidates = {{lin, tre}};
  } else if (method == "mccv") {
    policy.mode = SelectionMode::point;
    policy.stage_candidates = {{lin, tre}};
  } else if (method == "linear") {
    policy.mode = SelectionMode::point;
    policy.stage_candidates = {{lin}};
  } else if (method == "tree") {
    policy.mode = SelectionMode::point;
    policy.stage_candidates = {{tre}};
  } else {
    fail(ErrorKind::config, "unknown method '" + method +
                                "' (expected mccv_p, mccv, linear, or tree)");
  }
  return policy;
}

std::string pct_or_na(const std::vector<DtrReplicate>& reps, int DtrReplicate::*flag) {
  long long chosen = 0, eligible = 0;
  for (const auto& rep : reps) {
    const int v = rep.*flag;
    if (v < 0) continue;
    ++eligible;
    chosen += v;
  }
  if (eligible == 0) return "NA";
  return format_g(100.0 * static_cast<double>(chosen) / static_cast<double>(eligible));
}

}  // namespace

DtrStudyResult run_dtr_study(const DtrStudyConfig& cfg) {
  require(cfg.reps >= 1, ErrorKind::config, "need at least one replicate");
  require(!cfg.cases.empty() && !cfg.methods.empty(), ErrorKind::config,
          "need at least one case and one method");
  require(cfg.n >= 50, ErrorKind::config, "sample sizes below 50 are not supported");
  require(cfg.eval_draws >= 100, ErrorKind::config, "need at least 100 evaluation draws");
  std::vector<TwoStageScenario> scenarios;
  for (const auto& label : cfg.cases) scenarios.push_back(case_by_label(label));
  std::vector<SelectionPolicy> policies;
  for (const auto& method : cfg.methods) policies.push_back(make_method_policy(method, cfg));

  const int n_cases = static_cast<int>(cfg.cases.size());
  const int n_methods = static_cast<int>(cfg.methods.size());
  const int jobs = n_cases * cfg.reps;
  std::vector<DtrReplicate> flat(static_cast<std::size_t>(jobs) *
                                 static_cast<std::size_t>(n_methods));
  parallel_for(jobs, cfg.threads, [&](int idx) {
    const int case_idx = idx / cfg.reps;
    const int rep = idx % cfg.reps;
    const TwoStageScenario& sc = scenarios[static_cast<std::size_t>(case_idx)];
    Rng gen_rng(derive_seed(cfg.seed, kDtrGenTag, static_cast<std::uint64_t>(case_idx),
                            static_cast<std::uint64_t>(rep)));
    const TwoStageDraw draw = gen_two_stage(cfg.n, sc, gen_rng);
    SplitPlan plan;
    plan.j_splits = cfg.j_splits;
    plan.q = cfg.q;
    plan.seed = derive_seed(cfg.seed, kDtrSelTag, static_cast<std::uint64_t>(case_idx),
                            static_cast<std::uint64_t>(rep));
    plan.threads = 1;
    for (int m = 0; m < n_methods; ++m) {
      const Regime regime = run_backward(draw.data, policies[static_cast<std::size_t>(m)], plan);
      Rng eval_rng(derive_seed(cfg.seed, kDtrEvalTag, static_cast<std::uint64_t>(case_idx),
                               static_cast<std::uint64_t>(rep)));
      const RegimeEvaluation eval = evaluate_regime(regime, sc, cfg.eval_draws, eval_rng);
      DtrReplicate out;
      out.value = eval.value;
      out.value_se = eval.value_se;
      out.acc_stage1 = eval.accuracy_stage1;
      out.acc_stage2 = eval.accuracy_stage2;
      out.acc_both = eval.accuracy_both;
      const auto& lists = policies[static_cast<std::size_t>(m)].stage_candidates;
      if (lists[0].size() > 1) {
        out.tree_stage1 = regime.chosen_specs[0].kind == ModelKind::tree ? 1 : 0;
        out.tree_stage2 = regime.chosen_specs[1].kind == ModelKind::tree ? 1 : 0;
      }
      flat[(static_cast<std::size_t>(case_idx) * static_cast<std::size_t>(cfg.reps) +
            static_cast<std::size_t>(rep)) *
               static_cast<std::size_t>(n_methods) +
           static_cast<std::size_t>(m)] = out;
    }
  });

  DtrStudyResult result;
  std::ostringstream summary, replicates;
  summary << "case,method,reps,acc1_mean,acc1_sd,acc2_mean,acc2_sd,both_mean,both_sd,"
             "value_mean,value_sd,tree_pct_stage1,tree_pct_stage2\n";
  replicates << "case,method,rep,value,value_se,acc_stage1,acc_stage2,acc_both,"
                "tree_stage1,tree_stage2\n";
  for (int case_idx = 0; case_idx < n_cases; ++case_idx) {
    for (int m = 0; m < n_methods; ++m) {
      DtrMethodCell cell;
      cell.case_label = cfg.cases[static_cast<std::size_t>(case_idx)];
      cell.method = cfg.methods[static_cast<std::size_t>(m)];
      std::vector<double> acc1, acc2, both, values;
      for (int rep = 0; rep < cfg.reps; ++rep) {
        const auto& slot =
            flat[(static_cast<std::size_t>(case_idx) * static_cast<std::size_t>(cfg.reps) +
                  static_cast<std::size_t>(rep)) *
                     static_cast<std::size_t>(n_methods) +
                 static_cast<std::size_t>(m)];
        cell.replicates.push_back(slot);
        acc1.push_back(slot.acc_stage1);
        acc2.push_back(slot.acc_stage2);
        both.push_back(slot.acc_both);
        values.push_back(slot.value);
        replicates << cell.case_label << ',' << cell.method << ',' << rep << ','
                   << format_g(slot.value) << ',' << format_g(slot.value_se) << ','
                   << format_g(slot.acc_stage1) << ',' << format_g(slot.acc_stage2) << ','
                   << format_g(slot.acc_both) << ','
                   << (slot.tree_stage1 < 0 ? "NA" : std::to_string(slot.tree_stage1)) << ','
                   << (slot.tree_stage2 < 0 ? "NA" : std::to_string(slot.tree_stage2)) << '\n';
      }
      const bool spread = cfg.reps >= 2;
      summary << cell.case_label << ',' << cell.method << ',' << cfg.reps << ','
              << format_g(mean(acc1)) << ',' << opt_g(std::sqrt(sample_variance(acc1)), spread)
              << ',' << format_g(mean(acc2)) << ','
              << opt_g(std::sqrt(sample_variance(acc2)), spread) << ',' << format_g(mean(both))
              << ',' << opt_g(std::sqrt(sample_variance(both)), spread) << ','
              << format_g(mean(values)) << ','
              << opt_g(std::sqrt(sample_variance(values)), spread) << ','
              << pct_or_na(cell.replicates, &DtrReplicate::tree_stage1) << ','
              << pct_or_na(cell.replicates, &DtrReplicate::tree_stage2) << '\n';
      result.cells.push_back(std::move(cell));
    }
  }
  result.summary_csv = summary.str();
  result.replicates_csv = replicates.str();
  return result;
}

namespace {

std::vector<ModelSpec> stage_candidates_for(const AnalyzeConfig& cfg,
                                            const std::vector<std::string>& names) {
  if (!cfg.candidates.empty()) return cfg.candidates;
  return {linear_spec(names), tree_spec(names)};
}

CandidateRow candidate_row(const StageDataset& ds, const SplitPlan& plan, const ModelSpec& spec,
                           int half_reps) {
  const LossSpec loss = single_loss(make_candidate(spec));
  const CvReport cv = run_mccv(ds, plan, loss);
  const AdjustedVariance adj = adjusted_variance(ds, plan, loss, half_reps, cv);
  CandidateRow row;
  row.name = spec.label();
  row.r_cv = cv.r_cv;
  row.sd = std::sqrt(std::max(adj.variance, 0.0));
  row.rho_adj = adj.rho_adj;
  row.degenerate = adj.degenerate;
  return row;
}

}  // namespace

AnalyzeResult run_analyze(const TrialDataset& trial, const AnalyzeConfig& cfg) {
  validate_trial_dataset(trial);
  const int n_stages = trial.n_stages();

  AnalyzeResult result;
  result.stages.resize(static_cast<std::size_t>(n_stages));
  result.regime.chosen_specs.resize(static_cast<std::size_t>(n_stages));
  result.regime.rules.resize(static_cast<std::size_t>(n_stages));
  result.regime.reports.resize(static_cast<std::size_t>(n_stages));

  SelectionPolicy policy;
  policy.mode = cfg.mode;
  policy.p0 = cfg.p0;
  policy.half_reps = cfg.half_reps;

  Eigen::VectorXd v_next = trial.outcome;
  for (int k = n_stages - 1; k >= 0; --k) {
    const auto candidates =
        stage_candidates_for(cfg, trial.stages[static_cast<std::size_t>(k)].feature_names);
    require(candidates.size() >= 2, ErrorKind::config,
            "analysis needs at least two candidate models");
    const auto cross = stage_cross_section(trial, k, v_next);
    SplitPlan stage_plan;
    stage_plan.j_splits = cfg.j_splits;
    stage_plan.q = cfg.q;
    stage_plan.seed = derive_seed(cfg.seed, kStageTag, static_cast<std::uint64_t>(k + 1));
    stage_plan.threads = cfg.threads;

    StageSelectionReport report;
    try {
      report = select_stage_model(cross.first, candidates, policy, stage_plan);
    } catch (const Error& e) {
      fail(e.kind(), "stage " + std::to_string(k + 1) + ": " + e.what());
    }
    report.stage = k + 1;

    StageAnalysis& stage = result.stages[static_cast<std::size_t>(k)];
    stage.stage = k + 1;
    stage.chosen_index = report.chosen_index;
    stage.chosen_name = report.chosen.label();
    SplitPlan table_plan = stage_plan;
    table_plan.seed = derive_seed(stage_plan.seed, kTableTag);
    for (const ModelSpec& spec : candidates) {
      stage.candidates.push_back(candidate_row(cross.first, table_plan, spec, cfg.half_reps));
    }

    int challenger = report.chosen_index;
    if (challenger == 0) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 1; c < candidates.size(); ++c) {
        if (stage.candidates[c].r_cv < best) {
          best = stage.candidates[c].r_cv;
          challenger = static_cast<int>(c);
        }
      }
    }
    {
      SplitPlan pair_plan = stage_plan;
      pair_plan.seed = derive_seed(stage_plan.seed, kPairTag);
      const LossSpec loss =
          difference_loss(make_candidate(candidates[0]),
                          make_candidate(candidates[static_cast<std::size_t>(challenger)]));
      const CvReport cv = run_mccv(cross.first, pair_plan, loss);
      const AdjustedVariance adj =
          adjusted_variance(cross.first, pair_plan, loss, cfg.half_reps, cv);
      const PValue p = selection_pvalue(cv.r_cv, adj.variance);
      stage.test.preferred = candidates[0].label();
      stage.test.challenger = candidates[static_cast<std::size_t>(challenger)].label();
      stage.test.r_cv = cv.r_cv;
      stage.test.sd = std::sqrt(std::max(adj.variance, 0.0));
      stage.test.rho_adj = adj.rho_adj;
      stage.test.p_value = p.value;
      stage.test.degenerate = adj.degenerate || p.degenerate;
    }

    v_next = pseudo_value_update(trial, k, v_next, report.fitted);
    result.regime.chosen_specs[static_cast<std::size_t>(k)] = report.chosen;
    result.regime.rules[static_cast<std::size_t>(k)] = report.fitted;
    result.regime.reports[static_cast<std::size_t>(k)] = std::move(report);
  }

  result.regime_json = to_json(result.regime).dump(2) + "\n";

  std::ostringstream csv, text;
  csv << "stage,row,name,vs,r_cv,sd,rho_adj,p_value,degenerate,chosen\n";
  for (const auto& stage : result.stages) {
    text << "Stage " << stage.stage << "\n";
    text << "  candidate risks:\n";
    for (std::size_t c = 0; c < stage.candidates.size(); ++c) {
      const auto& row = stage.candidates[c];
      csv << stage.stage << ",candidate," << row.name << ",," << format_g(row.r_cv) << ','
          << format_g(row.sd) << ',' << format_g(row.rho_adj) << ",,"
          << (row.degenerate ? 1 : 0) << ','
          << (static_cast<int>(c) == stage.chosen_index ? 1 : 0) << '\n';
      text << "    " << row.name << ": r_cv=" << format_g(row.r_cv, 6)
           << "  sd=" << format_g(row.sd, 6) << "  rho_adj=" << format_g(row.rho_adj, 6)
           << (row.degenerate ? "  [degenerate]" : "") << "\n";
    }
    const auto& t = stage.test;
    csv << stage.stage << ",test," << t.preferred << ',' << t.challenger << ','
        << format_g(t.r_cv) << ',' << format_g(t.sd) << ',' << format_g(t.rho_adj) << ','
        << format_g(t.p_value) << ',' << (t.degenerate ? 1 : 0) << ",\n";
    text << "  test '" << t.preferred << "' vs '" << t.challenger
         << "': r_cv=" << format_g(t.r_cv, 6) << "  sd=" << format_g(t.sd, 6)
         << "  p=" << format_g(t.p_value, 6) << (t.degenerate ? "  [degenerate]" : "") << "\n";
    text << "  chosen: " << stage.chosen_name << "\n\n";
  }
  result.summary_csv = csv.str();
  result.report_text = text.str();
  return result;
}

AppendixResult run_appendix(const AppendixConfig& cfg) {
  require(cfg.reps >= 1, ErrorKind::config, "need at least one replicate");
  require(cfg.n >= 20, ErrorKind::config, "need at least twenty rows");

  TreeParams tree;
  tree.honest = false;
  tree.prune = false;
  tree.min_leaf_per_arm = cfg.min_leaf;
  tree.max_depth = cfg.max_depth;

  const Candidate one = make_regression_candidate("1", {});
  const Candidate one_x1 = make_regression_candidate("1+x1", {"x1"});
  const Candidate one_x1_x2 = make_regression_candidate("1+x1+x2", {"x1", "x2"});
  const Candidate tree_cand = make_regression_tree_candidate("tree", {"x1", "x2"}, tree);

  struct RowSpec {
    std::string name;
    LossSpec loss;
  };
  const std::vector<RowSpec> row_specs = {
      {"1", single_loss(one, LabelKind::direct_response)},
      {"1+x1", single_loss(one_x1, LabelKind::direct_response)},
      {"1+x1+x2", single_loss(one_x1_x2, LabelKind::direct_response)},
      {"tree", single_loss(tree_cand, LabelKind::direct_response)},
      {"1+x1 vs 1+x1+x2", difference_loss(one_x1, one_x1_x2, LabelKind::direct_response)},
      {"1+x1 vs tree", difference_loss(one_x1, tree_cand, LabelKind::direct_response)},
  };
  const int n_rows = static_cast<int>(row_specs.size());

  struct Slot {
    double r_cv = 0.0;
    double var_rhoq = 0.0;
  };
  std::vector<Slot> flat(static_cast<std::size_t>(cfg.reps) * static_cast<std::size_t>(n_rows));
  parallel_for(cfg.reps, cfg.threads, [&](int rep) {
    Rng gen_rng(derive_seed(cfg.seed, kAppGenTag, static_cast<std::uint64_t>(rep)));
    const StageDataset ds = gen_regression_benchmark(cfg.n, gen_rng);
    for (int r = 0; r < n_rows; ++r) {
      SplitPlan plan;
      plan.j_splits = cfg.j_splits;
      plan.q = cfg.q;
      plan.seed = derive_seed(cfg.seed, kAppCvTag, static_cast<std::uint64_t>(rep),
                              static_cast<std::uint64_t>(r));
      plan.threads = 1;
      const CvReport cv = run_mccv(ds, plan, row_specs[static_cast<std::size_t>(r)].loss);
      auto& slot = flat[static_cast<std::size_t>(rep) * static_cast<std::size_t>(n_rows) +
                        static_cast<std::size_t>(r)];
      slot.r_cv = cv.r_cv;
      slot.var_rhoq = variance_from_rho(cv.s_r_sq, plan.q, plan.j_splits);
    }
  });

  AppendixResult result;
  std::ostringstream summary, replicates;
  summary << "model,reps,av_r_cv,var_star,var_rhoq\n";
  replicates << "model,rep,r_cv,var_rhoq\n";
  for (int r = 0; r < n_rows; ++r) {
    AppendixRowResult row;
    row.name = row_specs[static_cast<std::size_t>(r)].name;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const auto& slot = flat[static_cast<std::size_t>(rep) * static_cast<std::size_t>(n_rows) +
                              static_cast<std::size_t>(r)];
      row.r_cv.push_back(slot.r_cv);
      row.var_rhoq.push_back(slot.var_rhoq);
      replicates << row.name << ',' << rep << ',' << format_g(slot.r_cv) << ','
                 << format_g(slot.var_rhoq) << '\n';
    }
    summary << row.name << ',' << cfg.reps << ',' << format_g(mean(row.r_cv)) << ','
            << opt_g(sample_variance(row.r_cv), cfg.reps >= 2) << ','
            << format_g(mean(row.var_rhoq)) << '\n';
    result.rows.push_back(std::move(row));
  }
  result.summary_csv = summary.str();
  result.replicates_csv = replicates.str();
  return result;
}

}  // namespace dtrcv
