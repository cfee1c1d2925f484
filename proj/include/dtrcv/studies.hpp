#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtrcv/dtr.hpp"
#include "dtrcv/estimators.hpp"
#include "dtrcv/sim.hpp"
#include "dtrcv/variance.hpp"

namespace dtrcv {

// Variance benchmark: replicated single-stage datasets, linear-versus-tree
// difference risk, and the full catalog of variance estimates per replicate.
struct VarStudyConfig {
  std::vector<int> sizes = {200, 500, 1000, 2000};
  std::vector<std::string> scenarios = {"d", "e", "f"};
  int reps = 200;
  int j_splits = 100;
  double q = 0.2;
  int half_reps = 50;
  bool matched_n2 = true;  // also run the doubled-proportion halvings
  TreeParams tree;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct VarReplicate {
  double r_cv = 0.0;
  double s_r_sq = 0.0;
  double s_u_sq = 0.0;
  RhoReport rho;
};

struct VarCell {
  int n = 0;
  std::string scenario;
  std::vector<VarReplicate> replicates;
};

struct VarStudyResult {
  std::vector<VarCell> cells;
  std::string summary_csv;     // one row per cell, replicate averages
  std::string replicates_csv;  // one row per replicate
};

VarStudyResult run_var_study(const VarStudyConfig& cfg);

// Regime benchmark: two-stage datasets, four selection methods, decision
// accuracy and Monte Carlo value per replicate.
struct DtrStudyConfig {
  std::vector<std::string> cases = {"i", "ii", "iii", "iv"};
  std::vector<std::string> methods = {"mccv_p", "mccv", "linear", "tree"};
  int n = 1000;
  int reps = 200;
  int j_splits = 100;
  double q = 0.2;
  int half_reps = 50;
  double p0 = 0.05;
  int eval_draws = 100000;
  TreeParams tree;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct DtrReplicate {
  double value = 0.0;
  double value_se = 0.0;
  double acc_stage1 = 0.0;
  double acc_stage2 = 0.0;
  double acc_both = 0.0;
  int tree_stage1 = -1;  // 1 tree chosen, 0 linear chosen, -1 nothing to choose
  int tree_stage2 = -1;
};

struct DtrMethodCell {
  std::string case_label;
  std::string method;
  std::vector<DtrReplicate> replicates;
};

struct DtrStudyResult {
  std::vector<DtrMethodCell> cells;  // case-major, method-minor
  std::string summary_csv;
  std::string replicates_csv;
};

DtrStudyResult run_dtr_study(const DtrStudyConfig& cfg);

// Model selection report on a user dataset: per-stage candidate risks with
// the adjusted-correlation dispersion, a preferred-versus-challenger test
// row, and the assembled regime.
struct AnalyzeConfig {
  SelectionMode mode = SelectionMode::point;
  double p0 = 0.05;
  int j_splits = 100;
  double q = 0.2;
  int half_reps = 50;
  std::vector<ModelSpec> candidates;  // empty: linear and honest tree on all features
  std::uint64_t seed = 0;
  int threads = 1;
};

struct CandidateRow {
  std::string name;
  double r_cv = 0.0;
  double sd = 0.0;       // sqrt of the adjusted-correlation variance
  double rho_adj = 0.0;
  bool degenerate = false;
};

struct PairwiseRow {
  std::string preferred;
  std::string challenger;
  double r_cv = 0.0;
  double sd = 0.0;
  double rho_adj = 0.0;
  double p_value = 0.5;
  bool degenerate = false;
};

struct StageAnalysis {
  int stage = 0;  // 1-based
  std::vector<CandidateRow> candidates;
  PairwiseRow test;
  int chosen_index = 0;
  std::string chosen_name;
};

struct AnalyzeResult {
  std::vector<StageAnalysis> stages;  // stage 1 first
  Regime regime;
  std::string regime_json;
  std::string summary_csv;
  std::string report_text;  // human-readable tables
};

AnalyzeResult run_analyze(const TrialDataset& trial, const AnalyzeConfig& cfg);

// Regression benchmark: replicated datasets, four mean models plus two
// pairwise comparisons, risk and the q-approximation variance per row.
struct AppendixConfig {
  int n = 200;
  int reps = 200;
  int j_splits = 100;
  double q = 0.2;
  int min_leaf = 10;
  int max_depth = 5;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct AppendixRowResult {
  std::string name;
  std::vector<double> r_cv;      // per replicate
  std::vector<double> var_rhoq;  // per replicate
};

struct AppendixResult {
  std::vector<AppendixRowResult> rows;
  std::string summary_csv;
  std::string replicates_csv;
};

AppendixResult run_appendix(const AppendixConfig& cfg);

}  // namespace dtrcv
