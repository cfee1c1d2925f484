#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dtrcv/data.hpp"
#include "dtrcv/estimators.hpp"

namespace dtrcv {

// A named way to fit a model on a training set. The seed makes any internal
// randomization (honest halving, pruning folds) reproducible per split.
struct Candidate {
  std::string name;
  std::function<FittedContrast(const StageDataset&, std::uint64_t)> fit;
};

// Treatment-contrast candidate from a spec.
Candidate make_candidate(const ModelSpec& spec);
// Mean-regression candidates for the regression benchmark.
Candidate make_regression_candidate(std::string name, std::vector<std::string> covariates);
Candidate make_regression_tree_candidate(std::string name, std::vector<std::string> covariates,
                                         TreeParams params);

enum class LossMode { single, difference };

// Where the per-row target comes from: a matched opposite-arm surrogate for
// treatment contrasts, or the observed response directly for regression.
enum class LabelKind { matched_surrogate, direct_response };

struct LossSpec {
  LossMode mode = LossMode::single;
  LabelKind labels = LabelKind::matched_surrogate;
  Candidate a;  // preferred model
  Candidate b;  // challenger; only used in difference mode
};

LossSpec single_loss(Candidate a, LabelKind labels = LabelKind::matched_surrogate);
// Difference losses are oriented "preferred minus challenger": positive values
// favor the challenger.
LossSpec difference_loss(Candidate a, Candidate b,
                         LabelKind labels = LabelKind::matched_surrogate);

struct SplitPlan {
  int j_splits = 100;
  double q = 0.2;         // validation share of each arm
  std::uint64_t seed = 0;
  int threads = 1;
};

struct SplitIndices {
  std::vector<int> train;
  std::vector<int> validation;
};

// The j-th arm-stratified split of the plan. Each arm contributes
// round-half-away-from-zero(q * arm size) validation rows; both sides of both
// arms must stay inhabited. Deterministic in (plan.seed, j) alone.
SplitIndices stratified_split(const StageDataset& ds, const SplitPlan& plan, int j);

struct SplitEval {
  double risk = 0.0;
  Eigen::VectorXd losses;  // per validation row
};

// Fits the loss's candidates on `train` and evaluates per-row losses on
// `validation` (squared error against the label, or the difference of two
// squared errors).
SplitEval risk_on_split(const StageDataset& train, const StageDataset& validation,
                        const LossSpec& loss, std::uint64_t fit_seed);

struct CvReport {
  double r_cv = 0.0;
  double s_r_sq = 0.0;  // sample variance of the per-split risks
  double s_u_sq = 0.0;  // mean within-split sample variance of row losses
  int j_splits = 0;
  double q = 0.0;
  int n = 0;
  int n2 = 0;  // validation rows per split
  std::vector<double> per_split_risks;
};

CvReport aggregate_cv_report(const std::vector<double>& risks,
                             const std::vector<double>& loss_variances, double q, int n,
                             int n2);

// Monte Carlo cross-validation: j_splits independent stratified splits, risk
// averaged across them. Split jobs may run concurrently; the report is
// identical to a sequential run.
CvReport run_mccv(const StageDataset& ds, const SplitPlan& plan, const LossSpec& loss);

}  // namespace dtrcv
