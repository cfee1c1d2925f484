#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dtrcv/data.hpp"
#include "dtrcv/estimators.hpp"
#include "dtrcv/mccv.hpp"

namespace dtrcv {

enum class SelectionMode { point, test };

// How a stage picks among its candidate contrast models. Candidate index 0 is
// the preferred (protected) model; in test mode a challenger displaces it only
// when the one-sided p-value drops below p0.
struct SelectionPolicy {
  SelectionMode mode = SelectionMode::point;
  double p0 = 0.05;
  int half_reps = 50;  // halvings behind the test-mode variance estimate
  std::vector<std::vector<ModelSpec>> stage_candidates;  // one list per stage, or one shared
};

struct StageSelectionReport {
  int stage = 0;  // 1-based
  double r_cv = 0.0;
  std::optional<double> variance;  // test mode only
  std::optional<double> p_value;   // test mode only
  bool degenerate_variance = false;
  int chosen_index = 0;
  ModelSpec chosen;
  FittedContrast fitted;  // chosen model refit on the full stage data
  std::vector<double> candidate_risks;  // per-candidate risks when each ran alone
};

// Treatment rule: act iff the estimated contrast is positive.
int decide(const FittedContrast& rule, const Eigen::RowVectorXd& features);

struct Regime {
  std::vector<ModelSpec> chosen_specs;            // index k-1 = stage k
  std::vector<FittedContrast> rules;              // same order
  std::vector<StageSelectionReport> reports;      // same order
  int n_stages() const { return static_cast<int>(rules.size()); }
};

// v_k,i = v_next,i + (1{c_i > 0} - a_i) * c_i.
Eigen::VectorXd pseudo_value_update(const Eigen::VectorXd& v_next,
                                    const Eigen::VectorXd& contrast,
                                    const std::vector<int>& action);

// Trial overload: rows that never reached stage k (0-based) pass v_next
// through unchanged.
Eigen::VectorXd pseudo_value_update(const TrialDataset& trial, int k,
                                    const Eigen::VectorXd& v_next,
                                    const FittedContrast& fitted);

// Runs MCCV over the candidates and fits the winner on the full stage data.
// Point mode with two candidates: challenger wins iff the difference risk is
// positive. Point mode with more: lowest single-model risk, ties to the
// earlier candidate. Test mode (exactly two): challenger wins iff
// p = 1 - Phi(r_cv / sd) < p0, with the adjusted-correlation variance; a
// degenerate (zero) variance keeps the preferred model unless r_cv > 0.
StageSelectionReport select_stage_model(const StageDataset& ds,
                                        const std::vector<ModelSpec>& candidates,
                                        const SelectionPolicy& policy,
                                        const SplitPlan& plan);

// Backward induction over the trial's stages: selects and fits stage K first,
// propagates pseudo-values, and ends at stage 1.
Regime run_backward(const TrialDataset& trial, const SelectionPolicy& policy,
                    const SplitPlan& plan);

}  // namespace dtrcv
