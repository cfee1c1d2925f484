#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "dtrcv/data.hpp"
#include "dtrcv/dtr.hpp"
#include "dtrcv/rng.hpp"

namespace dtrcv {

// Inverse-CDF draw from N(mu, sigma^2) restricted to (lo, hi); pass infinities
// for one-sided or no truncation. Every returned value lies strictly inside
// the interval.
double sample_truncated_normal(double mu, double sigma, double lo, double hi, Rng& rng);

// Treatment-effect surface c * (1 - zeta1(l1; s) * zeta2(l2; s) - z) with
// logistic factors centered at l1 = 20 and l2 = 12 sharing steepness s. Small
// s gives a gradual, near-linear surface; large s a sharp boundary.
struct ScenarioParams {
  double c = 10.0;
  double s = 0.5;
  double z = 0.5;
};

// Single-stage benchmark settings: "d" gradual (30, 0.1, 0.75), "e" neutral
// (10, 0.5, 0.5), "f" sharp (10, 1, 0.5).
ScenarioParams scenario_by_label(const std::string& label);

double true_tau(double l1, double l2, const ScenarioParams& p);

struct TwoStageScenario {
  ScenarioParams stage1;
  ScenarioParams stage2;
};

// Two-stage benchmark settings "i" through "iv": per-stage effect surfaces
// chosen so the better model is linear or tree at each stage.
TwoStageScenario case_by_label(const std::string& label);

// Generated data plus the sealed truth the estimators never see.
struct SingleStageDraw {
  StageDataset data;     // features l1, l2, w
  Eigen::VectorXd tau;   // true effect per row
};

// W drives treatment assignment only; (L1, L2) drive the effect. Outcome is
// N(100, 2^2) minus the regret for acting against the true effect sign.
SingleStageDraw gen_single_stage(int n, const ScenarioParams& p, Rng& rng);

struct TwoStageDraw {
  TrialDataset data;     // stage 1 features l1, l2, w; stage 2 features l1, l2
  Eigen::VectorXd c1;    // true stage-1 effect per row
  Eigen::VectorXd c2;    // true stage-2 effect per row
};

// Stage-2 covariates re-center on the stage-1 ones; treatment assignment is
// confounded by W at stage 1 and by the current covariates at stage 2. The
// outcome subtracts the regret accumulated over both stages.
TwoStageDraw gen_two_stage(int n, const TwoStageScenario& sc, Rng& rng);

// Plain regression benchmark: Y = 2 + 2*X1 + N(0, 5^2) with a nuisance
// X2 ~ N(5, 2^2); X1 ~ Bernoulli(1/2) doubles as the action column so the
// dataset plugs into the same machinery with the response used directly.
StageDataset gen_regression_benchmark(int n, Rng& rng);

struct RegimeEvaluation {
  double value = 0.0;
  double value_se = 0.0;
  double accuracy_stage1 = 0.0;
  double accuracy_stage2 = 0.0;
  double accuracy_both = 0.0;
};

// A decision as a function of the stage's feature row.
using DecisionFn = std::function<int(const Eigen::RowVectorXd&)>;

// Monte Carlo rollout of fresh trajectories under the given decisions;
// accuracy compares each decision with the true effect sign. Stage 1 sees
// (l1, l2, w), stage 2 sees (l1, l2).
RegimeEvaluation evaluate_rules(const DecisionFn& g1, const DecisionFn& g2,
                                const TwoStageScenario& sc, int eval_draws, Rng& rng);

RegimeEvaluation evaluate_regime(const Regime& regime, const TwoStageScenario& sc,
                                 int eval_draws, Rng& rng);

struct SingleRegimeEvaluation {
  double value = 0.0;
  double value_se = 0.0;
  double accuracy = 0.0;
};

SingleRegimeEvaluation evaluate_single_rule(const DecisionFn& rule, const ScenarioParams& p,
                                            int eval_draws, Rng& rng);
SingleRegimeEvaluation evaluate_single_rule(const FittedContrast& rule,
                                            const ScenarioParams& p, int eval_draws,
                                            Rng& rng);

// Mean squared distance between an effect predictor and the truth over fresh
// covariate draws; the predictor sees (l1, l2, w).
double tau_risk(const std::function<double(const Eigen::RowVectorXd&)>& predictor,
                const ScenarioParams& p, int draws, Rng& rng);
double tau_risk(const FittedContrast& fit, const ScenarioParams& p, int draws, Rng& rng);

}  // namespace dtrcv
