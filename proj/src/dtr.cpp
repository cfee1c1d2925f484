#include "dtrcv/dtr.hpp"

#include <limits>

#include "dtrcv/rng.hpp"
#include "dtrcv/variance.hpp"

namespace dtrcv {

namespace {

constexpr std::uint64_t kStageTag = 0x53544147ULL;
constexpr std::uint64_t kFullFitTag = 0x46554c4cULL;

}  // namespace

int decide(const FittedContrast& rule, const Eigen::RowVectorXd& features) {
  return rule.predict(features) > 0.0 ? 1 : 0;
}

Eigen::VectorXd pseudo_value_update(const Eigen::VectorXd& v_next,
                                    const Eigen::VectorXd& contrast,
                                    const std::vector<int>& action) {
  require(v_next.size() == contrast.size() &&
              v_next.size() == static_cast<Eigen::Index>(action.size()),
          ErrorKind::length_mismatch, "pseudo-value inputs disagree on length");
  Eigen::VectorXd out = v_next;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double c = contrast[i];
    const double g = c > 0.0 ? 1.0 : 0.0;
    out[i] += (g - static_cast<double>(action[static_cast<std::size_t>(i)])) * c;
  }
  return out;
}

Eigen::VectorXd pseudo_value_update(const TrialDataset& trial, int k,
                                    const Eigen::VectorXd& v_next,
                                    const FittedContrast& fitted) {
  require(k >= 0 && k < trial.n_stages(), ErrorKind::config, "stage index out of range");
  require(v_next.size() == trial.outcome.size(), ErrorKind::length_mismatch,
          "pseudo-value vector does not cover the trial");
  Eigen::VectorXd out = v_next;
  const auto& block = trial.stages[static_cast<std::size_t>(k)];
  const auto& reached = trial.reached[static_cast<std::size_t>(k)];
  for (int i = 0; i < trial.n(); ++i) {
    if (!reached[static_cast<std::size_t>(i)]) continue;
    const double c = fitted.predict(block.features.row(i));
    const double g = c > 0.0 ? 1.0 : 0.0;
    out[i] += (g - static_cast<double>(trial.actions(i, k))) * c;
  }
  return out;
}

StageSelectionReport select_stage_model(const StageDataset& ds,
                                        const std::vector<ModelSpec>& candidates,
                                        const SelectionPolicy& policy,
                                        const SplitPlan& plan) {
  require(!candidates.empty(), ErrorKind::config, "no candidate models");
  StageSelectionReport report;

  if (candidates.size() == 1) {
    report.chosen_index = 0;
  } else if (policy.mode == SelectionMode::point) {
    if (candidates.size() == 2) {
      const LossSpec loss = difference_loss(make_candidate(candidates[0]),
                                            make_candidate(candidates[1]));
      const CvReport cv = run_mccv(ds, plan, loss);
      report.r_cv = cv.r_cv;
      report.chosen_index = cv.r_cv > 0.0 ? 1 : 0;
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const LossSpec loss = single_loss(make_candidate(candidates[c]));
        const CvReport cv = run_mccv(ds, plan, loss);
        report.candidate_risks.push_back(cv.r_cv);
        if (cv.r_cv < best) {
          best = cv.r_cv;
          report.chosen_index = static_cast<int>(c);
        }
      }
      report.r_cv = best;
    }
  } else {
    require(candidates.size() == 2, ErrorKind::config,
            "test mode compares exactly two candidates");
    require(policy.p0 > 0.0 && policy.p0 < 0.5, ErrorKind::degenerate_interval,
            "test threshold must lie in (0, 0.5)");
    const LossSpec loss = difference_loss(make_candidate(candidates[0]),
                                          make_candidate(candidates[1]));
    const CvReport cv = run_mccv(ds, plan, loss);
    report.r_cv = cv.r_cv;
    const AdjustedVariance adj = adjusted_variance(ds, plan, loss, policy.half_reps, cv);
    const PValue p = selection_pvalue(cv.r_cv, adj.variance);
    report.variance = adj.variance;
    report.p_value = p.value;
    report.degenerate_variance = p.degenerate;
    report.chosen_index = p.value < policy.p0 ? 1 : 0;
  }

  report.chosen = candidates[static_cast<std::size_t>(report.chosen_index)];
  report.fitted = fit_spec(ds, report.chosen, derive_seed(plan.seed, kFullFitTag));
  return report;
}

Regime run_backward(const TrialDataset& trial, const SelectionPolicy& policy,
                    const SplitPlan& plan) {
  validate_trial_dataset(trial);
  const int n_stages = trial.n_stages();
  require(!policy.stage_candidates.empty(), ErrorKind::config, "no candidate lists");
  require(policy.stage_candidates.size() == 1 ||
              static_cast<int>(policy.stage_candidates.size()) == n_stages,
          ErrorKind::config, "candidate lists must cover every stage (or be a single shared list)");

  Regime regime;
  regime.chosen_specs.resize(static_cast<std::size_t>(n_stages));
  regime.rules.resize(static_cast<std::size_t>(n_stages));
  regime.reports.resize(static_cast<std::size_t>(n_stages));

  Eigen::VectorXd v_next = trial.outcome;
  for (int k = n_stages - 1; k >= 0; --k) {
    const auto& candidates = policy.stage_candidates.size() == 1
                                 ? policy.stage_candidates[0]
                                 : policy.stage_candidates[static_cast<std::size_t>(k)];
    const auto cross = stage_cross_section(trial, k, v_next);
    SplitPlan stage_plan = plan;
    stage_plan.seed = derive_seed(plan.seed, kStageTag, static_cast<std::uint64_t>(k + 1));
    StageSelectionReport report;
    try {
      report = select_stage_model(cross.first, candidates, policy, stage_plan);
    } catch (const Error& e) {
      fail(e.kind(), "stage " + std::to_string(k + 1) + ": " + e.what());
    }
    report.stage = k + 1;
    v_next = pseudo_value_update(trial, k, v_next, report.fitted);
    regime.chosen_specs[static_cast<std::size_t>(k)] = report.chosen;
    regime.rules[static_cast<std::size_t>(k)] = report.fitted;
    regime.reports[static_cast<std::size_t>(k)] = std::move(report);
  }
  return regime;
}

}  // namespace dtrcv
