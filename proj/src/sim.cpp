#include "dtrcv/sim.hpp"

#include <cmath>
#include <limits>

#include "dtrcv/stats.hpp"

namespace dtrcv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SingleStageRow {
  double w, l1, l2;
  int a;
  double noise;
};

SingleStageRow draw_single_stage_row(Rng& rng) {
  SingleStageRow row;
  row.w = sample_truncated_normal(45.0, 10.0, 10.0, kInf, rng);
  row.l1 = sample_truncated_normal(20.0, 5.0, 0.0, kInf, rng);
  row.l2 = sample_truncated_normal(10.0, 3.0, 0.0, kInf, rng);
  row.a = rng.bernoulli(expit(-2.0 + 0.05 * row.w)) ? 1 : 0;
  row.noise = rng.normal(0.0, 2.0);
  return row;
}

struct TwoStageRow {
  double w, l11, l12, l21, l22;
  int a1, a2;
  double noise;
};

// One trajectory in the canonical draw order; decisions can be overridden for
// counterfactual rollouts because the transitions never read the actions.
TwoStageRow draw_two_stage_row(Rng& rng) {
  TwoStageRow row;
  row.w = sample_truncated_normal(45.0, 10.0, 10.0, 80.0, rng);
  row.l11 = sample_truncated_normal(20.0, 5.0, 0.0, 40.0, rng);
  row.l12 = sample_truncated_normal(10.0, 3.0, 0.0, 30.0, rng);
  row.a1 = rng.bernoulli(expit(-2.0 + 0.05 * row.w)) ? 1 : 0;
  row.l21 = rng.normal(row.l11, 3.0);
  row.l22 = rng.normal(row.l12, 2.0);
  row.a2 = rng.bernoulli(expit(-1.0 + 0.04 * (row.l21 + row.l22))) ? 1 : 0;
  row.noise = rng.normal(0.0, 2.0);
  return row;
}

double regret(double effect, int action) {
  return ((effect > 0.0 ? 1.0 : 0.0) - static_cast<double>(action)) * effect;
}

}  // namespace

double sample_truncated_normal(double mu, double sigma, double lo, double hi, Rng& rng) {
  require(sigma > 0.0, ErrorKind::config, "scale must be positive");
  require(lo < hi, ErrorKind::degenerate_interval, "empty truncation interval");
  const double p_lo = std::isinf(lo) ? 0.0 : norm_cdf((lo - mu) / sigma);
  const double p_hi = std::isinf(hi) ? 1.0 : norm_cdf((hi - mu) / sigma);
  require(p_hi - p_lo >= 1e-12, ErrorKind::degenerate_interval,
          "truncation interval carries almost no mass");
  const double u = p_lo + rng.uniform01() * (p_hi - p_lo);
  double x = mu + sigma * norm_quantile(std::min(std::max(u, 1e-300), 1.0 - 1e-16));
  if (x <= lo) x = std::nextafter(lo, hi);
  if (x >= hi) x = std::nextafter(hi, lo);
  require(x > lo && x < hi, ErrorKind::internal, "truncated draw escaped its bounds");
  return x;
}

ScenarioParams scenario_by_label(const std::string& label) {
  if (label == "d") return {30.0, 0.1, 0.75};
  if (label == "e") return {10.0, 0.5, 0.5};
  if (label == "f") return {10.0, 1.0, 0.5};
  fail(ErrorKind::config, "unknown scenario '" + label + "' (expected d, e, or f)");
}

double true_tau(double l1, double l2, const ScenarioParams& p) {
  const double zeta1 = 1.0 / (1.0 + std::exp(p.s * (l1 - 20.0)));
  const double zeta2 = 1.0 / (1.0 + std::exp(p.s * (l2 - 12.0)));
  return p.c * (1.0 - zeta1 * zeta2 - p.z);
}

TwoStageScenario case_by_label(const std::string& label) {
  if (label == "i") return {{30.0, 0.1, 0.75}, {10.0, 0.5, 0.5}};
  if (label == "ii") return {{10.0, 0.5, 0.5}, {30.0, 0.1, 0.75}};
  if (label == "iii") return {{30.0, 0.1, 0.75}, {30.0, 1.0, 0.5}};
  if (label == "iv") return {{30.0, 1.0, 0.5}, {30.0, 0.1, 0.75}};
  fail(ErrorKind::config, "unknown case '" + label + "' (expected i, ii, iii, or iv)");
}

SingleStageDraw gen_single_stage(int n, const ScenarioParams& p, Rng& rng) {
  require(n >= 2, ErrorKind::config, "need at least two rows");
  SingleStageDraw draw;
  draw.data.features.resize(n, 3);
  draw.data.feature_names = {"l1", "l2", "w"};
  draw.data.action.resize(static_cast<std::size_t>(n));
  draw.data.response.resize(n);
  draw.data.id.resize(static_cast<std::size_t>(n));
  draw.tau.resize(n);
  for (int i = 0; i < n; ++i) {
    const SingleStageRow row = draw_single_stage_row(rng);
    const double tau = true_tau(row.l1, row.l2, p);
    draw.data.features(i, 0) = row.l1;
    draw.data.features(i, 1) = row.l2;
    draw.data.features(i, 2) = row.w;
    draw.data.action[static_cast<std::size_t>(i)] = row.a;
    draw.data.response[i] = 100.0 + row.noise - regret(tau, row.a);
    draw.data.id[static_cast<std::size_t>(i)] = i;
    draw.tau[i] = tau;
  }
  return draw;
}

TwoStageDraw gen_two_stage(int n, const TwoStageScenario& sc, Rng& rng) {
  require(n >= 2, ErrorKind::config, "need at least two rows");
  TwoStageDraw draw;
  auto& trial = draw.data;
  trial.stages.resize(2);
  trial.stages[0].features.resize(n, 3);
  trial.stages[0].feature_names = {"l1", "l2", "w"};
  trial.stages[1].features.resize(n, 2);
  trial.stages[1].feature_names = {"l1", "l2"};
  trial.actions.resize(n, 2);
  trial.outcome.resize(n);
  trial.reached.assign(2, std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1));
  trial.id.resize(static_cast<std::size_t>(n));
  draw.c1.resize(n);
  draw.c2.resize(n);
  for (int i = 0; i < n; ++i) {
    const TwoStageRow row = draw_two_stage_row(rng);
    const double c1 = true_tau(row.l11, row.l12, sc.stage1);
    const double c2 = true_tau(row.l21, row.l22, sc.stage2);
    trial.stages[0].features(i, 0) = row.l11;
    trial.stages[0].features(i, 1) = row.l12;
    trial.stages[0].features(i, 2) = row.w;
    trial.stages[1].features(i, 0) = row.l21;
    trial.stages[1].features(i, 1) = row.l22;
    trial.actions(i, 0) = row.a1;
    trial.actions(i, 1) = row.a2;
    trial.outcome[i] = 100.0 + row.noise - regret(c1, row.a1) - regret(c2, row.a2);
    trial.id[static_cast<std::size_t>(i)] = i;
    draw.c1[i] = c1;
    draw.c2[i] = c2;
  }
  return draw;
}

StageDataset gen_regression_benchmark(int n, Rng& rng) {
  require(n >= 20, ErrorKind::config, "need at least twenty rows");
  StageDataset ds;
  ds.features.resize(n, 2);
  ds.feature_names = {"x1", "x2"};
  ds.action.resize(static_cast<std::size_t>(n));
  ds.response.resize(n);
  ds.id.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int x1 = rng.bernoulli(0.5) ? 1 : 0;
    const double x2 = rng.normal(5.0, 2.0);
    const double eps = rng.normal(0.0, 5.0);
    ds.features(i, 0) = x1;
    ds.features(i, 1) = x2;
    ds.action[static_cast<std::size_t>(i)] = x1;
    ds.response[i] = 2.0 + 2.0 * x1 + eps;
    ds.id[static_cast<std::size_t>(i)] = i;
  }
  return ds;
}

RegimeEvaluation evaluate_rules(const DecisionFn& g1, const DecisionFn& g2,
                                const TwoStageScenario& sc, int eval_draws, Rng& rng) {
  require(eval_draws >= 2, ErrorKind::config, "need at least two evaluation draws");
  MomentAccumulator value;
  long long hit1 = 0, hit2 = 0, hit_both = 0;
  Eigen::RowVectorXd row1(3), row2(2);
  for (int i = 0; i < eval_draws; ++i) {
    const TwoStageRow traj = draw_two_stage_row(rng);
    const double c1 = true_tau(traj.l11, traj.l12, sc.stage1);
    const double c2 = true_tau(traj.l21, traj.l22, sc.stage2);
    row1 << traj.l11, traj.l12, traj.w;
    row2 << traj.l21, traj.l22;
    const int d1 = g1(row1);
    const int d2 = g2(row2);
    value.add(100.0 + traj.noise - regret(c1, d1) - regret(c2, d2));
    const bool ok1 = d1 == (c1 > 0.0 ? 1 : 0);
    const bool ok2 = d2 == (c2 > 0.0 ? 1 : 0);
    hit1 += ok1;
    hit2 += ok2;
    hit_both += ok1 && ok2;
  }
  RegimeEvaluation out;
  out.value = value.mean();
  const double var = value.variance_pop() * static_cast<double>(eval_draws) /
                     static_cast<double>(eval_draws - 1);
  out.value_se = std::sqrt(var / static_cast<double>(eval_draws));
  out.accuracy_stage1 = static_cast<double>(hit1) / static_cast<double>(eval_draws);
  out.accuracy_stage2 = static_cast<double>(hit2) / static_cast<double>(eval_draws);
  out.accuracy_both = static_cast<double>(hit_both) / static_cast<double>(eval_draws);
  return out;
}

RegimeEvaluation evaluate_regime(const Regime& regime, const TwoStageScenario& sc,
                                 int eval_draws, Rng& rng) {
  require(regime.n_stages() == 2, ErrorKind::config, "regime must cover two stages");
  const auto g1 = [&](const Eigen::RowVectorXd& row) { return decide(regime.rules[0], row); };
  const auto g2 = [&](const Eigen::RowVectorXd& row) { return decide(regime.rules[1], row); };
  return evaluate_rules(g1, g2, sc, eval_draws, rng);
}

SingleRegimeEvaluation evaluate_single_rule(const DecisionFn& rule, const ScenarioParams& p,
                                            int eval_draws, Rng& rng) {
  require(eval_draws >= 2, ErrorKind::config, "need at least two evaluation draws");
  MomentAccumulator value;
  long long hits = 0;
  Eigen::RowVectorXd row(3);
  for (int i = 0; i < eval_draws; ++i) {
    const SingleStageRow traj = draw_single_stage_row(rng);
    const double tau = true_tau(traj.l1, traj.l2, p);
    row << traj.l1, traj.l2, traj.w;
    const int g = rule(row);
    value.add(100.0 + traj.noise - regret(tau, g));
    hits += g == (tau > 0.0 ? 1 : 0);
  }
  SingleRegimeEvaluation out;
  out.value = value.mean();
  const double var = value.variance_pop() * static_cast<double>(eval_draws) /
                     static_cast<double>(eval_draws - 1);
  out.value_se = std::sqrt(var / static_cast<double>(eval_draws));
  out.accuracy = static_cast<double>(hits) / static_cast<double>(eval_draws);
  return out;
}

SingleRegimeEvaluation evaluate_single_rule(const FittedContrast& rule,
                                            const ScenarioParams& p, int eval_draws,
                                            Rng& rng) {
  return evaluate_single_rule(
      DecisionFn([&](const Eigen::RowVectorXd& row) { return decide(rule, row); }), p,
      eval_draws, rng);
}

double tau_risk(const std::function<double(const Eigen::RowVectorXd&)>& predictor,
                const ScenarioParams& p, int draws, Rng& rng) {
  require(draws >= 1, ErrorKind::config, "need at least one draw");
  MomentAccumulator err;
  Eigen::RowVectorXd row(3);
  for (int i = 0; i < draws; ++i) {
    const SingleStageRow traj = draw_single_stage_row(rng);
    const double tau = true_tau(traj.l1, traj.l2, p);
    row << traj.l1, traj.l2, traj.w;
    const double diff = predictor(row) - tau;
    err.add(diff * diff);
  }
  return err.mean();
}

double tau_risk(const FittedContrast& fit, const ScenarioParams& p, int draws, Rng& rng) {
  return tau_risk(
      std::function<double(const Eigen::RowVectorXd&)>(
          [&](const Eigen::RowVectorXd& row) { return fit.predict(row); }),
      p, draws, rng);
}

}  // namespace dtrcv
