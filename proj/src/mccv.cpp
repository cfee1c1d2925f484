#include "dtrcv/mccv.hpp"

#include <cmath>

#include "dtrcv/parallel.hpp"
#include "dtrcv/rng.hpp"
#include "dtrcv/stats.hpp"
#include "dtrcv/surrogate.hpp"

namespace dtrcv {

namespace {

constexpr std::uint64_t kSplitTag = 0x53504c4954ULL;
constexpr std::uint64_t kFitTag = 0x46495453ULL;

}  // namespace

Candidate make_candidate(const ModelSpec& spec) {
  return Candidate{spec.label(), [spec](const StageDataset& train, std::uint64_t seed) {
                     return fit_spec(train, spec, seed);
                   }};
}

Candidate make_regression_candidate(std::string name, std::vector<std::string> covariates) {
  return Candidate{std::move(name),
                   [covs = std::move(covariates)](const StageDataset& train, std::uint64_t) {
                     return FittedContrast{fit_mean_regression(
                         train, resolve_columns(train, covs, /*empty_means_all=*/false))};
                   }};
}

Candidate make_regression_tree_candidate(std::string name, std::vector<std::string> covariates,
                                         TreeParams params) {
  ModelSpec spec;
  spec.kind = ModelKind::tree;
  spec.contrast_covariates = std::move(covariates);
  spec.tree = params;
  return Candidate{std::move(name), [spec](const StageDataset& train, std::uint64_t seed) {
                     return FittedContrast{fit_regression_tree(train, spec, seed)};
                   }};
}

LossSpec single_loss(Candidate a, LabelKind labels) {
  LossSpec loss;
  loss.mode = LossMode::single;
  loss.labels = labels;
  loss.a = std::move(a);
  return loss;
}

LossSpec difference_loss(Candidate a, Candidate b, LabelKind labels) {
  LossSpec loss;
  loss.mode = LossMode::difference;
  loss.labels = labels;
  loss.a = std::move(a);
  loss.b = std::move(b);
  return loss;
}

SplitIndices stratified_split(const StageDataset& ds, const SplitPlan& plan, int j) {
  require(plan.q > 0.0 && plan.q < 1.0, ErrorKind::degenerate_interval,
          "validation proportion must lie strictly inside (0,1)");
  Rng rng(derive_seed(plan.seed, kSplitTag, static_cast<std::uint64_t>(j)));
  SplitIndices out;
  for (int a = 0; a < 2; ++a) {
    std::vector<int> pool = ds.arm(a);
    const auto take = static_cast<std::size_t>(
        std::llround(plan.q * static_cast<double>(pool.size())));
    require(take > 0 && take < pool.size(), ErrorKind::arm_exhausted,
            "a split would leave an empty validation or training arm");
    rng.shuffle(pool);
    for (std::size_t k = 0; k < pool.size(); ++k) {
      (k < take ? out.validation : out.train).push_back(pool[k]);
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  return out;
}

SplitEval risk_on_split(const StageDataset& train, const StageDataset& validation,
                        const LossSpec& loss, std::uint64_t fit_seed) {
  const FittedContrast fit_a = loss.a.fit(train, derive_seed(fit_seed, 1ULL));
  FittedContrast fit_b;
  if (loss.mode == LossMode::difference) {
    fit_b = loss.b.fit(train, derive_seed(fit_seed, 2ULL));
  }

  Eigen::VectorXd labels;
  if (loss.labels == LabelKind::matched_surrogate) {
    const StandardizationStats stats = standardize(validation).second;
    const Pairing pairing = match_opposite_arm(validation, stats);
    labels = build_surrogates(validation, pairing);
  } else {
    labels = validation.response;
  }

  SplitEval eval;
  eval.losses.resize(validation.n());
  for (int i = 0; i < validation.n(); ++i) {
    const Eigen::RowVectorXd row = validation.features.row(i);
    const double ra = labels[i] - fit_a.predict(row);
    double u = ra * ra;
    if (loss.mode == LossMode::difference) {
      const double rb = labels[i] - fit_b.predict(row);
      u -= rb * rb;
    }
    eval.losses[i] = u;
  }
  eval.risk = eval.losses.mean();
  return eval;
}

CvReport aggregate_cv_report(const std::vector<double>& risks,
                             const std::vector<double>& loss_variances, double q, int n,
                             int n2) {
  CvReport report;
  report.per_split_risks = risks;
  report.j_splits = static_cast<int>(risks.size());
  report.q = q;
  report.n = n;
  report.n2 = n2;
  report.r_cv = mean(risks);
  report.s_r_sq = sample_variance(risks);
  report.s_u_sq = mean(loss_variances);
  return report;
}

CvReport run_mccv(const StageDataset& ds, const SplitPlan& plan, const LossSpec& loss) {
  validate_stage_dataset(ds);
  require(plan.j_splits >= 1, ErrorKind::config, "need at least one split");

  std::vector<double> risks(static_cast<std::size_t>(plan.j_splits));
  std::vector<double> loss_vars(static_cast<std::size_t>(plan.j_splits));
  parallel_for(plan.j_splits, plan.threads, [&](int j) {
    const SplitIndices idx = stratified_split(ds, plan, j);
    const StageDataset train = subset(ds, idx.train);
    const StageDataset validation = subset(ds, idx.validation);
    const SplitEval eval = risk_on_split(train, validation, loss,
                                         derive_seed(plan.seed, kFitTag,
                                                     static_cast<std::uint64_t>(j)));
    risks[static_cast<std::size_t>(j)] = eval.risk;
    std::vector<double> u(eval.losses.data(), eval.losses.data() + eval.losses.size());
    loss_vars[static_cast<std::size_t>(j)] = sample_variance(u);
  });
  const long n2 = std::llround(plan.q * static_cast<double>(ds.arm(1).size())) +
                  std::llround(plan.q * static_cast<double>(ds.arm(0).size()));
  return aggregate_cv_report(risks, loss_vars, plan.q, ds.n(), static_cast<int>(n2));
}

}  // namespace dtrcv
