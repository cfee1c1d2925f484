#include "dtrcv/data.hpp"

#include <cmath>

namespace dtrcv {

std::vector<int> StageDataset::arm(int a) const {
  std::vector<int> idx;
  for (int i = 0; i < n(); ++i) {
    if (action[static_cast<std::size_t>(i)] == a) idx.push_back(i);
  }
  return idx;
}

int StageDataset::column(const std::string& name) const {
  for (int j = 0; j < dim(); ++j) {
    if (feature_names[static_cast<std::size_t>(j)] == name) return j;
  }
  fail(ErrorKind::bad_data, "unknown feature column: " + name);
}

void validate_stage_dataset(const StageDataset& ds) {
  const int n = ds.n();
  require(n >= 2, ErrorKind::bad_data, "dataset needs at least two rows");
  require(static_cast<int>(ds.feature_names.size()) == ds.dim(), ErrorKind::length_mismatch,
          "feature name count does not match feature columns");
  require(static_cast<int>(ds.action.size()) == n, ErrorKind::length_mismatch,
          "action length does not match feature rows");
  require(static_cast<int>(ds.response.size()) == n, ErrorKind::length_mismatch,
          "response length does not match feature rows");
  require(ds.id.empty() || static_cast<int>(ds.id.size()) == n, ErrorKind::length_mismatch,
          "id length does not match feature rows");
  require(ds.features.allFinite(), ErrorKind::non_finite, "non-finite feature value");
  require(ds.response.allFinite(), ErrorKind::non_finite, "non-finite response value");
  int treated = 0;
  for (int a : ds.action) {
    require(a == 0 || a == 1, ErrorKind::bad_data, "actions must be coded 0/1");
    treated += a;
  }
  require(treated > 0, ErrorKind::empty_arm, "no treated individuals");
  require(treated < n, ErrorKind::empty_arm, "no control individuals");
}

namespace {

StandardizationStats column_stats(const Eigen::MatrixXd& x) {
  const auto n = static_cast<double>(x.rows());
  StandardizationStats st;
  st.mean = x.colwise().mean();
  st.sd.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - st.mean[j]).square().sum() / n;
    double sd = std::sqrt(var);
    if (sd < 1e-12 * (1.0 + std::abs(st.mean[j]))) sd = 1.0;  // degenerate column
    st.sd[j] = sd;
  }
  return st;
}

}  // namespace

StageDataset apply_standardization(const StageDataset& ds, const StandardizationStats& stats) {
  require(stats.mean.size() == ds.dim() && stats.sd.size() == ds.dim(), ErrorKind::length_mismatch,
          "standardization stats do not match feature columns");
  StageDataset out = ds;
  for (Eigen::Index j = 0; j < out.features.cols(); ++j) {
    out.features.col(j) = (out.features.col(j).array() - stats.mean[j]) / stats.sd[j];
  }
  return out;
}

std::pair<StageDataset, StandardizationStats> standardize(const StageDataset& ds) {
  require(ds.n() >= 1, ErrorKind::bad_data, "cannot standardize an empty dataset");
  StandardizationStats st = column_stats(ds.features);
  return {apply_standardization(ds, st), st};
}

StageDataset subset(const StageDataset& ds, const std::vector<int>& rows) {
  StageDataset out;
  out.feature_names = ds.feature_names;
  const auto m = static_cast<Eigen::Index>(rows.size());
  out.features.resize(m, ds.features.cols());
  out.response.resize(m);
  out.action.resize(rows.size());
  out.id.resize(rows.size());
  for (Eigen::Index r = 0; r < m; ++r) {
    const int src = rows[static_cast<std::size_t>(r)];
    out.features.row(r) = ds.features.row(src);
    out.response[r] = ds.response[src];
    out.action[static_cast<std::size_t>(r)] = ds.action[static_cast<std::size_t>(src)];
    out.id[static_cast<std::size_t>(r)] =
        ds.id.empty() ? src : ds.id[static_cast<std::size_t>(src)];
  }
  return out;
}

void validate_trial_dataset(const TrialDataset& trial) {
  const int n = trial.n();
  const int k_stages = trial.n_stages();
  require(k_stages >= 1, ErrorKind::bad_data, "trial needs at least one stage");
  require(n >= 2, ErrorKind::bad_data, "trial needs at least two rows");
  require(trial.actions.rows() == n && trial.actions.cols() == k_stages,
          ErrorKind::length_mismatch, "action matrix shape mismatch");
  require(static_cast<int>(trial.reached.size()) == k_stages, ErrorKind::length_mismatch,
          "reach mask count does not match stages");
  require(trial.outcome.allFinite(), ErrorKind::non_finite, "non-finite outcome");
  for (int k = 0; k < k_stages; ++k) {
    const auto& block = trial.stages[static_cast<std::size_t>(k)];
    require(block.features.rows() == n, ErrorKind::length_mismatch,
            "stage block row count mismatch");
    require(static_cast<int>(block.feature_names.size()) == block.features.cols(),
            ErrorKind::length_mismatch, "stage block name count mismatch");
    const auto& mask = trial.reached[static_cast<std::size_t>(k)];
    require(static_cast<int>(mask.size()) == n, ErrorKind::length_mismatch,
            "reach mask length mismatch");
    for (int i = 0; i < n; ++i) {
      if (!mask[static_cast<std::size_t>(i)]) continue;
      require(block.features.row(i).allFinite(), ErrorKind::non_finite,
              "non-finite stage feature for a reached row");
      const int a = trial.actions(i, k);
      require(a == 0 || a == 1, ErrorKind::bad_data, "stage actions must be coded 0/1");
    }
    if (k > 0) {
      const auto& prev = trial.reached[static_cast<std::size_t>(k - 1)];
      for (int i = 0; i < n; ++i) {
        require(!mask[static_cast<std::size_t>(i)] || prev[static_cast<std::size_t>(i)],
                ErrorKind::bad_data, "reach masks must be nested across stages");
      }
    }
  }
  // Stage 1 must cover everyone: a row that never enters the trial has no data.
  for (int i = 0; i < n; ++i) {
    require(trial.reached[0][static_cast<std::size_t>(i)] != 0, ErrorKind::bad_data,
            "every row must reach stage 1");
  }
}

std::pair<StageDataset, std::vector<int>> stage_cross_section(
    const TrialDataset& trial, int k, const Eigen::VectorXd& response_full) {
  require(k >= 0 && k < trial.n_stages(), ErrorKind::bad_data, "stage index out of range");
  require(response_full.size() == trial.n(), ErrorKind::length_mismatch,
          "response vector does not cover all rows");
  const auto& mask = trial.reached[static_cast<std::size_t>(k)];
  std::vector<int> rows;
  for (int i = 0; i < trial.n(); ++i) {
    if (mask[static_cast<std::size_t>(i)]) rows.push_back(i);
  }
  require(rows.size() >= 2, ErrorKind::bad_data, "fewer than two rows reach this stage");
  const auto& block = trial.stages[static_cast<std::size_t>(k)];
  StageDataset ds;
  ds.feature_names = block.feature_names;
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), block.features.cols());
  ds.response.resize(static_cast<Eigen::Index>(rows.size()));
  ds.action.resize(rows.size());
  ds.id.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int src = rows[r];
    ds.features.row(static_cast<Eigen::Index>(r)) = block.features.row(src);
    ds.response[static_cast<Eigen::Index>(r)] = response_full[src];
    ds.action[r] = trial.actions(src, k);
    ds.id[r] = trial.id.empty() ? src : trial.id[static_cast<std::size_t>(src)];
  }
  return {std::move(ds), std::move(rows)};
}

TrialDataset as_trial(const StageDataset& ds) {
  TrialDataset trial;
  trial.stages.push_back({ds.features, ds.feature_names});
  trial.actions.resize(ds.n(), 1);
  for (int i = 0; i < ds.n(); ++i) trial.actions(i, 0) = ds.action[static_cast<std::size_t>(i)];
  trial.outcome = ds.response;
  trial.reached.emplace_back(static_cast<std::size_t>(ds.n()), std::uint8_t{1});
  trial.id = ds.id;
  return trial;
}

}  // namespace dtrcv
