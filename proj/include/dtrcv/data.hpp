#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dtrcv/common.hpp"

namespace dtrcv {

// One decision point: a feature matrix, a binary action, and a response.
// The response is the observed outcome at the last stage and a pseudo-value
// at earlier ones; the estimators never care which.
struct StageDataset {
  Eigen::MatrixXd features;               // n x d
  std::vector<std::string> feature_names; // size d
  std::vector<int> action;                // size n, values in {0,1}
  Eigen::VectorXd response;               // size n
  std::vector<std::int64_t> id;           // size n; defaults to 0..n-1

  int n() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
  std::vector<int> arm(int a) const;
  int column(const std::string& name) const;  // bad_data if absent
};

struct StandardizationStats {
  Eigen::VectorXd mean;  // per column
  Eigen::VectorXd sd;    // population convention; 1 for degenerate columns
};

// Checks shape, finiteness, action coding, and that both arms are inhabited.
void validate_stage_dataset(const StageDataset& ds);

// Centers and scales every feature column by its own mean and population
// standard deviation. Degenerate columns are centered only.
std::pair<StageDataset, StandardizationStats> standardize(const StageDataset& ds);

// Applies previously computed stats (column count must match).
StageDataset apply_standardization(const StageDataset& ds, const StandardizationStats& stats);

// Row subset in the given order.
StageDataset subset(const StageDataset& ds, const std::vector<int>& rows);

// A longitudinal trial: per-stage feature blocks over the same individuals,
// per-stage actions, a terminal outcome, and per-stage reach masks. A row may
// stop being eligible after some stage (reached[k] == 0 from then on); such
// rows keep their outcome but take no part in later-stage fits.
struct TrialDataset {
  struct StageBlock {
    Eigen::MatrixXd features;                // n x d_k
    std::vector<std::string> feature_names;  // size d_k
  };
  std::vector<StageBlock> stages;         // size K
  Eigen::MatrixXi actions;                // n x K, valid where reached
  Eigen::VectorXd outcome;                // size n
  std::vector<std::vector<std::uint8_t>> reached;  // K vectors of size n
  std::vector<std::int64_t> id;

  int n() const { return static_cast<int>(outcome.size()); }
  int n_stages() const { return static_cast<int>(stages.size()); }
};

void validate_trial_dataset(const TrialDataset& trial);

// Stage-k cross-section: rows that reached stage k (0-based), with the given
// vector (aligned to all n rows) as the response. Returns the dataset plus the
// original row index of each kept row.
std::pair<StageDataset, std::vector<int>> stage_cross_section(
    const TrialDataset& trial, int k, const Eigen::VectorXd& response_full);

// Views a single-stage dataset as a one-stage trial.
TrialDataset as_trial(const StageDataset& ds);

}  // namespace dtrcv
