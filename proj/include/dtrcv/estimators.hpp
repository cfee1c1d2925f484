#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dtrcv/data.hpp"

namespace dtrcv {

enum class ModelKind { constant, linear, tree };

struct TreeParams {
  bool honest = true;
  bool prune = true;               // cost-complexity pruning, honest trees only
  int min_leaf_per_arm = 10;
  int max_depth = 5;
  double honest_fraction = 0.5;    // share of training rows kept for structure
  int cv_folds_for_pruning = 5;
};

// A candidate contrast model. Empty covariate lists for the treatment-free and
// propensity parts mean "all available features"; an empty contrast list means
// an intercept-only contrast.
struct ModelSpec {
  std::string name;  // display label; defaulted from the kind when empty
  ModelKind kind = ModelKind::linear;
  std::vector<std::string> contrast_covariates;
  std::vector<std::string> treatment_free_covariates;
  std::vector<std::string> propensity_covariates;
  TreeParams tree;

  std::string label() const;
};

ModelSpec constant_spec();
ModelSpec linear_spec(std::vector<std::string> contrast_covariates);
ModelSpec tree_spec(std::vector<std::string> split_covariates, TreeParams params = {});

// Logistic regression of the action on an intercept plus selected columns.
// Falls back to the intercept-only fit (and says so) when the solve does not
// converge or the fitted probabilities pile up on the boundary.
struct PropensityFit {
  Eigen::VectorXd coef;       // intercept first, then `cols` in order
  std::vector<int> cols;
  bool fallback = false;
  double predict(const Eigen::RowVectorXd& row) const;
};

PropensityFit fit_propensity(const StageDataset& ds, const std::vector<int>& cols);

// Linear contrast psi' * (1, x) estimated jointly with a linear
// treatment-free part gamma' * (1, s) by solving the stacked estimating
// equations; the action-residual weighting keeps the contrast consistent when
// the treatment-free part is wrong, and vice versa.
struct LinearContrastFit {
  Eigen::VectorXd psi;    // intercept first, then contrast covariates
  std::vector<int> contrast_cols;
  Eigen::VectorXd gamma;  // intercept first, then treatment-free covariates
  std::vector<int> treatment_free_cols;
  PropensityFit propensity;
  bool singular = false;  // solved in the least-squares sense
  double predict(const Eigen::RowVectorXd& row) const;
};

LinearContrastFit fit_linear_contrast(const StageDataset& ds, const ModelSpec& spec);

// Binary tree over selected feature columns; kept flat for cheap prediction.
struct TreeNode {
  int feature = -1;       // column into TreeContrastFit::split_cols; -1 => leaf
  double threshold = 0.0; // go left when value <= threshold
  int left = -1;
  int right = -1;
  double value = 0.0;     // leaf estimate
};

struct TreeContrastFit {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<int> split_cols;  // dataset column indices the tree may split on
  std::vector<int> structure_rows;   // honest diagnostic; empty when adaptive
  std::vector<int> estimation_rows;
  int leaf_count() const;
  int depth() const;
  int leaf_for(const Eigen::RowVectorXd& row) const;
  double predict(const Eigen::RowVectorXd& row) const;
};

// Recursive-partitioning contrast: leaves carry the difference of arm means.
// Adaptive trees greedily maximize between-leaf effect heterogeneity on the
// whole sample; honest trees split on a structure half under a variance
// penalty, estimate leaf effects on the held-out half, and (optionally) prune
// by cross-validated cost-complexity. `seed` drives the honest halving and
// pruning folds.
TreeContrastFit fit_causal_tree(const StageDataset& ds, const ModelSpec& spec,
                                std::uint64_t seed);

// Mean-regression counterparts used by the regression benchmark: ordinary
// least squares and a recursive-partitioning mean fit (always adaptive).
struct MeanRegressionFit {
  Eigen::VectorXd beta;  // intercept first
  std::vector<int> cols;
  double predict(const Eigen::RowVectorXd& row) const;
};

MeanRegressionFit fit_mean_regression(const StageDataset& ds, const std::vector<int>& cols);
TreeContrastFit fit_regression_tree(const StageDataset& ds, const ModelSpec& spec,
                                    std::uint64_t seed);

// Any fitted candidate, valued like a function of a full feature row.
struct FittedContrast {
  std::variant<LinearContrastFit, TreeContrastFit, MeanRegressionFit> fit;
  double predict(const Eigen::RowVectorXd& row) const;
};

double predict_contrast(const FittedContrast& fit, const Eigen::RowVectorXd& row);

// Fits `spec` as a treatment-contrast model (constant and linear kinds share
// the linear path).
FittedContrast fit_spec(const StageDataset& ds, const ModelSpec& spec, std::uint64_t seed);

std::vector<int> resolve_columns(const StageDataset& ds, const std::vector<std::string>& names,
                                 bool empty_means_all);

}  // namespace dtrcv
