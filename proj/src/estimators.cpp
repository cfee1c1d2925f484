#include "dtrcv/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "dtrcv/stats.hpp"

namespace dtrcv {

std::string ModelSpec::label() const {
  if (!name.empty()) return name;
  switch (kind) {
    case ModelKind::constant:
      return "constant";
    case ModelKind::linear: {
      std::string s = "linear";
      for (const auto& c : contrast_covariates) s += ":" + c;
      return s;
    }
    case ModelKind::tree:
      return "tree";
  }
  return "model";
}

ModelSpec constant_spec() {
  ModelSpec spec;
  spec.kind = ModelKind::constant;
  spec.name = "constant";
  return spec;
}

ModelSpec linear_spec(std::vector<std::string> contrast_covariates) {
  ModelSpec spec;
  spec.kind = ModelKind::linear;
  spec.contrast_covariates = std::move(contrast_covariates);
  return spec;
}

ModelSpec tree_spec(std::vector<std::string> split_covariates, TreeParams params) {
  ModelSpec spec;
  spec.kind = ModelKind::tree;
  spec.contrast_covariates = std::move(split_covariates);
  spec.tree = params;
  return spec;
}

std::vector<int> resolve_columns(const StageDataset& ds, const std::vector<std::string>& names,
                                 bool empty_means_all) {
  std::vector<int> cols;
  if (names.empty() && empty_means_all) {
    cols.resize(static_cast<std::size_t>(ds.dim()));
    for (int j = 0; j < ds.dim(); ++j) cols[static_cast<std::size_t>(j)] = j;
    return cols;
  }
  cols.reserve(names.size());
  for (const auto& name : names) cols.push_back(ds.column(name));
  return cols;
}

namespace {

Eigen::VectorXd design_row(const Eigen::RowVectorXd& row, const std::vector<int>& cols) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(cols.size()) + 1);
  x[0] = 1.0;
  for (std::size_t k = 0; k < cols.size(); ++k) x[static_cast<Eigen::Index>(k) + 1] = row[cols[k]];
  return x;
}

constexpr int kIrlsMaxIter = 25;
constexpr double kIrlsTol = 1e-8;
constexpr double kProbBoundary = 1e-6;
constexpr double kBoundaryShare = 0.10;

}  // namespace

double PropensityFit::predict(const Eigen::RowVectorXd& row) const {
  double eta = coef[0];
  for (std::size_t k = 0; k < cols.size(); ++k) {
    eta += coef[static_cast<Eigen::Index>(k) + 1] * row[cols[k]];
  }
  return expit(eta);
}

PropensityFit fit_propensity(const StageDataset& ds, const std::vector<int>& cols) {
  const int n = ds.n();
  const auto p = static_cast<Eigen::Index>(cols.size()) + 1;
  double treated_share = 0.0;
  for (int a : ds.action) treated_share += a;
  treated_share /= n;
  require(treated_share > 0.0 && treated_share < 1.0, ErrorKind::empty_arm,
          "propensity fit needs both arms");

  PropensityFit out;
  out.cols = cols;

  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i) x.row(i) = design_row(ds.features.row(i), cols).transpose();
  Eigen::VectorXd a(n);
  for (int i = 0; i < n; ++i) a[i] = ds.action[static_cast<std::size_t>(i)];

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  bool converged = false;
  bool solve_failed = false;
  for (int iter = 0; iter < kIrlsMaxIter; ++iter) {
    Eigen::VectorXd eta = (x * beta).cwiseMax(-30.0).cwiseMin(30.0);
    Eigen::VectorXd prob = eta.unaryExpr([](double e) { return expit(e); });
    Eigen::VectorXd w = prob.array() * (1.0 - prob.array()) + 1e-10;
    Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
    Eigen::VectorXd score = x.transpose() * (a - prob);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success) {
      solve_failed = true;
      break;
    }
    Eigen::VectorXd step = ldlt.solve(score);
    if (!step.allFinite()) {
      solve_failed = true;
      break;
    }
    beta += step;
    if (step.cwiseAbs().maxCoeff() < kIrlsTol) {
      converged = true;
      break;
    }
  }

  bool boundary_heavy = false;
  if (converged && !solve_failed) {
    int boundary = 0;
    for (int i = 0; i < n; ++i) {
      const double eta = std::clamp(x.row(i).dot(beta), -30.0, 30.0);
      const double prob = expit(eta);
      if (prob < kProbBoundary || prob > 1.0 - kProbBoundary) ++boundary;
    }
    boundary_heavy = boundary > kBoundaryShare * n;
  }

  if (!converged || solve_failed || boundary_heavy) {
    out.coef = Eigen::VectorXd::Zero(p);
    out.coef[0] = logit(treated_share);
    out.fallback = true;
  } else {
    out.coef = beta;
  }
  return out;
}

double LinearContrastFit::predict(const Eigen::RowVectorXd& row) const {
  double c = psi[0];
  for (std::size_t k = 0; k < contrast_cols.size(); ++k) {
    c += psi[static_cast<Eigen::Index>(k) + 1] * row[contrast_cols[k]];
  }
  return c;
}

LinearContrastFit fit_linear_contrast(const StageDataset& ds, const ModelSpec& spec) {
  validate_stage_dataset(ds);
  LinearContrastFit out;
  out.contrast_cols =
      spec.kind == ModelKind::constant
          ? std::vector<int>{}
          : resolve_columns(ds, spec.contrast_covariates, /*empty_means_all=*/false);
  out.treatment_free_cols = resolve_columns(ds, spec.treatment_free_covariates,
                                            /*empty_means_all=*/true);
  out.propensity =
      fit_propensity(ds, resolve_columns(ds, spec.propensity_covariates,
                                         /*empty_means_all=*/true));

  const int n = ds.n();
  const auto p1 = static_cast<Eigen::Index>(out.contrast_cols.size()) + 1;
  const auto p2 = static_cast<Eigen::Index>(out.treatment_free_cols.size()) + 1;
  const Eigen::Index p = p1 + p2;

  // Stack the two moment conditions into one linear system in (psi, gamma):
  //   sum_i x_i (A_i - pi_i)(Y_i - A_i psi'x_i - gamma's_i) = 0
  //   sum_i s_i          (Y_i - A_i psi'x_i - gamma's_i) = 0
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  for (int i = 0; i < n; ++i) {
    const Eigen::RowVectorXd row = ds.features.row(i);
    const Eigen::VectorXd x = design_row(row, out.contrast_cols);
    const Eigen::VectorXd s = design_row(row, out.treatment_free_cols);
    const double a = ds.action[static_cast<std::size_t>(i)];
    const double resid_w = a - out.propensity.predict(row);
    const double y = ds.response[i];
    m.topLeftCorner(p1, p1) += (resid_w * a) * (x * x.transpose());
    m.topRightCorner(p1, p2) += resid_w * (x * s.transpose());
    m.bottomLeftCorner(p2, p1) += a * (s * x.transpose());
    m.bottomRightCorner(p2, p2) += s * s.transpose();
    b.head(p1) += resid_w * y * x;
    b.tail(p2) += y * s;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd theta;
  if (lu.isInvertible()) {
    theta = lu.solve(b);
  }
  if (theta.size() == 0 || !theta.allFinite()) {
    // Minimum-norm least-squares solution of the same system.
    theta = m.completeOrthogonalDecomposition().solve(b);
    out.singular = true;
  }
  out.psi = theta.head(p1);
  out.gamma = theta.tail(p2);
  return out;
}

double MeanRegressionFit::predict(const Eigen::RowVectorXd& row) const {
  double y = beta[0];
  for (std::size_t k = 0; k < cols.size(); ++k) {
    y += beta[static_cast<Eigen::Index>(k) + 1] * row[cols[k]];
  }
  return y;
}

MeanRegressionFit fit_mean_regression(const StageDataset& ds, const std::vector<int>& cols) {
  const int n = ds.n();
  require(n >= 1, ErrorKind::bad_data, "regression needs data");
  const auto p = static_cast<Eigen::Index>(cols.size()) + 1;
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i) x.row(i) = design_row(ds.features.row(i), cols).transpose();
  MeanRegressionFit out;
  out.cols = cols;
  out.beta = (x.transpose() * x).ldlt().solve(x.transpose() * ds.response);
  if (!out.beta.allFinite()) {
    out.beta = x.completeOrthogonalDecomposition().solve(ds.response);
  }
  return out;
}

double FittedContrast::predict(const Eigen::RowVectorXd& row) const {
  return std::visit([&](const auto& f) { return f.predict(row); }, fit);
}

double predict_contrast(const FittedContrast& fit, const Eigen::RowVectorXd& row) {
  return fit.predict(row);
}

FittedContrast fit_spec(const StageDataset& ds, const ModelSpec& spec, std::uint64_t seed) {
  if (spec.kind == ModelKind::tree) {
    return FittedContrast{fit_causal_tree(ds, spec, seed)};
  }
  return FittedContrast{fit_linear_contrast(ds, spec)};
}

}  // namespace dtrcv
