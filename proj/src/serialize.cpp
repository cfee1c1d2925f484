#include "dtrcv/serialize.hpp"

#include <sstream>

#include "dtrcv/stats.hpp"

namespace dtrcv {

namespace {

nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

const char* kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::constant: return "constant";
    case ModelKind::linear: return "linear";
    case ModelKind::tree: return "tree";
  }
  return "unknown";
}

std::string catalog_value(const RhoReport& rho, const std::string& key) {
  const auto it = rho.catalog.find(key);
  return it == rho.catalog.end() ? "NA" : format_g(it->second);
}

}  // namespace

nlohmann::json to_json(const ModelSpec& spec) {
  nlohmann::json out;
  out["name"] = spec.label();
  out["kind"] = kind_name(spec.kind);
  out["contrast_covariates"] = spec.contrast_covariates;
  out["treatment_free_covariates"] = spec.treatment_free_covariates;
  out["propensity_covariates"] = spec.propensity_covariates;
  if (spec.kind == ModelKind::tree) {
    out["tree"] = {{"honest", spec.tree.honest},
                   {"prune", spec.tree.prune},
                   {"min_leaf_per_arm", spec.tree.min_leaf_per_arm},
                   {"max_depth", spec.tree.max_depth},
                   {"honest_fraction", spec.tree.honest_fraction},
                   {"cv_folds_for_pruning", spec.tree.cv_folds_for_pruning}};
  }
  return out;
}

nlohmann::json to_json(const PropensityFit& fit) {
  return {{"coef", vec_to_json(fit.coef)}, {"columns", fit.cols}, {"fallback", fit.fallback}};
}

nlohmann::json to_json(const LinearContrastFit& fit) {
  nlohmann::json out;
  out["type"] = "linear_contrast";
  out["psi"] = vec_to_json(fit.psi);
  out["contrast_columns"] = fit.contrast_cols;
  out["gamma"] = vec_to_json(fit.gamma);
  out["treatment_free_columns"] = fit.treatment_free_cols;
  out["propensity"] = to_json(fit.propensity);
  out["singular"] = fit.singular;
  return out;
}

nlohmann::json to_json(const TreeContrastFit& fit) {
  nlohmann::json out;
  out["type"] = "tree_contrast";
  out["split_columns"] = fit.split_cols;
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& node : fit.nodes) {
    nodes.push_back({{"feature", node.feature},
                     {"threshold", node.threshold},
                     {"left", node.left},
                     {"right", node.right},
                     {"value", node.value}});
  }
  out["nodes"] = std::move(nodes);
  out["leaves"] = fit.leaf_count();
  out["depth"] = fit.depth();
  return out;
}

nlohmann::json to_json(const MeanRegressionFit& fit) {
  return {{"type", "mean_regression"}, {"beta", vec_to_json(fit.beta)}, {"columns", fit.cols}};
}

nlohmann::json to_json(const FittedContrast& fit) {
  return std::visit([](const auto& inner) { return to_json(inner); }, fit.fit);
}

nlohmann::json to_json(const CvReport& report) {
  nlohmann::json out;
  out["r_cv"] = report.r_cv;
  out["s_r_sq"] = report.s_r_sq;
  out["s_u_sq"] = report.s_u_sq;
  out["j"] = report.j_splits;
  out["q"] = report.q;
  out["n"] = report.n;
  out["n2"] = report.n2;
  out["per_split_risks"] = report.per_split_risks;
  return out;
}

nlohmann::json to_json(const StageSelectionReport& report) {
  nlohmann::json out;
  out["stage"] = report.stage;
  out["r_cv"] = report.r_cv;
  if (report.variance) out["variance"] = *report.variance;
  if (report.p_value) out["p_value"] = *report.p_value;
  if (report.degenerate_variance) out["degenerate_variance"] = true;
  out["chosen_index"] = report.chosen_index;
  out["chosen"] = to_json(report.chosen);
  out["fitted"] = to_json(report.fitted);
  if (!report.candidate_risks.empty()) out["candidate_risks"] = report.candidate_risks;
  return out;
}

nlohmann::json to_json(const Regime& regime) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& report : regime.reports) stages.push_back(to_json(report));
  return {{"stages", std::move(stages)}};
}

std::string cv_report_csv_header() { return "r_cv,s_r_sq,s_u_sq,j,q,n,n2"; }

std::string cv_report_csv_row(const CvReport& report) {
  std::ostringstream out;
  out << format_g(report.r_cv) << ',' << format_g(report.s_r_sq) << ','
      << format_g(report.s_u_sq) << ',' << report.j_splits << ',' << format_g(report.q) << ','
      << report.n << ',' << report.n2;
  return out.str();
}

std::string rho_report_csv_header() {
  return "av_r_cv,var_star,rho_half,var_rho_half,rho_adj,var_rho_adj,var_rho0,var_rhoq,"
         "var_half,var_matched_n2";
}

std::string rho_report_csv_row(const RhoReport& rho, std::optional<double> av_r_cv,
                               std::optional<double> var_star) {
  std::ostringstream out;
  out << (av_r_cv ? format_g(*av_r_cv) : "NA") << ','
      << (var_star ? format_g(*var_star) : "NA") << ',' << format_g(rho.rho_half) << ','
      << catalog_value(rho, "proposed_half") << ',' << format_g(rho.rho_adj) << ','
      << catalog_value(rho, "proposed_adj") << ',' << catalog_value(rho, "rho0") << ','
      << catalog_value(rho, "rhoq") << ',' << catalog_value(rho, "half_naive") << ','
      << catalog_value(rho, "matched_n2");
  return out.str();
}

}  // namespace dtrcv
