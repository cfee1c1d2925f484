#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "dtrcv/dtr.hpp"
#include "dtrcv/estimators.hpp"
#include "dtrcv/mccv.hpp"
#include "dtrcv/variance.hpp"

namespace dtrcv {

nlohmann::json to_json(const ModelSpec& spec);
nlohmann::json to_json(const PropensityFit& fit);
nlohmann::json to_json(const LinearContrastFit& fit);
nlohmann::json to_json(const TreeContrastFit& fit);
nlohmann::json to_json(const MeanRegressionFit& fit);
nlohmann::json to_json(const FittedContrast& fit);
nlohmann::json to_json(const CvReport& report);
nlohmann::json to_json(const StageSelectionReport& report);
nlohmann::json to_json(const Regime& regime);

// One CSV row per cross-validation run.
std::string cv_report_csv_header();
std::string cv_report_csv_row(const CvReport& report);

// One CSV row per variance analysis; the leading summary columns come from
// replication context and print as NA when absent.
std::string rho_report_csv_header();
std::string rho_report_csv_row(const RhoReport& rho, std::optional<double> av_r_cv,
                               std::optional<double> var_star);

}  // namespace dtrcv
