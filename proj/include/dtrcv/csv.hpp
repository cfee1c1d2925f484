#pragma once

#include <iosfwd>
#include <string>

#include "dtrcv/data.hpp"

namespace dtrcv {

// Plain numeric CSV, comma-separated, '.' decimal point, no quoting. Column
// order is free; columns are located by header name.
//
// Single-stage schema: id, <one column per feature>, action, response.
// Multi-stage schema:  id, s<k>_<feature>..., a<k>..., y, reached_s<k>...
// Missing reached columns default to everyone reaching that stage. Empty
// fields read as NaN (useful for unreached rows).

StageDataset parse_stage_csv(std::istream& in);
StageDataset load_stage_csv(const std::string& path);
void write_stage_csv(std::ostream& out, const StageDataset& ds);
void save_stage_csv(const StageDataset& ds, const std::string& path);

TrialDataset parse_trial_csv(std::istream& in);
TrialDataset load_trial_csv(const std::string& path);
void write_trial_csv(std::ostream& out, const TrialDataset& trial);
void save_trial_csv(const TrialDataset& trial, const std::string& path);

}  // namespace dtrcv
