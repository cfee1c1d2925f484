#include "dtrcv/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "dtrcv/stats.hpp"

namespace dtrcv {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string field = line.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(std::move(field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& field, int row, const std::string& col) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto* begin = field.data();
  const auto* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  require(res.ec == std::errc{} && res.ptr == end, ErrorKind::bad_data,
          "row " + std::to_string(row) + ", column '" + col + "': cannot parse '" + field +
              "' as a number");
  return value;
}

std::int64_t parse_id(const std::string& field, int row) {
  std::int64_t value = 0;
  const auto* begin = field.data();
  const auto* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  require(res.ec == std::errc{} && res.ptr == end, ErrorKind::bad_data,
          "row " + std::to_string(row) + ": cannot parse id '" + field + "'");
  return value;
}

int parse_binary(const std::string& field, int row, const std::string& col) {
  require(field == "0" || field == "1", ErrorKind::bad_data,
          "row " + std::to_string(row) + ", column '" + col + "': expected 0 or 1, got '" +
              field + "'");
  return field == "1" ? 1 : 0;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

RawTable read_table(std::istream& in) {
  RawTable table;
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::bad_data, "missing header row");
  table.header = split_fields(line);
  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    require(fields.size() == table.header.size(), ErrorKind::bad_data,
            "row " + std::to_string(row_no) + ": expected " +
                std::to_string(table.header.size()) + " fields, got " +
                std::to_string(fields.size()));
    table.rows.push_back(std::move(fields));
  }
  require(!table.rows.empty(), ErrorKind::bad_data, "no data rows");
  return table;
}

int find_column(const RawTable& table, const std::string& name) {
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == name) return static_cast<int>(c);
  }
  return -1;
}

int require_column(const RawTable& table, const std::string& name) {
  const int c = find_column(table, name);
  require(c >= 0, ErrorKind::bad_data, "missing required column '" + name + "'");
  return c;
}

// "s3_bmi" -> (3, "bmi"); returns stage 0 when the name has no such prefix.
std::pair<int, std::string> split_stage_prefix(const std::string& name, char lead) {
  if (name.size() < 2 || name[0] != lead) return {0, ""};
  std::size_t pos = 1;
  while (pos < name.size() && name[pos] >= '0' && name[pos] <= '9') ++pos;
  if (pos == 1) return {0, ""};
  const int k = std::stoi(name.substr(1, pos - 1));
  if (k < 1) return {0, ""};
  if (pos == name.size()) return {k, ""};
  if (name[pos] != '_') return {0, ""};
  return {k, name.substr(pos + 1)};
}

}  // namespace

StageDataset parse_stage_csv(std::istream& in) {
  const RawTable table = read_table(in);
  const int id_col = require_column(table, "id");
  const int action_col = require_column(table, "action");
  const int response_col = require_column(table, "response");

  std::vector<int> feature_cols;
  StageDataset ds;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const int ci = static_cast<int>(c);
    if (ci == id_col || ci == action_col || ci == response_col) continue;
    feature_cols.push_back(ci);
    ds.feature_names.push_back(table.header[c]);
  }
  require(!feature_cols.empty(), ErrorKind::bad_data, "no feature columns");

  const int n = static_cast<int>(table.rows.size());
  const int d = static_cast<int>(feature_cols.size());
  ds.features.resize(n, d);
  ds.response.resize(n);
  ds.action.resize(static_cast<std::size_t>(n));
  ds.id.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& fields = table.rows[static_cast<std::size_t>(i)];
    const int row_no = i + 2;  // header is row 1
    ds.id[static_cast<std::size_t>(i)] = parse_id(fields[static_cast<std::size_t>(id_col)], row_no);
    ds.action[static_cast<std::size_t>(i)] =
        parse_binary(fields[static_cast<std::size_t>(action_col)], row_no, "action");
    ds.response[i] =
        parse_double(fields[static_cast<std::size_t>(response_col)], row_no, "response");
    for (int f = 0; f < d; ++f) {
      ds.features(i, f) =
          parse_double(fields[static_cast<std::size_t>(feature_cols[static_cast<std::size_t>(f)])],
                       row_no, ds.feature_names[static_cast<std::size_t>(f)]);
    }
  }
  validate_stage_dataset(ds);
  return ds;
}

StageDataset load_stage_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::bad_data, "cannot open '" + path + "'");
  return parse_stage_csv(in);
}

void write_stage_csv(std::ostream& out, const StageDataset& ds) {
  out << "id";
  for (const auto& name : ds.feature_names) out << ',' << name;
  out << ",action,response\n";
  for (int i = 0; i < ds.n(); ++i) {
    out << ds.id[static_cast<std::size_t>(i)];
    for (int f = 0; f < ds.dim(); ++f) out << ',' << format_g(ds.features(i, f), 17);
    out << ',' << ds.action[static_cast<std::size_t>(i)] << ',' << format_g(ds.response[i], 17)
        << '\n';
  }
}

void save_stage_csv(const StageDataset& ds, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::bad_data, "cannot open '" + path + "' for writing");
  write_stage_csv(out, ds);
}

TrialDataset parse_trial_csv(std::istream& in) {
  const RawTable table = read_table(in);
  const int id_col = require_column(table, "id");
  const int y_col = require_column(table, "y");

  std::map<int, int> action_cols;                                // stage -> column
  std::map<int, int> reached_cols;                               // stage -> column
  std::map<int, std::vector<std::pair<int, std::string>>> feat;  // stage -> (col, name)
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const int ci = static_cast<int>(c);
    if (ci == id_col || ci == y_col) continue;
    const std::string& name = table.header[c];
    if (auto [k, rest] = split_stage_prefix(name, 'a'); k >= 1 && rest.empty()) {
      action_cols[k] = ci;
      continue;
    }
    if (name.rfind("reached_s", 0) == 0) {
      const auto [k, rest] = split_stage_prefix(name.substr(8), 's');
      require(k >= 1 && rest.empty(), ErrorKind::bad_data, "malformed column '" + name + "'");
      reached_cols[k] = ci;
      continue;
    }
    if (auto [k, rest] = split_stage_prefix(name, 's'); k >= 1 && !rest.empty()) {
      feat[k].emplace_back(ci, rest);
      continue;
    }
    fail(ErrorKind::bad_data, "unrecognized column '" + name + "'");
  }

  const int n_stages = static_cast<int>(action_cols.size());
  require(n_stages >= 1, ErrorKind::bad_data, "no stage action columns (a1, a2, ...)");
  for (int k = 1; k <= n_stages; ++k) {
    require(action_cols.count(k) == 1, ErrorKind::bad_data,
            "stage action columns must be contiguous; missing a" + std::to_string(k));
    require(feat.count(k) == 1, ErrorKind::bad_data,
            "stage " + std::to_string(k) + " has no feature columns (s" + std::to_string(k) +
                "_...)");
  }
  for (const auto& kv : feat) {
    require(kv.first <= n_stages, ErrorKind::bad_data,
            "feature columns for stage " + std::to_string(kv.first) +
                " without action column a" + std::to_string(kv.first));
  }
  for (const auto& kv : reached_cols) {
    require(kv.first >= 1 && kv.first <= n_stages, ErrorKind::bad_data,
            "reached mask for unknown stage " + std::to_string(kv.first));
  }

  const int n = static_cast<int>(table.rows.size());
  TrialDataset trial;
  trial.stages.resize(static_cast<std::size_t>(n_stages));
  trial.actions.setZero(n, n_stages);
  trial.outcome.resize(n);
  trial.reached.assign(static_cast<std::size_t>(n_stages),
                       std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1));
  trial.id.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n_stages; ++k) {
    auto& block = trial.stages[static_cast<std::size_t>(k)];
    const auto& cols = feat[k + 1];
    block.features.resize(n, static_cast<int>(cols.size()));
    for (const auto& cn : cols) block.feature_names.push_back(cn.second);
  }

  for (int i = 0; i < n; ++i) {
    const auto& fields = table.rows[static_cast<std::size_t>(i)];
    const int row_no = i + 2;
    trial.id[static_cast<std::size_t>(i)] =
        parse_id(fields[static_cast<std::size_t>(id_col)], row_no);
    trial.outcome[i] = parse_double(fields[static_cast<std::size_t>(y_col)], row_no, "y");
    for (int k = 1; k <= n_stages; ++k) {
      bool reached_k = true;
      if (const auto it = reached_cols.find(k); it != reached_cols.end()) {
        reached_k = parse_binary(fields[static_cast<std::size_t>(it->second)], row_no,
                                 table.header[static_cast<std::size_t>(it->second)]) == 1;
        trial.reached[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)] =
            reached_k ? 1 : 0;
      }
      auto& block = trial.stages[static_cast<std::size_t>(k - 1)];
      const auto& cols = feat[k];
      for (std::size_t f = 0; f < cols.size(); ++f) {
        block.features(i, static_cast<int>(f)) =
            parse_double(fields[static_cast<std::size_t>(cols[f].first)], row_no, cols[f].second);
      }
      const std::string& a_field = fields[static_cast<std::size_t>(action_cols[k])];
      if (reached_k) {
        trial.actions(i, k - 1) =
            parse_binary(a_field, row_no, "a" + std::to_string(k));
      } else if (!a_field.empty()) {
        trial.actions(i, k - 1) = parse_binary(a_field, row_no, "a" + std::to_string(k));
      }
    }
  }
  validate_trial_dataset(trial);
  return trial;
}

TrialDataset load_trial_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::bad_data, "cannot open '" + path + "'");
  return parse_trial_csv(in);
}

void write_trial_csv(std::ostream& out, const TrialDataset& trial) {
  out << "id";
  for (int k = 0; k < trial.n_stages(); ++k) {
    for (const auto& name : trial.stages[static_cast<std::size_t>(k)].feature_names) {
      out << ",s" << (k + 1) << '_' << name;
    }
    out << ",a" << (k + 1);
  }
  out << ",y";
  for (int k = 0; k < trial.n_stages(); ++k) out << ",reached_s" << (k + 1);
  out << '\n';

  for (int i = 0; i < trial.n(); ++i) {
    out << trial.id[static_cast<std::size_t>(i)];
    for (int k = 0; k < trial.n_stages(); ++k) {
      const bool reached = trial.reached[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      const auto& block = trial.stages[static_cast<std::size_t>(k)];
      for (int f = 0; f < block.features.cols(); ++f) {
        out << ',';
        if (reached && std::isfinite(block.features(i, f))) {
          out << format_g(block.features(i, f), 17);
        }
      }
      out << ',';
      if (reached) out << trial.actions(i, k);
    }
    out << ',' << format_g(trial.outcome[i], 17);
    for (int k = 0; k < trial.n_stages(); ++k) {
      out << ','
          << static_cast<int>(
                 trial.reached[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
    }
    out << '\n';
  }
}

void save_trial_csv(const TrialDataset& trial, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::bad_data, "cannot open '" + path + "' for writing");
  write_trial_csv(out, trial);
}

}  // namespace dtrcv
