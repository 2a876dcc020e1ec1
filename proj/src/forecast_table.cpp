#include "scoring/forecast_table.hpp"

#include "scoring/delimited.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace scoring {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_missing(const std::string &field) {
  return field.empty() || field == "NA" || field == "na" || field == "NaN";
}

bool parse_number(const std::string &field, double *out) {
  const char *begin = field.data();
  const char *end = begin + field.size();
  if (begin != end && *begin == '+') {
    ++begin;
  }
  const auto result = std::from_chars(begin, end, *out);
  return result.ec == std::errc() && result.ptr == end;
}

bool is_integral(double x) { return std::floor(x) == x; }

std::string unit_key(const std::vector<std::string> &ids) {
  std::string key;
  for (const auto &id : ids) {
    key += id;
    key.push_back('\x1f');
  }
  return key;
}

} // namespace

std::string to_string(TableFormat format) {
  switch (format) {
  case TableFormat::Sample:
    return "sample";
  case TableFormat::Quantile:
    return "quantile";
  case TableFormat::Binary:
    return "binary";
  case TableFormat::Point:
    return "point";
  case TableFormat::MixedQuantilePoint:
    return "mixed-quantile-point";
  }
  return "unknown";
}

std::string to_string(TargetType type) {
  switch (type) {
  case TargetType::Integer:
    return "integer";
  case TargetType::Continuous:
    return "continuous";
  case TargetType::Binary:
    return "binary";
  }
  return "unknown";
}

ForecastTable ingest(const std::string &path, const IngestOptions &options) {
  std::ifstream in(path);
  if (!in) {
    throw IngestError("cannot open input file: " + path);
  }
  return ingest_stream(in, options);
}

ForecastTable ingest_stream(std::istream &in, const IngestOptions &options) {
  std::string line;
  if (!std::getline(in, line)) {
    throw IngestError("input has no header row");
  }
  const std::vector<std::string> header = split_delimited(line, options.delimiter);

  long col_true = -1, col_pred = -1, col_quantile = -1, col_sample = -1;
  std::vector<long> id_cols;
  ForecastTable table;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string &name = header[i];
    if (name == "true_value") {
      col_true = static_cast<long>(i);
    } else if (name == "prediction") {
      col_pred = static_cast<long>(i);
    } else if (name == "quantile") {
      col_quantile = static_cast<long>(i);
    } else if (name == "sample") {
      col_sample = static_cast<long>(i);
    } else {
      id_cols.push_back(static_cast<long>(i));
      table.id_columns.push_back(name);
    }
  }
  if (col_true < 0) {
    throw IngestError("mandatory column `true_value` is missing");
  }
  if (col_pred < 0) {
    throw IngestError("mandatory column `prediction` is missing");
  }
  if (col_quantile >= 0 && col_sample >= 0) {
    throw IngestError("columns `quantile` and `sample` cannot both be present");
  }

  bool any_quantile = false;
  bool any_point = false;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const std::vector<std::string> fields = split_delimited(line, options.delimiter);
    if (fields.size() != header.size()) {
      throw IngestError("row " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    }
    ForecastRow row;
    const std::string &obs_field = fields[static_cast<std::size_t>(col_true)];
    const std::string &pred_field = fields[static_cast<std::size_t>(col_pred)];
    if (is_missing(obs_field)) {
      row.observed = kNaN;
    } else if (!parse_number(obs_field, &row.observed)) {
      throw IngestError("row " + std::to_string(line_no) +
                        ": non-numeric `true_value`: " + obs_field);
    }
    if (is_missing(pred_field)) {
      row.predicted = kNaN;
    } else if (!parse_number(pred_field, &row.predicted)) {
      throw IngestError("row " + std::to_string(line_no) +
                        ": non-numeric `prediction`: " + pred_field);
    }

    if (col_quantile >= 0) {
      const std::string &q = fields[static_cast<std::size_t>(col_quantile)];
      if (is_missing(q)) {
        row.kind = RepKind::Point;
        any_point = true;
      } else if (parse_number(q, &row.rep_value)) {
        row.kind = RepKind::Quantile;
        any_quantile = true;
      } else {
        throw IngestError("row " + std::to_string(line_no) +
                          ": non-numeric `quantile`: " + q);
      }
    } else if (col_sample >= 0) {
      const std::string &s = fields[static_cast<std::size_t>(col_sample)];
      if (!parse_number(s, &row.rep_value)) {
        throw IngestError("row " + std::to_string(line_no) +
                          ": non-numeric `sample`: " + s);
      }
      row.kind = RepKind::Sample;
    }

    row.ids.reserve(id_cols.size());
    for (long c : id_cols) {
      row.ids.push_back(fields[static_cast<std::size_t>(c)]);
    }
    table.rows.push_back(std::move(row));
  }

  if (col_quantile >= 0) {
    table.format = any_point ? (any_quantile ? TableFormat::MixedQuantilePoint
                                             : TableFormat::Point)
                             : TableFormat::Quantile;
  } else if (col_sample >= 0) {
    table.format = TableFormat::Sample;
  } else if (options.format_hint.has_value()) {
    if (*options.format_hint != TableFormat::Binary &&
        *options.format_hint != TableFormat::Point) {
      throw IngestError("format hint must be binary or point when neither a "
                        "`quantile` nor a `sample` column is present");
    }
    table.format = *options.format_hint;
  } else {
    bool binary_like = !table.rows.empty();
    for (const auto &row : table.rows) {
      if (!std::isnan(row.observed) && row.observed != 0.0 &&
          row.observed != 1.0) {
        binary_like = false;
        break;
      }
      if (!std::isnan(row.predicted) &&
          (row.predicted < 0.0 || row.predicted > 1.0)) {
        binary_like = false;
        break;
      }
    }
    table.format = binary_like ? TableFormat::Binary : TableFormat::Point;
  }
  const RepKind fallback = table.format == TableFormat::Binary
                               ? RepKind::BinaryProb
                               : RepKind::Point;
  if (col_quantile < 0 && col_sample < 0) {
    for (auto &row : table.rows) {
      row.kind = fallback;
    }
  }

  // Provisional target-type guess; validate() recomputes it after cleaning.
  bool all_binary = table.format == TableFormat::Binary;
  bool all_integer = !table.rows.empty();
  for (const auto &row : table.rows) {
    if (std::isnan(row.observed)) {
      continue;
    }
    if (!is_integral(row.observed)) {
      all_integer = false;
    }
    if (row.observed != 0.0 && row.observed != 1.0) {
      all_binary = false;
    }
  }
  table.target_type_guess = all_binary    ? TargetType::Binary
                            : all_integer ? TargetType::Integer
                                          : TargetType::Continuous;
  return table;
}

void write_table(const ForecastTable &table, std::ostream &out,
                 char delimiter) {
  for (const auto &col : table.id_columns) {
    out << col << delimiter;
  }
  const bool has_quantile = table.format == TableFormat::Quantile ||
                            table.format == TableFormat::MixedQuantilePoint ||
                            table.format == TableFormat::Point;
  const bool has_sample = table.format == TableFormat::Sample;
  if (has_quantile) {
    out << "quantile" << delimiter;
  } else if (has_sample) {
    out << "sample" << delimiter;
  }
  out << "prediction" << delimiter << "true_value" << '\n';

  for (const auto &row : table.rows) {
    for (const auto &id : row.ids) {
      out << id << delimiter;
    }
    if (has_quantile) {
      if (row.kind == RepKind::Quantile) {
        out << format_double(row.rep_value);
      } else {
        out << "NA";
      }
      out << delimiter;
    } else if (has_sample) {
      out << format_double(row.rep_value) << delimiter;
    }
    out << (std::isnan(row.predicted) ? "NA" : format_double(row.predicted))
        << delimiter
        << (std::isnan(row.observed) ? "NA" : format_double(row.observed))
        << '\n';
  }
}

ValidationReport validate(const ForecastTable &table) {
  if (table.empty()) {
    throw ValidationError("forecast table is empty");
  }
  ValidationReport report;
  report.cleaned.id_columns = table.id_columns;
  report.cleaned.format = table.format;

  std::size_t missing_pred = 0;
  std::size_t missing_obs = 0;
  for (const auto &row : table.rows) {
    const bool pred_na = std::isnan(row.predicted);
    const bool obs_na = std::isnan(row.observed);
    if (pred_na) {
      ++missing_pred;
    }
    if (obs_na && !pred_na) {
      ++missing_obs;
    }
    if (!pred_na && !obs_na) {
      report.cleaned.rows.push_back(row);
    }
  }
  if (missing_pred > 0) {
    report.messages.push_back(
        std::to_string(missing_pred) +
        " values for `prediction` are missing and the corresponding rows "
        "were removed. This may indicate a problem if unexpected.");
  }
  if (missing_obs > 0) {
    report.messages.push_back(
        std::to_string(missing_obs) +
        " values for `true_value` are missing and the corresponding rows "
        "were removed. This may indicate a problem if unexpected.");
  }
  if (report.cleaned.empty()) {
    throw ValidationError("no rows left after removing missing values");
  }

  for (const auto &row : report.cleaned.rows) {
    if (row.kind == RepKind::Quantile &&
        (row.rep_value <= 0.0 || row.rep_value >= 1.0)) {
      throw ValidationError("quantile level outside (0,1): " +
                            format_double(row.rep_value));
    }
    if (row.kind == RepKind::Sample &&
        (row.rep_value < 1.0 || std::floor(row.rep_value) != row.rep_value)) {
      throw ValidationError("sample index must be a positive integer, got " +
                            format_double(row.rep_value));
    }
    if (row.kind == RepKind::BinaryProb) {
      if (row.observed != 0.0 && row.observed != 1.0) {
        throw ValidationError("binary `true_value` must be 0 or 1, got " +
                              format_double(row.observed));
      }
      if (row.predicted < 0.0 || row.predicted > 1.0) {
        throw ValidationError("binary `prediction` must lie in [0,1], got " +
                              format_double(row.predicted));
      }
    }
  }

  // Target type: binary > integer > continuous.
  bool all_binary = table.format == TableFormat::Binary;
  bool all_integer = true;
  for (const auto &row : report.cleaned.rows) {
    if (!is_integral(row.observed)) {
      all_integer = false;
    }
    if (row.observed != 0.0 && row.observed != 1.0) {
      all_binary = false;
    }
  }
  report.target_type = all_binary    ? TargetType::Binary
                       : all_integer ? TargetType::Integer
                                     : TargetType::Continuous;
  report.cleaned.target_type_guess = report.target_type;
  report.prediction_type = table.format;
  report.forecast_unit = table.id_columns;

  // Duplicate representation values within a forecast unit.
  std::set<std::string> duplicate_units;
  {
    std::map<std::string, std::set<double>> seen;
    std::map<std::string, std::size_t> plain_rows;
    for (const auto &row : report.cleaned.rows) {
      const std::string key =
          unit_key(row.ids) + static_cast<char>(row.kind);
      if (row.kind == RepKind::Quantile || row.kind == RepKind::Sample) {
        if (!seen[key].insert(row.rep_value).second) {
          std::string label;
          for (std::size_t i = 0; i < row.ids.size(); ++i) {
            if (i > 0) {
              label += "/";
            }
            label += row.ids[i];
          }
          duplicate_units.insert(label);
        }
      } else {
        if (++plain_rows[key] > 1) {
          std::string label;
          for (std::size_t i = 0; i < row.ids.size(); ++i) {
            if (i > 0) {
              label += "/";
            }
            label += row.ids[i];
          }
          duplicate_units.insert(label);
        }
      }
    }
  }
  if (!duplicate_units.empty()) {
    std::string msg = "duplicate forecasts for the same unit:";
    for (const auto &unit : duplicate_units) {
      msg += " " + unit;
    }
    throw ValidationError(msg);
  }

  // Distinct values per column, per model when a model column exists.
  const auto model_it = std::find(table.id_columns.begin(),
                                  table.id_columns.end(), "model");
  const bool has_model = model_it != table.id_columns.end();
  const std::size_t model_idx =
      static_cast<std::size_t>(model_it - table.id_columns.begin());
  std::map<std::string, std::map<std::string, std::set<std::string>>> distinct;
  for (const auto &row : report.cleaned.rows) {
    const std::string model = has_model ? row.ids[model_idx] : "all";
    auto &cols = distinct[model];
    for (std::size_t i = 0; i < row.ids.size(); ++i) {
      cols[table.id_columns[i]].insert(row.ids[i]);
    }
    cols["true_value"].insert(format_double(row.observed));
    cols["prediction"].insert(format_double(row.predicted));
    if (row.kind == RepKind::Quantile) {
      cols["quantile"].insert(format_double(row.rep_value));
    } else if (row.kind == RepKind::Sample) {
      cols["sample"].insert(format_double(row.rep_value));
    }
  }
  for (const auto &[model, cols] : distinct) {
    for (const auto &[col, values] : cols) {
      report.unique_values[model][col] = values.size();
    }
  }
  return report;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json j;
  j["target_type"] = scoring::to_string(target_type);
  j["prediction_type"] = scoring::to_string(prediction_type);
  j["forecast_unit"] = forecast_unit;
  nlohmann::json uv = nlohmann::json::object();
  for (const auto &[model, cols] : unique_values) {
    uv[model] = cols;
  }
  j["unique_values"] = uv;
  j["messages"] = messages;
  j["warnings"] = warnings;
  j["rows"] = cleaned.rows.size();
  return j;
}

std::vector<std::pair<std::vector<std::string>, std::vector<std::size_t>>>
group_by_unit(const ForecastTable &table) {
  std::map<std::string, std::pair<std::vector<std::string>,
                                  std::vector<std::size_t>>>
      groups;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto &row = table.rows[i];
    auto &entry = groups[unit_key(row.ids)];
    if (entry.first.empty()) {
      entry.first = row.ids;
    }
    entry.second.push_back(i);
  }
  std::vector<std::pair<std::vector<std::string>, std::vector<std::size_t>>>
      out;
  out.reserve(groups.size());
  for (auto &[key, entry] : groups) {
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<AvailabilityRow>
available_forecasts(const ForecastTable &table,
                    const std::vector<std::string> &by) {
  std::vector<std::size_t> by_idx;
  for (const auto &name : by) {
    const auto it =
        std::find(table.id_columns.begin(), table.id_columns.end(), name);
    if (it == table.id_columns.end()) {
      throw ValidationError("unknown column in `by`: " + name);
    }
    by_idx.push_back(static_cast<std::size_t>(it - table.id_columns.begin()));
  }

  std::map<std::vector<std::string>, std::size_t> counts;
  for (const auto &[ids, rows] : group_by_unit(table)) {
    std::vector<std::string> group;
    group.reserve(by_idx.size());
    for (std::size_t idx : by_idx) {
      group.push_back(ids[idx]);
    }
    ++counts[group];
  }
  std::vector<AvailabilityRow> out;
  out.reserve(counts.size());
  for (const auto &[group, count] : counts) {
    out.push_back({group, count});
  }
  return out;
}

ForecastTable sample_to_quantile(const ForecastTable &table,
                                 const std::vector<double> &levels,
                                 std::vector<std::string> *warnings) {
  if (table.format != TableFormat::Sample) {
    throw ValidationError("sample_to_quantile requires a sample-format table");
  }
  if (levels.empty()) {
    throw ValidationError("no quantile levels given");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] <= 0.0 || levels[i] >= 1.0) {
      throw ValidationError("quantile level outside (0,1): " +
                            format_double(levels[i]));
    }
    if (i > 0 && levels[i] <= levels[i - 1]) {
      throw ValidationError("quantile levels must be sorted and unique");
    }
  }

  ForecastTable out;
  out.id_columns = table.id_columns;
  out.format = TableFormat::Quantile;
  out.target_type_guess = table.target_type_guess;

  bool warned_small = false;
  for (const auto &[ids, row_idx] : group_by_unit(table)) {
    if (row_idx.size() < 2) {
      throw ComputeError(
          "fewer than 2 samples in a forecast unit; cannot estimate "
          "quantiles");
    }
    if (row_idx.size() < 100 && warnings != nullptr && !warned_small) {
      warnings->push_back(
          "some forecast units have fewer than 100 samples; estimated "
          "quantiles may be biased");
      warned_small = true;
    }
    Eigen::VectorXd samples(static_cast<Eigen::Index>(row_idx.size()));
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
      samples[static_cast<Eigen::Index>(i)] = table.rows[row_idx[i]].predicted;
    }
    const double observed = table.rows[row_idx.front()].observed;
    for (double level : levels) {
      ForecastRow row;
      row.ids = ids;
      row.observed = observed;
      row.predicted = quantile_type7(samples, level);
      row.kind = RepKind::Quantile;
      row.rep_value = level;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

} // namespace scoring
