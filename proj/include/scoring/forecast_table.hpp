#ifndef SCORING_FORECAST_TABLE_HPP
#define SCORING_FORECAST_TABLE_HPP

#include "scoring/stats.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace scoring {

enum class RepKind { Sample, Quantile, BinaryProb, Point };
enum class TableFormat { Sample, Quantile, Binary, Point, MixedQuantilePoint };
enum class TargetType { Integer, Continuous, Binary };

std::string to_string(TableFormat format);
std::string to_string(TargetType type);

// One prediction/observation row in long format. Identifier values are
// parallel to ForecastTable::id_columns.
struct ForecastRow {
  std::vector<std::string> ids;
  double observed = 0.0;  // NaN when missing in the input
  double predicted = 0.0; // NaN when missing in the input
  RepKind kind = RepKind::Point;
  double rep_value = 0.0; // quantile level or sample index
};

struct ForecastTable {
  std::vector<std::string> id_columns;
  std::vector<ForecastRow> rows;
  TableFormat format = TableFormat::Point;
  TargetType target_type_guess = TargetType::Continuous;

  bool empty() const { return rows.empty(); }
};

struct IngestOptions {
  char delimiter = ',';
  // Resolves the binary-vs-point ambiguity when neither a `quantile` nor a
  // `sample` column is present; inferred from the data when unset.
  std::optional<TableFormat> format_hint;
};

// Reads a delimited text file with a mandatory header row. The reserved
// columns are true_value, prediction, quantile and sample; everything
// else becomes an identifier column. Missing values are empty fields or
// the literal NA.
ForecastTable ingest(const std::string &path, const IngestOptions &options = {});
ForecastTable ingest_stream(std::istream &in, const IngestOptions &options);

// Writes a table back out in the same long format ingest() reads.
void write_table(const ForecastTable &table, std::ostream &out,
                 char delimiter = ',');

struct ValidationReport {
  TargetType target_type = TargetType::Continuous;
  TableFormat prediction_type = TableFormat::Point;
  std::vector<std::string> forecast_unit;
  // per model: column name -> number of distinct values
  std::map<std::string, std::map<std::string, std::size_t>> unique_values;
  std::vector<std::string> messages;
  std::vector<std::string> warnings;
  ForecastTable cleaned;

  nlohmann::json to_json() const;
};

// Checks a table, drops rows with missing values (recording the counts),
// infers target and prediction type and the forecast unit, and rejects
// duplicated quantile levels / sample indices within a unit.
ValidationReport validate(const ForecastTable &table);

struct AvailabilityRow {
  std::vector<std::string> group; // parallel to the `by` columns
  std::size_t count = 0;          // number of distinct forecasts
};

// Number of distinct complete forecasts (not rows) per combination of
// `by` column values; an empty `by` yields one total row.
std::vector<AvailabilityRow>
available_forecasts(const ForecastTable &table,
                    const std::vector<std::string> &by);

// Converts a sample-format table to quantile format using the type-7
// empirical quantile estimator per forecast unit.
ForecastTable sample_to_quantile(const ForecastTable &table,
                                 const std::vector<double> &levels,
                                 std::vector<std::string> *warnings = nullptr);

// Grouping helper shared with the evaluation layer: row indices per
// forecast-unit key, keys in deterministic sorted order.
std::vector<std::pair<std::vector<std::string>, std::vector<std::size_t>>>
group_by_unit(const ForecastTable &table);

} // namespace scoring

#endif
