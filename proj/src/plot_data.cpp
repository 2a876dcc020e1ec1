#include "scoring/plot_data.hpp"

#include "scoring/quantile_scores.hpp"
#include "scoring/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace scoring {

namespace {

// Per-model quantile forecasts; the model column is required.
std::map<std::string, std::vector<QuantileForecast>>
forecasts_by_model(const ForecastTable &table) {
  if (table.format != TableFormat::Quantile) {
    throw ValidationError("coverage plots require quantile forecasts");
  }
  const auto it =
      std::find(table.id_columns.begin(), table.id_columns.end(), "model");
  if (it == table.id_columns.end()) {
    throw ValidationError("coverage plots require a `model` column");
  }
  const auto model_idx =
      static_cast<std::size_t>(it - table.id_columns.begin());

  std::map<std::string, std::vector<QuantileForecast>> out;
  for (const auto &[ids, rows] : group_by_unit(table)) {
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t r : rows) {
      pairs.emplace_back(table.rows[r].rep_value, table.rows[r].predicted);
    }
    std::sort(pairs.begin(), pairs.end());
    QuantileForecast f;
    f.levels.resize(static_cast<Eigen::Index>(pairs.size()));
    f.values.resize(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      f.levels[static_cast<Eigen::Index>(i)] = pairs[i].first;
      f.values[static_cast<Eigen::Index>(i)] = pairs[i].second;
    }
    f.observed = table.rows[rows.front()].observed;
    out[ids[model_idx]].push_back(std::move(f));
  }
  return out;
}

} // namespace

nlohmann::json make_plot_document(const std::string &kind,
                                  const std::string &x_label,
                                  const std::string &y_label) {
  nlohmann::json doc;
  doc["kind"] = kind;
  doc["axes"] = {{"x", x_label}, {"y", y_label}};
  doc["series"] = nlohmann::json::array();
  doc["facets"] = nlohmann::json::array();
  doc["metadata"] = nlohmann::json::object();
  return doc;
}

nlohmann::json plot_wis_decomposition(const ScoreTable &summarised) {
  for (const char *component :
       {"dispersion", "underprediction", "overprediction"}) {
    if (summarised.metric_index(component) < 0) {
      throw ValidationError("scores lack the WIS component column " +
                            std::string(component));
    }
  }
  nlohmann::json doc = make_plot_document("wis-decomposition", "forecast",
                                          "score contribution");
  std::vector<std::string> labels;
  for (const auto &row : summarised.rows) {
    std::string label;
    for (std::size_t i = 0; i < row.ids.size(); ++i) {
      if (i > 0) {
        label += "/";
      }
      label += row.ids[i];
    }
    labels.push_back(label);
  }
  for (const char *component :
       {"dispersion", "underprediction", "overprediction"}) {
    nlohmann::json series;
    series["name"] = component;
    series["x"] = labels;
    auto values = nlohmann::json::array();
    const long idx = summarised.metric_index(component);
    for (const auto &row : summarised.rows) {
      values.push_back(row.metrics[static_cast<std::size_t>(idx)]);
    }
    series["y"] = values;
    doc["series"].push_back(std::move(series));
  }
  doc["metadata"]["stacked"] = true;
  return doc;
}

nlohmann::json plot_interval_coverage(const ForecastTable &table) {
  nlohmann::json doc = make_plot_document(
      "interval-coverage", "nominal coverage", "empirical coverage");
  for (const auto &[model, forecasts] : forecasts_by_model(table)) {
    const std::vector<double> ranges =
        available_ranges(forecasts.front().levels);
    nlohmann::json series;
    series["name"] = model;
    auto xs = nlohmann::json::array();
    auto ys = nlohmann::json::array();
    for (double range : ranges) {
      xs.push_back(range / 100.0);
      ys.push_back(interval_coverage(forecasts, range));
    }
    series["x"] = xs;
    series["y"] = ys;
    doc["series"].push_back(std::move(series));
  }
  return doc;
}

nlohmann::json plot_quantile_coverage(const ForecastTable &table) {
  nlohmann::json doc = make_plot_document(
      "quantile-coverage", "quantile level", "fraction below quantile");
  for (const auto &[model, forecasts] : forecasts_by_model(table)) {
    nlohmann::json series;
    series["name"] = model;
    auto xs = nlohmann::json::array();
    auto ys = nlohmann::json::array();
    const Eigen::VectorXd &levels = forecasts.front().levels;
    for (Eigen::Index i = 0; i < levels.size(); ++i) {
      xs.push_back(levels[i]);
      ys.push_back(quantile_coverage(forecasts, levels[i]));
    }
    series["x"] = xs;
    series["y"] = ys;
    doc["series"].push_back(std::move(series));
  }
  return doc;
}

nlohmann::json plot_heatmap(const ScoreTable &summarised,
                            const std::string &x_column,
                            const std::string &y_column,
                            const std::string &metric) {
  const long x_idx = summarised.id_index(x_column);
  const long y_idx = summarised.id_index(y_column);
  if (x_idx < 0 || y_idx < 0) {
    throw ValidationError("heatmap axes must be identifier columns");
  }
  const long m_idx = summarised.metric_index(metric);
  if (m_idx < 0) {
    throw ValidationError("metric not present in scores: " + metric);
  }
  nlohmann::json doc = make_plot_document("heatmap", x_column, y_column);
  nlohmann::json series;
  series["name"] = metric;
  auto xs = nlohmann::json::array();
  auto ys = nlohmann::json::array();
  auto values = nlohmann::json::array();
  for (const auto &row : summarised.rows) {
    xs.push_back(row.ids[static_cast<std::size_t>(x_idx)]);
    ys.push_back(row.ids[static_cast<std::size_t>(y_idx)]);
    values.push_back(row.metrics[static_cast<std::size_t>(m_idx)]);
  }
  series["x"] = xs;
  series["y"] = ys;
  series["value"] = values;
  doc["series"].push_back(std::move(series));
  return doc;
}

nlohmann::json plot_availability(const std::vector<AvailabilityRow> &rows,
                                 const std::vector<std::string> &by) {
  nlohmann::json doc =
      make_plot_document("availability", "group", "forecast count");
  nlohmann::json series;
  series["name"] = "available forecasts";
  auto xs = nlohmann::json::array();
  auto ys = nlohmann::json::array();
  for (const auto &row : rows) {
    std::string label;
    for (std::size_t i = 0; i < row.group.size(); ++i) {
      if (i > 0) {
        label += "/";
      }
      label += row.group[i];
    }
    xs.push_back(label);
    ys.push_back(row.count);
  }
  series["x"] = xs;
  series["y"] = ys;
  doc["series"].push_back(std::move(series));
  doc["metadata"]["by"] = by;
  return doc;
}

nlohmann::json plot_correlation(const CorrelationMatrix &matrix) {
  nlohmann::json doc = make_plot_document("correlation", "metric", "metric");
  nlohmann::json series;
  series["name"] = "pearson";
  auto xs = nlohmann::json::array();
  auto ys = nlohmann::json::array();
  auto values = nlohmann::json::array();
  for (std::size_t i = 0; i < matrix.metrics.size(); ++i) {
    for (std::size_t j = 0; j < matrix.metrics.size(); ++j) {
      xs.push_back(matrix.metrics[i]);
      ys.push_back(matrix.metrics[j]);
      const double v = matrix.values(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(j));
      if (std::isnan(v)) {
        values.push_back(nullptr);
      } else {
        values.push_back(v);
      }
    }
  }
  series["x"] = xs;
  series["y"] = ys;
  series["value"] = values;
  doc["series"].push_back(std::move(series));
  return doc;
}

nlohmann::json plot_pit(const PitHistogram &histogram) {
  nlohmann::json doc =
      make_plot_document("pit-histogram", "PIT value", "bin mass");
  for (const auto &group : histogram.groups) {
    nlohmann::json series;
    std::string label;
    for (std::size_t i = 0; i < group.group_values.size(); ++i) {
      if (i > 0) {
        label += "/";
      }
      label += group.group_values[i];
    }
    series["name"] = label.empty() ? "all" : label;
    auto xs = nlohmann::json::array();
    auto ys = nlohmann::json::array();
    const auto bins = group.masses.size();
    for (Eigen::Index b = 0; b < bins; ++b) {
      xs.push_back((static_cast<double>(b) + 0.5) /
                   static_cast<double>(bins));
      ys.push_back(group.masses[b]);
    }
    series["x"] = xs;
    series["y"] = ys;
    doc["series"].push_back(std::move(series));
  }
  doc["metadata"]["by"] = histogram.group_columns;
  return doc;
}

nlohmann::json plot_convergence(const std::vector<ConvergenceRow> &rows) {
  nlohmann::json doc =
      make_plot_document("score-convergence", "sample size", "score");
  std::map<std::string, nlohmann::json> by_metric;
  for (const auto &row : rows) {
    auto &series = by_metric[row.metric];
    if (series.is_null()) {
      series["name"] = row.metric;
      for (const char *key : {"x", "y", "q05", "q25", "q75", "q95", "truth"}) {
        series[key] = nlohmann::json::array();
      }
    }
    series["x"].push_back(row.sample_size);
    series["y"].push_back(row.mean);
    series["q05"].push_back(row.q05);
    series["q25"].push_back(row.q25);
    series["q75"].push_back(row.q75);
    series["q95"].push_back(row.q95);
    series["truth"].push_back(row.truth);
  }
  for (auto &[name, series] : by_metric) {
    doc["series"].push_back(std::move(series));
  }
  return doc;
}

nlohmann::json plot_asymmetry(const std::vector<AsymmetryRow> &rows) {
  nlohmann::json doc = make_plot_document(
      "score-asymmetry", "predictive standard deviation", "mean score");
  std::map<std::string, nlohmann::json> by_metric;
  for (const auto &row : rows) {
    auto &series = by_metric[row.metric];
    if (series.is_null()) {
      series["name"] = row.metric;
      series["x"] = nlohmann::json::array();
      series["y"] = nlohmann::json::array();
    }
    series["x"].push_back(row.sigma_pred);
    series["y"].push_back(row.mean);
  }
  for (auto &[name, series] : by_metric) {
    doc["series"].push_back(std::move(series));
  }
  return doc;
}

nlohmann::json plot_scale(const std::vector<ScaleRow> &rows) {
  nlohmann::json doc =
      make_plot_document("score-scale", "parameter value", "mean score");
  std::map<std::pair<std::string, std::string>, nlohmann::json> by_series;
  for (const auto &row : rows) {
    auto &series = by_series[{row.parameter, row.metric}];
    if (series.is_null()) {
      series["name"] = row.metric + " vs " + row.parameter;
      series["x"] = nlohmann::json::array();
      series["y"] = nlohmann::json::array();
      series["sd"] = nlohmann::json::array();
    }
    series["x"].push_back(row.value);
    series["y"].push_back(row.mean);
    if (std::isnan(row.sd)) {
      series["sd"].push_back(nullptr);
    } else {
      series["sd"].push_back(row.sd);
    }
  }
  for (auto &[key, series] : by_series) {
    doc["series"].push_back(std::move(series));
  }
  return doc;
}

nlohmann::json plot_locality(const std::vector<LocalityRow> &rows) {
  nlohmann::json doc =
      make_plot_document("score-locality", "forecaster", "score");
  std::map<std::string, nlohmann::json> by_metric;
  for (const auto &row : rows) {
    auto &series = by_metric[row.metric];
    if (series.is_null()) {
      series["name"] = row.metric;
      series["x"] = nlohmann::json::array();
      series["y"] = nlohmann::json::array();
    }
    series["x"].push_back(row.forecaster);
    series["y"].push_back(row.value);
  }
  for (auto &[name, series] : by_metric) {
    doc["series"].push_back(std::move(series));
  }
  return doc;
}

} // namespace scoring
