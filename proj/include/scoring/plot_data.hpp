#ifndef SCORING_PLOT_DATA_HPP
#define SCORING_PLOT_DATA_HPP

#include "scoring/evaluation.hpp"
#include "scoring/experiments.hpp"
#include "scoring/forecast_table.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace scoring {

// Renderer-agnostic chart descriptions. Every document is a JSON object
// {kind, axes, series, facets, metadata}.

nlohmann::json make_plot_document(const std::string &kind,
                                  const std::string &x_label,
                                  const std::string &y_label);

// Stacked WIS components per row of a summarised quantile score table.
nlohmann::json plot_wis_decomposition(const ScoreTable &summarised);

// Empirical vs nominal central-interval coverage per model.
nlohmann::json plot_interval_coverage(const ForecastTable &table);

// Empirical vs nominal quantile coverage per model.
nlohmann::json plot_quantile_coverage(const ForecastTable &table);

// One metric across two identifier dimensions.
nlohmann::json plot_heatmap(const ScoreTable &summarised,
                            const std::string &x_column,
                            const std::string &y_column,
                            const std::string &metric);

nlohmann::json plot_availability(const std::vector<AvailabilityRow> &rows,
                                 const std::vector<std::string> &by);

nlohmann::json plot_correlation(const CorrelationMatrix &matrix);

nlohmann::json plot_pit(const PitHistogram &histogram);

nlohmann::json plot_convergence(const std::vector<ConvergenceRow> &rows);
nlohmann::json plot_asymmetry(const std::vector<AsymmetryRow> &rows);
nlohmann::json plot_scale(const std::vector<ScaleRow> &rows);
nlohmann::json plot_locality(const std::vector<LocalityRow> &rows);

} // namespace scoring

#endif
