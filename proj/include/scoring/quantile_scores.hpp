#ifndef SCORING_QUANTILE_SCORES_HPP
#define SCORING_QUANTILE_SCORES_HPP

#include <Eigen/Core>

#include <vector>

namespace scoring {

// A single forecast given as predicted quantiles. Levels must be strictly
// increasing in (0,1) and values non-decreasing.
struct QuantileForecast {
  Eigen::VectorXd levels;
  Eigen::VectorXd values;
  double observed = 0.0;
};

struct WisComponents {
  double wis = 0.0;
  double dispersion = 0.0;
  double overprediction = 0.0;
  double underprediction = 0.0;
};

// Interval score of a single central (1-alpha) prediction interval:
// width plus (2/alpha)-scaled penalties for observations outside it.
WisComponents interval_score(double lower, double upper, double alpha,
                             double y);

// Weighted interval score over the symmetric level set of `forecast`,
// decomposed into dispersion / overprediction / underprediction.
// The median term |y - q(0.5)| carries weight 1/2 and counts as over- or
// underprediction. With K intervals and a median the normaliser is
// K + 1/2; with the median missing it is K and *median_missing is set.
WisComponents wis(const QuantileForecast &forecast,
                  bool *median_missing = nullptr);

// Bias in [-1, 1] from the level the quantile grid assigns to the
// observation: 1 - 2*tau*, with tau* the matching level when y equals a
// predicted quantile (largest such level) and the midpoint of the two
// adjacent levels when y falls strictly between quantile values.
double bias_quantile(const QuantileForecast &forecast);

// Fraction of forecasts whose central `range`% interval contains the
// observation (boundaries inclusive).
double interval_coverage(const std::vector<QuantileForecast> &forecasts,
                         double range_percent);

// Mean over all available ranges of (empirical - nominal) coverage.
double coverage_deviation(const std::vector<QuantileForecast> &forecasts);

// Fraction of forecasts with y <= q(level).
double quantile_coverage(const std::vector<QuantileForecast> &forecasts,
                         double level);

double ae_median_quantile(const QuantileForecast &forecast);

// Central interval ranges (in percent, descending widths excluded the
// degenerate 0 range) representable from a symmetric level grid.
std::vector<double> available_ranges(const Eigen::VectorXd &levels);

// True when the central `range`% interval of one forecast covers y.
bool interval_covered(const QuantileForecast &forecast, double range_percent);

} // namespace scoring

#endif
