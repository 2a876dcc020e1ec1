#include "scoring/quantile_scores.hpp"

#include "scoring/stats.hpp"

#include <algorithm>
#include <cmath>

namespace scoring {

namespace {

constexpr double kLevelTol = 1e-9;

void check_forecast(const QuantileForecast &forecast) {
  const auto m = forecast.levels.size();
  if (m < 1 || forecast.values.size() != m) {
    throw ValidationError("quantile forecast needs matching levels/values");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (forecast.levels[i] <= 0.0 || forecast.levels[i] >= 1.0) {
      throw ValidationError("quantile level outside (0,1): " +
                            std::to_string(forecast.levels[i]));
    }
    if (i > 0) {
      if (forecast.levels[i] <= forecast.levels[i - 1] + kLevelTol / 10) {
        throw ValidationError("quantile levels must be strictly increasing");
      }
      if (forecast.values[i] < forecast.values[i - 1]) {
        throw ValidationError("quantile crossing: predicted quantiles "
                              "decrease between levels " +
                              std::to_string(forecast.levels[i - 1]) + " and " +
                              std::to_string(forecast.levels[i]));
      }
    }
  }
}

// Index of `level` in the grid, or -1.
Eigen::Index find_level(const Eigen::VectorXd &levels, double level) {
  for (Eigen::Index i = 0; i < levels.size(); ++i) {
    if (std::abs(levels[i] - level) < kLevelTol) {
      return i;
    }
  }
  return -1;
}

} // namespace

WisComponents interval_score(double lower, double upper, double alpha,
                             double y) {
  if (lower > upper) {
    throw ValidationError("quantile crossing: interval lower bound exceeds "
                          "upper bound");
  }
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw ValidationError("interval alpha outside (0,1)");
  }
  WisComponents out;
  out.dispersion = upper - lower;
  if (y < lower) {
    out.underprediction = 2.0 / alpha * (lower - y);
  } else if (y > upper) {
    out.overprediction = 2.0 / alpha * (y - upper);
  }
  out.wis = out.dispersion + out.overprediction + out.underprediction;
  return out;
}

WisComponents wis(const QuantileForecast &forecast, bool *median_missing) {
  check_forecast(forecast);
  const auto &levels = forecast.levels;
  const auto &values = forecast.values;
  const double y = forecast.observed;

  const Eigen::Index median_idx = find_level(levels, 0.5);
  const bool has_median = median_idx >= 0;
  if (median_missing != nullptr) {
    *median_missing = !has_median;
  }

  WisComponents total;
  int intervals = 0;
  for (Eigen::Index i = 0; i < levels.size(); ++i) {
    if (levels[i] >= 0.5 - kLevelTol) {
      break;
    }
    const Eigen::Index partner = find_level(levels, 1.0 - levels[i]);
    if (partner < 0) {
      throw ValidationError("asymmetric quantile levels: no partner for " +
                            std::to_string(levels[i]));
    }
    const double alpha = 2.0 * levels[i];
    const WisComponents is =
        interval_score(values[i], values[partner], alpha, y);
    const double weight = alpha / 2.0;
    total.dispersion += weight * is.dispersion;
    total.overprediction += weight * is.overprediction;
    total.underprediction += weight * is.underprediction;
    ++intervals;
  }
  for (Eigen::Index i = 0; i < levels.size(); ++i) {
    if (levels[i] > 0.5 + kLevelTol &&
        find_level(levels, 1.0 - levels[i]) < 0) {
      throw ValidationError("asymmetric quantile levels: no partner for " +
                            std::to_string(levels[i]));
    }
  }

  if (intervals == 0 && !has_median) {
    throw ValidationError("WIS needs at least one interval or a median");
  }

  if (has_median) {
    const double m = values[median_idx];
    if (m > y) {
      total.overprediction += 0.5 * (m - y);
    } else {
      total.underprediction += 0.5 * (y - m);
    }
  }

  const double normaliser =
      has_median ? static_cast<double>(intervals) + 0.5
                 : static_cast<double>(intervals);
  total.dispersion /= normaliser;
  total.overprediction /= normaliser;
  total.underprediction /= normaliser;
  total.wis = total.dispersion + total.overprediction + total.underprediction;
  return total;
}

double bias_quantile(const QuantileForecast &forecast) {
  check_forecast(forecast);
  const auto &levels = forecast.levels;
  const auto &values = forecast.values;
  const double y = forecast.observed;
  const auto m = levels.size();

  if (y < values[0]) {
    return 1.0;
  }
  if (y > values[m - 1]) {
    return -1.0;
  }
  // Exact hit: largest level whose predicted quantile equals y.
  double tau = -1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (values[i] == y) {
      tau = levels[i];
    }
  }
  if (tau < 0.0) {
    // Strictly between two adjacent predicted quantiles.
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      if (values[i] < y && y < values[i + 1]) {
        tau = 0.5 * (levels[i] + levels[i + 1]);
        break;
      }
    }
  }
  return 1.0 - 2.0 * tau;
}

std::vector<double> available_ranges(const Eigen::VectorXd &levels) {
  std::vector<double> ranges;
  for (Eigen::Index i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0.5 - kLevelTol &&
        find_level(levels, 1.0 - levels[i]) >= 0) {
      ranges.push_back(100.0 * (1.0 - 2.0 * levels[i]));
    }
  }
  std::sort(ranges.begin(), ranges.end());
  return ranges;
}

bool interval_covered(const QuantileForecast &forecast, double range_percent) {
  const double alpha = 1.0 - range_percent / 100.0;
  const Eigen::Index lo = find_level(forecast.levels, alpha / 2.0);
  const Eigen::Index hi = find_level(forecast.levels, 1.0 - alpha / 2.0);
  if (lo < 0 || hi < 0) {
    throw ComputeError("central " + format_double(range_percent) +
                       "% interval not representable from the level grid");
  }
  return forecast.values[lo] <= forecast.observed &&
         forecast.observed <= forecast.values[hi];
}

double interval_coverage(const std::vector<QuantileForecast> &forecasts,
                         double range_percent) {
  if (forecasts.empty()) {
    throw ComputeError("interval coverage of an empty forecast set");
  }
  std::size_t covered = 0;
  for (const auto &f : forecasts) {
    check_forecast(f);
    if (interval_covered(f, range_percent)) {
      ++covered;
    }
  }
  return static_cast<double>(covered) / static_cast<double>(forecasts.size());
}

double coverage_deviation(const std::vector<QuantileForecast> &forecasts) {
  if (forecasts.empty()) {
    throw ComputeError("coverage deviation of an empty forecast set");
  }
  const std::vector<double> ranges = available_ranges(forecasts.front().levels);
  if (ranges.empty()) {
    throw ComputeError("no central intervals available for coverage");
  }
  double total = 0.0;
  for (double range : ranges) {
    total += interval_coverage(forecasts, range) - range / 100.0;
  }
  return total / static_cast<double>(ranges.size());
}

double quantile_coverage(const std::vector<QuantileForecast> &forecasts,
                         double level) {
  if (forecasts.empty()) {
    throw ComputeError("quantile coverage of an empty forecast set");
  }
  std::size_t covered = 0;
  for (const auto &f : forecasts) {
    check_forecast(f);
    const Eigen::Index idx = find_level(f.levels, level);
    if (idx < 0) {
      throw ComputeError("quantile level " + format_double(level) +
                         " absent from the level grid");
    }
    if (f.observed <= f.values[idx]) {
      ++covered;
    }
  }
  return static_cast<double>(covered) / static_cast<double>(forecasts.size());
}

double ae_median_quantile(const QuantileForecast &forecast) {
  check_forecast(forecast);
  const Eigen::Index idx = find_level(forecast.levels, 0.5);
  if (idx < 0) {
    throw ComputeError("median (level 0.5) absent from the quantile grid");
  }
  return std::abs(forecast.values[idx] - forecast.observed);
}

} // namespace scoring
