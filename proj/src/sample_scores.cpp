#include "scoring/sample_scores.hpp"

#include "scoring/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace scoring {

namespace {

void check_nonempty(const SampleForecast &forecast) {
  if (forecast.samples.size() < 1) {
    throw ComputeError("sample forecast has no samples");
  }
  if (!forecast.samples.allFinite() || !std::isfinite(forecast.observed)) {
    throw ComputeError("sample forecast contains non-finite values");
  }
}

Eigen::VectorXd sorted_samples(const SampleForecast &forecast) {
  Eigen::VectorXd sorted = forecast.samples;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  return sorted;
}

} // namespace

double crps_sample(const SampleForecast &forecast) {
  check_nonempty(forecast);
  const Eigen::VectorXd sorted = sorted_samples(forecast);
  const auto n = sorted.size();
  const double nd = static_cast<double>(n);

  const double term_abs =
      (sorted.array() - forecast.observed).abs().sum() / nd;

  // sum_{i<j} (x_(j) - x_(i)) accumulated over the sorted order.
  double pairwise = 0.0;
  double prefix = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    pairwise += static_cast<double>(j) * sorted[j] - prefix;
    prefix += sorted[j];
  }
  return term_abs - pairwise / (nd * nd);
}

LogScoreValue log_score_sample(const SampleForecast &forecast) {
  check_nonempty(forecast);
  if (forecast.discrete) {
    throw ComputeError(
        "log score is not computed for discrete sample forecasts");
  }
  if (forecast.samples.size() < 2) {
    throw ComputeError("log score needs at least 2 samples");
  }
  const auto n = forecast.samples.size();
  const double nd = static_cast<double>(n);
  const double sd = sample_sd(forecast.samples);
  const double iqr = interquartile_range(forecast.samples);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) {
    spread = sd; // degenerate IQR, fall back to the standard deviation
  }
  double bandwidth = 0.9 * spread * std::pow(nd, -0.2);
  if (bandwidth <= 0.0) {
    bandwidth = 1e-12; // all samples identical
  }

  double density = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    density += normal_pdf(forecast.observed, forecast.samples[i], bandwidth);
  }
  density /= nd;

  LogScoreValue out;
  if (density < kDensityFloor) {
    density = kDensityFloor;
    out.floored = true;
  }
  out.value = -std::log(density);
  return out;
}

double dss_sample(const SampleForecast &forecast) {
  check_nonempty(forecast);
  if (forecast.samples.size() < 2) {
    throw ComputeError("DSS needs at least 2 samples");
  }
  const double mu = forecast.samples.mean();
  const double sd = sample_sd(forecast.samples);
  if (sd <= 0.0) {
    throw ComputeError("DSS undefined for zero sample variance");
  }
  const double z = (forecast.observed - mu) / sd;
  return z * z + 2.0 * std::log(sd);
}

double bias_sample(const SampleForecast &forecast) {
  check_nonempty(forecast);
  const Eigen::VectorXd sorted = sorted_samples(forecast);
  const double cdf_at_y = empirical_cdf(sorted, forecast.observed);
  if (forecast.discrete) {
    const double cdf_below = empirical_cdf(sorted, forecast.observed - 1.0);
    return 1.0 - (cdf_at_y + cdf_below);
  }
  return 1.0 - 2.0 * cdf_at_y;
}

double mad_dispersion(const SampleForecast &forecast) {
  check_nonempty(forecast);
  const double med = median(forecast.samples);
  const Eigen::VectorXd deviations =
      (forecast.samples.array() - med).abs().matrix();
  return kMadConstant * median(deviations);
}

double pit_value(const SampleForecast &forecast, std::uint64_t seed) {
  check_nonempty(forecast);
  const Eigen::VectorXd sorted = sorted_samples(forecast);
  const double upper = empirical_cdf(sorted, forecast.observed);
  if (!forecast.discrete) {
    return upper;
  }
  const double lower = empirical_cdf(sorted, forecast.observed - 1.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lower, upper);
  return unif(rng);
}

double ae_median_sample(const SampleForecast &forecast) {
  check_nonempty(forecast);
  return std::abs(median(forecast.samples) - forecast.observed);
}

double se_mean_sample(const SampleForecast &forecast) {
  check_nonempty(forecast);
  const double diff = forecast.samples.mean() - forecast.observed;
  return diff * diff;
}

} // namespace scoring
