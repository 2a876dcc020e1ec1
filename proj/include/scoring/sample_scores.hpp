#ifndef SCORING_SAMPLE_SCORES_HPP
#define SCORING_SAMPLE_SCORES_HPP

#include <Eigen/Core>

#include <cstdint>

namespace scoring {

// A single forecast represented by predictive draws.
struct SampleForecast {
  Eigen::VectorXd samples;
  double observed = 0.0;
  bool discrete = false; // integer-valued target
};

struct LogScoreValue {
  double value = 0.0;
  bool floored = false; // density was clamped at the floor
};

// Empirical-CDF CRPS estimator:
//   (1/n) sum |x_i - y| - (1/(2n^2)) sum_ij |x_i - x_j|
// computed in O(n log n) via sorted partial sums. Lower is better.
double crps_sample(const SampleForecast &forecast);

// Negative log of a Gaussian kernel density estimate evaluated at the
// observation. Bandwidth is Silverman's rule of thumb,
// 0.9 * min(sd, IQR/1.34) * n^(-1/5). Densities below 1e-20 are clamped
// and flagged. Rejects discrete targets.
LogScoreValue log_score_sample(const SampleForecast &forecast);

// Dawid-Sebastiani score ((y - mean)/sd)^2 + 2*log sd.
double dss_sample(const SampleForecast &forecast);

// Probability-mass bias in [-1, 1]; 0 is ideal, -1 means all mass below
// the observation. Discrete targets use the tie-splitting variant
// 1 - (F(y) + F(y-1)).
double bias_sample(const SampleForecast &forecast);

// Normalised median absolute deviation, 1.4826 * median(|x - median(x)|).
double mad_dispersion(const SampleForecast &forecast);

// Probability integral transform. Continuous targets return the empirical
// CDF at the observation; discrete targets draw uniformly from
// [F(y-1), F(y)] using the given seed.
double pit_value(const SampleForecast &forecast, std::uint64_t seed);

double ae_median_sample(const SampleForecast &forecast);
double se_mean_sample(const SampleForecast &forecast);

constexpr double kDensityFloor = 1e-20;
constexpr double kMadConstant = 1.4826;

} // namespace scoring

#endif
