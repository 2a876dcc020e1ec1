#ifndef SCORING_STATS_HPP
#define SCORING_STATS_HPP

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scoring {

// Error categories used across the library. Validation problems map to a
// different CLI exit code than computation problems.
class IngestError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ComputeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Median of a vector (no sorting requirement on the input).
double median(const Eigen::Ref<const Eigen::VectorXd> &values);

// Empirical quantile with linear interpolation between order statistics
// (the "type 7" convention). `p` must lie in [0, 1].
double quantile_type7(const Eigen::Ref<const Eigen::VectorXd> &values,
                      double p);

// Sample standard deviation with the n-1 denominator.
double sample_sd(const Eigen::Ref<const Eigen::VectorXd> &values);

// Interquartile range computed with the type-7 quantile estimator.
double interquartile_range(const Eigen::Ref<const Eigen::VectorXd> &values);

// Right-closed empirical CDF: #{x_i <= y} / n.
double empirical_cdf(const Eigen::Ref<const Eigen::VectorXd> &sorted_values,
                     double y);

double normal_pdf(double x, double mu = 0.0, double sigma = 1.0);
double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);

// Pearson correlation; NaN when either input is constant.
double pearson_correlation(const Eigen::Ref<const Eigen::VectorXd> &x,
                           const Eigen::Ref<const Eigen::VectorXd> &y);

// splitmix64 step, used to derive independent per-unit / per-repetition
// seeds from one base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Round to `digits` significant digits (digits >= 1).
double signif(double x, int digits);

// Shortest round-trip decimal representation, for deterministic text output.
std::string format_double(double x);

} // namespace scoring

#endif
