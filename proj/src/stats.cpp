#include "scoring/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace scoring {

double median(const Eigen::Ref<const Eigen::VectorXd> &values) {
  return quantile_type7(values, 0.5);
}

double quantile_type7(const Eigen::Ref<const Eigen::VectorXd> &values,
                      double p) {
  if (values.size() == 0) {
    throw ComputeError("quantile of an empty vector");
  }
  if (p < 0.0 || p > 1.0) {
    throw ComputeError("quantile level outside [0, 1]: " + std::to_string(p));
  }
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  const double h = (n - 1.0) * p;
  const auto lo = static_cast<Eigen::Index>(std::floor(h));
  const auto hi = std::min<Eigen::Index>(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[static_cast<std::size_t>(lo)] * (1.0 - frac) +
         sorted[static_cast<std::size_t>(hi)] * frac;
}

double sample_sd(const Eigen::Ref<const Eigen::VectorXd> &values) {
  const auto n = values.size();
  if (n < 2) {
    throw ComputeError("sample standard deviation needs at least 2 values");
  }
  const double mu = values.mean();
  const double ss = (values.array() - mu).square().sum();
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double interquartile_range(const Eigen::Ref<const Eigen::VectorXd> &values) {
  return quantile_type7(values, 0.75) - quantile_type7(values, 0.25);
}

double empirical_cdf(const Eigen::Ref<const Eigen::VectorXd> &sorted_values,
                     double y) {
  const double *begin = sorted_values.data();
  const double *end = begin + sorted_values.size();
  const auto count = std::upper_bound(begin, end, y) - begin;
  return static_cast<double>(count) / static_cast<double>(sorted_values.size());
}

double normal_pdf(double x, double mu, double sigma) {
  static const double inv_sqrt_2pi = 0.3989422804014327;
  const double z = (x - mu) / sigma;
  return inv_sqrt_2pi / sigma * std::exp(-0.5 * z * z);
}

double normal_cdf(double x, double mu, double sigma) {
  const double z = (x - mu) / (sigma * std::sqrt(2.0));
  return 0.5 * std::erfc(-z);
}

double pearson_correlation(const Eigen::Ref<const Eigen::VectorXd> &x,
                           const Eigen::Ref<const Eigen::VectorXd> &y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ComputeError("correlation needs two equally sized vectors, n >= 2");
  }
  const Eigen::ArrayXd xc = x.array() - x.mean();
  const Eigen::ArrayXd yc = y.array() - y.mean();
  const double sxx = xc.square().sum();
  const double syy = yc.square().sum();
  if (sxx <= 0.0 || syy <= 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return (xc * yc).sum() / std::sqrt(sxx * syy);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double signif(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) {
    return x;
  }
  const double mag =
      std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(x))));
  return std::round(x * mag) / mag;
}

std::string format_double(double x) {
  if (std::isnan(x)) {
    return "NA";
  }
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, result.ptr);
}

} // namespace scoring
