#include "scoring/sample_scores.hpp"

#include "scoring/experiments.hpp"
#include "scoring/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace scoring;

namespace {

// Independent O(n^2) oracle for the empirical-CDF CRPS estimator.
double crps_double_sum(const Eigen::VectorXd &samples, double y) {
  const auto n = samples.size();
  double term1 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    term1 += std::abs(samples[i] - y);
  }
  double term2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      term2 += std::abs(samples[i] - samples[j]);
    }
  }
  const double nd = static_cast<double>(n);
  return term1 / nd - term2 / (2.0 * nd * nd);
}

SampleForecast normal_forecast(int n, double mu, double sigma, double y,
                               std::uint64_t seed, bool discrete = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(mu, sigma);
  SampleForecast f;
  f.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    f.samples[i] = dist(rng);
  }
  f.observed = y;
  f.discrete = discrete;
  return f;
}

} // namespace

TEST_CASE("crps is zero for a point mass on the observation") {
  SampleForecast f{Eigen::VectorXd::Constant(10, 3.0), 3.0, false};
  CHECK(crps_sample(f) == doctest::Approx(0.0));
}

TEST_CASE("crps hand example {0,2} vs y=1") {
  Eigen::VectorXd s(2);
  s << 0.0, 2.0;
  SampleForecast f{s, 1.0, false};
  // (1/2)(1+1) - (1/8)(0+2+2+0) = 0.5, cross-checked by the O(n^2) oracle
  CHECK(crps_sample(f) == doctest::Approx(0.5));
  CHECK(crps_double_sum(s, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("crps matches the O(n^2) double-sum oracle on random inputs") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> size_dist(1, 200);
  std::normal_distribution<double> value(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = size_dist(rng);
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) {
      s[i] = value(rng);
    }
    const double y = value(rng);
    SampleForecast f{s, y, false};
    CHECK(crps_sample(f) ==
          doctest::Approx(crps_double_sum(s, y)).epsilon(1e-12));
  }
}

TEST_CASE("crps recovers the closed-form normal value") {
  const SampleForecast f = normal_forecast(100000, 0.0, 1.0, 0.0, 7);
  const double truth = crps_normal(0.0, 1.0, 0.0);
  CHECK(truth == doctest::Approx(0.23375).epsilon(1e-3));
  CHECK(crps_sample(f) == doctest::Approx(truth).epsilon(0.01));
}

TEST_CASE("crps is scale equivariant") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> value(1.0, 2.0);
  Eigen::VectorXd s(50);
  for (int i = 0; i < 50; ++i) {
    s[i] = value(rng);
  }
  const double y = value(rng);
  const double base = crps_sample({s, y, false});
  for (double a : {0.5, 2.0, 17.0}) {
    const double scaled = crps_sample({a * s, a * y, false});
    CHECK(scaled == doctest::Approx(a * base).epsilon(1e-10));
  }
}

TEST_CASE("log score recovers -log phi(0) for standard normal samples") {
  const SampleForecast f = normal_forecast(100000, 0.0, 1.0, 0.0, 11);
  CHECK(log_score_sample(f).value ==
        doctest::Approx(0.9189385).epsilon(0.05));
}

TEST_CASE("log score in the tail is noisy but close to the oracle") {
  const SampleForecast f = normal_forecast(100000, 0.0, 1.0, 4.0, 13);
  const double truth = log_score_normal(0.0, 1.0, 4.0);
  CHECK(truth == doctest::Approx(8.9189385).epsilon(1e-6));
  CHECK(log_score_sample(f).value == doctest::Approx(truth).epsilon(0.5 / 8.9));
}

TEST_CASE("log score rejects discrete targets and single samples") {
  SampleForecast discrete = normal_forecast(100, 0, 1, 0, 3, true);
  CHECK_THROWS_AS(log_score_sample(discrete), ComputeError);
  SampleForecast single{Eigen::VectorXd::Constant(1, 0.0), 0.0, false};
  CHECK_THROWS_AS(log_score_sample(single), ComputeError);
}

TEST_CASE("log score floors vanishing densities and flags it") {
  Eigen::VectorXd s(10);
  for (int i = 0; i < 10; ++i) {
    s[i] = 0.001 * i;
  }
  const LogScoreValue ls = log_score_sample({s, 1e9, false});
  CHECK(ls.floored);
  CHECK(ls.value == doctest::Approx(-std::log(1e-20)));
}

TEST_CASE("dss formula values") {
  Eigen::VectorXd s(2);
  s << -1.0, 1.0; // mean 0, sd sqrt(2)... use explicit units instead
  // construct samples with mean 0 and sample sd exactly 1
  Eigen::VectorXd unit(2);
  const double a = std::sqrt(0.5);
  unit << -a, a; // sd with n-1 denominator: sqrt(2 * 0.5 / 1) = 1
  CHECK(dss_sample({unit, 0.0, false}) == doctest::Approx(0.0));
  // mean 0, sd 2, y = 2 -> 1 + 2 log 2
  Eigen::VectorXd two = 2.0 * unit;
  CHECK(dss_sample({two, 2.0, false}) ==
        doctest::Approx(1.0 + 2.0 * std::log(2.0)));
}

TEST_CASE("dss rejects zero variance") {
  SampleForecast f{Eigen::VectorXd::Constant(5, 2.0), 2.0, false};
  CHECK_THROWS_AS(dss_sample(f), ComputeError);
}

TEST_CASE("dss shift under joint scaling") {
  const SampleForecast f = normal_forecast(200, 0.0, 1.0, 0.7, 17);
  const double base = dss_sample(f);
  for (double a : {2.0, 10.0}) {
    const double scaled =
        dss_sample({a * f.samples, a * f.observed, false});
    CHECK(scaled == doctest::Approx(base + 2.0 * std::log(a)).epsilon(1e-9));
  }
}

TEST_CASE("bias endpoints and symmetry") {
  Eigen::VectorXd below(4);
  below << 1, 2, 3, 4;
  CHECK(bias_sample({below, 10.0, false}) == doctest::Approx(-1.0));
  CHECK(bias_sample({below, 0.0, false}) == doctest::Approx(1.0));

  // antisymmetry for continuous targets
  const SampleForecast f = normal_forecast(101, 0.0, 1.0, 0.3, 19);
  const double direct = bias_sample(f);
  const double mirrored =
      bias_sample({-f.samples, -f.observed, false});
  CHECK(mirrored == doctest::Approx(-direct).epsilon(1e-12));
}

TEST_CASE("discrete bias splits ties") {
  Eigen::VectorXd s(4);
  s << 1, 2, 2, 3;
  CHECK(bias_sample({s, 2.0, true}) == doctest::Approx(0.0));
}

TEST_CASE("mad of a degenerate forecast is zero, small example exact") {
  CHECK(mad_dispersion({Eigen::VectorXd::Constant(8, 5.0), 5.0, false}) ==
        doctest::Approx(0.0));
  Eigen::VectorXd s(5);
  s << 1, 2, 3, 4, 5;
  CHECK(mad_dispersion({s, 0.0, false}) == doctest::Approx(1.4826));
}

TEST_CASE("mad consistency constant recovers sigma") {
  for (double sigma : {1.0, 3.0}) {
    const SampleForecast f = normal_forecast(100000, 0.0, sigma, 0.0, 23);
    CHECK(mad_dispersion(f) == doctest::Approx(sigma).epsilon(0.02));
  }
}

TEST_CASE("pit value for continuous targets is the empirical cdf") {
  Eigen::VectorXd s(4);
  s << 1, 2, 3, 4;
  CHECK(pit_value({s, 0.0, false}, 1) == doctest::Approx(0.0));
  CHECK(pit_value({s, 2.0, false}, 1) == doctest::Approx(0.5));
  CHECK(pit_value({s, 9.0, false}, 1) == doctest::Approx(1.0));
}

TEST_CASE("randomised pit for discrete targets is reproducible in-range") {
  Eigen::VectorXd s(5);
  s << 1, 1, 2, 2, 3; // F(1) = 0.4, F(2) = 0.8
  const SampleForecast f{s, 2.0, true};
  const double first = pit_value(f, 99);
  CHECK(first >= 0.4);
  CHECK(first <= 0.8);
  CHECK(pit_value(f, 99) == first);
  CHECK(pit_value(f, 100) != first);
}

TEST_CASE("pit of calibrated forecasts is approximately uniform") {
  // Kolmogorov-Smirnov statistic over simulated calibrated pairs.
  const int units = 2000;
  const int n = 100;
  std::vector<double> pits;
  for (int u = 0; u < units; ++u) {
    std::mt19937_64 rng(derive_seed(1234, static_cast<std::uint64_t>(u)));
    std::normal_distribution<double> dist(0.0, 1.0);
    SampleForecast f;
    f.samples.resize(n);
    for (int i = 0; i < n; ++i) {
      f.samples[i] = dist(rng);
    }
    f.observed = dist(rng);
    pits.push_back(pit_value(f, derive_seed(5678, u)));
  }
  std::sort(pits.begin(), pits.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < pits.size(); ++i) {
    const double ecdf_hi = static_cast<double>(i + 1) / units;
    const double ecdf_lo = static_cast<double>(i) / units;
    ks = std::max(ks, std::abs(ecdf_hi - pits[i]));
    ks = std::max(ks, std::abs(pits[i] - ecdf_lo));
  }
  CHECK(ks < 0.05);
}

TEST_CASE("ae_median and se_mean") {
  Eigen::VectorXd s(2);
  s << 0.0, 10.0;
  CHECK(ae_median_sample({s, 4.0, false}) == doctest::Approx(1.0));
  CHECK(se_mean_sample({s, 4.0, false}) == doctest::Approx(1.0));
  CHECK(ae_median_sample({s, 5.0, false}) == doctest::Approx(0.0));
}

TEST_CASE("overconfidence is punished more by log score and dss") {
  // True data N(0,5); predictive sd 2.5 vs 10.
  const int reps = 300;
  double log_narrow = 0, log_wide = 0, dss_narrow = 0, dss_wide = 0,
         crps_narrow = 0, crps_wide = 0;
  for (int rep = 0; rep < reps; ++rep) {
    std::mt19937_64 rng(derive_seed(777, static_cast<std::uint64_t>(rep)));
    std::normal_distribution<double> truth(0.0, 5.0);
    const double y = truth(rng);
    for (double sigma : {2.5, 10.0}) {
      std::normal_distribution<double> pred(0.0, sigma);
      SampleForecast f;
      f.samples.resize(1000);
      for (int i = 0; i < 1000; ++i) {
        f.samples[i] = pred(rng);
      }
      f.observed = y;
      const double ls = log_score_sample(f).value;
      const double ds = dss_sample(f);
      const double cs = crps_sample(f);
      if (sigma < 5.0) {
        log_narrow += ls;
        dss_narrow += ds;
        crps_narrow += cs;
      } else {
        log_wide += ls;
        dss_wide += ds;
        crps_wide += cs;
      }
    }
  }
  CHECK(log_narrow / reps > log_wide / reps);
  CHECK(dss_narrow / reps > dss_wide / reps);
  // CRPS treats the two sides much more evenly.
  const double crps_ratio = (crps_narrow / reps) / (crps_wide / reps);
  CHECK(crps_ratio > 0.5);
  CHECK(crps_ratio < 2.0);
}
