#include "scoring/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace scoring;

TEST_CASE("type-7 quantile interpolates order statistics") {
  Eigen::VectorXd v(100);
  for (int i = 0; i < 100; ++i) {
    v[i] = i + 1; // 1..100
  }
  CHECK(quantile_type7(v, 0.5) == doctest::Approx(50.5));
  CHECK(quantile_type7(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile_type7(v, 1.0) == doctest::Approx(100.0));
  // h = 99 * 0.25 = 24.75 -> between the 25th and 26th order statistic
  CHECK(quantile_type7(v, 0.25) == doctest::Approx(25.75));
}

TEST_CASE("quantile of constant vector is the constant") {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(17, 3.5);
  for (double p : {0.01, 0.5, 0.99}) {
    CHECK(quantile_type7(v, p) == doctest::Approx(3.5));
  }
}

TEST_CASE("quantile rejects levels outside [0,1]") {
  Eigen::VectorXd v(3);
  v << 1, 2, 3;
  CHECK_THROWS_AS(quantile_type7(v, -0.1), ComputeError);
  CHECK_THROWS_AS(quantile_type7(v, 1.1), ComputeError);
}

TEST_CASE("median and empirical cdf conventions") {
  Eigen::VectorXd v(5);
  v << 5, 1, 3, 2, 4;
  CHECK(median(v) == doctest::Approx(3.0));
  Eigen::VectorXd sorted(5);
  sorted << 1, 2, 3, 4, 5;
  CHECK(empirical_cdf(sorted, 3.0) == doctest::Approx(0.6)); // right-closed
  CHECK(empirical_cdf(sorted, 2.5) == doctest::Approx(0.4));
  CHECK(empirical_cdf(sorted, 0.0) == doctest::Approx(0.0));
  CHECK(empirical_cdf(sorted, 9.0) == doctest::Approx(1.0));
}

TEST_CASE("normal cdf matches known values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-6));
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804));
}

TEST_CASE("pearson correlation basics") {
  Eigen::VectorXd x(4), y(4);
  x << 1, 2, 3, 4;
  y << 2, 4, 6, 8;
  CHECK(pearson_correlation(x, y) == doctest::Approx(1.0));
  y = -x;
  CHECK(pearson_correlation(x, y) == doctest::Approx(-1.0));
  y = Eigen::VectorXd::Constant(4, 1.0);
  CHECK(std::isnan(pearson_correlation(x, y)));
}

TEST_CASE("derived seeds differ across indices and reproduce") {
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("signif rounds to significant digits") {
  CHECK(signif(1234.5, 2) == doctest::Approx(1200.0));
  CHECK(signif(0.012345, 2) == doctest::Approx(0.012));
  CHECK(signif(0.0, 3) == doctest::Approx(0.0));
}

TEST_CASE("format_double round-trips and marks NaN") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(50.0) == "50");
  CHECK(format_double(std::nan("")) == "NA");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(-1e6, 1e6);
  for (int i = 0; i < 100; ++i) {
    const double x = unif(rng);
    CHECK(std::stod(format_double(x)) == x);
  }
}
