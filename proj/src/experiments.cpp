#include "scoring/experiments.hpp"

#include "scoring/sample_scores.hpp"
#include "scoring/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace scoring {

namespace {

constexpr double kSqrtPi = 1.7724538509055159;

Eigen::VectorXd draw_normal(int n, double mu, double sigma,
                            std::mt19937_64 &rng) {
  std::normal_distribution<double> dist(mu, sigma);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = dist(rng);
  }
  return out;
}

struct MetricMeans {
  double crps = 0.0;
  double log_score = 0.0;
  double dss = 0.0;
};

// Mean sampled scores of N(mu_pred, sigma_pred) forecasts against
// observations from N(mu_true, sigma_true).
MetricMeans mean_scores(double mu_true, double sigma_true, double mu_pred,
                        double sigma_pred, int n_samples, int repetitions,
                        std::uint64_t seed, std::vector<double> *sds) {
  MetricMeans sums;
  std::vector<double> crps_vals, log_vals, dss_vals;
  for (int rep = 0; rep < repetitions; ++rep) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
    std::normal_distribution<double> truth(mu_true, sigma_true);
    SampleForecast f;
    f.observed = truth(rng);
    f.samples = draw_normal(n_samples, mu_pred, sigma_pred, rng);
    crps_vals.push_back(crps_sample(f));
    log_vals.push_back(log_score_sample(f).value);
    dss_vals.push_back(dss_sample(f));
  }
  const auto mean_of = [](const std::vector<double> &v) {
    double total = 0.0;
    for (double x : v) {
      total += x;
    }
    return total / static_cast<double>(v.size());
  };
  sums.crps = mean_of(crps_vals);
  sums.log_score = mean_of(log_vals);
  sums.dss = mean_of(dss_vals);
  if (sds != nullptr) {
    for (const auto *vals : {&crps_vals, &log_vals, &dss_vals}) {
      if (vals->size() < 2) {
        sds->push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        Eigen::Map<const Eigen::VectorXd> v(
            vals->data(), static_cast<Eigen::Index>(vals->size()));
        sds->push_back(sample_sd(v));
      }
    }
  }
  return sums;
}

} // namespace

double crps_normal(double mu, double sigma, double y) {
  const double z = (y - mu) / sigma;
  return sigma * (z * (2.0 * normal_cdf(z) - 1.0) + 2.0 * normal_pdf(z) -
                  1.0 / kSqrtPi);
}

double log_score_normal(double mu, double sigma, double y) {
  return -std::log(normal_pdf(y, mu, sigma));
}

double dss_normal(double mu, double sigma, double y) {
  const double z = (y - mu) / sigma;
  return z * z + 2.0 * std::log(sigma);
}

double crps_pmf(const Eigen::VectorXd &support, const Eigen::VectorXd &probs,
                double y) {
  double expected_abs = 0.0;
  double pairwise = 0.0;
  for (Eigen::Index i = 0; i < support.size(); ++i) {
    expected_abs += probs[i] * std::abs(support[i] - y);
    for (Eigen::Index j = 0; j < support.size(); ++j) {
      pairwise += probs[i] * probs[j] * std::abs(support[i] - support[j]);
    }
  }
  return expected_abs - 0.5 * pairwise;
}

double dss_pmf(const Eigen::VectorXd &support, const Eigen::VectorXd &probs,
               double y) {
  const double mean = (support.array() * probs.array()).sum();
  const double var =
      ((support.array() - mean).square() * probs.array()).sum();
  const double z = (y - mean) / std::sqrt(var);
  return z * z + std::log(var);
}

double log_score_pmf(const Eigen::VectorXd &support,
                     const Eigen::VectorXd &probs, double y) {
  for (Eigen::Index i = 0; i < support.size(); ++i) {
    if (support[i] == y) {
      return -std::log(probs[i]);
    }
  }
  return -std::log(1e-20);
}

ExperimentConfig parse_experiment_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw IngestError("cannot open experiment config: " + path);
  }
  ExperimentConfig config;
  config.sigma_grid.clear();
  config.mu_grid.clear();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '[') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw IngestError("config line " + std::to_string(line_no) +
                        " is not `key = value`");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto parse_list = [&](auto push) {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        push(trim(item));
      }
    };
    try {
      if (key == "experiment") {
        config.experiment = value;
      } else if (key == "mu") {
        config.mu = std::stod(value);
      } else if (key == "sigma") {
        config.sigma = std::stod(value);
      } else if (key == "sigma_true") {
        config.sigma_true = std::stod(value);
      } else if (key == "observed") {
        config.observed = std::stod(value);
      } else if (key == "n_samples") {
        config.n_samples = std::stoi(value);
      } else if (key == "repetitions") {
        config.repetitions = std::stoi(value);
      } else if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "sample_sizes") {
        config.sample_sizes.clear();
        parse_list([&](const std::string &s) {
          config.sample_sizes.push_back(std::stoi(s));
        });
      } else if (key == "sigma_grid") {
        parse_list([&](const std::string &s) {
          config.sigma_grid.push_back(std::stod(s));
        });
      } else if (key == "mu_grid") {
        parse_list([&](const std::string &s) {
          config.mu_grid.push_back(std::stod(s));
        });
      } else {
        throw IngestError("unknown config key: " + key);
      }
    } catch (const std::invalid_argument &) {
      throw IngestError("config line " + std::to_string(line_no) +
                        ": cannot parse value for " + key);
    }
  }
  if (config.repetitions < 1) {
    throw IngestError("repetitions must be >= 1");
  }
  for (int n : config.sample_sizes) {
    if (n < 2) {
      throw IngestError("sample sizes must be >= 2");
    }
  }
  return config;
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig &config) {
  std::vector<ConvergenceRow> out;
  const double y = config.observed;
  const double truths[3] = {crps_normal(config.mu, config.sigma, y),
                            log_score_normal(config.mu, config.sigma, y),
                            dss_normal(config.mu, config.sigma, y)};
  const char *names[3] = {"crps", "log_score", "dss"};

  for (std::size_t s = 0; s < config.sample_sizes.size(); ++s) {
    const int n = config.sample_sizes[s];
    std::vector<std::vector<double>> estimates(3);
    for (int rep = 0; rep < config.repetitions; ++rep) {
      std::mt19937_64 rng(derive_seed(
          config.seed,
          s * static_cast<std::uint64_t>(config.repetitions) +
              static_cast<std::uint64_t>(rep)));
      SampleForecast f;
      f.observed = y;
      f.samples = draw_normal(n, config.mu, config.sigma, rng);
      estimates[0].push_back(crps_sample(f));
      estimates[1].push_back(log_score_sample(f).value);
      estimates[2].push_back(dss_sample(f));
    }
    for (int m = 0; m < 3; ++m) {
      Eigen::Map<const Eigen::VectorXd> v(
          estimates[static_cast<std::size_t>(m)].data(),
          static_cast<Eigen::Index>(estimates[static_cast<std::size_t>(m)]
                                        .size()));
      ConvergenceRow row;
      row.sample_size = n;
      row.metric = names[m];
      row.mean = v.mean();
      row.q05 = quantile_type7(v, 0.05);
      row.q25 = quantile_type7(v, 0.25);
      row.q75 = quantile_type7(v, 0.75);
      row.q95 = quantile_type7(v, 0.95);
      row.truth = truths[m];
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<AsymmetryRow> run_asymmetry(const ExperimentConfig &config) {
  std::vector<double> grid = config.sigma_grid;
  if (grid.empty()) {
    grid = {1.0, 2.5, 5.0, 10.0, 20.0};
  }
  std::vector<AsymmetryRow> out;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const MetricMeans means = mean_scores(
        config.mu, config.sigma_true, config.mu, grid[g], config.n_samples,
        config.repetitions, derive_seed(config.seed, g), nullptr);
    out.push_back({grid[g], "crps", means.crps});
    out.push_back({grid[g], "log_score", means.log_score});
    out.push_back({grid[g], "dss", means.dss});
  }
  return out;
}

std::vector<ScaleRow> run_scale(const ExperimentConfig &config) {
  std::vector<double> mu_grid = config.mu_grid;
  if (mu_grid.empty()) {
    mu_grid = {1.0, 10.0, 100.0};
  }
  std::vector<double> sigma_grid = config.sigma_grid;
  if (sigma_grid.empty()) {
    sigma_grid = {1.0, 2.0, 4.0};
  }
  std::vector<ScaleRow> out;
  const char *names[3] = {"crps", "log_score", "dss"};
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // Common random numbers across grid cells: every mu cell reuses the
  // same underlying normal draws (shifted), every sigma cell the same
  // draws (scaled), so translation invariance and linear growth in sigma
  // show up without Monte Carlo noise between cells.
  for (double mu : mu_grid) {
    std::vector<double> sds;
    const MetricMeans means = mean_scores(
        mu, config.sigma, mu, config.sigma, config.n_samples,
        config.repetitions, derive_seed(config.seed, 0), &sds);
    const double values[3] = {means.crps, means.log_score, means.dss};
    for (int m = 0; m < 3; ++m) {
      out.push_back({"mu", mu, names[m], values[m],
                     config.repetitions > 1 ? sds[static_cast<std::size_t>(m)]
                                            : nan});
    }
  }
  for (double sigma : sigma_grid) {
    std::vector<double> sds;
    const MetricMeans means = mean_scores(
        config.mu, sigma, config.mu, sigma, config.n_samples,
        config.repetitions, derive_seed(config.seed, 1), &sds);
    const double values[3] = {means.crps, means.log_score, means.dss};
    for (int m = 0; m < 3; ++m) {
      out.push_back({"sigma", sigma, names[m], values[m],
                     config.repetitions > 1 ? sds[static_cast<std::size_t>(m)]
                                            : nan});
    }
  }
  return out;
}

std::vector<LocalityRow> run_locality() {
  // Goals in a match, observed outcome 2. Both forecasters assign 0.35 to
  // the outcome; B spreads the rest far from it.
  Eigen::VectorXd support(5);
  support << 0, 1, 2, 3, 4;
  Eigen::VectorXd probs_a(5);
  probs_a << 0.10, 0.20, 0.35, 0.20, 0.15;
  Eigen::VectorXd probs_b(5);
  probs_b << 0.30, 0.00, 0.35, 0.00, 0.35;
  const double y = 2.0;

  std::vector<LocalityRow> out;
  out.push_back({"A", "log_score", log_score_pmf(support, probs_a, y)});
  out.push_back({"A", "crps", crps_pmf(support, probs_a, y)});
  out.push_back({"A", "dss", dss_pmf(support, probs_a, y)});
  out.push_back({"B", "log_score", log_score_pmf(support, probs_b, y)});
  out.push_back({"B", "crps", crps_pmf(support, probs_b, y)});
  out.push_back({"B", "dss", dss_pmf(support, probs_b, y)});
  return out;
}

} // namespace scoring
