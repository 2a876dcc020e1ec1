#ifndef SCORING_EXPERIMENTS_HPP
#define SCORING_EXPERIMENTS_HPP

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace scoring {

// Closed-form scores for a normal predictive distribution, used as the
// reference ("truth") values in simulation output and as test oracles.
double crps_normal(double mu, double sigma, double y);
double log_score_normal(double mu, double sigma, double y);
double dss_normal(double mu, double sigma, double y);

// Exact scores for a discrete predictive pmf on integer support.
double crps_pmf(const Eigen::VectorXd &support, const Eigen::VectorXd &probs,
                double y);
double dss_pmf(const Eigen::VectorXd &support, const Eigen::VectorXd &probs,
               double y);
double log_score_pmf(const Eigen::VectorXd &support,
                     const Eigen::VectorXd &probs, double y);

struct ExperimentConfig {
  std::string experiment = "convergence"; // convergence|asymmetry|scale|locality
  double mu = 0.0;
  double sigma = 1.0;
  double sigma_true = 5.0; // asymmetry data-generating sd
  double observed = 0.0;   // convergence: fixed observation
  std::vector<int> sample_sizes{10, 100, 1000, 10000, 100000};
  std::vector<double> sigma_grid; // asymmetry / scale-B grids
  std::vector<double> mu_grid;    // scale-A grid
  int n_samples = 1000;           // predictive draws per repetition
  int repetitions = 500;
  std::uint64_t seed = 42;
};

// Parses `key = value` lines (lists comma-separated, [section] headers
// and # comments ignored).
ExperimentConfig parse_experiment_config(const std::string &path);

struct ConvergenceRow {
  int sample_size = 0;
  std::string metric;
  double mean = 0.0;
  double q05 = 0.0, q25 = 0.0, q75 = 0.0, q95 = 0.0;
  double truth = 0.0;
};

// Scores repeated predictive sample sets of increasing size against a
// fixed observation and reports the spread of estimates next to the
// closed-form truth.
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig &config);

struct AsymmetryRow {
  double sigma_pred = 0.0;
  std::string metric;
  double mean = 0.0;
};

// Varies the predictive standard deviation around a fixed data-generating
// normal; shows which scores punish overconfidence hardest.
std::vector<AsymmetryRow> run_asymmetry(const ExperimentConfig &config);

struct ScaleRow {
  std::string parameter; // "mu" or "sigma"
  double value = 0.0;
  std::string metric;
  double mean = 0.0;
  double sd = 0.0; // NaN when repetitions == 1
};

// Perfect-forecast simulation over a mu grid (translation invariance) and
// a sigma grid (scores grow with the spread of the data).
std::vector<ScaleRow> run_scale(const ExperimentConfig &config);

struct LocalityRow {
  std::string forecaster;
  std::string metric;
  double value = 0.0;
};

// Fixed two-forecaster fixture: both assign probability 0.35 to the
// observed outcome, so the local log score ties while CRPS and DSS
// penalise the forecaster with mass far from the outcome.
std::vector<LocalityRow> run_locality();

} // namespace scoring

#endif
