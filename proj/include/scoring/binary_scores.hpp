#ifndef SCORING_BINARY_SCORES_HPP
#define SCORING_BINARY_SCORES_HPP

namespace scoring {

struct BinaryForecast {
  double prob = 0.0;  // predicted probability of outcome 1
  int observed = 0;   // 0 or 1
};

struct BinaryLogScore {
  double value = 0.0;
  bool clamped = false;
};

// Squared difference between predicted probability and outcome.
double brier_score(const BinaryForecast &forecast);

// Negative log probability assigned to the observed outcome. The
// probability is clamped to [1e-20, 1 - 1e-20] before the log.
BinaryLogScore log_score_binary(const BinaryForecast &forecast);

} // namespace scoring

#endif
