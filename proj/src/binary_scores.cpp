#include "scoring/binary_scores.hpp"

#include "scoring/stats.hpp"

#include <cmath>

namespace scoring {

namespace {

constexpr double kProbFloor = 1e-20;

void check_forecast(const BinaryForecast &forecast) {
  if (forecast.prob < 0.0 || forecast.prob > 1.0) {
    throw ValidationError("binary forecast probability outside [0, 1]");
  }
  if (forecast.observed != 0 && forecast.observed != 1) {
    throw ValidationError("binary outcome must be 0 or 1");
  }
}

} // namespace

double brier_score(const BinaryForecast &forecast) {
  check_forecast(forecast);
  const double diff = forecast.prob - static_cast<double>(forecast.observed);
  return diff * diff;
}

BinaryLogScore log_score_binary(const BinaryForecast &forecast) {
  check_forecast(forecast);
  double p = forecast.observed == 1 ? forecast.prob : 1.0 - forecast.prob;
  BinaryLogScore out;
  if (p < kProbFloor) {
    p = kProbFloor;
    out.clamped = true;
  } else if (p > 1.0 - kProbFloor) {
    p = 1.0 - kProbFloor;
    out.clamped = true;
  }
  out.value = -std::log(p);
  return out;
}

} // namespace scoring
