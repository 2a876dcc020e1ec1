#ifndef SCORING_EVALUATION_HPP
#define SCORING_EVALUATION_HPP

#include "scoring/forecast_table.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace scoring {

// Per-forecast metric values, joinable back to identifier columns.
// Metric cells are NaN when a metric is unavailable for a row. `aux`
// carries per-row coverage flags (covered_50, quantile_covered_0.25, ...)
// consumed by add_coverage() and the plot-data builders; they are not
// part of the metric set.
struct ScoreTable {
  struct Row {
    std::vector<std::string> ids;
    std::vector<double> metrics; // parallel to metric_names
    std::map<std::string, double> aux;
  };

  std::vector<std::string> id_columns;
  std::vector<std::string> metric_names;
  std::vector<Row> rows;

  long metric_index(const std::string &name) const;
  long id_index(const std::string &name) const;
};

// Metric dispatch is fixed per input format:
//   sample:   crps, log_score (continuous targets only), dss, bias, mad,
//             ae_median, se_mean
//   quantile: interval_score, dispersion, underprediction, overprediction,
//             coverage_deviation, bias, ae_median
//   binary:   brier_score, log_score
//   point:    ae_point, se_point
// One output row per forecast unit, in deterministic sorted order.
ScoreTable score(const ForecastTable &table, std::uint64_t seed = 42,
                 std::vector<std::string> *warnings = nullptr);

enum class Aggregator { Mean, Median, Sd, Min, Max };

Aggregator aggregator_from_name(const std::string &name);

// One row per distinct `by` combination, metrics aggregated with `fun`
// (NaN cells skipped). `signif_digits` > 0 rounds after aggregation.
// Non-mean aggregators may break propriety; a warning is recorded.
ScoreTable summarise_scores(const ScoreTable &scores,
                            const std::vector<std::string> &by,
                            Aggregator fun = Aggregator::Mean,
                            int signif_digits = 0,
                            std::vector<std::string> *warnings = nullptr);

// Appends coverage_<range> columns holding the empirical coverage of the
// `by` group every row belongs to. Requires the covered_<range> flags
// produced by score() on quantile data.
ScoreTable add_coverage(const ScoreTable &scores,
                        const std::vector<double> &ranges,
                        const std::vector<std::string> &by);

enum class PairwiseTest { Wilcoxon, Permutation };

struct PairwiseOptions {
  std::vector<std::string> by{"model"}; // must contain "model"
  std::string metric = "auto";
  std::optional<std::string> baseline;
  PairwiseTest test = PairwiseTest::Wilcoxon;
  std::uint64_t seed = 42;
  int permutation_resamples = 10000;
  double completeness_warning = 0.5;
};

struct PairwiseResult {
  struct Pair {
    std::string model_a;
    std::string model_b;
    double mean_scores_ratio = 1.0;
    double pval = 1.0;
    double adj_pval = 1.0;
    std::size_t n_overlap = 0;
  };
  struct ModelSkill {
    std::string model;
    double relative_skill = 1.0;       // NaN when no overlap with anyone
    double scaled_rel_skill = 1.0;     // NaN when no baseline given
  };

  std::vector<std::string> group_columns; // `by` minus model
  std::vector<std::string> group_values;
  std::vector<Pair> pairs;
  std::vector<ModelSkill> per_model;
};

// Pairwise tournament per group: mean-score ratios on overlapping
// forecast sets, relative skill as the geometric mean of a model's ratios
// (including the self-ratio 1), optional baseline scaling, Holm-adjusted
// p-values.
std::vector<PairwiseResult>
pairwise_comparison(const ScoreTable &scores, const PairwiseOptions &options,
                    std::vector<std::string> *warnings = nullptr);

struct CorrelationMatrix {
  std::vector<std::string> metrics;
  Eigen::MatrixXd values; // NaN entries where a metric is constant
};

// Pearson correlations between metric columns across rows; call on
// unit-level (already summarised) scores.
CorrelationMatrix correlation(const ScoreTable &scores);

struct PitHistogram {
  std::vector<std::string> group_columns;
  struct Group {
    std::vector<std::string> group_values;
    Eigen::VectorXd masses; // normalised, sums to 1
  };
  std::vector<Group> groups;
};

// PIT histogram per `by` group. Sample forecasts use the (randomised for
// discrete targets) PIT value; quantile forecasts spread each unit's mass
// uniformly over the level interval bracketing the observation.
PitHistogram pit_histogram(const ForecastTable &table,
                           const std::vector<std::string> &by, int bins,
                           std::uint64_t seed);

// Reads a ScoreTable from delimited text; columns with known metric names
// (or a coverage_ prefix) become metrics, everything else identifiers.
ScoreTable read_score_table(const std::string &path, char delimiter = ',');
ScoreTable read_score_table_stream(std::istream &in, char delimiter);

void write_score_table(const ScoreTable &scores, std::ostream &out,
                       char delimiter = ',');

} // namespace scoring

#endif
