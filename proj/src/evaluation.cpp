#include "scoring/evaluation.hpp"

#include "scoring/binary_scores.hpp"
#include "scoring/delimited.hpp"
#include "scoring/quantile_scores.hpp"
#include "scoring/rank_tests.hpp"
#include "scoring/sample_scores.hpp"
#include "scoring/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace scoring {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> &known_metric_names() {
  static const std::set<std::string> names{
      "crps",         "log_score",       "dss",
      "bias",         "mad",             "ae_median",
      "se_mean",      "interval_score",  "dispersion",
      "underprediction", "overprediction", "coverage_deviation",
      "brier_score",  "ae_point",        "se_point"};
  return names;
}

bool is_metric_column(const std::string &name) {
  return known_metric_names().count(name) > 0 ||
         name.rfind("coverage_", 0) == 0;
}

std::string join_ids(const std::vector<std::string> &ids,
                     const std::vector<std::size_t> &indices) {
  std::string key;
  for (std::size_t idx : indices) {
    key += ids[idx];
    key.push_back('\x1f');
  }
  return key;
}

std::vector<std::size_t> column_indices(const std::vector<std::string> &all,
                                        const std::vector<std::string> &wanted,
                                        const char *what) {
  std::vector<std::size_t> out;
  for (const auto &name : wanted) {
    const auto it = std::find(all.begin(), all.end(), name);
    if (it == all.end()) {
      throw ValidationError(std::string("unknown column in ") + what + ": " +
                            name);
    }
    out.push_back(static_cast<std::size_t>(it - all.begin()));
  }
  return out;
}

QuantileForecast make_quantile_forecast(const ForecastTable &table,
                                        const std::vector<std::size_t> &rows) {
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(rows.size());
  for (std::size_t r : rows) {
    pairs.emplace_back(table.rows[r].rep_value, table.rows[r].predicted);
  }
  std::sort(pairs.begin(), pairs.end());
  QuantileForecast f;
  f.levels.resize(static_cast<Eigen::Index>(pairs.size()));
  f.values.resize(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    f.levels[static_cast<Eigen::Index>(i)] = pairs[i].first;
    f.values[static_cast<Eigen::Index>(i)] = pairs[i].second;
  }
  f.observed = table.rows[rows.front()].observed;
  return f;
}

double aggregate(const std::vector<double> &values, Aggregator fun) {
  if (values.empty()) {
    return kNaN;
  }
  switch (fun) {
  case Aggregator::Mean: {
    double total = 0.0;
    for (double v : values) {
      total += v;
    }
    return total / static_cast<double>(values.size());
  }
  case Aggregator::Median: {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = values[i];
    }
    return median(v);
  }
  case Aggregator::Sd: {
    if (values.size() < 2) {
      return kNaN;
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = values[i];
    }
    return sample_sd(v);
  }
  case Aggregator::Min:
    return *std::min_element(values.begin(), values.end());
  case Aggregator::Max:
    return *std::max_element(values.begin(), values.end());
  }
  return kNaN;
}

} // namespace

long ScoreTable::metric_index(const std::string &name) const {
  const auto it = std::find(metric_names.begin(), metric_names.end(), name);
  return it == metric_names.end() ? -1 : it - metric_names.begin();
}

long ScoreTable::id_index(const std::string &name) const {
  const auto it = std::find(id_columns.begin(), id_columns.end(), name);
  return it == id_columns.end() ? -1 : it - id_columns.begin();
}

Aggregator aggregator_from_name(const std::string &name) {
  if (name == "mean") {
    return Aggregator::Mean;
  }
  if (name == "median") {
    return Aggregator::Median;
  }
  if (name == "sd") {
    return Aggregator::Sd;
  }
  if (name == "min") {
    return Aggregator::Min;
  }
  if (name == "max") {
    return Aggregator::Max;
  }
  throw ValidationError("unknown aggregator: " + name);
}

ScoreTable score(const ForecastTable &table, std::uint64_t seed,
                 std::vector<std::string> *warnings) {
  if (table.empty()) {
    throw ValidationError("cannot score an empty forecast table");
  }
  ScoreTable out;
  out.id_columns = table.id_columns;

  const bool discrete = table.target_type_guess == TargetType::Integer;
  switch (table.format) {
  case TableFormat::Sample:
    out.metric_names = {"crps", "dss", "bias", "mad", "ae_median", "se_mean"};
    if (!discrete) {
      out.metric_names.insert(out.metric_names.begin() + 1, "log_score");
    }
    break;
  case TableFormat::Quantile:
    out.metric_names = {"interval_score",  "dispersion",
                        "underprediction", "overprediction",
                        "coverage_deviation", "bias", "ae_median"};
    break;
  case TableFormat::MixedQuantilePoint:
    out.metric_names = {"interval_score",  "dispersion",
                        "underprediction", "overprediction",
                        "coverage_deviation", "bias", "ae_median",
                        "ae_point", "se_point"};
    break;
  case TableFormat::Binary:
    out.metric_names = {"brier_score", "log_score"};
    break;
  case TableFormat::Point:
    out.metric_names = {"ae_point", "se_point"};
    break;
  }

  bool warned_log_floor = false;
  bool warned_zero_var = false;
  bool warned_median = false;
  std::uint64_t unit_index = 0;
  for (const auto &[ids, rows] : group_by_unit(table)) {
    ScoreTable::Row row;
    row.ids = ids;
    row.metrics.assign(out.metric_names.size(), kNaN);
    const auto set = [&](const char *name, double value) {
      const long idx = out.metric_index(name);
      if (idx >= 0) {
        row.metrics[static_cast<std::size_t>(idx)] = value;
      }
    };

    const RepKind kind = table.rows[rows.front()].kind;
    if (kind == RepKind::Sample) {
      SampleForecast f;
      f.discrete = discrete;
      f.observed = table.rows[rows.front()].observed;
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t r : rows) {
        pairs.emplace_back(table.rows[r].rep_value, table.rows[r].predicted);
      }
      std::sort(pairs.begin(), pairs.end());
      f.samples.resize(static_cast<Eigen::Index>(pairs.size()));
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        f.samples[static_cast<Eigen::Index>(i)] = pairs[i].second;
      }

      set("crps", crps_sample(f));
      set("bias", bias_sample(f));
      set("mad", mad_dispersion(f));
      set("ae_median", ae_median_sample(f));
      set("se_mean", se_mean_sample(f));
      const bool degenerate =
          f.samples.size() < 2 ||
          f.samples.minCoeff() == f.samples.maxCoeff();
      if (degenerate) {
        if (warnings != nullptr && !warned_zero_var) {
          warnings->push_back("zero sample variance in at least one unit; "
                              "dss and log_score reported as NA there");
          warned_zero_var = true;
        }
      } else {
        set("dss", dss_sample(f));
        if (!discrete) {
          const LogScoreValue ls = log_score_sample(f);
          set("log_score", ls.value);
          if (ls.floored && warnings != nullptr && !warned_log_floor) {
            warnings->push_back("estimated predictive density fell below "
                                "1e-20 for at least one unit; log score "
                                "clamped");
            warned_log_floor = true;
          }
        }
      }
    } else if (kind == RepKind::Quantile) {
      const QuantileForecast f = make_quantile_forecast(table, rows);
      bool median_missing = false;
      const WisComponents c = wis(f, &median_missing);
      if (median_missing && warnings != nullptr && !warned_median) {
        warnings->push_back("median (level 0.5) missing in at least one "
                            "unit; WIS normalised without the median term");
        warned_median = true;
      }
      set("interval_score", c.wis);
      set("dispersion", c.dispersion);
      set("underprediction", c.underprediction);
      set("overprediction", c.overprediction);
      set("bias", bias_quantile(f));
      if (!median_missing) {
        set("ae_median", ae_median_quantile(f));
      }
      const std::vector<double> ranges = available_ranges(f.levels);
      if (!ranges.empty()) {
        double deviation = 0.0;
        for (double range : ranges) {
          const bool covered = interval_covered(f, range);
          row.aux["covered_" + format_double(range)] = covered ? 1.0 : 0.0;
          deviation += (covered ? 1.0 : 0.0) - range / 100.0;
        }
        set("coverage_deviation",
            deviation / static_cast<double>(ranges.size()));
      }
      for (Eigen::Index i = 0; i < f.levels.size(); ++i) {
        row.aux["quantile_covered_" + format_double(f.levels[i])] =
            f.observed <= f.values[i] ? 1.0 : 0.0;
      }
    } else if (kind == RepKind::BinaryProb) {
      if (rows.size() != 1) {
        throw ValidationError("multiple binary rows for one forecast unit");
      }
      BinaryForecast f;
      f.prob = table.rows[rows.front()].predicted;
      f.observed = static_cast<int>(table.rows[rows.front()].observed);
      set("brier_score", brier_score(f));
      set("log_score", log_score_binary(f).value);
    } else { // point
      if (rows.size() != 1) {
        throw ValidationError("multiple point rows for one forecast unit");
      }
      const double diff =
          table.rows[rows.front()].predicted - table.rows[rows.front()].observed;
      set("ae_point", std::abs(diff));
      set("se_point", diff * diff);
    }
    out.rows.push_back(std::move(row));
    ++unit_index;
  }
  (void)seed;
  return out;
}

ScoreTable summarise_scores(const ScoreTable &scores,
                            const std::vector<std::string> &by,
                            Aggregator fun, int signif_digits,
                            std::vector<std::string> *warnings) {
  const std::vector<std::size_t> by_idx =
      column_indices(scores.id_columns, by, "`by`");
  if (fun != Aggregator::Mean && warnings != nullptr) {
    warnings->push_back("aggregating with a non-mean summary function; "
                        "summarised scores may lose propriety");
  }

  std::map<std::string, std::pair<std::vector<std::string>,
                                  std::vector<std::vector<double>>>>
      groups;
  for (const auto &row : scores.rows) {
    const std::string key = join_ids(row.ids, by_idx);
    auto &entry = groups[key];
    if (entry.first.empty()) {
      for (std::size_t idx : by_idx) {
        entry.first.push_back(row.ids[idx]);
      }
      entry.second.assign(scores.metric_names.size(), {});
    }
    for (std::size_t m = 0; m < row.metrics.size(); ++m) {
      if (!std::isnan(row.metrics[m])) {
        entry.second[m].push_back(row.metrics[m]);
      }
    }
  }

  ScoreTable out;
  out.id_columns = by;
  out.metric_names = scores.metric_names;
  for (auto &[key, entry] : groups) {
    ScoreTable::Row row;
    row.ids = entry.first;
    row.metrics.reserve(scores.metric_names.size());
    for (const auto &values : entry.second) {
      double v = aggregate(values, fun);
      if (signif_digits > 0) {
        v = signif(v, signif_digits);
      }
      row.metrics.push_back(v);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

ScoreTable add_coverage(const ScoreTable &scores,
                        const std::vector<double> &ranges,
                        const std::vector<std::string> &by) {
  const std::vector<std::size_t> by_idx =
      column_indices(scores.id_columns, by, "`by`");

  ScoreTable out = scores;
  for (double range : ranges) {
    const std::string flag = "covered_" + format_double(range);
    std::map<std::string, std::pair<double, double>> sums; // sum, count
    for (const auto &row : scores.rows) {
      const auto it = row.aux.find(flag);
      if (it == row.aux.end()) {
        throw ComputeError("central " + format_double(range) +
                           "% interval coverage is not available from the "
                           "scored level grid");
      }
      auto &entry = sums[join_ids(row.ids, by_idx)];
      entry.first += it->second;
      entry.second += 1.0;
    }
    out.metric_names.push_back("coverage_" + format_double(range));
    for (auto &row : out.rows) {
      const auto &entry = sums[join_ids(row.ids, by_idx)];
      row.metrics.push_back(entry.first / entry.second);
    }
  }
  return out;
}

std::vector<PairwiseResult>
pairwise_comparison(const ScoreTable &scores, const PairwiseOptions &options,
                    std::vector<std::string> *warnings) {
  if (std::find(options.by.begin(), options.by.end(), "model") ==
      options.by.end()) {
    throw ValidationError("pairwise comparison requires `model` in `by`");
  }
  const long model_col = scores.id_index("model");
  if (model_col < 0) {
    throw ValidationError("scores have no `model` column");
  }

  // Metric selection.
  std::string metric = options.metric;
  if (metric == "auto" || metric.empty()) {
    for (const char *candidate :
         {"interval_score", "crps", "brier_score", "ae_point"}) {
      if (scores.metric_index(candidate) >= 0) {
        metric = candidate;
        break;
      }
    }
    if (metric == "auto" || metric.empty()) {
      throw ValidationError("no default pairwise metric available");
    }
  }
  const long metric_col = scores.metric_index(metric);
  if (metric_col < 0) {
    throw ValidationError("metric not present in scores: " + metric);
  }

  // Group columns: `by` minus model; overlap key: all ids minus model.
  std::vector<std::string> group_columns;
  for (const auto &name : options.by) {
    if (name != "model") {
      group_columns.push_back(name);
    }
  }
  const std::vector<std::size_t> group_idx =
      column_indices(scores.id_columns, group_columns, "`by`");
  std::vector<std::size_t> unit_idx;
  for (std::size_t i = 0; i < scores.id_columns.size(); ++i) {
    if (static_cast<long>(i) != model_col) {
      unit_idx.push_back(i);
    }
  }

  // Mixed-sign scores cannot form meaningful ratios.
  bool any_pos = false, any_neg = false;
  for (const auto &row : scores.rows) {
    const double v = row.metrics[static_cast<std::size_t>(metric_col)];
    if (std::isnan(v)) {
      continue;
    }
    any_pos |= v > 0.0;
    any_neg |= v < 0.0;
  }
  if (any_pos && any_neg) {
    throw ComputeError("pairwise comparisons need scores of one sign; "
                       "metric " + metric + " has mixed signs");
  }

  // Unit-level aggregation (pairwise always consumes unsummarised scores;
  // e.g. per-quantile rows from a file are averaged per unit here).
  // group -> model -> unit key -> mean score
  struct Accum {
    double sum = 0.0;
    double count = 0.0;
  };
  std::map<std::vector<std::string>,
           std::map<std::string, std::map<std::string, Accum>>>
      grouped;
  for (const auto &row : scores.rows) {
    const double v = row.metrics[static_cast<std::size_t>(metric_col)];
    if (std::isnan(v)) {
      continue;
    }
    std::vector<std::string> group;
    for (std::size_t idx : group_idx) {
      group.push_back(row.ids[idx]);
    }
    auto &cell = grouped[group][row.ids[static_cast<std::size_t>(model_col)]]
                        [join_ids(row.ids, unit_idx)];
    cell.sum += v;
    cell.count += 1.0;
  }

  std::vector<PairwiseResult> results;
  for (const auto &[group_values, models] : grouped) {
    PairwiseResult result;
    result.group_columns = group_columns;
    result.group_values = group_values;

    std::vector<std::string> model_names;
    for (const auto &[name, units] : models) {
      model_names.push_back(name);
    }
    if (model_names.size() < 2) {
      throw ValidationError("pairwise comparison needs at least 2 models");
    }
    if (options.baseline.has_value() &&
        models.count(*options.baseline) == 0) {
      throw ValidationError("baseline model absent from group: " +
                            *options.baseline);
    }

    // Completeness check against the union of units in the group.
    std::set<std::string> all_units;
    for (const auto &[name, units] : models) {
      for (const auto &[key, acc] : units) {
        all_units.insert(key);
      }
    }
    if (warnings != nullptr) {
      for (const auto &[name, units] : models) {
        const double completeness = static_cast<double>(units.size()) /
                                    static_cast<double>(all_units.size());
        if (completeness < options.completeness_warning) {
          warnings->push_back("model " + name + " provides fewer than " +
                              format_double(100.0 *
                                            options.completeness_warning) +
                              "% of the forecasts in its group; relative "
                              "skill may be unreliable");
        }
      }
    }

    // Ratios for unordered pairs; both orientations are emitted.
    std::map<std::pair<std::string, std::string>, PairwiseResult::Pair>
        computed;
    std::vector<std::pair<std::string, std::string>> tested_pairs;
    std::vector<double> pvals;
    for (std::size_t i = 0; i < model_names.size(); ++i) {
      for (std::size_t j = i + 1; j < model_names.size(); ++j) {
        const auto &units_a = models.at(model_names[i]);
        const auto &units_b = models.at(model_names[j]);
        std::vector<double> a, b;
        for (const auto &[key, acc] : units_a) {
          const auto it = units_b.find(key);
          if (it != units_b.end()) {
            a.push_back(acc.sum / acc.count);
            b.push_back(it->second.sum / it->second.count);
          }
        }
        if (a.empty()) {
          continue; // no overlapping forecasts, comparison omitted
        }
        const double mean_a =
            std::accumulate(a.begin(), a.end(), 0.0) /
            static_cast<double>(a.size());
        const double mean_b =
            std::accumulate(b.begin(), b.end(), 0.0) /
            static_cast<double>(b.size());
        PairwiseResult::Pair pair;
        pair.model_a = model_names[i];
        pair.model_b = model_names[j];
        pair.n_overlap = a.size();
        pair.mean_scores_ratio = mean_a / mean_b;

        Eigen::Map<const Eigen::VectorXd> va(a.data(),
                                             static_cast<Eigen::Index>(a.size()));
        Eigen::Map<const Eigen::VectorXd> vb(b.data(),
                                             static_cast<Eigen::Index>(b.size()));
        if (options.test == PairwiseTest::Wilcoxon) {
          pair.pval = wilcoxon_rank_sum_pvalue(va, vb);
        } else {
          const std::uint64_t pair_seed = derive_seed(
              options.seed, i * model_names.size() + j);
          pair.pval = permutation_pvalue(va, vb,
                                         options.permutation_resamples,
                                         pair_seed);
        }
        computed[{pair.model_a, pair.model_b}] = pair;
        tested_pairs.emplace_back(pair.model_a, pair.model_b);
        pvals.push_back(pair.pval);
      }
    }
    const std::vector<double> adjusted = holm_adjust(pvals);
    for (std::size_t i = 0; i < tested_pairs.size(); ++i) {
      computed[tested_pairs[i]].adj_pval = adjusted[i];
    }

    // Emit all ordered pairs including self-comparisons.
    for (const auto &name_a : model_names) {
      for (const auto &name_b : model_names) {
        PairwiseResult::Pair pair;
        pair.model_a = name_a;
        pair.model_b = name_b;
        if (name_a == name_b) {
          pair.n_overlap = models.at(name_a).size();
          result.pairs.push_back(pair);
          continue;
        }
        const bool forward = name_a < name_b;
        const auto it = computed.find(forward
                                          ? std::make_pair(name_a, name_b)
                                          : std::make_pair(name_b, name_a));
        if (it == computed.end()) {
          continue;
        }
        pair = it->second;
        if (!forward) {
          std::swap(pair.model_a, pair.model_b);
          pair.mean_scores_ratio = 1.0 / pair.mean_scores_ratio;
        }
        result.pairs.push_back(pair);
      }
    }

    // Relative skill: geometric mean over a model's ratios, self included.
    std::map<std::string, double> skills;
    for (const auto &name : model_names) {
      double log_sum = 0.0; // self-ratio contributes log(1) = 0
      std::size_t n_ratios = 1;
      bool any_overlap = false;
      for (const auto &pair : result.pairs) {
        if (pair.model_a == name && pair.model_b != name) {
          log_sum += std::log(pair.mean_scores_ratio);
          ++n_ratios;
          any_overlap = true;
        }
      }
      if (!any_overlap) {
        if (warnings != nullptr) {
          warnings->push_back("model " + name +
                              " shares no overlapping forecasts with any "
                              "other model; relative skill not defined");
        }
        skills[name] = kNaN;
      } else {
        skills[name] = std::exp(log_sum / static_cast<double>(n_ratios));
      }
    }
    for (const auto &name : model_names) {
      PairwiseResult::ModelSkill skill;
      skill.model = name;
      skill.relative_skill = skills[name];
      if (options.baseline.has_value()) {
        skill.scaled_rel_skill = skills[name] / skills[*options.baseline];
      } else {
        skill.scaled_rel_skill = kNaN;
      }
      result.per_model.push_back(skill);
    }
    results.push_back(std::move(result));
  }
  return results;
}

CorrelationMatrix correlation(const ScoreTable &scores) {
  if (scores.rows.size() < 3) {
    throw ComputeError("correlation needs at least 3 score rows");
  }
  const auto m = scores.metric_names.size();
  CorrelationMatrix out;
  out.metrics = scores.metric_names;
  out.values = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(m),
                                         static_cast<Eigen::Index>(m), kNaN);
  for (std::size_t i = 0; i < m; ++i) {
    out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
        1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      std::vector<double> xi, xj;
      for (const auto &row : scores.rows) {
        if (!std::isnan(row.metrics[i]) && !std::isnan(row.metrics[j])) {
          xi.push_back(row.metrics[i]);
          xj.push_back(row.metrics[j]);
        }
      }
      double r = kNaN;
      if (xi.size() >= 3) {
        Eigen::Map<const Eigen::VectorXd> vi(
            xi.data(), static_cast<Eigen::Index>(xi.size()));
        Eigen::Map<const Eigen::VectorXd> vj(
            xj.data(), static_cast<Eigen::Index>(xj.size()));
        r = pearson_correlation(vi, vj);
      }
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          r;
      out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          r;
    }
  }
  return out;
}

PitHistogram pit_histogram(const ForecastTable &table,
                           const std::vector<std::string> &by, int bins,
                           std::uint64_t seed) {
  if (bins < 2) {
    throw ValidationError("PIT histogram needs at least 2 bins");
  }
  if (table.format != TableFormat::Sample &&
      table.format != TableFormat::Quantile) {
    throw ValidationError("PIT histograms require sample or quantile "
                          "forecasts");
  }
  const std::vector<std::size_t> by_idx =
      column_indices(table.id_columns, by, "`by`");
  const bool discrete = table.target_type_guess == TargetType::Integer;

  std::map<std::vector<std::string>, Eigen::VectorXd> groups;
  std::uint64_t unit_index = 0;
  for (const auto &[ids, rows] : group_by_unit(table)) {
    std::vector<std::string> group;
    for (std::size_t idx : by_idx) {
      group.push_back(ids[idx]);
    }
    auto it = groups.find(group);
    if (it == groups.end()) {
      it = groups.emplace(group, Eigen::VectorXd::Zero(bins)).first;
    }
    Eigen::VectorXd &masses = it->second;

    if (table.format == TableFormat::Sample) {
      SampleForecast f;
      f.discrete = discrete;
      f.observed = table.rows[rows.front()].observed;
      f.samples.resize(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        f.samples[static_cast<Eigen::Index>(i)] =
            table.rows[rows[i]].predicted;
      }
      const double pit = pit_value(f, derive_seed(seed, unit_index));
      const auto bin = std::min<Eigen::Index>(
          static_cast<Eigen::Index>(pit * bins), bins - 1);
      masses[bin] += 1.0;
    } else {
      // Coverage-based binning: the PIT of a quantile forecast is only
      // known up to the level interval bracketing the observation; its
      // mass is spread uniformly over that interval.
      const QuantileForecast f = make_quantile_forecast(table, rows);
      double lo = 0.0, hi = 1.0;
      for (Eigen::Index i = 0; i < f.levels.size(); ++i) {
        if (f.values[i] < f.observed) {
          lo = f.levels[i];
        }
      }
      for (Eigen::Index i = f.levels.size() - 1; i >= 0; --i) {
        if (f.observed <= f.values[i]) {
          hi = f.levels[i];
        }
      }
      if (hi < lo) {
        hi = lo;
      }
      const double width = hi - lo;
      for (int b = 0; b < bins; ++b) {
        const double bin_lo = static_cast<double>(b) / bins;
        const double bin_hi = static_cast<double>(b + 1) / bins;
        if (width <= 0.0) {
          if (lo >= bin_lo && (lo < bin_hi || b == bins - 1)) {
            masses[b] += 1.0;
          }
        } else {
          const double overlap =
              std::max(0.0, std::min(hi, bin_hi) - std::max(lo, bin_lo));
          masses[b] += overlap / width;
        }
      }
    }
    ++unit_index;
  }

  PitHistogram out;
  out.group_columns = by;
  for (auto &[group, masses] : groups) {
    const double total = masses.sum();
    if (total > 0.0) {
      masses /= total;
    }
    out.groups.push_back({group, masses});
  }
  return out;
}

ScoreTable read_score_table(const std::string &path, char delimiter) {
  std::ifstream in(path);
  if (!in) {
    throw IngestError("cannot open scores file: " + path);
  }
  return read_score_table_stream(in, delimiter);
}

ScoreTable read_score_table_stream(std::istream &in, char delimiter) {
  std::string line;
  if (!std::getline(in, line)) {
    throw IngestError("scores file has no header row");
  }
  const std::vector<std::string> header = split_delimited(line, delimiter);
  ScoreTable out;
  std::vector<long> id_cols, metric_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (is_metric_column(header[i])) {
      metric_cols.push_back(static_cast<long>(i));
      out.metric_names.push_back(header[i]);
    } else {
      id_cols.push_back(static_cast<long>(i));
      out.id_columns.push_back(header[i]);
    }
  }
  if (out.metric_names.empty()) {
    throw IngestError("no recognised metric columns in scores file");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const std::vector<std::string> fields = split_delimited(line, delimiter);
    if (fields.size() != header.size()) {
      throw IngestError("scores row " + std::to_string(line_no) +
                        " has the wrong number of fields");
    }
    ScoreTable::Row row;
    for (long c : id_cols) {
      row.ids.push_back(fields[static_cast<std::size_t>(c)]);
    }
    for (long c : metric_cols) {
      const std::string &field = fields[static_cast<std::size_t>(c)];
      if (field.empty() || field == "NA") {
        row.metrics.push_back(kNaN);
      } else {
        double v = 0.0;
        const auto result =
            std::from_chars(field.data(), field.data() + field.size(), v);
        if (result.ec != std::errc() ||
            result.ptr != field.data() + field.size()) {
          throw IngestError("scores row " + std::to_string(line_no) +
                            ": non-numeric metric value: " + field);
        }
        row.metrics.push_back(v);
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

void write_score_table(const ScoreTable &scores, std::ostream &out,
                       char delimiter) {
  bool first = true;
  for (const auto &col : scores.id_columns) {
    if (!first) {
      out << delimiter;
    }
    out << col;
    first = false;
  }
  for (const auto &name : scores.metric_names) {
    if (!first) {
      out << delimiter;
    }
    out << name;
    first = false;
  }
  out << '\n';
  for (const auto &row : scores.rows) {
    first = true;
    for (const auto &id : row.ids) {
      if (!first) {
        out << delimiter;
      }
      out << id;
      first = false;
    }
    for (double v : row.metrics) {
      if (!first) {
        out << delimiter;
      }
      out << format_double(v);
      first = false;
    }
    out << '\n';
  }
}

} // namespace scoring
