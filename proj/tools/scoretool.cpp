// Command-line front end for the scoring library: validation, scoring,
// summaries, pairwise model comparison, PIT histograms, correlations,
// plot-data export and score simulations on delimited forecast tables.

#include "scoring/evaluation.hpp"
#include "scoring/experiments.hpp"
#include "scoring/forecast_table.hpp"
#include "scoring/plot_data.hpp"
#include "scoring/stats.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using scoring::ComputeError;
using scoring::ForecastTable;
using scoring::IngestError;
using scoring::ScoreTable;
using scoring::ValidationError;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCompute = 3;

struct CommonOptions {
  std::string input;
  std::string format;
  std::string output = "-";
  std::string output_format = "csv";
  std::string delimiter = ",";
  std::string config_file;
  std::vector<std::string> by;
  std::uint64_t seed = 42;
};

// `--output -` writes to stdout; anything else to a file.
void emit(const std::string &output, const std::string &text) {
  if (output == "-" || output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) {
    throw IngestError("cannot open output file: " + output);
  }
  out << text;
}

char delimiter_char(const CommonOptions &options) {
  if (options.delimiter.size() != 1) {
    throw CLI::ValidationError("--delimiter", "must be a single character");
  }
  return options.delimiter[0];
}

scoring::IngestOptions ingest_options(const CommonOptions &options) {
  scoring::IngestOptions ingest;
  ingest.delimiter = delimiter_char(options);
  if (!options.format.empty()) {
    if (options.format == "sample") {
      ingest.format_hint = scoring::TableFormat::Sample;
    } else if (options.format == "quantile") {
      ingest.format_hint = scoring::TableFormat::Quantile;
    } else if (options.format == "binary") {
      ingest.format_hint = scoring::TableFormat::Binary;
    } else if (options.format == "point") {
      ingest.format_hint = scoring::TableFormat::Point;
    } else {
      throw CLI::ValidationError("--format",
                                 "expected sample|quantile|binary|point");
    }
  }
  return ingest;
}

// Validated table; validation messages go to stderr so stdout stays
// pipe-composable.
ForecastTable load_table(const CommonOptions &options) {
  const auto table = scoring::ingest(options.input, ingest_options(options));
  const auto report = scoring::validate(table);
  for (const auto &message : report.messages) {
    std::cerr << "note: " << message << "\n";
  }
  for (const auto &warning : report.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  return report.cleaned;
}

std::string render_scores(const ScoreTable &scores,
                          const CommonOptions &options) {
  if (options.output_format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : scores.rows) {
      nlohmann::json entry;
      for (std::size_t i = 0; i < scores.id_columns.size(); ++i) {
        entry[scores.id_columns[i]] = row.ids[i];
      }
      for (std::size_t m = 0; m < scores.metric_names.size(); ++m) {
        if (std::isnan(row.metrics[m])) {
          entry[scores.metric_names[m]] = nullptr;
        } else {
          entry[scores.metric_names[m]] = row.metrics[m];
        }
      }
      rows.push_back(std::move(entry));
    }
    return rows.dump(2) + "\n";
  }
  std::ostringstream out;
  scoring::write_score_table(scores, out, delimiter_char(options));
  return out.str();
}

std::string render_json(const nlohmann::json &document) {
  return document.dump(2) + "\n";
}

// Score tables arrive either as raw forecasts (scored here) or as the
// output of a previous `score` run.
ScoreTable load_scores(const CommonOptions &options, bool &was_forecasts) {
  std::ifstream probe(options.input);
  if (!probe) {
    throw IngestError("cannot open input file: " + options.input);
  }
  std::string header;
  std::getline(probe, header);
  probe.close();
  const bool looks_like_forecasts =
      header.find("true_value") != std::string::npos &&
      header.find("prediction") != std::string::npos;
  was_forecasts = looks_like_forecasts;
  if (looks_like_forecasts) {
    std::vector<std::string> warnings;
    const auto scores = scoring::score(load_table(options), options.seed,
                                       &warnings);
    for (const auto &warning : warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    return scores;
  }
  return scoring::read_score_table(options.input, delimiter_char(options));
}

// `key = value` config file sharing the experiment-config syntax; CLI
// flags win over file values, file values win over defaults.
void apply_config_file(const std::string &path, CLI::App &app) {
  std::ifstream in(path);
  if (!in) {
    throw IngestError("cannot open config file: " + path);
  }
  std::string line;
  while (std::getline(in, line)) {
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
      throw IngestError("config line is not `key = value`: " + line);
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    CLI::Option *option = app.get_option_no_throw(key);
    if (option == nullptr) {
      throw IngestError("unknown config key: " + key.substr(2));
    }
    if (option->count() == 0) { // CLI beats file
      option->add_result(value);
    }
  }
}

std::vector<double> parse_number_list(const std::vector<std::string> &items,
                                      const char *flag) {
  std::vector<double> out;
  for (const auto &item : items) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception &) {
      throw CLI::ValidationError(flag, "cannot parse number: " + item);
    }
  }
  return out;
}

void add_common(CLI::App *cmd, CommonOptions &options, bool needs_input) {
  auto *input = cmd->add_option("-i,--input", options.input,
                                "Input file (delimited text)");
  if (needs_input) {
    input->required();
  }
  cmd->add_option("--format", options.format,
                  "Format hint: sample|quantile|binary|point");
  cmd->add_option("-o,--output", options.output,
                  "Output file, or - for stdout (default)");
  cmd->add_option("--output-format", options.output_format,
                  "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--delimiter", options.delimiter,
                  "Field delimiter (default ,)");
  cmd->add_option("--seed", options.seed,
                  "Random seed for stochastic steps (default 42)");
  cmd->add_option("--config", options.config_file,
                  "key = value config file; command line wins");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Probabilistic forecast evaluation toolkit"};
  app.require_subcommand(1);

  // ---- check ----
  CommonOptions check_opts;
  auto *check = app.add_subcommand(
      "check", "Validate a forecast table and report its structure");
  add_common(check, check_opts, true);

  // ---- avail ----
  CommonOptions avail_opts;
  auto *avail = app.add_subcommand(
      "avail", "Count available forecasts per grouping");
  add_common(avail, avail_opts, true);
  avail->add_option("--by", avail_opts.by, "Grouping columns")
      ->delimiter(',');

  // ---- score ----
  CommonOptions score_opts;
  auto *score_cmd = app.add_subcommand(
      "score", "Score every forecast unit");
  add_common(score_cmd, score_opts, true);

  // ---- summarise ----
  CommonOptions summarise_opts;
  std::string summarise_fun = "mean";
  int signif_digits = 0;
  std::vector<std::string> metrics_filter;
  std::vector<std::string> ranges_raw;
  auto *summarise = app.add_subcommand(
      "summarise", "Aggregate scores over a grouping");
  add_common(summarise, summarise_opts, true);
  summarise->add_option("--by", summarise_opts.by, "Grouping columns")
      ->delimiter(',');
  summarise->add_option("--fun", summarise_fun,
                        "Aggregator: mean|median|sd|min|max");
  summarise->add_option("--signif", signif_digits,
                        "Significant digits to keep (0 = all)");
  summarise->add_option("--metrics", metrics_filter,
                        "Keep only these metric columns")
      ->delimiter(',');
  summarise->add_option("--ranges", ranges_raw,
                        "Append coverage for these central ranges (quantile "
                        "forecasts scored in the same run)")
      ->delimiter(',');

  // ---- pairwise ----
  CommonOptions pairwise_opts;
  scoring::PairwiseOptions pw;
  std::string pairwise_test = "wilcoxon";
  auto *pairwise = app.add_subcommand(
      "pairwise", "Pairwise model tournament with relative skill");
  add_common(pairwise, pairwise_opts, true);
  pairwise->add_option("--by", pairwise_opts.by,
                       "Comparison columns, must include model");
  pairwise->add_option("--metric", pw.metric,
                       "Metric to compare (default: auto)");
  pairwise->add_option("--baseline", pw.baseline,
                       "Baseline model for scaled relative skill");
  pairwise->add_option("--test", pairwise_test,
                       "Significance test: wilcoxon|permutation")
      ->check(CLI::IsMember({"wilcoxon", "permutation"}));
  pairwise->add_option("--resamples", pw.permutation_resamples,
                       "Permutation resamples (default 10000)");

  // ---- pit ----
  CommonOptions pit_opts;
  int pit_bins = 10;
  auto *pit = app.add_subcommand(
      "pit", "PIT histogram per grouping");
  add_common(pit, pit_opts, true);
  pit->add_option("--by", pit_opts.by, "Grouping columns")->delimiter(',');
  pit->add_option("--bins", pit_bins, "Histogram bins (default 10)");

  // ---- correlation ----
  CommonOptions corr_opts;
  auto *corr = app.add_subcommand(
      "correlation", "Pearson correlations between metric columns");
  add_common(corr, corr_opts, true);

  // ---- plotdata ----
  CommonOptions plot_opts;
  std::string plot_kind;
  std::string heat_x = "model";
  std::string heat_y;
  std::string heat_metric = "interval_score";
  auto *plotdata = app.add_subcommand(
      "plotdata", "Renderer-agnostic chart description as JSON");
  add_common(plotdata, plot_opts, true);
  plotdata
      ->add_option("--kind", plot_kind,
                   "wis-decomposition|interval-coverage|quantile-coverage|"
                   "heatmap|availability|correlation")
      ->required()
      ->check(CLI::IsMember({"wis-decomposition", "interval-coverage",
                             "quantile-coverage", "heatmap", "availability",
                             "correlation"}));
  plotdata->add_option("--by", plot_opts.by, "Grouping columns")
      ->delimiter(',');
  plotdata->add_option("--x", heat_x, "Heatmap x column (default model)");
  plotdata->add_option("--y", heat_y, "Heatmap y column");
  plotdata->add_option("--metric", heat_metric,
                       "Heatmap metric (default interval_score)");

  // ---- simulate ----
  CommonOptions sim_opts;
  std::string sim_experiment;
  auto *simulate = app.add_subcommand(
      "simulate", "Score-behaviour simulations with closed-form references");
  add_common(simulate, sim_opts, false);
  simulate->add_option("--experiment", sim_experiment,
                       "convergence|asymmetry|scale|locality (overrides "
                       "the config file)");

  // ---- to-quantile ----
  CommonOptions tq_opts;
  std::vector<std::string> levels_raw;
  auto *toquantile = app.add_subcommand(
      "to-quantile", "Convert sample forecasts to quantile format");
  add_common(toquantile, tq_opts, true);
  toquantile->add_option("--levels", levels_raw, "Quantile levels")
      ->delimiter(',')
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) {
      if (!check_opts.config_file.empty()) {
        apply_config_file(check_opts.config_file, *check);
      }
      const auto table =
          scoring::ingest(check_opts.input, ingest_options(check_opts));
      const auto report = scoring::validate(table);
      emit(check_opts.output, render_json(report.to_json()));
      return kExitOk;
    }

    if (*avail) {
      if (!avail_opts.config_file.empty()) {
        apply_config_file(avail_opts.config_file, *avail);
      }
      const auto table = load_table(avail_opts);
      const auto rows = scoring::available_forecasts(table, avail_opts.by);
      if (avail_opts.output_format == "json") {
        emit(avail_opts.output,
             render_json(scoring::plot_availability(rows, avail_opts.by)));
      } else {
        std::ostringstream out;
        const char delim = delimiter_char(avail_opts);
        for (std::size_t i = 0; i < avail_opts.by.size(); ++i) {
          out << avail_opts.by[i] << delim;
        }
        out << "count\n";
        for (const auto &row : rows) {
          for (const auto &value : row.group) {
            out << value << delim;
          }
          out << row.count << "\n";
        }
        emit(avail_opts.output, out.str());
      }
      return kExitOk;
    }

    if (*score_cmd) {
      if (!score_opts.config_file.empty()) {
        apply_config_file(score_opts.config_file, *score_cmd);
      }
      std::vector<std::string> warnings;
      const auto scores = scoring::score(load_table(score_opts),
                                         score_opts.seed, &warnings);
      for (const auto &warning : warnings) {
        std::cerr << "warning: " << warning << "\n";
      }
      emit(score_opts.output, render_scores(scores, score_opts));
      return kExitOk;
    }

    if (*summarise) {
      if (!summarise_opts.config_file.empty()) {
        apply_config_file(summarise_opts.config_file, *summarise);
      }
      bool was_forecasts = false;
      auto scores = load_scores(summarise_opts, was_forecasts);
      if (!ranges_raw.empty()) {
        scores = scoring::add_coverage(
            scores, parse_number_list(ranges_raw, "--ranges"),
            summarise_opts.by);
      }
      std::vector<std::string> warnings;
      auto summary = scoring::summarise_scores(
          scores, summarise_opts.by,
          scoring::aggregator_from_name(summarise_fun), signif_digits,
          &warnings);
      for (const auto &warning : warnings) {
        std::cerr << "warning: " << warning << "\n";
      }
      if (!metrics_filter.empty()) {
        ScoreTable filtered;
        filtered.id_columns = summary.id_columns;
        std::vector<long> keep;
        for (const auto &name : metrics_filter) {
          const long idx = summary.metric_index(name);
          if (idx < 0) {
            throw ValidationError("metric not present in scores: " + name);
          }
          keep.push_back(idx);
          filtered.metric_names.push_back(name);
        }
        for (const auto &row : summary.rows) {
          ScoreTable::Row slim;
          slim.ids = row.ids;
          for (long idx : keep) {
            slim.metrics.push_back(
                row.metrics[static_cast<std::size_t>(idx)]);
          }
          filtered.rows.push_back(std::move(slim));
        }
        summary = std::move(filtered);
      }
      emit(summarise_opts.output, render_scores(summary, summarise_opts));
      return kExitOk;
    }

    if (*pairwise) {
      if (!pairwise_opts.config_file.empty()) {
        apply_config_file(pairwise_opts.config_file, *pairwise);
      }
      if (!pairwise_opts.by.empty()) {
        pw.by = pairwise_opts.by;
      }
      pw.test = pairwise_test == "permutation"
                    ? scoring::PairwiseTest::Permutation
                    : scoring::PairwiseTest::Wilcoxon;
      pw.seed = pairwise_opts.seed;
      bool was_forecasts = false;
      const auto scores = load_scores(pairwise_opts, was_forecasts);
      std::vector<std::string> warnings;
      const auto results = scoring::pairwise_comparison(scores, pw, &warnings);
      for (const auto &warning : warnings) {
        std::cerr << "warning: " << warning << "\n";
      }

      if (pairwise_opts.output_format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto &result : results) {
          nlohmann::json group;
          for (std::size_t i = 0; i < result.group_columns.size(); ++i) {
            group[result.group_columns[i]] = result.group_values[i];
          }
          nlohmann::json pairs = nlohmann::json::array();
          for (const auto &pair : result.pairs) {
            pairs.push_back({{"model_a", pair.model_a},
                             {"model_b", pair.model_b},
                             {"mean_scores_ratio", pair.mean_scores_ratio},
                             {"pval", pair.pval},
                             {"adj_pval", pair.adj_pval},
                             {"n_overlap", pair.n_overlap}});
          }
          nlohmann::json models = nlohmann::json::array();
          for (const auto &entry : result.per_model) {
            nlohmann::json m{{"model", entry.model},
                             {"relative_skill", entry.relative_skill}};
            if (pw.baseline.has_value()) {
              m["scaled_rel_skill"] = entry.scaled_rel_skill;
            }
            models.push_back(std::move(m));
          }
          doc.push_back({{"group", std::move(group)},
                         {"pairs", std::move(pairs)},
                         {"per_model", std::move(models)}});
        }
        emit(pairwise_opts.output, render_json(doc));
      } else {
        std::ostringstream out;
        const char delim = delimiter_char(pairwise_opts);
        for (const auto &column : results.empty()
                 ? std::vector<std::string>{}
                 : results.front().group_columns) {
          out << column << delim;
        }
        out << "model" << delim << "compare_against" << delim
            << "mean_scores_ratio" << delim << "pval" << delim << "adj_pval"
            << delim << "relative_skill";
        if (pw.baseline.has_value()) {
          out << delim << "scaled_rel_skill";
        }
        out << "\n";
        for (const auto &result : results) {
          for (const auto &pair : result.pairs) {
            for (const auto &value : result.group_values) {
              out << value << delim;
            }
            double skill = 0.0, scaled = 0.0;
            for (const auto &entry : result.per_model) {
              if (entry.model == pair.model_a) {
                skill = entry.relative_skill;
                scaled = entry.scaled_rel_skill;
              }
            }
            out << pair.model_a << delim << pair.model_b << delim
                << scoring::format_double(pair.mean_scores_ratio) << delim
                << scoring::format_double(pair.pval) << delim
                << scoring::format_double(pair.adj_pval) << delim
                << scoring::format_double(skill);
            if (pw.baseline.has_value()) {
              out << delim << scoring::format_double(scaled);
            }
            out << "\n";
          }
        }
        emit(pairwise_opts.output, out.str());
      }
      return kExitOk;
    }

    if (*pit) {
      if (!pit_opts.config_file.empty()) {
        apply_config_file(pit_opts.config_file, *pit);
      }
      const auto table = load_table(pit_opts);
      const auto histogram =
          scoring::pit_histogram(table, pit_opts.by, pit_bins, pit_opts.seed);
      if (pit_opts.output_format == "json") {
        emit(pit_opts.output, render_json(scoring::plot_pit(histogram)));
      } else {
        std::ostringstream out;
        const char delim = delimiter_char(pit_opts);
        for (const auto &column : histogram.group_columns) {
          out << column << delim;
        }
        out << "bin" << delim << "mass\n";
        for (const auto &group : histogram.groups) {
          for (int b = 0; b < group.masses.size(); ++b) {
            for (const auto &value : group.group_values) {
              out << value << delim;
            }
            out << (b + 1) << delim << scoring::format_double(group.masses[b])
                << "\n";
          }
        }
        emit(pit_opts.output, out.str());
      }
      return kExitOk;
    }

    if (*corr) {
      if (!corr_opts.config_file.empty()) {
        apply_config_file(corr_opts.config_file, *corr);
      }
      bool was_forecasts = false;
      const auto scores = load_scores(corr_opts, was_forecasts);
      const auto matrix = scoring::correlation(scores);
      if (corr_opts.output_format == "json") {
        emit(corr_opts.output, render_json(scoring::plot_correlation(matrix)));
      } else {
        std::ostringstream out;
        const char delim = delimiter_char(corr_opts);
        out << "metric";
        for (const auto &name : matrix.metrics) {
          out << delim << name;
        }
        out << "\n";
        for (std::size_t i = 0; i < matrix.metrics.size(); ++i) {
          out << matrix.metrics[i];
          for (std::size_t j = 0; j < matrix.metrics.size(); ++j) {
            out << delim
                << scoring::format_double(matrix.values(
                       static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(j)));
          }
          out << "\n";
        }
        emit(corr_opts.output, out.str());
      }
      return kExitOk;
    }

    if (*plotdata) {
      if (!plot_opts.config_file.empty()) {
        apply_config_file(plot_opts.config_file, *plotdata);
      }
      nlohmann::json document;
      if (plot_kind == "availability") {
        const auto table = load_table(plot_opts);
        document = scoring::plot_availability(
            scoring::available_forecasts(table, plot_opts.by), plot_opts.by);
      } else if (plot_kind == "interval-coverage") {
        document = scoring::plot_interval_coverage(load_table(plot_opts));
      } else if (plot_kind == "quantile-coverage") {
        document = scoring::plot_quantile_coverage(load_table(plot_opts));
      } else if (plot_kind == "correlation") {
        bool was_forecasts = false;
        document = scoring::plot_correlation(
            scoring::correlation(load_scores(plot_opts, was_forecasts)));
      } else {
        // wis-decomposition and heatmap consume summarised scores
        bool was_forecasts = false;
        const auto scores = load_scores(plot_opts, was_forecasts);
        const auto by = plot_opts.by.empty()
                            ? std::vector<std::string>{"model"}
                            : plot_opts.by;
        const auto summary = scoring::summarise_scores(scores, by);
        if (plot_kind == "wis-decomposition") {
          document = scoring::plot_wis_decomposition(summary);
        } else {
          if (heat_y.empty()) {
            throw ValidationError("heatmap needs --y");
          }
          document = scoring::plot_heatmap(summary, heat_x, heat_y,
                                           heat_metric);
        }
      }
      emit(plot_opts.output, render_json(document));
      return kExitOk;
    }

    if (*simulate) {
      scoring::ExperimentConfig config;
      if (!sim_opts.config_file.empty()) {
        config = scoring::parse_experiment_config(sim_opts.config_file);
      }
      if (!sim_experiment.empty()) {
        config.experiment = sim_experiment;
      }
      if (simulate->count("--seed") > 0) {
        config.seed = sim_opts.seed;
      }
      const char delim = delimiter_char(sim_opts);
      const bool json = sim_opts.output_format == "json";
      std::ostringstream out;
      if (config.experiment == "convergence") {
        const auto rows = scoring::run_convergence(config);
        if (json) {
          emit(sim_opts.output, render_json(scoring::plot_convergence(rows)));
          return kExitOk;
        }
        out << "sample_size" << delim << "metric" << delim << "mean" << delim
            << "q05" << delim << "q25" << delim << "q75" << delim << "q95"
            << delim << "truth\n";
        for (const auto &row : rows) {
          out << row.sample_size << delim << row.metric << delim
              << scoring::format_double(row.mean) << delim
              << scoring::format_double(row.q05) << delim
              << scoring::format_double(row.q25) << delim
              << scoring::format_double(row.q75) << delim
              << scoring::format_double(row.q95) << delim
              << scoring::format_double(row.truth) << "\n";
        }
      } else if (config.experiment == "asymmetry") {
        const auto rows = scoring::run_asymmetry(config);
        if (json) {
          emit(sim_opts.output, render_json(scoring::plot_asymmetry(rows)));
          return kExitOk;
        }
        out << "sigma_pred" << delim << "metric" << delim << "mean\n";
        for (const auto &row : rows) {
          out << scoring::format_double(row.sigma_pred) << delim << row.metric
              << delim << scoring::format_double(row.mean) << "\n";
        }
      } else if (config.experiment == "scale") {
        const auto rows = scoring::run_scale(config);
        if (json) {
          emit(sim_opts.output, render_json(scoring::plot_scale(rows)));
          return kExitOk;
        }
        out << "parameter" << delim << "value" << delim << "metric" << delim
            << "mean" << delim << "sd\n";
        for (const auto &row : rows) {
          out << row.parameter << delim << scoring::format_double(row.value)
              << delim << row.metric << delim
              << scoring::format_double(row.mean) << delim
              << scoring::format_double(row.sd) << "\n";
        }
      } else if (config.experiment == "locality") {
        const auto rows = scoring::run_locality();
        if (json) {
          emit(sim_opts.output, render_json(scoring::plot_locality(rows)));
          return kExitOk;
        }
        out << "forecaster" << delim << "metric" << delim << "value\n";
        for (const auto &row : rows) {
          out << row.forecaster << delim << row.metric << delim
              << scoring::format_double(row.value) << "\n";
        }
      } else {
        throw ValidationError("unknown experiment: " + config.experiment);
      }
      emit(sim_opts.output, out.str());
      return kExitOk;
    }

    if (*toquantile) {
      if (!tq_opts.config_file.empty()) {
        apply_config_file(tq_opts.config_file, *toquantile);
      }
      const auto table = load_table(tq_opts);
      std::vector<std::string> warnings;
      const auto quantiles = scoring::sample_to_quantile(
          table, parse_number_list(levels_raw, "--levels"), &warnings);
      for (const auto &warning : warnings) {
        std::cerr << "warning: " << warning << "\n";
      }
      std::ostringstream out;
      scoring::write_table(quantiles, out, delimiter_char(tq_opts));
      emit(tq_opts.output, out.str());
      return kExitOk;
    }
  } catch (const CLI::ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IngestError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ComputeError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }

  return kExitUsage;
}
