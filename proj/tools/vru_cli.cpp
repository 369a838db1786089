// Command-line front end for the vru pipeline.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "vru/error.hpp"
#include "vru/pipeline.hpp"
#include "vru/textio.hpp"

namespace fs = std::filesystem;
using namespace vru;

namespace {

enum Exit { ok = 0, usage = 1, missing_path = 2, stage_failure = 3 };

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::config: return usage;
    case ErrorKind::io: return missing_path;
    default: return stage_failure;
  }
}

PipelineConfig config_from(const std::string& path, std::optional<std::uint64_t> seed) {
  PipelineConfig c = path.empty() ? PipelineConfig{} : load_config(path);
  if (seed) c.seed = *seed;
  return c;
}

template <class Fn>
auto tagged(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), "[" + name + "] " + e.what());
  }
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw Error(ErrorKind::io, "cannot write " + p.string());
  return f;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw Error(ErrorKind::io, "input path not found: " + p.string());
  return f;
}

FeatureTable read_table(const fs::path& p) {
  auto in = open_in(p);
  return read_feature_table(in, LabelScheme::make(SchemeKind::five_class));
}

ChannelParams effective_params(const PipelineConfig& config, const Dataset& data) {
  if (!config.calibrate_embedding) return config.params;
  const auto cal = tagged("calibrate", [&] { return calibrate(channel_windows(data), config.calibration); });
  const auto len = static_cast<std::size_t>(std::llround(config.rate_hz * config.window_seconds));
  return tagged("calibrate", [&] { return apply_calibration(cal, config.params, len); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transportation-mode classification from smartphone sensor logs"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_flag("--quiet", quiet, "suppress progress lines");

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic labeled suite as .log/.labels pairs");
  fs::path synth_out = "synth";
  SynthSuiteConfig suite_cfg;
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--epochs-per-mode", suite_cfg.epochs_per_mode)->check(CLI::PositiveNumber);
  synth->add_option("--sessions-per-mode", suite_cfg.sessions_per_mode)->check(CLI::PositiveNumber);
  synth->add_option("--rate", suite_cfg.rate_hz, "raw sample rate (Hz)")->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed)->required();

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "estimate delay and dimension per channel (AMI / FNN)");
  fs::path cal_out = "vru-out";
  cal->add_option("--out", cal_out, "output directory for calibration.csv and params.csv");

  // features
  auto* feat = app.add_subcommand("features", "build the five-class feature table");
  fs::path feat_out = "features.csv";
  feat->add_option("--out", feat_out);

  // rank
  auto* rank = app.add_subcommand("rank", "mRMR ranking of a feature table");
  fs::path rank_in, rank_out = "ranking.csv";
  std::string rank_scheme = "five_class";
  std::size_t rank_k = 0, rank_bins = kDefaultMrmrBins;
  rank->add_option("--features", rank_in)->required()->check(CLI::ExistingFile);
  rank->add_option("--scheme", rank_scheme)->check(CLI::IsMember({"five_class", "four_class", "binary"}));
  rank->add_option("-k", rank_k, "features to rank (default all)");
  rank->add_option("--bins", rank_bins);
  rank->add_option("--out", rank_out);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "cross-validate a forest on a feature table");
  fs::path eval_in, eval_ranking, eval_out, eval_model;
  std::string eval_scheme = "five_class";
  std::size_t eval_k = 0, eval_folds = 5;
  ForestConfig forest;
  eval->add_option("--features", eval_in)->required()->check(CLI::ExistingFile);
  eval->add_option("--scheme", eval_scheme)->check(CLI::IsMember({"five_class", "four_class", "binary"}));
  eval->add_option("--ranking", eval_ranking, "use the top-k features of this ranking")->check(CLI::ExistingFile);
  eval->add_option("-k", eval_k);
  eval->add_option("--folds", eval_folds);
  eval->add_option("--trees", forest.n_trees);
  eval->add_option("--mtry", forest.n_features_per_split);
  eval->add_option("--seed", seed)->required();
  eval->add_option("--confusion", eval_out, "write the confusion matrix here");
  eval->add_option("--save-model", eval_model, "train on all rows and save the model");

  // sweep-threshold
  auto* sweep = app.add_subcommand("sweep-threshold", "pick T per channel by cross-validated accuracy");
  fs::path sweep_out = "threshold_sweep.csv";
  std::string sweep_scheme = "five_class";
  sweep->add_option("--out", sweep_out);
  sweep->add_option("--scheme", sweep_scheme)->check(CLI::IsMember({"five_class", "four_class", "binary"}));
  sweep->add_option("--seed", seed);

  // run-all
  auto* all = app.add_subcommand("run-all", "calibrate, extract, rank and evaluate; write all reports");
  all->add_option("--seed", seed)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }
  if (quiet) set_log_stream(nullptr);

  try {
    if (synth->parsed()) {
      suite_cfg.seed = *seed;
      fs::create_directories(synth_out);
      const auto suite = generate_suite(suite_cfg);
      std::vector<std::size_t> per_mode(kAllModes.size(), 0);
      for (const auto& s : suite) {
        const auto m = static_cast<std::size_t>(s.mode);
        const auto stem = std::string(mode_name(s.mode)) + "_" + std::to_string(per_mode[m]++);
        auto log = open_out(synth_out / (stem + ".log"));
        auto labels = open_out(synth_out / (stem + ".labels"));
        write_log(log, s.stream);
        write_labels(labels, s.stream);
      }
      std::cout << "wrote " << suite.size() << " sessions to " << synth_out.string() << '\n';
      return ok;
    }

    if (rank->parsed()) {
      const auto scheme = LabelScheme::parse(rank_scheme);
      const auto table = tagged("rank", [&] { return relabel(read_table(rank_in), scheme); });
      const auto k = rank_k == 0 ? table.width() : rank_k;
      const auto ranking = tagged("rank", [&] { return mrmr_rank(table, k, rank_bins); });
      auto out = open_out(rank_out);
      write_ranking(out, ranking, table.names);
      return ok;
    }

    if (eval->parsed()) {
      const auto scheme = LabelScheme::parse(eval_scheme);
      auto table = tagged("evaluate", [&] { return relabel(read_table(eval_in), scheme); });
      if (!eval_ranking.empty()) {
        auto in = open_in(eval_ranking);
        const auto ranking = tagged("evaluate", [&] { return read_ranking(in, table.names); });
        const auto k = eval_k == 0 ? ranking.ordered_indices.size() : eval_k;
        if (k > ranking.ordered_indices.size()) throw Error(ErrorKind::config, "-k exceeds the ranking length");
        const std::vector<std::size_t> top(ranking.ordered_indices.begin(),
                                           ranking.ordered_indices.begin() + static_cast<std::ptrdiff_t>(k));
        table = select_columns(table, top);
      }
      forest.seed = *seed;
      const auto cv = tagged("evaluate", [&] { return cross_validate(table, scheme, forest, eval_folds); });
      std::cout << "scheme " << scheme.name << " features " << table.width() << " accuracy "
                << format_double(cv.mean_accuracy) << '\n';
      if (!eval_out.empty()) {
        auto out = open_out(eval_out);
        write_confusion(out, cv, scheme);
      }
      if (!eval_model.empty()) {
        const auto model = tagged("train", [&] { return train(table, scheme, forest); });
        auto out = open_out(eval_model);
        save_model(out, model);
      }
      return ok;
    }

    auto config = config_from(config_path, seed);

    if (all->parsed()) {
      const auto report = run(config);
      std::cout << "epochs " << report.epochs << " dropped " << report.dropped << " width " << report.width << '\n';
      for (const auto& s : report.schemes) {
        std::cout << s.scheme.name << " full-width accuracy " << format_double(s.full.mean_accuracy) << '\n';
      }
      std::cout << "reports in " << config.output_dir.string() << '\n';
      return ok;
    }

    const auto data = tagged("ingest", [&] { return load_dataset(config); });
    if (data.epochs.empty()) throw Error(ErrorKind::insufficient_data, "[ingest] no complete epochs");

    if (cal->parsed()) {
      const auto result = tagged("calibrate", [&] { return calibrate(channel_windows(data), config.calibration); });
      const auto len = static_cast<std::size_t>(std::llround(config.rate_hz * config.window_seconds));
      const auto params = tagged("calibrate", [&] { return apply_calibration(result, config.params, len); });
      auto report = open_out(cal_out / "calibration.csv");
      write_calibration_report(report, result);
      auto p = open_out(cal_out / "params.csv");
      write_params(p, params);
      write_params(std::cout, params);
      return ok;
    }

    if (feat->parsed()) {
      const auto params = effective_params(config, data);
      const auto table = tagged("features", [&] {
        return build_feature_table(data, config.feature_set, params, config.rqa, config.rate_hz);
      });
      auto out = open_out(feat_out);
      write_feature_table(out, table);
      std::cout << table.rows() << " rows x " << table.width() << " features\n";
      return ok;
    }

    if (sweep->parsed()) {
      config.forest.seed = config.require_seed();
      const auto params = effective_params(config, data);
      const auto result = tagged("sweep-threshold", [&] {
        return threshold_sweep(data, params, config.threshold_grid, LabelScheme::parse(sweep_scheme),
                               config.forest, config.folds, config.rqa);
      });
      auto out = open_out(sweep_out);
      write_threshold_sweep(out, result);
      return ok;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return stage_failure;
  }
  return usage;
}
