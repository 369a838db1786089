#include "vru/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "vru/error.hpp"
#include "vru/textio.hpp"
#include "vru/timefeat.hpp"

namespace vru {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ostream* g_log = &std::clog;

void log_line(const std::string& stage, const std::string& msg) {
  if (g_log) *g_log << '[' << stage << "] " << msg << '\n';
}

// Re-throws library errors with a stage tag so the CLI can report where a run failed.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), "[" + name + "] " + e.what());
  }
}

std::string feature_set_name(FeatureSet s) {
  switch (s) {
    case FeatureSet::pooled: return "pooled";
    case FeatureSet::time: return "time";
    case FeatureSet::rqa: return "rqa";
  }
  return "pooled";
}

FeatureSet parse_feature_set(const std::string& s) {
  if (s == "pooled") return FeatureSet::pooled;
  if (s == "time") return FeatureSet::time;
  if (s == "rqa") return FeatureSet::rqa;
  throw Error(ErrorKind::config, "features must be pooled, time or rqa; got '" + s + "'");
}

std::string sensor_prefix(Sensor s) {
  switch (s) {
    case Sensor::accelerometer: return "acc";
    case Sensor::gyroscope: return "gyr";
    case Sensor::rotation_vector: return "rot";
  }
  return "acc";
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, std::string("config key '") + key + "': " + e.what());
  }
}

void apply_param_override(const json& j, EmbeddingParams& p) {
  if (!j.is_object()) throw Error(ErrorKind::config, "embedding entries must be objects");
  read_opt(j, "delay", p.delay);
  read_opt(j, "dimension", p.dimension);
  read_opt(j, "threshold", p.threshold);
}

const std::set<std::string> kKnownKeys = {
    "seed",   "rate_hz",        "window_seconds", "features",  "embedding", "threshold_mode",
    "threshold_grid", "lmin",   "vmin",           "calibration", "mrmr",    "forest",
    "folds",  "curve_step",     "schemes",        "inputs",    "input_dir", "output_dir"};

}  // namespace

void set_log_stream(std::ostream* out) { g_log = out; }

std::size_t feature_width(FeatureSet set) {
  switch (set) {
    case FeatureSet::pooled: return kTimeBlockWidth + kRqaBlockWidth;
    case FeatureSet::time: return kTimeBlockWidth;
    case FeatureSet::rqa: return kRqaBlockWidth;
  }
  return 0;
}

std::uint64_t PipelineConfig::require_seed() const {
  if (!seed) throw Error(ErrorKind::config, "a seed is required (config key 'seed' or --seed)");
  return *seed;
}

std::vector<InputPair> PipelineConfig::resolved_inputs() const {
  std::vector<InputPair> out = inputs;
  if (input_dir) {
    if (!fs::is_directory(*input_dir)) {
      throw Error(ErrorKind::io, "input directory not found: " + input_dir->string());
    }
    std::vector<fs::path> logs;
    for (const auto& entry : fs::directory_iterator(*input_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".log") logs.push_back(entry.path());
    }
    std::sort(logs.begin(), logs.end());
    for (const auto& log : logs) {
      auto labels = log;
      labels.replace_extension(".labels");
      out.push_back({log, labels});
    }
  }
  return out;
}

PipelineConfig parse_config(const std::string& json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::config, "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKnownKeys.contains(key)) throw Error(ErrorKind::config, "unknown config key '" + key + "'");
  }

  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };

  PipelineConfig c;
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  read_opt(j, "rate_hz", c.rate_hz);
  read_opt(j, "window_seconds", c.window_seconds);
  if (j.contains("features")) c.feature_set = parse_feature_set(j.at("features").get<std::string>());

  if (j.contains("embedding")) {
    const auto& e = j.at("embedding");
    if (e.is_string()) {
      const auto mode = e.get<std::string>();
      if (mode == "calibrate") {
        c.calibrate_embedding = true;
      } else if (mode != "defaults") {
        throw Error(ErrorKind::config, "embedding must be 'defaults', 'calibrate' or an object");
      }
    } else if (e.is_object()) {
      for (const auto& [key, value] : e.items()) {
        if (key == "calibrate") {
          c.calibrate_embedding = value.get<bool>();
          continue;
        }
        bool matched = false;
        for (ChannelId ch : all_channels()) {
          if (key == sensor_prefix(ch.sensor) || key == channel_name(ch)) {
            matched = true;
          }
        }
        if (!matched) throw Error(ErrorKind::config, "unknown embedding key '" + key + "'");
      }
      // Sensor-wide entries first, then per-channel ones override them.
      for (ChannelId ch : all_channels()) {
        if (e.contains(sensor_prefix(ch.sensor))) apply_param_override(e.at(sensor_prefix(ch.sensor)), c.params[ch.index()]);
      }
      for (ChannelId ch : all_channels()) {
        if (e.contains(channel_name(ch))) apply_param_override(e.at(channel_name(ch)), c.params[ch.index()]);
      }
    } else {
      throw Error(ErrorKind::config, "embedding must be 'defaults', 'calibrate' or an object");
    }
  }
  if (j.contains("threshold_mode")) {
    const auto m = j.at("threshold_mode").get<std::string>();
    if (m == "absolute") c.rqa.mode = ThresholdMode::absolute;
    else if (m == "fraction_of_max") c.rqa.mode = ThresholdMode::fraction_of_max;
    else throw Error(ErrorKind::config, "threshold_mode must be absolute or fraction_of_max");
  }
  read_opt(j, "threshold_grid", c.threshold_grid);
  read_opt(j, "lmin", c.rqa.lmin);
  read_opt(j, "vmin", c.rqa.vmin);

  if (j.contains("calibration")) {
    const auto& k = j.at("calibration");
    read_opt(k, "max_lag", c.calibration.max_lag);
    read_opt(k, "max_dim", c.calibration.max_dim);
    read_opt(k, "ami_bins", c.calibration.ami_bins);
    read_opt(k, "fnn_r_tol", c.calibration.fnn.r_tol);
    read_opt(k, "fnn_a_tol", c.calibration.fnn.a_tol);
    read_opt(k, "fnn_accept", c.calibration.fnn.accept_fraction);
    read_opt(k, "fnn_max_points", c.calibration.fnn_max_points);
  }
  if (j.contains("mrmr")) read_opt(j.at("mrmr"), "bins", c.mrmr_bins);
  if (j.contains("forest")) {
    const auto& f = j.at("forest");
    read_opt(f, "n_trees", c.forest.n_trees);
    read_opt(f, "n_features_per_split", c.forest.n_features_per_split);
    read_opt(f, "min_leaf", c.forest.min_leaf);
    read_opt(f, "threads", c.forest.threads);
  }
  read_opt(j, "folds", c.folds);
  read_opt(j, "curve_step", c.curve_step);
  if (j.contains("schemes")) {
    c.schemes.clear();
    for (const auto& s : j.at("schemes")) c.schemes.push_back(LabelScheme::parse(s.get<std::string>()));
    if (c.schemes.empty()) throw Error(ErrorKind::config, "schemes must not be empty");
  }
  if (j.contains("inputs")) {
    for (const auto& in : j.at("inputs")) {
      c.inputs.push_back({resolve(in.at("log").get<std::string>()), resolve(in.at("labels").get<std::string>())});
    }
  }
  if (j.contains("input_dir")) c.input_dir = resolve(j.at("input_dir").get<std::string>());
  if (j.contains("output_dir")) c.output_dir = resolve(j.at("output_dir").get<std::string>());

  if (!(c.rate_hz > 0.0) || !(c.window_seconds > 0.0)) {
    throw Error(ErrorKind::config, "rate_hz and window_seconds must be positive");
  }
  if (c.folds < 2) throw Error(ErrorKind::config, "folds must be at least 2");
  if (c.curve_step == 0) throw Error(ErrorKind::config, "curve_step must be positive");
  if (c.rqa.lmin == 0 || c.rqa.vmin == 0) throw Error(ErrorKind::config, "lmin and vmin must be positive");
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "config file not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

std::string config_to_json(const PipelineConfig& c) {
  json j;
  if (c.seed) j["seed"] = *c.seed;
  j["rate_hz"] = c.rate_hz;
  j["window_seconds"] = c.window_seconds;
  j["features"] = feature_set_name(c.feature_set);
  json emb = json::object();
  emb["calibrate"] = c.calibrate_embedding;
  for (ChannelId ch : all_channels()) {
    const auto& p = c.params[ch.index()];
    emb[channel_name(ch)] = {{"delay", p.delay}, {"dimension", p.dimension}, {"threshold", p.threshold}};
  }
  j["embedding"] = emb;
  j["threshold_mode"] = c.rqa.mode == ThresholdMode::absolute ? "absolute" : "fraction_of_max";
  j["threshold_grid"] = c.threshold_grid;
  j["lmin"] = c.rqa.lmin;
  j["vmin"] = c.rqa.vmin;
  j["calibration"] = {{"max_lag", c.calibration.max_lag},
                      {"max_dim", c.calibration.max_dim},
                      {"ami_bins", c.calibration.ami_bins},
                      {"fnn_r_tol", c.calibration.fnn.r_tol},
                      {"fnn_a_tol", c.calibration.fnn.a_tol},
                      {"fnn_accept", c.calibration.fnn.accept_fraction},
                      {"fnn_max_points", c.calibration.fnn_max_points}};
  j["mrmr"] = {{"bins", c.mrmr_bins}};
  j["forest"] = {{"n_trees", c.forest.n_trees},
                 {"n_features_per_split", c.forest.n_features_per_split},
                 {"min_leaf", c.forest.min_leaf}};
  j["folds"] = c.folds;
  j["curve_step"] = c.curve_step;
  json schemes = json::array();
  for (const auto& s : c.schemes) schemes.push_back(s.name);
  j["schemes"] = schemes;
  json inputs = json::array();
  for (const auto& in : c.inputs) inputs.push_back({{"log", in.log.string()}, {"labels", in.labels.string()}});
  j["inputs"] = inputs;
  if (c.input_dir) j["input_dir"] = c.input_dir->string();
  j["output_dir"] = c.output_dir.string();
  return j.dump(2);
}

Dataset load_session(std::istream& log, std::istream& labels, std::size_t session, double rate_hz,
                     double window_seconds) {
  const auto raw = parse_log(log);
  const auto epoch_labels = parse_labels(labels);

  // epoch index -> windows found for it
  std::map<std::int64_t, std::vector<Window>> by_epoch;
  for (const auto& [channel, samples] : raw) {
    if (samples.size() < 2) continue;
    const auto series = resample_linear(samples, rate_hz, channel);
    for (auto& w : cut_windows(series, window_seconds)) by_epoch[w.epoch_index].push_back(std::move(w));
  }

  Dataset out;
  for (auto& [index, windows] : by_epoch) {
    if (windows.size() != kChannelCount) {
      ++out.dropped_incomplete;
      continue;
    }
    const auto label = epoch_labels.find(index);
    if (label == epoch_labels.end()) {
      throw Error(ErrorKind::alignment, "session " + std::to_string(session) + ": epoch " +
                                            std::to_string(index) + " has data but no label");
    }
    std::sort(windows.begin(), windows.end(),
              [](const Window& a, const Window& b) { return a.channel < b.channel; });
    out.epochs.push_back({session, index, *parse_mode(label->second), std::move(windows)});
  }
  // Labels whose epoch never produced a complete window set count as dropped too.
  for (const auto& [index, _] : epoch_labels) {
    const auto it = by_epoch.find(index);
    if (it == by_epoch.end()) ++out.dropped_incomplete;
  }
  return out;
}

Dataset load_dataset(const PipelineConfig& config) {
  const auto inputs = config.resolved_inputs();
  if (inputs.empty()) throw Error(ErrorKind::config, "no inputs configured (inputs or input_dir)");
  for (const auto& in : inputs) {
    for (const auto& p : {in.log, in.labels}) {
      if (!fs::exists(p)) throw Error(ErrorKind::io, "input path not found: " + p.string());
    }
  }
  Dataset all;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    std::ifstream log(inputs[s].log), labels(inputs[s].labels);
    if (!log || !labels) throw Error(ErrorKind::io, "cannot open " + inputs[s].log.string());
    Dataset d;
    try {
      d = load_session(log, labels, s, config.rate_hz, config.window_seconds);
    } catch (const Error& e) {
      throw Error(e.kind(), inputs[s].log.string() + ": " + e.what());
    }
    all.dropped_incomplete += d.dropped_incomplete;
    std::move(d.epochs.begin(), d.epochs.end(), std::back_inserter(all.epochs));
  }
  return all;
}

Dataset dataset_from_suite(const std::vector<SynthSession>& suite, double rate_hz, double window_seconds) {
  Dataset all;
  for (std::size_t s = 0; s < suite.size(); ++s) {
    std::stringstream log, labels;
    write_log(log, suite[s].stream);
    write_labels(labels, suite[s].stream);
    auto d = load_session(log, labels, s, rate_hz, window_seconds);
    all.dropped_incomplete += d.dropped_incomplete;
    std::move(d.epochs.begin(), d.epochs.end(), std::back_inserter(all.epochs));
  }
  return all;
}

std::map<ChannelId, std::vector<std::vector<double>>> channel_windows(const Dataset& data) {
  std::map<ChannelId, std::vector<std::vector<double>>> out;
  for (const auto& e : data.epochs) {
    for (const auto& w : e.windows) out[w.channel].push_back(w.samples);
  }
  return out;
}

ChannelParams apply_calibration(const std::map<ChannelId, ChannelCalibration>& calibration,
                                const ChannelParams& base, std::size_t window_len) {
  ChannelParams out = base;
  for (const auto& [channel, cal] : calibration) {
    auto& p = out[channel.index()];
    p.delay = cal.delay;
    p.dimension = cal.dimension.dimension;
    if (!p.valid_for(window_len)) {
      throw Error(ErrorKind::config, channel_name(channel) + ": calibrated delay " + std::to_string(p.delay) +
                                         " and dimension " + std::to_string(p.dimension) +
                                         " do not fit a window of " + std::to_string(window_len) + " samples");
    }
  }
  return out;
}

FeatureTable build_feature_table(const Dataset& data, FeatureSet set, const ChannelParams& params,
                                 const RqaOptions& rqa, double rate_hz) {
  FeatureTable t;
  t.class_names = LabelScheme::make(SchemeKind::five_class).classes;
  if (set != FeatureSet::rqa) t.names = time_feature_names();
  if (set != FeatureSet::time) {
    const auto r = rqa_feature_names();
    t.names.insert(t.names.end(), r.begin(), r.end());
  }
  t.values.reserve(data.epochs.size() * t.width());
  std::vector<double> row;
  for (const auto& e : data.epochs) {
    row.clear();
    if (set != FeatureSet::rqa) row = assemble_time_block(e.windows, rate_hz);
    if (set != FeatureSet::time) {
      const auto block = rqa_block(e.windows, params, rqa);
      row.insert(row.end(), block.begin(), block.end());
    }
    t.add_row(row, static_cast<std::size_t>(e.mode));
  }
  return t;
}

ThresholdSweep threshold_sweep(const Dataset& data, const ChannelParams& params, std::vector<double> grid,
                               const LabelScheme& scheme, const ForestConfig& forest, std::size_t folds,
                               const RqaOptions& rqa) {
  if (grid.empty()) throw Error(ErrorKind::config, "threshold grid is empty");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  ThresholdSweep out;
  out.grid = grid;
  const auto five = LabelScheme::make(SchemeKind::five_class);
  static const std::array<const char*, kRqaMeasures> measures = {"rr", "det", "lmax", "ent", "lam", "tt"};
  for (ChannelId c : all_channels()) {
    std::vector<EmbeddedTrajectory> trajs;
    trajs.reserve(data.epochs.size());
    for (const auto& e : data.epochs) trajs.push_back(embed(find_channel(e.windows, c).samples, params[c.index()]));

    for (double t : grid) {
      FeatureTable table;
      table.class_names = five.classes;
      for (const char* m : measures) table.names.push_back(channel_name(c) + "." + m);
      for (std::size_t i = 0; i < trajs.size(); ++i) {
        const auto f = rqa_features(recurrence_plot(trajs[i], t, rqa.mode), rqa.lmin, rqa.vmin).as_array();
        table.add_row(f, static_cast<std::size_t>(data.epochs[i].mode));
      }
      const auto cv = cross_validate(relabel(table, scheme), scheme, forest, folds);
      out.accuracy[c.index()].push_back(cv.mean_accuracy);
    }
    const auto& acc = out.accuracy[c.index()];
    out.best[c.index()] = grid[static_cast<std::size_t>(std::max_element(acc.begin(), acc.end()) - acc.begin())];
    log_line("sweep-threshold", channel_name(c) + " -> T=" + format_double(out.best[c.index()]));
  }
  return out;
}

std::vector<std::size_t> feature_count_grid(std::size_t p, std::size_t step) {
  if (step == 0) throw Error(ErrorKind::config, "feature-count step must be positive");
  std::vector<std::size_t> out;
  for (std::size_t k = step; k <= p; k += step) out.push_back(k);
  if (out.empty() || out.back() != p) out.push_back(p);
  return out;
}

std::vector<CurvePoint> accuracy_curve(const FeatureTable& table, const MrmrRanking& ranking,
                                       const LabelScheme& scheme, const ForestConfig& forest, std::size_t folds,
                                       std::span<const std::size_t> counts) {
  std::vector<CurvePoint> curve;
  for (std::size_t k : counts) {
    if (k == 0 || k > ranking.ordered_indices.size()) {
      throw Error(ErrorKind::invalid_input, "feature count " + std::to_string(k) + " exceeds the ranking length");
    }
    const std::span<const std::size_t> top(ranking.ordered_indices.data(), k);
    const auto cv = cross_validate(select_columns(table, top), scheme, forest, folds);
    curve.push_back({k, cv.mean_accuracy});
  }
  return curve;
}

std::size_t features_to_plateau(std::span<const CurvePoint> curve, double margin) {
  if (curve.empty()) throw Error(ErrorKind::invalid_input, "empty accuracy curve");
  double best = 0.0;
  for (const auto& p : curve) best = std::max(best, p.accuracy);
  for (const auto& p : curve) {
    if (p.accuracy >= best - margin) return p.features;
  }
  return curve.back().features;
}

void write_calibration_report(std::ostream& out, const std::map<ChannelId, ChannelCalibration>& calibration) {
  out << "# embedding\nchannel,delay,dimension,dimension_capped,windows_used\n";
  for (const auto& [c, cal] : calibration) {
    out << channel_name(c) << ',' << cal.delay << ',' << cal.dimension.dimension << ','
        << (cal.dimension.capped ? 1 : 0) << ',' << cal.windows_used << '\n';
  }
  out << "# ami\nchannel,lag,ami_bits\n";
  for (const auto& [c, cal] : calibration) {
    for (std::size_t i = 0; i < cal.mean_ami.size(); ++i) {
      out << channel_name(c) << ',' << i + 1 << ',' << format_double(cal.mean_ami[i]) << '\n';
    }
  }
  out << "# fnn\nchannel,dimension,fnn_fraction\n";
  for (const auto& [c, cal] : calibration) {
    for (std::size_t i = 0; i < cal.dimension.fnn_by_dim.size(); ++i) {
      out << channel_name(c) << ',' << i + 1 << ',' << format_double(cal.dimension.fnn_by_dim[i]) << '\n';
    }
  }
}

void write_params(std::ostream& out, const ChannelParams& params) {
  out << "channel,delay,dimension,threshold\n";
  for (ChannelId c : all_channels()) {
    const auto& p = params[c.index()];
    out << channel_name(c) << ',' << p.delay << ',' << p.dimension << ',' << format_double(p.threshold) << '\n';
  }
}

void write_curve(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "features,accuracy\n";
  for (const auto& p : curve) out << p.features << ',' << format_double(p.accuracy) << '\n';
}

void write_confusion(std::ostream& out, const CvResult& cv, const LabelScheme& scheme) {
  out << "true\\predicted";
  for (const auto& c : scheme.classes) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    out << scheme.classes[i];
    for (auto v : cv.confusion[i]) out << ',' << v;
    out << '\n';
  }
}

void write_threshold_sweep(std::ostream& out, const ThresholdSweep& sweep) {
  out << "channel,threshold,accuracy,selected\n";
  for (ChannelId c : all_channels()) {
    for (std::size_t g = 0; g < sweep.grid.size(); ++g) {
      out << channel_name(c) << ',' << format_double(sweep.grid[g]) << ','
          << format_double(sweep.accuracy[c.index()][g]) << ',' << (sweep.grid[g] == sweep.best[c.index()] ? 1 : 0)
          << '\n';
    }
  }
}

RunReport run_on(const Dataset& data, const PipelineConfig& config) {
  const auto seed = config.require_seed();
  RunReport report;
  report.epochs = data.epochs.size();
  report.dropped = data.dropped_incomplete;
  if (data.epochs.empty()) throw Error(ErrorKind::insufficient_data, "[ingest] no complete epochs");
  if (report.dropped > 0) log_line("ingest", "dropped " + std::to_string(report.dropped) + " incomplete epochs");

  report.params = config.params;
  const auto window_len = window_length(config.rate_hz, config.window_seconds);
  if (config.calibrate_embedding && config.feature_set != FeatureSet::time) {
    report.calibration = stage("calibrate", [&] { return calibrate(channel_windows(data), config.calibration); });
    report.params = stage("calibrate", [&] { return apply_calibration(report.calibration, config.params, window_len); });
  }

  const auto table = stage("features", [&] {
    return build_feature_table(data, config.feature_set, report.params, config.rqa, config.rate_hz);
  });
  report.width = table.width();
  log_line("features", std::to_string(table.rows()) + " epochs x " + std::to_string(table.width()) + " features");

  ForestConfig forest = config.forest;
  forest.seed = seed;
  const auto counts = feature_count_grid(table.width(), config.curve_step);
  for (const auto& scheme : config.schemes) {
    SchemeReport sr;
    sr.scheme = scheme;
    const auto labeled = relabel(table, scheme);
    sr.ranking = stage("rank", [&] { return mrmr_rank(labeled, labeled.width(), config.mrmr_bins); });
    sr.curve = stage("evaluate", [&] {
      return accuracy_curve(labeled, sr.ranking, scheme, forest, config.folds, counts);
    });
    sr.full = stage("evaluate", [&] { return cross_validate(labeled, scheme, forest, config.folds); });
    log_line("evaluate", scheme.name + ": full-width accuracy " + format_double(sr.full.mean_accuracy));
    report.schemes.push_back(std::move(sr));
  }
  return report;
}

void write_reports(const RunReport& report, const PipelineConfig& config) {
  stage("report", [&] {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory " + config.output_dir.string());
    auto open = [&](const std::string& name) {
      std::ofstream f(config.output_dir / name);
      if (!f) throw Error(ErrorKind::io, "cannot write " + (config.output_dir / name).string());
      return f;
    };

    json manifest;
    manifest["tool"] = "vru";
    manifest["version"] = kVersion;
    manifest["seed"] = config.require_seed();
    manifest["config"] = json::parse(config_to_json(config));
    manifest["epochs"] = report.epochs;
    manifest["dropped_epochs"] = report.dropped;
    manifest["feature_width"] = report.width;
    open("manifest.json") << manifest.dump(2) << '\n';

    auto params = open("params.csv");
    write_params(params, report.params);
    if (!report.calibration.empty()) {
      auto cal = open("calibration.csv");
      write_calibration_report(cal, report.calibration);
    }
    for (const auto& sr : report.schemes) {
      auto ranking = open("ranking_" + sr.scheme.name + ".csv");
      write_ranking(ranking, sr.ranking, [&] {
        // names in table order
        std::vector<std::string> names;
        if (config.feature_set != FeatureSet::rqa) names = time_feature_names();
        if (config.feature_set != FeatureSet::time) {
          const auto r = rqa_feature_names();
          names.insert(names.end(), r.begin(), r.end());
        }
        return names;
      }());
      auto curve = open("curve_" + sr.scheme.name + ".csv");
      write_curve(curve, sr.curve);
      auto confusion = open("confusion_" + sr.scheme.name + ".csv");
      write_confusion(confusion, sr.full, sr.scheme);
    }
    return 0;
  });
}

RunReport run(const PipelineConfig& config) {
  config.require_seed();
  const auto data = stage("ingest", [&] { return load_dataset(config); });
  auto report = run_on(data, config);
  write_reports(report, config);
  return report;
}

}  // namespace vru
