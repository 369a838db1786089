#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vru/embed.hpp"
#include "vru/feature_table.hpp"
#include "vru/forest.hpp"
#include "vru/rqa.hpp"
#include "vru/select.hpp"
#include "vru/synth.hpp"

namespace vru {

enum class FeatureSet { pooled, time, rqa };

std::size_t feature_width(FeatureSet set);  // 180, 126 or 54

struct InputPair {
  std::filesystem::path log;
  std::filesystem::path labels;
};

struct PipelineConfig {
  double rate_hz = 100.0;
  double window_seconds = 1.0;
  FeatureSet feature_set = FeatureSet::pooled;

  bool calibrate_embedding = false;  // false: use `params` as given
  ChannelParams params = default_channel_params();
  CalibrationConfig calibration;
  RqaOptions rqa;
  std::vector<double> threshold_grid = {0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 0.9, 1.5, 3.0};

  std::size_t mrmr_bins = kDefaultMrmrBins;
  ForestConfig forest;
  std::size_t folds = 5;
  std::size_t curve_step = 10;
  std::vector<LabelScheme> schemes = {LabelScheme::make(SchemeKind::binary),
                                      LabelScheme::make(SchemeKind::four_class),
                                      LabelScheme::make(SchemeKind::five_class)};

  std::optional<std::uint64_t> seed;
  std::vector<InputPair> inputs;
  std::optional<std::filesystem::path> input_dir;  // every X.log with a matching X.labels
  std::filesystem::path output_dir = "vru-out";

  /// Seed or a config error: no run may fall back to wall-clock seeding.
  std::uint64_t require_seed() const;
  /// Explicit inputs plus the pairs discovered in input_dir, sorted by name.
  std::vector<InputPair> resolved_inputs() const;
};

/// Parses the JSON config; relative paths resolve against `base_dir`.
PipelineConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = ".");
PipelineConfig load_config(const std::filesystem::path& path);
/// Canonical JSON (sorted keys, fixed number formatting) of the effective config.
std::string config_to_json(const PipelineConfig& config);

struct Epoch {
  std::size_t session = 0;
  std::int64_t index = 0;
  Mode mode = Mode::walk;
  std::vector<Window> windows;  // one per channel, registry order
};

struct Dataset {
  std::vector<Epoch> epochs;
  std::size_t dropped_incomplete = 0;  // epochs missing at least one channel
};

/// Parse, resample and window one session. Complete epochs without a label
/// are an alignment error; incomplete epochs are dropped and counted.
Dataset load_session(std::istream& log, std::istream& labels, std::size_t session, double rate_hz,
                     double window_seconds);
/// Loads every resolved input pair. Missing files throw ErrorKind::io naming the path.
Dataset load_dataset(const PipelineConfig& config);
/// Routes synthetic sessions through the same text format and parser as files.
Dataset dataset_from_suite(const std::vector<SynthSession>& suite, double rate_hz, double window_seconds);

/// Per-channel window collections for calibration.
std::map<ChannelId, std::vector<std::vector<double>>> channel_windows(const Dataset& data);

/// Runs AMI/FNN calibration and returns params with delay and dimension
/// replaced (thresholds kept). Throws config if a calibrated embedding does
/// not fit in a window.
ChannelParams apply_calibration(const std::map<ChannelId, ChannelCalibration>& calibration,
                                const ChannelParams& base, std::size_t window_len);

/// Five-class feature table of width 126, 54 or 180.
FeatureTable build_feature_table(const Dataset& data, FeatureSet set, const ChannelParams& params,
                                 const RqaOptions& rqa, double rate_hz);

struct ThresholdSweep {
  std::vector<double> grid;
  std::array<std::vector<double>, kChannelCount> accuracy;  // [channel][grid index]
  std::array<double, kChannelCount> best{};
};

/// For every channel and grid value, cross-validates a forest on that
/// channel's six RQA features; keeps the most accurate T (ties: smaller T).
ThresholdSweep threshold_sweep(const Dataset& data, const ChannelParams& params, std::vector<double> grid,
                               const LabelScheme& scheme, const ForestConfig& forest, std::size_t folds,
                               const RqaOptions& rqa);

/// step, 2*step, … up to p, with p appended when it is not a multiple of step.
std::vector<std::size_t> feature_count_grid(std::size_t p, std::size_t step);

struct CurvePoint {
  std::size_t features = 0;
  double accuracy = 0.0;
};

/// Cross-validated accuracy using the top-k ranked features for each k.
std::vector<CurvePoint> accuracy_curve(const FeatureTable& table, const MrmrRanking& ranking,
                                       const LabelScheme& scheme, const ForestConfig& forest, std::size_t folds,
                                       std::span<const std::size_t> counts);

/// Smallest k whose accuracy is within `margin` of the curve's best value.
std::size_t features_to_plateau(std::span<const CurvePoint> curve, double margin);

void write_calibration_report(std::ostream& out, const std::map<ChannelId, ChannelCalibration>& calibration);
void write_params(std::ostream& out, const ChannelParams& params);
void write_curve(std::ostream& out, std::span<const CurvePoint> curve);
void write_confusion(std::ostream& out, const CvResult& cv, const LabelScheme& scheme);
void write_threshold_sweep(std::ostream& out, const ThresholdSweep& sweep);

struct SchemeReport {
  LabelScheme scheme;
  MrmrRanking ranking;
  std::vector<CurvePoint> curve;
  CvResult full;  // cross-validation on all features
};

struct RunReport {
  std::size_t epochs = 0;
  std::size_t dropped = 0;
  std::size_t width = 0;
  ChannelParams params{};
  std::map<ChannelId, ChannelCalibration> calibration;  // empty unless calibrating
  std::vector<SchemeReport> schemes;
};

/// Calibration (optional), feature table, per-scheme ranking, accuracy curve
/// and full-width cross-validation on an already loaded dataset.
RunReport run_on(const Dataset& data, const PipelineConfig& config);

/// Writes manifest.json, params.csv, calibration.csv (when calibrating) and
/// ranking_/curve_/confusion_<scheme>.csv into config.output_dir.
void write_reports(const RunReport& report, const PipelineConfig& config);

/// load_dataset + run_on + write_reports. Errors carry a "[stage]" prefix.
RunReport run(const PipelineConfig& config);

/// Destination for progress lines (default std::clog; nullptr silences).
void set_log_stream(std::ostream* out);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vru
