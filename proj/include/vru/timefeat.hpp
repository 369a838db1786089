#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vru/channel.hpp"
#include "vru/ingest.hpp"

namespace vru {

inline constexpr std::size_t kTimeMeasures = 14;
inline constexpr std::size_t kTimeBlockWidth = kTimeMeasures * kChannelCount;  // 126

/// Measure names in row order: mean, max, min, var, std, range, iqr, then the
/// same seven for the derivative prefixed with 'd'.
const std::array<std::string, kTimeMeasures>& time_measure_names();

struct TimeFeatureVector {
  ChannelId channel;
  std::int64_t epoch_index = 0;
  std::array<double, kTimeMeasures> values{};
};

/// Forward difference scaled by the sample rate; length N - 1.
std::vector<double> derivative(std::span<const double> x, double rate_hz);

/// Linear-interpolation quantile at position (N - 1) * q of the sorted data.
double quantile_linear(std::span<const double> sorted, double q);

/// Mean, max, min, sample variance (N - 1), standard deviation, range, IQR.
std::array<double, 7> summary_measures(std::span<const double> x);

TimeFeatureVector time_features(const Window& window, double rate_hz);

/// 126 values in channel-major order (acc_x … rot_z, 14 each). `epoch` must
/// contain one window per channel, in any order.
std::vector<double> assemble_time_block(std::span<const Window> epoch, double rate_hz);

/// "<channel>.<measure>" names matching assemble_time_block's layout.
std::vector<std::string> time_feature_names();

/// Finds the window for `channel` or throws ErrorKind::missing_channel.
const Window& find_channel(std::span<const Window> epoch, ChannelId channel);

}  // namespace vru
