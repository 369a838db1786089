#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "vru/channel.hpp"

namespace vru {

struct RawSample {
  std::int64_t timestamp_ms = 0;
  double value = 0.0;

  friend bool operator==(const RawSample&, const RawSample&) = default;
};

using RawLog = std::map<ChannelId, std::vector<RawSample>>;

/// A uniformly sampled signal. `first_index` is the grid index of values[0],
/// i.e. values[k] sits at (first_index + k) / rate_hz seconds after stream start.
struct TimeSeries {
  ChannelId channel;
  double rate_hz = 100.0;
  std::int64_t first_index = 0;
  std::vector<double> values;
};

struct Window {
  ChannelId channel;
  std::int64_t epoch_index = 0;
  std::vector<double> samples;
};

/// Parses `<channel>,<timestamp_ms>,<value>` rows. Blank lines and lines
/// starting with '#' are skipped. Each channel's samples come back sorted by
/// timestamp; for repeated timestamps the row seen last in the stream wins.
RawLog parse_log(std::istream& in);

/// Piecewise-linear reconstruction sampled on the absolute grid k / rate_hz.
/// The grid starts at the first grid point at or after the first sample and
/// never extends past the last sample.
TimeSeries resample_linear(std::span<const RawSample> samples, double rate_hz,
                           ChannelId channel = {});

/// Number of samples per window, round(rate_hz * window_seconds).
std::size_t window_length(double rate_hz, double window_seconds);

/// Non-overlapping windows aligned to epoch boundaries of the absolute grid.
/// Leading samples before the first boundary and the trailing remainder are
/// dropped. A series shorter than one window yields no windows.
std::vector<Window> cut_windows(const TimeSeries& series, double window_seconds);

/// Label sidecar: `<epoch_index>,<mode>` rows, '#' comments allowed.
/// Returns epoch -> mode name; unknown modes are rejected.
std::map<std::int64_t, std::string> parse_labels(std::istream& in);

}  // namespace vru
