#include "vru/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <string_view>

#include "vru/error.hpp"
#include "vru/labels.hpp"

namespace vru {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits on ',' into exactly `n` trimmed fields, or returns false.
template <std::size_t N>
bool split_fields(std::string_view line, std::array<std::string_view, N>& out) {
  std::size_t field = 0;
  while (true) {
    const auto comma = line.find(',');
    if (field == N) return false;
    out[field++] = trim(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return field == N;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

Error parse_error(std::size_t line_no, const std::string& msg) {
  return Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + msg);
}

bool skip_line(std::string_view line) { return line.empty() || line.front() == '#'; }

}  // namespace

RawLog parse_log(std::istream& in) {
  // (timestamp, arrival order) so the last-seen duplicate can be picked after sorting.
  struct Row {
    std::int64_t ts;
    std::size_t order;
    double value;
  };
  std::map<ChannelId, std::vector<Row>> rows;

  std::string buf;
  std::size_t line_no = 0;
  std::size_t order = 0;
  while (std::getline(in, buf)) {
    ++line_no;
    const auto line = trim(buf);
    if (skip_line(line)) continue;
    std::array<std::string_view, 3> f;
    if (!split_fields(line, f)) throw parse_error(line_no, "expected <channel>,<timestamp_ms>,<value>");
    const auto channel = parse_channel(f[0]);
    if (!channel) throw parse_error(line_no, "unknown channel '" + std::string(f[0]) + "'");
    std::int64_t ts = 0;
    if (!parse_number(f[1], ts) || ts < 0) {
      throw parse_error(line_no, "bad timestamp '" + std::string(f[1]) + "'");
    }
    double value = 0.0;
    if (!parse_number(f[2], value) || !std::isfinite(value)) {
      throw parse_error(line_no, "bad value '" + std::string(f[2]) + "'");
    }
    rows[*channel].push_back({ts, order++, value});
  }

  RawLog out;
  for (auto& [channel, list] : rows) {
    std::sort(list.begin(), list.end(), [](const Row& a, const Row& b) {
      return a.ts != b.ts ? a.ts < b.ts : a.order < b.order;
    });
    auto& samples = out[channel];
    samples.reserve(list.size());
    for (const auto& r : list) {
      if (!samples.empty() && samples.back().timestamp_ms == r.ts) {
        samples.back().value = r.value;
      } else {
        samples.push_back({r.ts, r.value});
      }
    }
  }
  return out;
}

TimeSeries resample_linear(std::span<const RawSample> samples, double rate_hz, ChannelId channel) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw Error(ErrorKind::invalid_input, "resample rate must be positive");
  }
  if (samples.size() < 2) {
    throw Error(ErrorKind::insufficient_data, "resampling needs at least 2 samples, got " +
                                                  std::to_string(samples.size()));
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].timestamp_ms <= samples[i - 1].timestamp_ms) {
      throw Error(ErrorKind::invalid_input, "sample timestamps must be strictly increasing");
    }
  }

  const double period_ms = 1000.0 / rate_hz;
  const double first_ms = static_cast<double>(samples.front().timestamp_ms);
  const double last_ms = static_cast<double>(samples.back().timestamp_ms);
  // Small slack absorbs k * period rounding when a grid point lands on a sample.
  constexpr double kSlack = 1e-9;
  const auto k_first = static_cast<std::int64_t>(std::ceil(first_ms / period_ms - kSlack));
  const auto k_last = static_cast<std::int64_t>(std::floor(last_ms / period_ms + kSlack));
  if (k_last - k_first < 1) {
    throw Error(ErrorKind::insufficient_data, "sample span is shorter than one output period");
  }

  TimeSeries out;
  out.channel = channel;
  out.rate_hz = rate_hz;
  out.first_index = k_first;
  out.values.reserve(static_cast<std::size_t>(k_last - k_first + 1));

  std::size_t seg = 0;  // samples[seg].t <= t < samples[seg + 1].t
  for (std::int64_t k = k_first; k <= k_last; ++k) {
    const double t = std::clamp(static_cast<double>(k) * period_ms, first_ms, last_ms);
    while (seg + 1 < samples.size() && static_cast<double>(samples[seg + 1].timestamp_ms) <= t) ++seg;
    const auto& a = samples[seg];
    const double ta = static_cast<double>(a.timestamp_ms);
    if (t == ta || seg + 1 == samples.size()) {
      out.values.push_back(a.value);
      continue;
    }
    const auto& b = samples[seg + 1];
    const double frac = (t - ta) / (static_cast<double>(b.timestamp_ms) - ta);
    out.values.push_back(a.value + (b.value - a.value) * frac);
  }
  return out;
}

std::size_t window_length(double rate_hz, double window_seconds) {
  if (!(rate_hz > 0.0) || !(window_seconds > 0.0)) {
    throw Error(ErrorKind::invalid_input, "rate and window length must be positive");
  }
  const auto len = static_cast<std::size_t>(std::llround(rate_hz * window_seconds));
  if (len == 0) throw Error(ErrorKind::invalid_input, "window holds no samples");
  return len;
}

std::vector<Window> cut_windows(const TimeSeries& series, double window_seconds) {
  const auto len = static_cast<std::int64_t>(window_length(series.rate_hz, window_seconds));
  const auto n = static_cast<std::int64_t>(series.values.size());

  // First epoch boundary at or after first_index (first_index is non-negative).
  const std::int64_t first_epoch = (series.first_index + len - 1) / len;
  const std::int64_t skip = first_epoch * len - series.first_index;

  std::vector<Window> out;
  for (std::int64_t start = skip, epoch = first_epoch; start + len <= n; start += len, ++epoch) {
    Window w;
    w.channel = series.channel;
    w.epoch_index = epoch;
    w.samples.assign(series.values.begin() + start, series.values.begin() + start + len);
    out.push_back(std::move(w));
  }
  return out;
}

std::map<std::int64_t, std::string> parse_labels(std::istream& in) {
  std::map<std::int64_t, std::string> out;
  std::string buf;
  std::size_t line_no = 0;
  while (std::getline(in, buf)) {
    ++line_no;
    const auto line = trim(buf);
    if (skip_line(line)) continue;
    std::array<std::string_view, 2> f;
    if (!split_fields(line, f)) throw parse_error(line_no, "expected <epoch_index>,<mode>");
    std::int64_t epoch = 0;
    if (!parse_number(f[0], epoch) || epoch < 0) {
      throw parse_error(line_no, "bad epoch index '" + std::string(f[0]) + "'");
    }
    if (!parse_mode(f[1])) throw parse_error(line_no, "unknown mode '" + std::string(f[1]) + "'");
    out[epoch] = std::string(f[1]);
  }
  return out;
}

}  // namespace vru
