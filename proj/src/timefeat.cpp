#include "vru/timefeat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vru/error.hpp"

namespace vru {

const std::array<std::string, kTimeMeasures>& time_measure_names() {
  static const std::array<std::string, kTimeMeasures> names = {
      "mean",  "max",  "min",  "var",  "std",  "range",  "iqr",
      "dmean", "dmax", "dmin", "dvar", "dstd", "drange", "diqr"};
  return names;
}

std::vector<double> derivative(std::span<const double> x, double rate_hz) {
  if (x.size() < 2) {
    throw Error(ErrorKind::insufficient_data, "derivative needs at least 2 samples");
  }
  std::vector<double> d(x.size() - 1);
  for (std::size_t k = 0; k + 1 < x.size(); ++k) d[k] = (x[k + 1] - x[k]) * rate_hz;
  return d;
}

double quantile_linear(std::span<const double> sorted, double q) {
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

std::array<double, 7> summary_measures(std::span<const double> x) {
  const auto n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_linear(sorted, 0.75) - quantile_linear(sorted, 0.25);

  // Clamp guards the mean against rounding outside [min, max] for near-constant data.
  return {std::clamp(mean, *lo, *hi), *hi, *lo, var, std::sqrt(var), *hi - *lo, iqr};
}

TimeFeatureVector time_features(const Window& window, double rate_hz) {
  const auto& x = window.samples;
  if (x.size() < 4) {
    throw Error(ErrorKind::insufficient_data, "time features need at least 4 samples per window");
  }
  if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorKind::invalid_input, "non-finite sample in " + channel_name(window.channel) +
                                              " epoch " + std::to_string(window.epoch_index));
  }
  TimeFeatureVector out;
  out.channel = window.channel;
  out.epoch_index = window.epoch_index;
  const auto raw = summary_measures(x);
  const auto deriv = summary_measures(derivative(x, rate_hz));
  std::copy(raw.begin(), raw.end(), out.values.begin());
  std::copy(deriv.begin(), deriv.end(), out.values.begin() + 7);
  return out;
}

const Window& find_channel(std::span<const Window> epoch, ChannelId channel) {
  for (const auto& w : epoch) {
    if (w.channel == channel) return w;
  }
  throw Error(ErrorKind::missing_channel, "missing channel " + channel_name(channel));
}

std::vector<double> assemble_time_block(std::span<const Window> epoch, double rate_hz) {
  std::vector<double> out;
  out.reserve(kTimeBlockWidth);
  for (ChannelId c : all_channels()) {
    const auto f = time_features(find_channel(epoch, c), rate_hz);
    out.insert(out.end(), f.values.begin(), f.values.end());
  }
  return out;
}

std::vector<std::string> time_feature_names() {
  std::vector<std::string> names;
  names.reserve(kTimeBlockWidth);
  for (ChannelId c : all_channels()) {
    for (const auto& m : time_measure_names()) names.push_back(channel_name(c) + "." + m);
  }
  return names;
}

}  // namespace vru
