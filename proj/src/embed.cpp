#include "vru/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "entropy.hpp"
#include "vru/error.hpp"

namespace vru {

bool EmbeddingParams::valid_for(std::size_t window_len) const {
  if (delay == 0 || dimension == 0 || !(threshold > 0.0)) return false;
  const std::size_t span = (dimension - 1) * delay;
  return span < window_len && window_len - span >= 2;
}

EmbeddingParams default_embedding(Sensor sensor) {
  if (sensor == Sensor::rotation_vector) return {30, 3, 0.01};
  return {10, 4, 0.9};
}

EmbeddedTrajectory::EmbeddedTrajectory(std::vector<double> coords, std::size_t dimension,
                                       std::size_t source_len)
    : coords_(std::move(coords)), dimension_(dimension), source_len_(source_len) {}

EmbeddedTrajectory embed(std::span<const double> series, std::size_t dimension, std::size_t delay) {
  if (dimension == 0 || delay == 0) {
    throw Error(ErrorKind::invalid_input, "embedding dimension and delay must be positive");
  }
  const std::size_t n = series.size();
  const std::size_t span = (dimension - 1) * delay;
  if (n < span + 2) {
    throw Error(ErrorKind::insufficient_data,
                "series of length " + std::to_string(n) + " is too short for dimension " +
                    std::to_string(dimension) + " and delay " + std::to_string(delay));
  }
  const std::size_t points = n - span;
  std::vector<double> coords(points * dimension);
  for (std::size_t k = 0; k < points; ++k) {
    for (std::size_t j = 0; j < dimension; ++j) coords[k * dimension + j] = series[k + j * delay];
  }
  return EmbeddedTrajectory(std::move(coords), dimension, n);
}

namespace {

struct Binning {
  double lo;
  double scale;  // bins / (hi - lo)
  std::size_t bins;

  std::size_t operator()(double v) const {
    const auto b = static_cast<std::size_t>((v - lo) * scale);
    return std::min(b, bins - 1);
  }
};

Binning make_binning(std::span<const double> series, std::size_t bins) {
  if (bins == 0) throw Error(ErrorKind::invalid_input, "bin count must be positive");
  if (series.empty()) throw Error(ErrorKind::insufficient_data, "empty series");
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (!(*hi > *lo)) {
    throw Error(ErrorKind::degenerate_input, "constant series has no equal-width binning");
  }
  return {*lo, static_cast<double>(bins) / (*hi - *lo), bins};
}

}  // namespace

double binned_entropy(std::span<const double> series, std::size_t bins) {
  const auto bin = make_binning(series, bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : series) ++counts[bin(v)];
  return detail::entropy_bits(std::move(counts), series.size());
}

double ami(std::span<const double> series, std::size_t lag, std::size_t bins) {
  if (lag + 1 >= series.size()) {
    throw Error(ErrorKind::insufficient_data, "lag " + std::to_string(lag) +
                                                  " leaves fewer than 2 pairs in a series of length " +
                                                  std::to_string(series.size()));
  }
  const auto bin = make_binning(series, bins);
  const std::size_t pairs = series.size() - lag;
  std::vector<std::size_t> px(bins, 0), py(bins, 0), pxy(bins * bins, 0);
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto a = bin(series[t]);
    const auto b = bin(series[t + lag]);
    ++px[a];
    ++py[b];
    ++pxy[a * bins + b];
  }
  const double hx = detail::entropy_bits(std::move(px), pairs);
  const double hy = detail::entropy_bits(std::move(py), pairs);
  const double hxy = detail::entropy_bits(std::move(pxy), pairs);
  return (hx + hy) - hxy;
}

std::vector<double> ami_curve(std::span<const double> series, std::size_t max_lag, std::size_t bins) {
  std::vector<double> curve;
  curve.reserve(max_lag);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) curve.push_back(ami(series, lag, bins));
  return curve;
}

std::size_t select_delay(std::span<const double> curve) {
  if (curve.empty()) throw Error(ErrorKind::invalid_input, "empty AMI curve");
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    if (curve[i] < curve[i - 1] && curve[i] < curve[i + 1]) return i + 1;
  }
  const auto it = std::min_element(curve.begin(), curve.end());
  return static_cast<std::size_t>(it - curve.begin()) + 1;
}

namespace {

using Segments = std::span<const std::span<const double>>;

double pooled_fnn_fraction(Segments segments, std::size_t dim, std::size_t delay,
                           const FnnConfig& cfg) {
  if (dim == 0 || delay == 0) {
    throw Error(ErrorKind::invalid_input, "FNN dimension and delay must be positive");
  }
  // z-score over every pooled sample
  double sum = 0.0;
  std::size_t count = 0;
  for (auto seg : segments) {
    for (double v : seg) sum += v;
    count += seg.size();
  }
  if (count == 0) throw Error(ErrorKind::insufficient_data, "FNN on an empty series");
  const double mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (auto seg : segments) {
    for (double v : seg) ss += (v - mean) * (v - mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(count));
  if (!(sd > 0.0)) throw Error(ErrorKind::degenerate_input, "FNN on a constant series");

  // Points of dimension dim + 1; the first dim coordinates form the dim-embedding.
  const std::size_t ext = dim + 1;
  std::vector<double> pts;
  for (auto seg : segments) {
    if (seg.size() < dim * delay + 1) continue;
    const std::size_t n_pts = seg.size() - dim * delay;
    for (std::size_t k = 0; k < n_pts; ++k) {
      for (std::size_t j = 0; j < ext; ++j) pts.push_back((seg[k + j * delay] - mean) / sd);
    }
  }
  const std::size_t n = pts.size() / ext;
  if (n < 2) {
    throw Error(ErrorKind::insufficient_data, "FNN at dimension " + std::to_string(dim) +
                                                  " needs at least 2 points");
  }

  const double zero2 = cfg.zero_distance * cfg.zero_distance;
  std::size_t tested = 0;
  std::size_t false_nn = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* pi = &pts[i * ext];
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double* pj = &pts[j * ext];
      double d2 = 0.0;
      for (std::size_t c = 0; c < dim; ++c) d2 += (pi[c] - pj[c]) * (pi[c] - pj[c]);
      if (d2 <= zero2) continue;
      if (d2 < best) {
        best = d2;
        best_j = j;
      }
    }
    if (best_j == n) continue;
    ++tested;
    const double dm = std::sqrt(best);
    const double extra = std::abs(pi[dim] - pts[best_j * ext + dim]);
    const double dm1 = std::sqrt(best + extra * extra);
    // sd of the z-scored series is 1
    if (extra / dm > cfg.r_tol || dm1 > cfg.a_tol) ++false_nn;
  }
  if (tested == 0) {
    throw Error(ErrorKind::degenerate_input, "every FNN neighbor pair has zero distance");
  }
  return static_cast<double>(false_nn) / static_cast<double>(tested);
}

DimensionChoice pooled_select_dimension(Segments segments, std::size_t delay, std::size_t max_dim,
                                        const FnnConfig& cfg) {
  if (max_dim == 0) throw Error(ErrorKind::invalid_input, "max_dim must be at least 1");
  DimensionChoice out;
  out.capped = true;
  out.dimension = max_dim;
  for (std::size_t d = 1; d <= max_dim; ++d) {
    const double f = pooled_fnn_fraction(segments, d, delay, cfg);
    out.fnn_by_dim.push_back(f);
    if (f < cfg.accept_fraction) {
      out.dimension = d;
      out.capped = false;
      break;
    }
  }
  return out;
}

}  // namespace

double fnn_fraction(std::span<const double> series, std::size_t dimension, std::size_t delay,
                    const FnnConfig& cfg) {
  const std::span<const double> one[] = {series};
  return pooled_fnn_fraction(one, dimension, delay, cfg);
}

DimensionChoice select_dimension(std::span<const double> series, std::size_t delay,
                                 std::size_t max_dim, const FnnConfig& cfg) {
  const std::span<const double> one[] = {series};
  return pooled_select_dimension(one, delay, max_dim, cfg);
}

ChannelCalibration calibrate_channel(std::span<const std::vector<double>> windows,
                                     const CalibrationConfig& cfg) {
  if (windows.empty()) throw Error(ErrorKind::insufficient_data, "calibration needs at least one window");
  ChannelCalibration out;
  out.mean_ami.assign(cfg.max_lag, 0.0);
  std::vector<std::size_t> usable;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    std::vector<double> curve;
    try {
      curve = ami_curve(windows[w], cfg.max_lag, cfg.ami_bins);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::degenerate_input) continue;
      throw;
    }
    for (std::size_t i = 0; i < curve.size(); ++i) out.mean_ami[i] += curve[i];
    usable.push_back(w);
  }
  if (usable.empty()) {
    throw Error(ErrorKind::degenerate_input, "every calibration window is constant");
  }
  out.windows_used = usable.size();
  for (double& v : out.mean_ami) v /= static_cast<double>(usable.size());
  out.delay = select_delay(out.mean_ami);

  // Evenly spaced subset of the usable windows, pooled without seams.
  const std::size_t len = windows[usable.front()].size();
  const std::size_t want = std::max<std::size_t>(1, cfg.fnn_max_points / std::max<std::size_t>(len, 1));
  const std::size_t stride = std::max<std::size_t>(1, usable.size() / want);
  std::vector<std::span<const double>> segments;
  for (std::size_t i = 0; i < usable.size() && segments.size() < want; i += stride) {
    segments.emplace_back(windows[usable[i]]);
  }
  out.dimension = pooled_select_dimension(segments, out.delay, cfg.max_dim, cfg.fnn);
  return out;
}

std::map<ChannelId, ChannelCalibration> calibrate(
    const std::map<ChannelId, std::vector<std::vector<double>>>& dataset,
    const CalibrationConfig& cfg) {
  std::map<ChannelId, ChannelCalibration> out;
  for (const auto& [channel, windows] : dataset) {
    try {
      out.emplace(channel, calibrate_channel(windows, cfg));
    } catch (const Error& e) {
      throw Error(e.kind(), channel_name(channel) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace vru
