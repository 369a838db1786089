#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "vru/channel.hpp"

namespace vru {

struct EmbeddingParams {
  std::size_t delay = 1;
  std::size_t dimension = 1;
  double threshold = 1.0;  // recurrence radius, consumed by rqa

  /// (dimension - 1) * delay < window_len, and at least 2 embedded points.
  bool valid_for(std::size_t window_len) const;
};

/// Delay / dimension / threshold shipped as defaults: (10, 4, 0.9) for
/// accelerometer and gyroscope, (30, 3, 0.01) for the rotation vector.
EmbeddingParams default_embedding(Sensor sensor);

/// Delay vectors stored row-major: point k occupies coords[k*dim, (k+1)*dim).
class EmbeddedTrajectory {
 public:
  EmbeddedTrajectory(std::vector<double> coords, std::size_t dimension, std::size_t source_len);

  std::size_t size() const { return coords_.size() / dimension_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t source_len() const { return source_len_; }
  std::span<const double> point(std::size_t k) const {
    return {coords_.data() + k * dimension_, dimension_};
  }
  std::span<const double> coords() const { return coords_; }

 private:
  std::vector<double> coords_;
  std::size_t dimension_;
  std::size_t source_len_;
};

/// Point k = (x[k], x[k+delay], …, x[k+(m-1)*delay]).
EmbeddedTrajectory embed(std::span<const double> series, std::size_t dimension, std::size_t delay);
inline EmbeddedTrajectory embed(std::span<const double> series, const EmbeddingParams& p) {
  return embed(series, p.dimension, p.delay);
}

inline constexpr std::size_t kDefaultAmiBins = 16;

/// Shannon entropy (bits) of the series binned into `bins` equal-width bins
/// over its min-max range.
double binned_entropy(std::span<const double> series, std::size_t bins = kDefaultAmiBins);

/// Histogram estimate of I(x_t; x_{t+lag}) in bits, using one set of
/// equal-width bins spanning the whole series. Throws degenerate_input for a
/// constant series.
double ami(std::span<const double> series, std::size_t lag, std::size_t bins = kDefaultAmiBins);

/// AMI for lags 1..max_lag (element i is lag i + 1).
std::vector<double> ami_curve(std::span<const double> series, std::size_t max_lag,
                              std::size_t bins = kDefaultAmiBins);

/// Lag (1-based) of the first strict interior local minimum, else of the
/// global minimum with ties going to the smaller lag.
std::size_t select_delay(std::span<const double> ami_by_lag);

struct FnnConfig {
  double r_tol = 10.0;
  double a_tol = 2.0;
  double accept_fraction = 0.05;
  /// Neighbor pairs closer than this (in z-scored units) count as coincident.
  double zero_distance = 1e-9;
};

/// Fraction of false nearest neighbors when going from `dimension` to
/// `dimension + 1`. The series is z-scored first; only the N - dimension*delay
/// points that exist in both embeddings take part.
double fnn_fraction(std::span<const double> series, std::size_t dimension, std::size_t delay,
                    const FnnConfig& cfg = {});

struct DimensionChoice {
  std::size_t dimension = 1;
  bool capped = false;  // no dimension met the acceptance fraction; max_dim returned
  std::vector<double> fnn_by_dim;  // element i is dimension i + 1
};

DimensionChoice select_dimension(std::span<const double> series, std::size_t delay,
                                 std::size_t max_dim, const FnnConfig& cfg = {});

struct CalibrationConfig {
  std::size_t max_lag = 40;
  std::size_t max_dim = 8;
  std::size_t ami_bins = kDefaultAmiBins;
  FnnConfig fnn;
  /// Cap on the concatenated signal used for the O(n^2) FNN search; windows
  /// are taken evenly spaced across the collection until the cap is reached.
  std::size_t fnn_max_points = 2000;
};

struct ChannelCalibration {
  std::size_t delay = 1;
  DimensionChoice dimension;
  std::vector<double> mean_ami;  // lag 1..max_lag
  std::size_t windows_used = 0;  // windows with a non-constant signal
};

/// Averages per-window AMI curves pointwise, picks the delay from the average,
/// and runs the FNN test on the concatenated windows. Constant windows carry
/// no AMI information and are skipped.
ChannelCalibration calibrate_channel(std::span<const std::vector<double>> windows,
                                     const CalibrationConfig& cfg = {});

std::map<ChannelId, ChannelCalibration> calibrate(
    const std::map<ChannelId, std::vector<std::vector<double>>>& dataset,
    const CalibrationConfig& cfg = {});

}  // namespace vru
