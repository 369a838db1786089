#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vru/embed.hpp"
#include "vru/ingest.hpp"

namespace vru {

/// Symmetric N x N recurrence matrix; the main diagonal (line of identity) is set.
class RecurrencePlot {
 public:
  RecurrencePlot() = default;
  /// Takes ownership of a row-major N*N matrix. Symmetry and a set diagonal
  /// are checked; violations throw invalid_input.
  RecurrencePlot(std::size_t n, std::vector<std::uint8_t> cells);

  std::size_t size() const { return n_; }
  bool at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
  std::size_t recurrences() const;  // true cells, diagonal included

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;
};

enum class ThresholdMode {
  absolute,            // T is a Euclidean distance in embedded-coordinate units
  fraction_of_max,     // T is a fraction of the trajectory's largest pairwise distance
};

/// Cell (i, j) is set iff ||p_i - p_j||_2 <= T.
RecurrencePlot recurrence_plot(const EmbeddedTrajectory& traj, double threshold,
                               ThresholdMode mode = ThresholdMode::absolute);

/// Line length -> number of lines.
using LineHistogram = std::map<std::size_t, std::size_t>;

/// Maximal runs along every diagonal except the main one (both triangles),
/// keeping runs of length >= lmin.
LineHistogram diagonal_lines(const RecurrencePlot& rp, std::size_t lmin);

/// Maximal runs down every column, diagonal cells included, keeping runs >= vmin.
LineHistogram vertical_lines(const RecurrencePlot& rp, std::size_t vmin);

struct RqaFeatureVector {
  double rr = 0.0;
  double det = 0.0;
  double lmax = 0.0;
  double ent = 0.0;
  double lam = 0.0;
  double tt = 0.0;

  std::array<double, 6> as_array() const { return {rr, det, lmax, ent, lam, tt}; }
};

inline constexpr std::size_t kRqaMeasures = 6;
inline constexpr std::size_t kRqaBlockWidth = kRqaMeasures * kChannelCount;  // 54

struct RqaOptions {
  std::size_t lmin = 2;
  std::size_t vmin = 2;
  ThresholdMode mode = ThresholdMode::absolute;
};

/// RR counts the diagonal; DET, Lmax and ENT ignore it; LAM and TT use
/// vertical runs that may cross it. ENT is in bits.
RqaFeatureVector rqa_features(const RecurrencePlot& rp, std::size_t lmin = 2, std::size_t vmin = 2);

/// Embeds one window, thresholds it and measures it.
RqaFeatureVector window_rqa(std::span<const double> samples, const EmbeddingParams& params,
                            const RqaOptions& opts = {});

using ChannelParams = std::array<EmbeddingParams, kChannelCount>;

/// (10, 4, 0.9) for accelerometer and gyroscope channels, (30, 3, 0.01) for rotation vector.
ChannelParams default_channel_params();

/// 54 values, channel-major, six measures per channel.
std::vector<double> rqa_block(std::span<const Window> epoch, const ChannelParams& params,
                              const RqaOptions& opts = {});

/// "<channel>.<measure>" names matching rqa_block's layout.
std::vector<std::string> rqa_feature_names();

/// N lines of N '0'/'1' characters.
void write_recurrence_plot(std::ostream& out, const RecurrencePlot& rp);

}  // namespace vru
