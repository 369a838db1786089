#include "vru/rqa.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "vru/error.hpp"
#include "vru/timefeat.hpp"

namespace vru {

RecurrencePlot::RecurrencePlot(std::size_t n, std::vector<std::uint8_t> cells)
    : n_(n), cells_(std::move(cells)) {
  if (cells_.size() != n_ * n_) throw Error(ErrorKind::invalid_input, "recurrence matrix is not N x N");
  for (std::size_t i = 0; i < n_; ++i) {
    if (!at(i, i)) throw Error(ErrorKind::invalid_input, "recurrence matrix diagonal must be set");
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (at(i, j) != at(j, i)) throw Error(ErrorKind::invalid_input, "recurrence matrix is not symmetric");
    }
  }
}

std::size_t RecurrencePlot::recurrences() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(),
                                                [](std::uint8_t c) { return c != 0; }));
}

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return std::sqrt(s);
}

}  // namespace

RecurrencePlot recurrence_plot(const EmbeddedTrajectory& traj, double threshold, ThresholdMode mode) {
  const std::size_t n = traj.size();
  if (n < 2) throw Error(ErrorKind::insufficient_data, "recurrence plot needs at least 2 points");
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw Error(ErrorKind::invalid_input, "recurrence threshold must be positive and finite");
  }
  for (double v : traj.coords()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "non-finite trajectory coordinate");
  }

  std::vector<double> dist(n * n, 0.0);
  double max_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(traj.point(i), traj.point(j));
      dist[i * n + j] = d;
      max_d = std::max(max_d, d);
    }
  }
  const double radius = mode == ThresholdMode::absolute ? threshold : threshold * max_d;

  std::vector<std::uint8_t> cells(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    cells[i * n + i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::uint8_t r = dist[i * n + j] <= radius ? 1 : 0;
      cells[i * n + j] = r;
      cells[j * n + i] = r;
    }
  }
  return RecurrencePlot(n, std::move(cells));
}

LineHistogram diagonal_lines(const RecurrencePlot& rp, std::size_t lmin) {
  LineHistogram hist;
  const std::size_t n = rp.size();
  // Upper triangle only; the lower one mirrors it, so every line counts twice.
  for (std::size_t k = 1; k < n; ++k) {
    std::size_t run = 0;
    for (std::size_t i = 0; i + k < n; ++i) {
      if (rp.at(i, i + k)) {
        ++run;
        continue;
      }
      if (run >= lmin) hist[run] += 2;
      run = 0;
    }
    if (run >= lmin) hist[run] += 2;
  }
  return hist;
}

LineHistogram vertical_lines(const RecurrencePlot& rp, std::size_t vmin) {
  LineHistogram hist;
  const std::size_t n = rp.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t run = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (rp.at(i, j)) {
        ++run;
        continue;
      }
      if (run >= vmin) ++hist[run];
      run = 0;
    }
    if (run >= vmin) ++hist[run];
  }
  return hist;
}

RqaFeatureVector rqa_features(const RecurrencePlot& rp, std::size_t lmin, std::size_t vmin) {
  const std::size_t n = rp.size();
  const std::size_t total = rp.recurrences();
  const std::size_t off_diagonal = total - n;

  RqaFeatureVector f;
  f.rr = static_cast<double>(total) / static_cast<double>(n * n);

  const auto diag = diagonal_lines(rp, lmin);
  std::size_t diag_points = 0;
  std::size_t diag_lines = 0;
  for (const auto& [len, count] : diag) {
    diag_points += len * count;
    diag_lines += count;
  }
  f.det = off_diagonal == 0 ? 0.0 : static_cast<double>(diag_points) / static_cast<double>(off_diagonal);
  f.lmax = diag.empty() ? 0.0 : static_cast<double>(diag.rbegin()->first);
  for (const auto& [len, count] : diag) {
    const double p = static_cast<double>(count) / static_cast<double>(diag_lines);
    f.ent -= p * std::log2(p);
  }

  const auto vert = vertical_lines(rp, vmin);
  std::size_t vert_points = 0;
  std::size_t vert_lines = 0;
  for (const auto& [len, count] : vert) {
    vert_points += len * count;
    vert_lines += count;
  }
  f.lam = static_cast<double>(vert_points) / static_cast<double>(total);
  f.tt = vert_lines == 0 ? 0.0 : static_cast<double>(vert_points) / static_cast<double>(vert_lines);
  return f;
}

RqaFeatureVector window_rqa(std::span<const double> samples, const EmbeddingParams& params,
                            const RqaOptions& opts) {
  const auto traj = embed(samples, params);
  const auto rp = recurrence_plot(traj, params.threshold, opts.mode);
  return rqa_features(rp, opts.lmin, opts.vmin);
}

ChannelParams default_channel_params() {
  ChannelParams p{};
  for (ChannelId c : all_channels()) p[c.index()] = default_embedding(c.sensor);
  return p;
}

std::vector<double> rqa_block(std::span<const Window> epoch, const ChannelParams& params,
                              const RqaOptions& opts) {
  std::vector<double> out;
  out.reserve(kRqaBlockWidth);
  for (ChannelId c : all_channels()) {
    const auto f = window_rqa(find_channel(epoch, c).samples, params[c.index()], opts).as_array();
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

std::vector<std::string> rqa_feature_names() {
  static const std::array<const char*, kRqaMeasures> measures = {"rr", "det", "lmax", "ent", "lam", "tt"};
  std::vector<std::string> names;
  names.reserve(kRqaBlockWidth);
  for (ChannelId c : all_channels()) {
    for (const char* m : measures) names.push_back(channel_name(c) + "." + m);
  }
  return names;
}

void write_recurrence_plot(std::ostream& out, const RecurrencePlot& rp) {
  std::string line(rp.size(), '0');
  for (std::size_t i = 0; i < rp.size(); ++i) {
    for (std::size_t j = 0; j < rp.size(); ++j) line[j] = rp.at(i, j) ? '1' : '0';
    out << line << '\n';
  }
}

}  // namespace vru
