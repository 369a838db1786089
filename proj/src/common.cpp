#include <cmath>
#include <numbers>

#include "vru/channel.hpp"
#include "vru/error.hpp"
#include "vru/rng.hpp"

namespace vru {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse error";
    case ErrorKind::insufficient_data: return "insufficient data";
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::missing_channel: return "missing channel";
    case ErrorKind::degenerate_input: return "degenerate input";
    case ErrorKind::degenerate_labels: return "degenerate labels";
    case ErrorKind::invalid_label: return "invalid label";
    case ErrorKind::stratification: return "stratification error";
    case ErrorKind::alignment: return "alignment error";
    case ErrorKind::config: return "configuration error";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

namespace {
constexpr std::array<std::string_view, kChannelCount> kNames = {
    "acc_x", "acc_y", "acc_z", "gyr_x", "gyr_y", "gyr_z", "rot_x", "rot_y", "rot_z"};
}

std::string channel_name(ChannelId id) { return std::string(kNames[id.index()]); }

std::optional<ChannelId> parse_channel(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return ChannelId::from_index(i);
  }
  return std::nullopt;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace vru
