#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace vru {

enum class Sensor { accelerometer, gyroscope, rotation_vector };
enum class Axis { x, y, z };

struct ChannelId {
  Sensor sensor = Sensor::accelerometer;
  Axis axis = Axis::x;

  /// Position in the canonical acc_x … rot_z ordering (0..8).
  constexpr std::size_t index() const {
    return static_cast<std::size_t>(sensor) * 3 + static_cast<std::size_t>(axis);
  }

  static constexpr ChannelId from_index(std::size_t i) {
    return {static_cast<Sensor>(i / 3), static_cast<Axis>(i % 3)};
  }

  friend constexpr bool operator==(ChannelId, ChannelId) = default;
  friend constexpr auto operator<=>(ChannelId a, ChannelId b) { return a.index() <=> b.index(); }
};

inline constexpr std::size_t kChannelCount = 9;

/// All channels in registry order: acc_x, acc_y, acc_z, gyr_x, …, rot_z.
constexpr std::array<ChannelId, kChannelCount> all_channels() {
  std::array<ChannelId, kChannelCount> out{};
  for (std::size_t i = 0; i < kChannelCount; ++i) out[i] = ChannelId::from_index(i);
  return out;
}

/// Log-format name, e.g. "gyr_y".
std::string channel_name(ChannelId id);
std::optional<ChannelId> parse_channel(std::string_view name);

}  // namespace vru
