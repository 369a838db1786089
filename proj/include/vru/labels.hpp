#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vru {

/// Transportation modes in five-class order.
enum class Mode { bike, walk, run, bus, car };

inline constexpr std::array<Mode, 5> kAllModes = {Mode::bike, Mode::walk, Mode::run, Mode::bus,
                                                  Mode::car};

std::string_view mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

enum class SchemeKind { five_class, four_class, binary };

struct LabelScheme {
  SchemeKind kind = SchemeKind::five_class;
  std::string name;
  std::vector<std::string> classes;

  static LabelScheme make(SchemeKind kind);
  static LabelScheme parse(std::string_view name);  // "five_class" | "four_class" | "binary"

  std::size_t size() const { return classes.size(); }

  /// Class index of `mode` under this scheme: buses and cars collapse to
  /// non_vru in the four-class scheme; binary splits vru / non_vru.
  std::size_t map(Mode mode) const;
};

/// Name-based variant: maps a five-class label name to its class name under `scheme`.
/// Throws ErrorKind::invalid_label for anything outside the five modes.
std::string map_labels(std::string_view five_class_label, const LabelScheme& scheme);

}  // namespace vru
