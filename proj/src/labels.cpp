#include "vru/labels.hpp"

#include "vru/error.hpp"

namespace vru {

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::bike: return "bike";
    case Mode::walk: return "walk";
    case Mode::run: return "run";
    case Mode::bus: return "bus";
    case Mode::car: return "car";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : kAllModes) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

LabelScheme LabelScheme::make(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::five_class:
      return {kind, "five_class", {"bike", "walk", "run", "bus", "car"}};
    case SchemeKind::four_class:
      return {kind, "four_class", {"bike", "walk", "run", "non_vru"}};
    case SchemeKind::binary:
      return {kind, "binary", {"vru", "non_vru"}};
  }
  throw Error(ErrorKind::config, "unknown label scheme");
}

LabelScheme LabelScheme::parse(std::string_view name) {
  for (auto kind : {SchemeKind::five_class, SchemeKind::four_class, SchemeKind::binary}) {
    auto s = make(kind);
    if (s.name == name) return s;
  }
  throw Error(ErrorKind::config, "unknown label scheme '" + std::string(name) + "'");
}

std::size_t LabelScheme::map(Mode mode) const {
  const bool vehicle = mode == Mode::bus || mode == Mode::car;
  switch (kind) {
    case SchemeKind::five_class: return static_cast<std::size_t>(mode);
    case SchemeKind::four_class: return vehicle ? 3 : static_cast<std::size_t>(mode);
    case SchemeKind::binary: return vehicle ? 1 : 0;
  }
  return 0;
}

std::string map_labels(std::string_view five_class_label, const LabelScheme& scheme) {
  const auto mode = parse_mode(five_class_label);
  if (!mode) {
    throw Error(ErrorKind::invalid_label, "unknown label '" + std::string(five_class_label) + "'");
  }
  return scheme.classes[scheme.map(*mode)];
}

}  // namespace vru
