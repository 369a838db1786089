#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vru/labels.hpp"

namespace vru {

/// Labeled row-major feature matrix. `labels[r]` indexes `class_names`.
struct FeatureTable {
  std::vector<std::string> names;
  std::vector<std::string> class_names;
  std::vector<double> values;  // rows() * width()
  std::vector<std::size_t> labels;

  std::size_t width() const { return names.size(); }
  std::size_t rows() const { return labels.size(); }

  std::span<const double> row(std::size_t r) const { return {values.data() + r * width(), width()}; }
  double at(std::size_t r, std::size_t c) const { return values[r * width() + c]; }
  std::vector<double> column(std::size_t c) const;

  void add_row(std::span<const double> row, std::size_t label);

  /// Number of distinct labels that actually occur.
  std::size_t classes_present() const;

  /// Throws invalid_input on ragged rows, non-finite values or out-of-range labels.
  void validate() const;
};

/// Keeps the listed columns, in the order given.
FeatureTable select_columns(const FeatureTable& table, std::span<const std::size_t> columns);

/// Relabels a five-class table under `scheme`.
FeatureTable relabel(const FeatureTable& five_class, const LabelScheme& scheme);

/// CSV with header `label,<feature names…>`; label is the class name.
void write_feature_table(std::ostream& out, const FeatureTable& table);
/// Reads a table written by write_feature_table; class names are taken from `scheme`.
FeatureTable read_feature_table(std::istream& in, const LabelScheme& scheme);

}  // namespace vru
