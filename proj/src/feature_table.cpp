#include "vru/feature_table.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "vru/error.hpp"
#include "vru/textio.hpp"

namespace vru {

std::vector<double> FeatureTable::column(std::size_t c) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
  return out;
}

void FeatureTable::add_row(std::span<const double> row, std::size_t label) {
  if (row.size() != width()) {
    throw Error(ErrorKind::invalid_input, "row width " + std::to_string(row.size()) +
                                              " does not match table width " + std::to_string(width()));
  }
  values.insert(values.end(), row.begin(), row.end());
  labels.push_back(label);
}

std::size_t FeatureTable::classes_present() const {
  std::vector<bool> seen(class_names.size(), false);
  for (auto l : labels) {
    if (l < seen.size()) seen[l] = true;
  }
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
}

void FeatureTable::validate() const {
  if (values.size() != rows() * width()) throw Error(ErrorKind::invalid_input, "ragged feature table");
  for (auto l : labels) {
    if (l >= class_names.size()) throw Error(ErrorKind::invalid_label, "label id out of range");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::invalid_input, "non-finite value in feature '" + names[i % width()] + "'");
    }
  }
}

FeatureTable select_columns(const FeatureTable& table, std::span<const std::size_t> columns) {
  FeatureTable out;
  out.class_names = table.class_names;
  out.labels = table.labels;
  for (auto c : columns) {
    if (c >= table.width()) throw Error(ErrorKind::invalid_input, "column index out of range");
    out.names.push_back(table.names[c]);
  }
  out.values.reserve(table.rows() * columns.size());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (auto c : columns) out.values.push_back(table.at(r, c));
  }
  return out;
}

FeatureTable relabel(const FeatureTable& five_class, const LabelScheme& scheme) {
  FeatureTable out = five_class;
  out.class_names = scheme.classes;
  for (auto& l : out.labels) {
    const auto mode = parse_mode(five_class.class_names.at(l));
    if (!mode) throw Error(ErrorKind::invalid_label, "relabel expects five-class labels");
    l = scheme.map(*mode);
  }
  return out;
}

void write_feature_table(std::ostream& out, const FeatureTable& table) {
  out << "label";
  for (const auto& n : table.names) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out << table.class_names[table.labels[r]];
    for (double v : table.row(r)) out << ',' << format_double(v);
    out << '\n';
  }
}

FeatureTable read_feature_table(std::istream& in, const LabelScheme& scheme) {
  FeatureTable t;
  t.class_names = scheme.classes;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse, "feature table is empty");
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "label") {
    throw Error(ErrorKind::parse, "feature table header must start with 'label'");
  }
  for (std::size_t i = 1; i < header.size(); ++i) t.names.emplace_back(header[i]);

  std::size_t line_no = 1;
  std::vector<double> row(t.width());
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != t.width() + 1) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(t.width() + 1) + " fields");
    }
    const auto label = std::string(fields[0]);
    auto it = std::find(t.class_names.begin(), t.class_names.end(), label);
    std::size_t id = 0;
    if (it != t.class_names.end()) {
      id = static_cast<std::size_t>(it - t.class_names.begin());
    } else if (auto mode = parse_mode(label)) {
      id = scheme.map(*mode);
    } else {
      throw Error(ErrorKind::invalid_label, "line " + std::to_string(line_no) + ": label '" + label +
                                                "' is not in scheme " + scheme.name);
    }
    for (std::size_t c = 0; c < t.width(); ++c) row[c] = parse_double(fields[c + 1]);
    t.add_row(row, id);
  }
  return t;
}

}  // namespace vru
