#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vru {

enum class ErrorKind {
  parse,
  insufficient_data,
  invalid_input,
  missing_channel,
  degenerate_input,
  degenerate_labels,
  invalid_label,
  stratification,
  alignment,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; `kind()` lets callers dispatch
// without a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vru
