#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vru {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

/// Splits on ',' with no quoting (none of our formats need it).
std::vector<std::string_view> split_csv(std::string_view line);

}  // namespace vru
