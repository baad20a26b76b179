#pragma once

#include <string>

namespace awd {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Whole file as a string; throws std::runtime_error if unreadable.
std::string read_file(const std::string& path);

}  // namespace awd
