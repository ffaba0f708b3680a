#pragma once

#include <string>

namespace flexline {

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

// Fixed-point with the given number of decimals (reports use 3).
std::string format_fixed(double value, int decimals);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace flexline
