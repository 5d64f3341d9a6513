#pragma once

#include <string>
#include <vector>

namespace shapfoil {

std::string trim(const std::string& s);
std::vector<std::string> split_on(const std::string& s, char sep);

/// Shortest decimal rendering that parses back to exactly the same double
/// (tries increasing precision up to 17 significant digits).
std::string format_double_roundtrip(double v);

/// Fixed rounding to `decimals` places with trailing zeros (and a trailing
/// dot) trimmed: 16.10 -> "16.1", 106.00 -> "106".
std::string format_double_trimmed(double v, int decimals);

bool parse_double(const std::string& s, double& out);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace shapfoil
