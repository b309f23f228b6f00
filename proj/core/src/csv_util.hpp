#pragma once

#include <string>
#include <vector>

namespace cmpkit::csv {

std::vector<std::string> split(const std::string& line, char sep = ',');
double to_double(const std::string& cell);
/// Shortest round-trippable representation (%.17g trimmed via %.*g probing).
std::string format(double v);

} // namespace cmpkit::csv
