#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tailcop {

// Reads delimiter-separated text with two numeric columns per row (comma,
// semicolon, tab or whitespace); an optional non-numeric header row is
// skipped. When pseudo_observations is true both columns are rank-transformed
// to (rank - 0.5)/n; otherwise all values must already lie in (0,1).
std::vector<std::pair<double, double>> load_pairs(std::istream& in,
                                                  bool pseudo_observations);
std::vector<std::pair<double, double>> load_pairs_file(const std::string& path,
                                                       bool pseudo_observations);

}  // namespace tailcop
