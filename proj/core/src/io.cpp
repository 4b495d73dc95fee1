#include "tailcop/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tailcop {

namespace {

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split_row(const std::string& line) {
  std::string norm = line;
  std::replace(norm.begin(), norm.end(), ',', ' ');
  std::replace(norm.begin(), norm.end(), ';', ' ');
  std::replace(norm.begin(), norm.end(), '\t', ' ');
  std::vector<std::string> toks;
  std::istringstream iss(norm);
  std::string tok;
  while (iss >> tok) toks.push_back(tok);
  return toks;
}

std::vector<double> to_pseudo_observations(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> out(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    out[order[pos]] = (static_cast<double>(pos) + 0.5) / static_cast<double>(n);
  }
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> load_pairs(std::istream& in,
                                                  bool pseudo_observations) {
  std::vector<double> xs, ys;
  std::string line;
  std::size_t lineno = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = split_row(line);
    if (toks.empty()) continue;
    double a = 0.0, b = 0.0;
    const bool numeric =
        toks.size() >= 2 && parse_double(toks[0], a) && parse_double(toks[1], b);
    if (!numeric) {
      if (first_data_row) continue;  // header row
      throw std::runtime_error("load_pairs: malformed row at line " +
                               std::to_string(lineno));
    }
    first_data_row = false;
    xs.push_back(a);
    ys.push_back(b);
  }
  if (xs.empty()) throw std::runtime_error("load_pairs: no data rows");
  if (pseudo_observations) {
    xs = to_pseudo_observations(xs);
    ys = to_pseudo_observations(ys);
  } else {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!(xs[i] > 0.0 && xs[i] < 1.0 && ys[i] > 0.0 && ys[i] < 1.0)) {
        throw std::runtime_error(
            "load_pairs: values outside (0,1); pass the pseudo-observation "
            "flag to rank-transform raw data");
      }
    }
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out.emplace_back(xs[i], ys[i]);
  return out;
}

std::vector<std::pair<double, double>> load_pairs_file(const std::string& path,
                                                       bool pseudo_observations) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_pairs: cannot open " + path);
  return load_pairs(in, pseudo_observations);
}

}  // namespace tailcop
