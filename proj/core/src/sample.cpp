#include "tailcop/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tailcop/math.hpp"

namespace tailcop {

namespace {

// Ranks 1..n with ties broken by input index (stable sort on the values).
std::vector<std::int32_t> ranks_of(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::int32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&x](std::int32_t a, std::int32_t b) { return x[a] < x[b]; });
  std::vector<std::int32_t> rank(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    rank[static_cast<std::size_t>(order[pos])] = static_cast<std::int32_t>(pos) + 1;
  }
  return rank;
}

}  // namespace

Sample build_sample(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("build_sample: empty input");
  Sample s;
  const std::size_t n = pairs.size();
  s.u.reserve(n);
  s.v.reserve(n);
  for (const auto& [a, b] : pairs) {
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
      throw std::invalid_argument(
          "build_sample: coordinates must lie strictly inside (0,1)");
    }
    s.u.push_back(a);
    s.v.push_back(b);
  }
  s.ru = ranks_of(s.u);
  s.rv = ranks_of(s.v);
  s.su = s.u;
  s.sv = s.v;
  std::sort(s.su.begin(), s.su.end());
  std::sort(s.sv.begin(), s.sv.end());
  s.rv_by_ru.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.rv_by_ru[static_cast<std::size_t>(s.ru[i]) - 1] = s.rv[i];
  }
  return s;
}

double ecdf_joint(const Sample& s, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("ecdf_joint: (u,v) outside the unit square");
  }
  std::int64_t cnt = 0;
  const std::size_t n = s.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    cnt += (s.u[i] <= u && s.v[i] <= v) ? 1 : 0;
  }
  return static_cast<double>(cnt) / static_cast<double>(n);
}

double ecdf_margin(const Sample& s, Margin margin, double x) {
  const auto& sorted = (margin == Margin::U) ? s.su : s.sv;
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) /
         static_cast<double>(sorted.size());
}

double quantile_marginal(const Sample& s, Margin margin, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("quantile_marginal: p outside [0,1]");
  }
  if (p == 0.0) return 0.0;
  const auto& sorted = (margin == Margin::U) ? s.su : s.sv;
  const std::int64_t k = rank_ceil(p, s.n());
  return sorted[static_cast<std::size_t>(k) - 1];
}

std::vector<double> ecdf_joint_grid(const Sample& s,
                                    const std::vector<double>& xs,
                                    const std::vector<double>& ys) {
  const std::size_t nx = xs.size(), ny = ys.size();
  std::vector<std::int64_t> hist(nx * ny, 0);
  const std::size_t n = s.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bx =
        std::lower_bound(xs.begin(), xs.end(), s.u[i]) - xs.begin();
    const std::size_t by =
        std::lower_bound(ys.begin(), ys.end(), s.v[i]) - ys.begin();
    if (bx < nx && by < ny) ++hist[bx * ny + by];
  }
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 1; y < ny; ++y) hist[x * ny + y] += hist[x * ny + y - 1];
  }
  for (std::size_t x = 1; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) hist[x * ny + y] += hist[(x - 1) * ny + y];
  }
  std::vector<double> out(nx * ny);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < nx * ny; ++k) {
    out[k] = static_cast<double>(hist[k]) * inv_n;
  }
  return out;
}

double empirical_copula(const Sample& s, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("empirical_copula: (u,v) outside the unit square");
  }
  if (u == 0.0 || v == 0.0) return 0.0;
  const std::int64_t n = s.n();
  const std::int64_t a = rank_ceil(u, n);
  const std::int32_t b = static_cast<std::int32_t>(rank_ceil(v, n));
  std::int64_t cnt = 0;
  for (std::int64_t r = 0; r < a; ++r) {
    cnt += (s.rv_by_ru[static_cast<std::size_t>(r)] <= b) ? 1 : 0;
  }
  return static_cast<double>(cnt) / static_cast<double>(n);
}

}  // namespace tailcop
