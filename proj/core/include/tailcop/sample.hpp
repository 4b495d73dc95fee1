#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace tailcop {

// A bivariate sample on (0,1)^2 with precomputed ranks and sorted margins.
// Immutable after build_sample; all evaluations on it are pure.
struct Sample {
  std::vector<double> u, v;          // observations, in input order
  std::vector<std::int32_t> ru, rv;  // ranks 1..n, ties broken by input index
  std::vector<double> su, sv;        // sorted copies of u and v
  // rv of the observation whose u-rank is r (1-based r); lets joint counts
  // run over the rank permutation alone.
  std::vector<std::int32_t> rv_by_ru;

  std::int64_t n() const { return static_cast<std::int64_t>(u.size()); }
};

enum class Margin { U, V };

// Builds ranks and sorted arrays. Coordinates must lie in (0,1); ties are
// permitted and broken by input index. Throws on empty input or out-of-range
// coordinates.
Sample build_sample(std::span<const std::pair<double, double>> pairs);

// (1/n) #{i : U_i <= u, V_i <= v}.
double ecdf_joint(const Sample& s, double u, double v);

// Marginal empirical df at s.
double ecdf_margin(const Sample& s, Margin margin, double x);

// inf{x : ecdf_margin(x) >= p}, i.e. the ceil(n*p)-th order statistic.
// p = 0 returns 0 by convention.
double quantile_marginal(const Sample& s, Margin margin, double p);

// Empirical copula C_n(u,v) through the rank identity
//   (1/n) #{i : ru_i <= ceil(n u), rv_i <= ceil(n v)},
// with C_n(u,v) = 0 whenever u = 0 or v = 0.
double empirical_copula(const Sample& s, double u, double v);

// Batch joint ecdf on a Cartesian grid; row-major [ix * ys.size() + iy].
// xs and ys must be nondecreasing. Runs in O(n log + |xs| |ys|).
std::vector<double> ecdf_joint_grid(const Sample& s,
                                    const std::vector<double>& xs,
                                    const std::vector<double>& ys);

}  // namespace tailcop
