#include "tailcop/tailtest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"
#include "tailcop/gaussian.hpp"
#include "tailcop/rng.hpp"

namespace tailcop {

namespace {

// int_a^b x^{2nu + k} dx
double weight_moment(double a, double b, double two_nu, int k) {
  const double e = two_nu + k + 1.0;
  return (std::pow(b, e) - std::pow(a, e)) / e;
}

}  // namespace

double omega_statistic(const Sample& s, const TailContext& ctx, double nu1,
                       double nu2) {
  if (!(nu1 > -0.5 && nu2 > -0.5)) {
    throw std::invalid_argument("omega_statistic: nu1, nu2 must exceed -1/2");
  }
  if (!(ctx.window > 0.0)) {
    throw std::invalid_argument("omega_statistic: window must be positive");
  }
  const std::int64_t n = s.n();
  const double w = ctx.window;
  const double nd = static_cast<double>(n);

  // C_n is constant on the rank cells (i/n,(i+1)/n] x (j/n,(j+1)/n]; on each
  // cell intersected with the window expand (c - uv)^2 and integrate the
  // monomials against the weights in closed form.
  auto axis_moments = [&](double two_nu) {
    std::vector<std::array<double, 3>> p;
    for (std::int64_t i = 0; static_cast<double>(i) / nd < w && i < n; ++i) {
      const double lo = static_cast<double>(i) / nd;
      const double hi = std::min(static_cast<double>(i + 1) / nd, w);
      p.push_back({weight_moment(lo, hi, two_nu, 0),
                   weight_moment(lo, hi, two_nu, 1),
                   weight_moment(lo, hi, two_nu, 2)});
    }
    return p;
  };
  const auto pu = axis_moments(2.0 * nu1);
  const auto pv = axis_moments(2.0 * nu2);
  const std::size_t na = pu.size(), nb = pv.size();

  double sum_p2v = 0.0;
  for (const auto& q : pv) sum_p2v += q[2];

  // Stream rank rows: cnt accumulates the v-rank histogram of points with
  // ru <= i+1; its prefix over j is n * C_n on row i.
  std::vector<std::int32_t> cnt(nb, 0);
  double total = 0.0;
  const double inv_n = 1.0 / nd;
  for (std::size_t i = 0; i < na; ++i) {
    const std::int32_t vr = s.rv_by_ru[i];
    if (static_cast<std::size_t>(vr) <= nb) ++cnt[static_cast<std::size_t>(vr) - 1];
    double acc = 0.0;
    double row = 0.0;
    const double p0u = pu[i][0], p1u = pu[i][1];
    for (std::size_t j = 0; j < nb; ++j) {
      acc += cnt[j];
      const double c = acc * inv_n;
      row += c * (c * p0u * pv[j][0] - 2.0 * p1u * pv[j][1]);
    }
    total += row + pu[i][2] * sum_p2v;
  }
  return nd * total;
}

std::vector<double> null_distribution(std::int64_t n, const TailContext& ctx,
                                      double nu1, double nu2, int reps,
                                      std::uint64_t seed, TestMethod method,
                                      int threads, int gauss_m) {
  if (reps < 100) {
    throw std::invalid_argument("null_distribution: need reps >= 100");
  }
  std::vector<double> draws(static_cast<std::size_t>(reps));
  const CopulaModel indep = make_independence();
  detail::parallel_for(reps, threads, [&](int r) {
    const std::uint64_t rep_seed = derive_stream(seed, static_cast<std::uint64_t>(r));
    if (method == TestMethod::McEmpirical) {
      const Sample smp = sample_pairs(indep, n, rep_seed);
      const TailContext rctx(n, ctx.window * static_cast<double>(n), ctx.gamma);
      draws[static_cast<std::size_t>(r)] = omega_statistic(smp, rctx, nu1, nu2);
    } else {
      const GridField sheet = simulate_sheet(gauss_m, rep_seed);
      const GridField tied = bridge_to_tied_down(sheet_to_bridge(sheet));
      draws[static_cast<std::size_t>(r)] =
          integral_squared_weighted(tied, ctx.window, nu1, nu2);
    }
  });
  std::sort(draws.begin(), draws.end());
  return draws;
}

TestReport tail_independence_test(const Sample& s, const TailContext& ctx,
                                  double nu1, double nu2, int reps,
                                  std::uint64_t seed, double level,
                                  TestMethod method, int threads, int gauss_m) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("tail_independence_test: level in (0,1)");
  }
  TestReport report;
  report.omega = omega_statistic(s, ctx, nu1, nu2);
  const auto null_draws =
      null_distribution(s.n(), ctx, nu1, nu2, reps, seed, method, threads, gauss_m);
  const auto ge = null_draws.end() -
                  std::lower_bound(null_draws.begin(), null_draws.end(),
                                   report.omega);
  report.p_value =
      (1.0 + static_cast<double>(ge)) / (static_cast<double>(reps) + 1.0);
  report.reject = report.p_value <= level;
  report.level = level;
  report.reps = reps;
  report.method = method;
  report.nu1 = nu1;
  report.nu2 = nu2;
  report.ctx = ctx;
  return report;
}

}  // namespace tailcop
