#pragma once

#include <cstdint>
#include <vector>

#include "tailcop/models.hpp"
#include "tailcop/sample.hpp"

namespace tailcop {

// ===========================================================================
// Kernel-smoothed empirical distribution and the smoothed local copula
// process. The smoothing scale follows K(a_n^{-1/2} x, a_n^{-1/2} y): kernel
// offsets are divided by sqrt(a_n) with a_n = c n^{-(1/4+delta)}.
// ===========================================================================

enum class KernelKind { ProductEpanechnikov, ProductGaussian };

struct KernelSpec {
  KernelKind kind = KernelKind::ProductEpanechnikov;
  double c = 1.0;        // bandwidth prefactor, > 0
  double delta = 0.05;   // bandwidth exponent offset, > 0

  // a_n = c * n^{-(1/4+delta)}
  double bandwidth(std::int64_t n) const;
};

KernelSpec make_kernel(KernelKind kind, double c = 1.0, double delta = 0.05);

// One-dimensional integrated kernel K1; the bivariate K(x,y) = K1(x) K1(y).
// Epanechnikov: K1(x) = 1/2 + 3x/4 - x^3/4 on [-1,1], clamped to {0,1}
// outside. Gaussian: the standard normal cdf.
double integrated_kernel_1d(KernelKind kind, double x);
double integrated_kernel(const KernelSpec& spec, double x, double y);

// T-hat_n(u,v) = (1/n) sum_i K((u-U_i)/s, (v-V_i)/s) with s = sqrt(a_n),
// a_n evaluated at n_for_bandwidth.
double smoothed_ecdf(const Sample& s, const KernelSpec& spec,
                     std::int64_t n_for_bandwidth, double u, double v);

// Batch evaluation on a Cartesian grid xs x ys; returns row-major matrix
// indexed [ix * ys.size() + iy]. For the Epanechnikov kernel this runs in
// O(|ys| (n + |xs| log n)) via exact piecewise-cubic prefix sums; the
// Gaussian kernel falls back to direct summation.
std::vector<double> smoothed_ecdf_grid(const Sample& s, const KernelSpec& spec,
                                       std::int64_t n_for_bandwidth,
                                       const std::vector<double>& xs,
                                       const std::vector<double>& ys);

// sqrt(n) (C-hat_n(u w, v w) - (u w)(v w)) where C-hat_n composes the
// smoothed ecdf with the unsmoothed empirical marginal quantiles.
double smoothed_tail_copula_process(const Sample& s, const KernelSpec& spec,
                                    const TailContext& ctx, double u, double v);

// Sup of |G-hat_n* - alpha_{n;0}*| over the pavement evaluation set used by
// sup_approximation_gap.
double sup_smoothed_gap(const Sample& s, const KernelSpec& spec,
                        const TailContext& ctx, int grid_m = 512,
                        int max_axis = 4096);

}  // namespace tailcop
