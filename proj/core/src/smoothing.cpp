#include "tailcop/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "axis_sweep.hpp"
#include "tailcop/math.hpp"

namespace tailcop {

double KernelSpec::bandwidth(std::int64_t n) const {
  return c * std::pow(static_cast<double>(n), -(0.25 + delta));
}

KernelSpec make_kernel(KernelKind kind, double c, double delta) {
  if (!(c > 0.0)) throw std::invalid_argument("kernel bandwidth c must be > 0");
  if (!(delta > 0.0)) {
    throw std::invalid_argument("kernel bandwidth delta must be > 0");
  }
  return KernelSpec{kind, c, delta};
}

double integrated_kernel_1d(KernelKind kind, double x) {
  switch (kind) {
    case KernelKind::ProductEpanechnikov:
      if (x <= -1.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return 0.5 + 0.25 * (3.0 * x - x * x * x);
    case KernelKind::ProductGaussian:
      return 0.5 * std::erfc(-x / std::sqrt(2.0));
  }
  return 0.0;
}

double integrated_kernel(const KernelSpec& spec, double x, double y) {
  return integrated_kernel_1d(spec.kind, x) * integrated_kernel_1d(spec.kind, y);
}

namespace {

double kernel_scale(const KernelSpec& spec, std::int64_t n_for_bandwidth) {
  // offsets enter the kernel divided by a_n^{1/2}
  return std::sqrt(spec.bandwidth(n_for_bandwidth));
}

void require_unit_square(double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("smoothed_ecdf: (u,v) outside the unit square");
  }
}

// Row evaluator for the Epanechnikov batch path. For a fixed first argument
// x0 the weights g_j = K1((x0 - U_j)/s) are accumulated in V-sorted order as
// prefix sums of g * V^k, k = 0..3; the piecewise-cubic kernel then reduces
// every evaluation in the second coordinate to two binary searches.
class EpanechnikovRow {
 public:
  EpanechnikovRow(const Sample& smp, double scale)
      : smp_(smp), scale_(scale), n_(smp.n()) {
    u_of_sv_.resize(static_cast<std::size_t>(n_));
    // ru of the point with rv == j+1, from the rank permutation
    for (std::int64_t r = 1; r <= n_; ++r) {
      const std::int32_t vr = smp.rv_by_ru[static_cast<std::size_t>(r) - 1];
      u_of_sv_[static_cast<std::size_t>(vr) - 1] =
          smp.su[static_cast<std::size_t>(r) - 1];
    }
    for (int k = 0; k < 4; ++k) pre_[k].resize(static_cast<std::size_t>(n_) + 1);
  }

  void set_row(double x0) {
    for (int k = 0; k < 4; ++k) pre_[k][0] = 0.0;
    for (std::int64_t j = 0; j < n_; ++j) {
      const double g = integrated_kernel_1d(
          KernelKind::ProductEpanechnikov,
          (x0 - u_of_sv_[static_cast<std::size_t>(j)]) / scale_);
      const double vj = smp_.sv[static_cast<std::size_t>(j)];
      double p = g;
      for (int k = 0; k < 4; ++k) {
        pre_[k][static_cast<std::size_t>(j) + 1] =
            pre_[k][static_cast<std::size_t>(j)] + p;
        p *= vj;
      }
    }
  }

  // (1/n) sum_j g_j K1((y0 - V_j)/s)
  double eval(double y0) const {
    const auto& sv = smp_.sv;
    const std::size_t lo =
        std::upper_bound(sv.begin(), sv.end(), y0 - scale_) - sv.begin();
    const std::size_t hi =
        std::lower_bound(sv.begin(), sv.end(), y0 + scale_) - sv.begin();
    double total = pre_[0][lo];  // saturated kernels
    const double w0 = pre_[0][hi] - pre_[0][lo];
    if (w0 != 0.0) {
      const double w1 = pre_[1][hi] - pre_[1][lo];
      const double w2 = pre_[2][hi] - pre_[2][lo];
      const double w3 = pre_[3][hi] - pre_[3][lo];
      const double inv = 1.0 / scale_;
      const double lin = y0 * w0 - w1;
      const double cub = y0 * y0 * y0 * w0 - 3.0 * y0 * y0 * w1 +
                         3.0 * y0 * w2 - w3;
      total += 0.5 * w0 + 0.75 * lin * inv - 0.25 * cub * inv * inv * inv;
    }
    return total / static_cast<double>(n_);
  }

 private:
  const Sample& smp_;
  double scale_;
  std::int64_t n_;
  std::vector<double> u_of_sv_;
  std::vector<double> pre_[4];
};

}  // namespace

double smoothed_ecdf(const Sample& s, const KernelSpec& spec,
                     std::int64_t n_for_bandwidth, double u, double v) {
  require_unit_square(u, v);
  const double scale = kernel_scale(spec, n_for_bandwidth);
  const std::int64_t n = s.n();
  double total = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    total += integrated_kernel_1d(spec.kind,
                                  (u - s.u[static_cast<std::size_t>(i)]) / scale) *
             integrated_kernel_1d(spec.kind,
                                  (v - s.v[static_cast<std::size_t>(i)]) / scale);
  }
  return total / static_cast<double>(n);
}

std::vector<double> smoothed_ecdf_grid(const Sample& s, const KernelSpec& spec,
                                       std::int64_t n_for_bandwidth,
                                       const std::vector<double>& xs,
                                       const std::vector<double>& ys) {
  const std::size_t nx = xs.size(), ny = ys.size();
  std::vector<double> out(nx * ny);
  if (spec.kind == KernelKind::ProductEpanechnikov) {
    EpanechnikovRow row(s, kernel_scale(spec, n_for_bandwidth));
    for (std::size_t ix = 0; ix < nx; ++ix) {
      row.set_row(xs[ix]);
      for (std::size_t iy = 0; iy < ny; ++iy) {
        out[ix * ny + iy] = row.eval(ys[iy]);
      }
    }
  } else {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      for (std::size_t iy = 0; iy < ny; ++iy) {
        out[ix * ny + iy] = smoothed_ecdf(s, spec, n_for_bandwidth, xs[ix], ys[iy]);
      }
    }
  }
  return out;
}

double smoothed_tail_copula_process(const Sample& s, const KernelSpec& spec,
                                    const TailContext& ctx, double u, double v) {
  require_unit_square(u, v);
  const double su_ = u * ctx.window, tv = v * ctx.window;
  const double qu = quantile_marginal(s, Margin::U, su_);
  const double qv = quantile_marginal(s, Margin::V, tv);
  return std::sqrt(static_cast<double>(s.n())) *
         (smoothed_ecdf(s, spec, ctx.n, qu, qv) - su_ * tv);
}

double sup_smoothed_gap(const Sample& s, const KernelSpec& spec,
                        const TailContext& ctx, int grid_m, int max_axis) {
  const double w = ctx.window;
  const auto cx = detail::make_pavement_coords(s.n(), w, s.su, grid_m, max_axis);
  const auto cy = detail::make_pavement_coords(s.n(), w, s.sv, grid_m, max_axis);
  const auto ax = detail::build_axis(cx, w, s.su, s.n());
  const auto ay = detail::build_axis(cy, w, s.sv, s.n());
  const double sn = std::sqrt(static_cast<double>(s.n()));
  const double inv_n = 1.0 / static_cast<double>(s.n());

  // Ghat* - alpha0* = sqrt(n)(That(qu,qv) - T_n(uw,vw)) + uw a_V + vw a_U
  const bool epan = (spec.kind == KernelKind::ProductEpanechnikov);
  EpanechnikovRow row(s, kernel_scale(spec, ctx.n));
  double best = 0.0;
  detail::sweep_joint_counts(
      s, ax, ay, false, true,
      [&](std::size_t ix, const std::int64_t*, const std::int64_t* pv) {
        if (epan) row.set_row(ax[ix].q);
        for (std::size_t iy = 0; iy < ay.size(); ++iy) {
          const double that =
              epan ? row.eval(ay[iy].q)
                   : smoothed_ecdf(s, spec, ctx.n, ax[ix].q, ay[iy].q);
          const double gap =
              sn * (that - static_cast<double>(pv[iy]) * inv_n) +
              ax[ix].s * ay[iy].alpha + ay[iy].s * ax[ix].alpha;
          best = std::max(best, std::fabs(gap));
        }
      });
  return best;
}

}  // namespace tailcop
