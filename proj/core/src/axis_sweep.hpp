#pragma once

// Internal machinery for batch evaluation of empirical processes on
// Cartesian evaluation grids over the pavement. Joint counts are streamed
// row by row: the per-axis integer thresholds are nondecreasing along each
// axis, so every observation enters the running column histogram exactly
// once and each row costs one prefix pass.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tailcop/math.hpp"
#include "tailcop/sample.hpp"

namespace tailcop::detail {

struct AxisPoint {
  double x = 0.0;            // pavement coordinate in [0,1]
  double s = 0.0;            // scaled coordinate x * w
  std::int64_t cnt_value = 0;  // #{values <= s} on this margin
  std::int64_t rk_ceil = 0;    // ceil(n s), clamped
  double q = 0.0;            // empirical quantile at s
  double alpha = 0.0;        // sqrt(n) (cnt_value/n - s)
};

// Evaluation coordinates: uniform lattice, scaled jump coordinates of the
// step-function parts (data values and the rank grid), left-limit probes.
// Jumps are stride-subsampled when an axis would exceed max_axis points.
inline std::vector<double> make_pavement_coords(
    std::int64_t n, double w, const std::vector<double>& sorted_vals,
    int grid_m, int max_axis) {
  std::vector<double> jumps;
  // data coordinates scaled into the pavement
  for (double val : sorted_vals) {
    if (val > w) break;
    jumps.push_back(val / w);
  }
  // rank-grid coordinates i/(n w) = i/k_n
  const double nw = static_cast<double>(n) * w;
  const auto imax = static_cast<std::int64_t>(std::floor(nw + 1e-9));
  for (std::int64_t i = 1; i <= imax; ++i) {
    jumps.push_back(static_cast<double>(i) / nw);
  }
  std::sort(jumps.begin(), jumps.end());
  jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());

  const std::size_t lattice_pts = static_cast<std::size_t>(grid_m) + 1;
  const std::size_t budget =
      (static_cast<std::size_t>(max_axis) / 2 > lattice_pts)
          ? static_cast<std::size_t>(max_axis) / 2 - lattice_pts
          : 0;
  if (jumps.size() > budget) {
    std::vector<double> kept;
    if (budget > 0) {
      kept.reserve(budget);
      for (std::size_t k = 1; k <= budget; ++k) {
        kept.push_back(jumps[k * jumps.size() / budget - 1]);
      }
    }
    jumps.swap(kept);
  }

  std::vector<double> coords;
  coords.reserve(2 * (lattice_pts + jumps.size()));
  for (int i = 0; i <= grid_m; ++i) {
    coords.push_back(static_cast<double>(i) / grid_m);
  }
  coords.insert(coords.end(), jumps.begin(), jumps.end());
  const std::size_t base = coords.size();
  for (std::size_t i = 0; i < base; ++i) {
    const double probe = coords[i] - 1e-9;  // left limits
    if (probe > 0.0) coords.push_back(probe);
  }
  coords.push_back(1.0);
  std::sort(coords.begin(), coords.end());
  coords.erase(std::remove_if(coords.begin(), coords.end(),
                              [](double c) { return c < 0.0 || c > 1.0; }),
               coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  return coords;
}

inline std::vector<AxisPoint> build_axis(const std::vector<double>& coords,
                                         double w,
                                         const std::vector<double>& sorted_vals,
                                         std::int64_t n) {
  const double sqrtn = std::sqrt(static_cast<double>(n));
  std::vector<AxisPoint> axis;
  axis.reserve(coords.size());
  for (double x : coords) {
    AxisPoint p;
    p.x = x;
    p.s = x * w;
    p.cnt_value = std::upper_bound(sorted_vals.begin(), sorted_vals.end(), p.s) -
                  sorted_vals.begin();
    p.rk_ceil = rank_ceil(p.s, n);
    p.q = (p.rk_ceil == 0) ? 0.0
                           : sorted_vals[static_cast<std::size_t>(p.rk_ceil) - 1];
    p.alpha = sqrtn * (static_cast<double>(p.cnt_value) / static_cast<double>(n) -
                       p.s);
    axis.push_back(p);
  }
  return axis;
}

// Streams joint counts over the grid. For each outer index ix the visitor
// receives prefix counts over the inner axis for the requested families:
//   ceil:  #{i : ru_i <= rk_ceil(s_x),  rv_i <= rk_ceil(t_y)}   (C_n counts)
//   value: #{i : ru_i <= cnt_value(s_x), rv_i <= cnt_value(t_y)} (T_n counts)
// Rank thresholds are equivalent to value thresholds because ranks refine
// the value order even under ties.
template <class Visitor>
void sweep_joint_counts(const Sample& smp, const std::vector<AxisPoint>& ax,
                        const std::vector<AxisPoint>& ay, bool want_ceil,
                        bool want_value, Visitor&& visit) {
  const std::int64_t n = smp.n();
  const std::size_t ny = ay.size();

  // Column bin per v-rank: first inner index with threshold >= rank.
  auto make_ybin = [&](bool ceil_family) {
    std::vector<std::int32_t> ybin(static_cast<std::size_t>(n) + 1, 0);
    std::size_t y = 0;
    for (std::int64_t r = 1; r <= n; ++r) {
      while (y < ny && (ceil_family ? ay[y].rk_ceil : ay[y].cnt_value) < r) ++y;
      ybin[static_cast<std::size_t>(r)] =
          static_cast<std::int32_t>(y);  // ny means "beyond all columns"
    }
    return ybin;
  };

  std::vector<std::int32_t> ybin_c, ybin_v;
  std::vector<std::int64_t> cnt_c, cnt_v, pref_c, pref_v;
  if (want_ceil) {
    ybin_c = make_ybin(true);
    cnt_c.assign(ny + 1, 0);
    pref_c.assign(ny, 0);
  }
  if (want_value) {
    ybin_v = make_ybin(false);
    cnt_v.assign(ny + 1, 0);
    pref_v.assign(ny, 0);
  }

  std::int64_t next_c = 1, next_v = 1;
  for (std::size_t ix = 0; ix < ax.size(); ++ix) {
    if (want_ceil) {
      const std::int64_t lim = ax[ix].rk_ceil;
      for (; next_c <= lim; ++next_c) {
        const std::int32_t vr = smp.rv_by_ru[static_cast<std::size_t>(next_c) - 1];
        ++cnt_c[static_cast<std::size_t>(ybin_c[static_cast<std::size_t>(vr)])];
      }
      std::int64_t acc = 0;
      for (std::size_t y = 0; y < ny; ++y) {
        acc += cnt_c[y];
        pref_c[y] = acc;
      }
    }
    if (want_value) {
      const std::int64_t lim = ax[ix].cnt_value;
      for (; next_v <= lim; ++next_v) {
        const std::int32_t vr = smp.rv_by_ru[static_cast<std::size_t>(next_v) - 1];
        ++cnt_v[static_cast<std::size_t>(ybin_v[static_cast<std::size_t>(vr)])];
      }
      std::int64_t acc = 0;
      for (std::size_t y = 0; y < ny; ++y) {
        acc += cnt_v[y];
        pref_v[y] = acc;
      }
    }
    visit(ix, want_ceil ? pref_c.data() : nullptr,
          want_value ? pref_v.data() : nullptr);
  }
}

}  // namespace tailcop::detail
