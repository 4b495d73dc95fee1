#include "tailcop/processes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "axis_sweep.hpp"
#include "tailcop/math.hpp"

namespace tailcop {

namespace {

double sqrt_n(const Sample& s) { return std::sqrt(static_cast<double>(s.n())); }

// #{i : U_i <= x, V_i <= y}
std::int64_t joint_count_values(const Sample& s, double x, double y) {
  std::int64_t cnt = 0;
  const std::size_t n = s.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    cnt += (s.u[i] <= x && s.v[i] <= y) ? 1 : 0;
  }
  return cnt;
}

// #{i : ru_i <= a, rv_i <= b}
std::int64_t joint_count_ranks(const Sample& s, std::int64_t a, std::int64_t b) {
  std::int64_t cnt = 0;
  for (std::int64_t r = 0; r < a; ++r) {
    cnt += (s.rv_by_ru[static_cast<std::size_t>(r)] <= b) ? 1 : 0;
  }
  return cnt;
}

double alpha_joint_at(const Sample& s, double x, double y) {
  return sqrt_n(s) * (static_cast<double>(joint_count_values(s, x, y)) /
                          static_cast<double>(s.n()) -
                      x * y);
}

double alpha_margin_at(const Sample& s, Margin m, double x) {
  return sqrt_n(s) * (ecdf_margin(s, m, x) - x);
}

double beta_margin_at(const Sample& s, Margin m, double p) {
  return sqrt_n(s) * (quantile_marginal(s, m, p) - p);
}

// C_n on scaled arguments through the rank thresholds.
double copula_count_at(const Sample& s, double p, double q) {
  if (p <= 0.0 || q <= 0.0) return 0.0;
  const std::int64_t n = s.n();
  return static_cast<double>(
             joint_count_ranks(s, rank_ceil(p, n), rank_ceil(q, n))) /
         static_cast<double>(n);
}

const TailContext& need_ctx(const TailContext* ctx, const char* kind) {
  if (ctx == nullptr) {
    throw std::invalid_argument(std::string(kind) +
                                " requires a TailContext");
  }
  return *ctx;
}

const CopulaModel& need_model(const CopulaModel* model, const char* kind) {
  if (model == nullptr) {
    throw std::invalid_argument(std::string(kind) + " requires a CopulaModel");
  }
  return *model;
}

void require_unit_square(double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("eval_process: (u,v) outside the unit square");
  }
}

// --------------------------------------------------------------------------
// Exact univariate sups from the jump structure
// --------------------------------------------------------------------------

// sup_{p in [0,w]} |sqrt(n) (Q(p) - p)| where Q is the empirical quantile.
double sup_abs_beta_margin(const Sample& s, Margin m, double w) {
  const auto& sorted = (m == Margin::U) ? s.su : s.sv;
  const std::int64_t n = s.n();
  const double sn = sqrt_n(s);
  double best = 0.0;  // p = 0 gives 0 by the quantile convention
  // On (i/n, min((i+1)/n, w)] the quantile equals sorted[i]; the summand is
  // linear in p, so probe both segment ends.
  for (std::int64_t i = 0; static_cast<double>(i) / n < w && i < n; ++i) {
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = std::min(static_cast<double>(i + 1) / n, w);
    const double q = sorted[static_cast<std::size_t>(i)];
    best = std::max(best, std::fabs(sn * (q - lo)));
    best = std::max(best, std::fabs(sn * (q - hi)));
  }
  return best;
}

// sup_{x in [0,w]} |sqrt(n) (F_n(x) - x)|.
double sup_abs_alpha_margin(const Sample& s, Margin m, double w) {
  const auto& sorted = (m == Margin::U) ? s.su : s.sv;
  const std::int64_t n = s.n();
  const double sn = sqrt_n(s);
  double best = 0.0;
  std::int64_t i = 0;
  while (i < n && sorted[static_cast<std::size_t>(i)] <= w) {
    std::int64_t j = i;
    const double x = sorted[static_cast<std::size_t>(i)];
    while (j < n && sorted[static_cast<std::size_t>(j)] == x) ++j;
    const double before = static_cast<double>(i) / static_cast<double>(n);
    const double at = static_cast<double>(j) / static_cast<double>(n);
    best = std::max(best, std::fabs(sn * (before - x)));  // left limit
    best = std::max(best, std::fabs(sn * (at - x)));
    i = j;
  }
  const double fn_w = static_cast<double>(i) / static_cast<double>(n);
  best = std::max(best, std::fabs(sn * (fn_w - w)));
  return best;
}

}  // namespace

double eval_process(const Sample& s, ProcessKind kind, const TailContext* ctx,
                    const CopulaModel* model, double u, double v) {
  require_unit_square(u, v);
  const double sn = sqrt_n(s);
  switch (kind) {
    case ProcessKind::AlphaJoint:
      return alpha_joint_at(s, u, v);
    case ProcessKind::AlphaU:
      return alpha_margin_at(s, Margin::U, u);
    case ProcessKind::AlphaV:
      return alpha_margin_at(s, Margin::V, v);
    case ProcessKind::BetaU:
      return beta_margin_at(s, Margin::U, u);
    case ProcessKind::BetaV:
      return beta_margin_at(s, Margin::V, v);
    case ProcessKind::AlphaJointStar: {
      const auto& c = need_ctx(ctx, "AlphaJointStar");
      return alpha_joint_at(s, u * c.window, v * c.window);
    }
    case ProcessKind::AlphaUStar: {
      const auto& c = need_ctx(ctx, "AlphaUStar");
      return alpha_margin_at(s, Margin::U, u * c.window) / std::sqrt(c.window);
    }
    case ProcessKind::AlphaVStar: {
      const auto& c = need_ctx(ctx, "AlphaVStar");
      return alpha_margin_at(s, Margin::V, v * c.window) / std::sqrt(c.window);
    }
    case ProcessKind::BetaUStar: {
      const auto& c = need_ctx(ctx, "BetaUStar");
      return beta_margin_at(s, Margin::U, u * c.window) / std::sqrt(c.window);
    }
    case ProcessKind::BetaVStar: {
      const auto& c = need_ctx(ctx, "BetaVStar");
      return beta_margin_at(s, Margin::V, v * c.window) / std::sqrt(c.window);
    }
    case ProcessKind::GStar: {
      const auto& c = need_ctx(ctx, "GStar");
      const double su_ = u * c.window, tv = v * c.window;
      return sn * (copula_count_at(s, su_, tv) - su_ * tv);
    }
    case ProcessKind::AlphaZeroStar: {
      const auto& c = need_ctx(ctx, "AlphaZeroStar");
      const double su_ = u * c.window, tv = v * c.window;
      return alpha_joint_at(s, su_, tv) - su_ * alpha_margin_at(s, Margin::V, tv) -
             tv * alpha_margin_at(s, Margin::U, su_);
    }
    case ProcessKind::GStarStar: {
      const auto& c = need_ctx(ctx, "GStarStar");
      const auto& mdl = need_model(model, "GStarStar");
      const double su_ = u * c.window, tv = v * c.window;
      return sn * (copula_count_at(s, su_, tv) - copula_eval(mdl, su_, tv));
    }
    case ProcessKind::AlphaZeroStarStar: {
      const auto& c = need_ctx(ctx, "AlphaZeroStarStar");
      const auto& mdl = need_model(model, "AlphaZeroStarStar");
      const double su_ = u * c.window, tv = v * c.window;
      const double tilde =
          sn * (static_cast<double>(joint_count_values(s, su_, tv)) /
                    static_cast<double>(s.n()) -
                copula_eval(mdl, su_, tv));
      return tilde -
             copula_eval(mdl, su_, tv, Deriv::Dv) *
                 alpha_margin_at(s, Margin::V, tv) -
             copula_eval(mdl, su_, tv, Deriv::Du) *
                 alpha_margin_at(s, Margin::U, su_);
    }
  }
  return 0.0;
}

ResidualRecord decomposition(const Sample& s, const TailContext& ctx, double u,
                             double v) {
  require_unit_square(u, v);
  const double sn = sqrt_n(s);
  const double su_ = u * ctx.window, tv = v * ctx.window;
  const double qu = quantile_marginal(s, Margin::U, su_);
  const double qv = quantile_marginal(s, Margin::V, tv);
  // T_n at the quantile point equals C_n at (uw, vw) by the rank identity.
  const double tn_q = copula_count_at(s, su_, tv);
  ResidualRecord r;
  r.r_zero = sn * (tn_q - qu * qv) - alpha_joint_at(s, su_, tv);
  r.r_u = beta_margin_at(s, Margin::U, su_) + alpha_margin_at(s, Margin::U, su_);
  r.r_v = beta_margin_at(s, Margin::V, tv) + alpha_margin_at(s, Margin::V, tv);
  r.r_cross = beta_margin_at(s, Margin::U, su_) *
              beta_margin_at(s, Margin::V, tv) / sn;
  return r;
}

RateNormalizer rate_normalizer(std::int64_t n, double kn) {
  RateNormalizer r;
  r.n = n;
  r.kn = kn;
  const double nd = static_cast<double>(n);
  r.value = std::sqrt(nd) * std::pow(kn, -0.25) * std::pow(log2(nd), -0.25) /
            std::sqrt(log1(nd));
  return r;
}

double bahadur_kiefer_rate(std::int64_t n, double kn) {
  const double nd = static_cast<double>(n);
  return std::pow(kn, 0.25) * std::pow(log2(nd), 0.25) *
         std::sqrt(log1(kn) + 2.0 * log2(nd)) / std::sqrt(nd);
}

// ---------------------------------------------------------------------------
// Sup-norms over the pavement
// ---------------------------------------------------------------------------

namespace {

struct GridEnv {
  const Sample* s = nullptr;
  std::vector<detail::AxisPoint> ax, ay;
  double sn = 0.0;
  double inv_n = 0.0;
};

GridEnv make_env(const Sample& s, double w, int grid_m, int max_axis) {
  GridEnv env;
  env.s = &s;
  const auto cx = detail::make_pavement_coords(s.n(), w, s.su, grid_m, max_axis);
  const auto cy = detail::make_pavement_coords(s.n(), w, s.sv, grid_m, max_axis);
  env.ax = detail::build_axis(cx, w, s.su, s.n());
  env.ay = detail::build_axis(cy, w, s.sv, s.n());
  env.sn = sqrt_n(s);
  env.inv_n = 1.0 / static_cast<double>(s.n());
  return env;
}

// Generic sup over the grid; Value(ix, iy, prefC, prefV) -> double.
template <class Value>
double sweep_sup(const GridEnv& env, bool want_ceil, bool want_value,
                 Value&& value) {
  double best = 0.0;
  detail::sweep_joint_counts(
      *env.s, env.ax, env.ay, want_ceil, want_value,
      [&](std::size_t ix, const std::int64_t* pc, const std::int64_t* pv) {
        const std::size_t ny = env.ay.size();
        for (std::size_t iy = 0; iy < ny; ++iy) {
          best = std::max(best, std::fabs(value(ix, iy, pc, pv)));
        }
      });
  return best;
}

}  // namespace

double sup_norm_window(const Sample& s, ProcessKind kind,
                       const TailContext* ctx, const CopulaModel* model,
                       int grid_m, int max_axis) {
  if (grid_m < 2) throw std::invalid_argument("sup_norm_window: grid_m >= 2");
  const bool starred = !(kind == ProcessKind::AlphaJoint ||
                         kind == ProcessKind::AlphaU ||
                         kind == ProcessKind::AlphaV ||
                         kind == ProcessKind::BetaU || kind == ProcessKind::BetaV);
  const double w = starred ? need_ctx(ctx, "starred sup").window : 1.0;

  switch (kind) {
    case ProcessKind::AlphaU:
      return sup_abs_alpha_margin(s, Margin::U, 1.0);
    case ProcessKind::AlphaV:
      return sup_abs_alpha_margin(s, Margin::V, 1.0);
    case ProcessKind::BetaU:
      return sup_abs_beta_margin(s, Margin::U, 1.0);
    case ProcessKind::BetaV:
      return sup_abs_beta_margin(s, Margin::V, 1.0);
    case ProcessKind::AlphaUStar:
      return sup_abs_alpha_margin(s, Margin::U, w) / std::sqrt(w);
    case ProcessKind::AlphaVStar:
      return sup_abs_alpha_margin(s, Margin::V, w) / std::sqrt(w);
    case ProcessKind::BetaUStar:
      return sup_abs_beta_margin(s, Margin::U, w) / std::sqrt(w);
    case ProcessKind::BetaVStar:
      return sup_abs_beta_margin(s, Margin::V, w) / std::sqrt(w);
    default:
      break;
  }

  const GridEnv env = make_env(s, w, grid_m, max_axis);
  const auto& ax = env.ax;
  const auto& ay = env.ay;
  const double sn = env.sn;
  const double inv_n = env.inv_n;

  switch (kind) {
    case ProcessKind::AlphaJoint:
    case ProcessKind::AlphaJointStar:
      return sweep_sup(env, false, true,
                       [&](std::size_t ix, std::size_t iy, const std::int64_t*,
                           const std::int64_t* pv) {
                         return sn * (static_cast<double>(pv[iy]) * inv_n -
                                      ax[ix].s * ay[iy].s);
                       });
    case ProcessKind::GStar:
      return sweep_sup(env, true, false,
                       [&](std::size_t ix, std::size_t iy, const std::int64_t* pc,
                           const std::int64_t*) {
                         return sn * (static_cast<double>(pc[iy]) * inv_n -
                                      ax[ix].s * ay[iy].s);
                       });
    case ProcessKind::GStarStar: {
      const auto& mdl = need_model(model, "GStarStar");
      return sweep_sup(env, true, false,
                       [&](std::size_t ix, std::size_t iy, const std::int64_t* pc,
                           const std::int64_t*) {
                         return sn * (static_cast<double>(pc[iy]) * inv_n -
                                      copula_eval(mdl, ax[ix].s, ay[iy].s));
                       });
    }
    case ProcessKind::AlphaZeroStar:
      return sweep_sup(env, false, true,
                       [&](std::size_t ix, std::size_t iy, const std::int64_t*,
                           const std::int64_t* pv) {
                         return sn * (static_cast<double>(pv[iy]) * inv_n -
                                      ax[ix].s * ay[iy].s) -
                                ax[ix].s * ay[iy].alpha - ay[iy].s * ax[ix].alpha;
                       });
    case ProcessKind::AlphaZeroStarStar: {
      const auto& mdl = need_model(model, "AlphaZeroStarStar");
      return sweep_sup(
          env, false, true,
          [&](std::size_t ix, std::size_t iy, const std::int64_t*,
              const std::int64_t* pv) {
            const double su_ = ax[ix].s, tv = ay[iy].s;
            return sn * (static_cast<double>(pv[iy]) * inv_n -
                         copula_eval(mdl, su_, tv)) -
                   copula_eval(mdl, su_, tv, Deriv::Dv) * ay[iy].alpha -
                   copula_eval(mdl, su_, tv, Deriv::Du) * ax[ix].alpha;
          });
    }
    default:
      throw std::invalid_argument("sup_norm_window: unsupported kind");
  }
}

double sup_approximation_gap(const Sample& s, const TailContext& ctx,
                             const CopulaModel* model, int grid_m,
                             int max_axis) {
  const GridEnv env = make_env(s, ctx.window, grid_m, max_axis);
  const auto& ax = env.ax;
  const auto& ay = env.ay;
  const double sn = env.sn;
  const double inv_n = env.inv_n;
  // G* - alpha0* = sqrt(n)(C_n - T_n)(uw,vw) + cV alpha_V(vw) + cU alpha_U(uw)
  // with cV = uw, cU = vw in the independence-centered case and the copula
  // partials dC/dv, dC/du in the model-centered case.
  return sweep_sup(env, true, true,
                   [&](std::size_t ix, std::size_t iy, const std::int64_t* pc,
                       const std::int64_t* pv) {
                     const double su_ = ax[ix].s, tv = ay[iy].s;
                     const double cv =
                         model ? copula_eval(*model, su_, tv, Deriv::Dv) : su_;
                     const double cu =
                         model ? copula_eval(*model, su_, tv, Deriv::Du) : tv;
                     return sn * (static_cast<double>(pc[iy] - pv[iy]) * inv_n) +
                            cv * ay[iy].alpha + cu * ax[ix].alpha;
                   });
}

// ---------------------------------------------------------------------------
// Oscillation modulus
// ---------------------------------------------------------------------------

namespace {

std::vector<double> oscillation_axis(const std::vector<double>& coords,
                                     int grid_m, bool augment) {
  std::vector<double> axis;
  axis.reserve(static_cast<std::size_t>(grid_m) + 1 +
               (augment ? 2 * coords.size() : 0));
  for (int i = 0; i <= grid_m; ++i) {
    axis.push_back(static_cast<double>(i) / grid_m);
  }
  if (augment) {
    for (double c : coords) {
      axis.push_back(c);
      if (c - 1e-9 > 0.0) axis.push_back(c - 1e-9);
    }
  }
  std::sort(axis.begin(), axis.end());
  axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  return axis;
}

}  // namespace

double oscillation_modulus(const Sample& s, double h, int grid_m) {
  if (!(h > 0.0 && h < 1.0)) {
    throw std::domain_error("oscillation_modulus: h outside (0,1)");
  }
  const std::int64_t n = s.n();
  const bool augment = n <= 200;
  const auto xs = oscillation_axis(s.su, grid_m, augment);
  const auto ys = oscillation_axis(s.sv, grid_m, augment);
  const std::size_t nx = xs.size(), ny = ys.size();

  // Inclusive counts M[x][y] = #{i : U_i <= xs[x], V_i <= ys[y]}.
  std::vector<std::int32_t> m(nx * ny, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t bx =
        std::lower_bound(xs.begin(), xs.end(), s.u[static_cast<std::size_t>(i)]) -
        xs.begin();
    const std::size_t by =
        std::lower_bound(ys.begin(), ys.end(), s.v[static_cast<std::size_t>(i)]) -
        ys.begin();
    if (bx < nx && by < ny) ++m[bx * ny + by];
  }
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 1; y < ny; ++y) m[x * ny + y] += m[x * ny + y - 1];
  }
  for (std::size_t x = 1; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) m[x * ny + y] += m[(x - 1) * ny + y];
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  double min_gap = 1.0;
  for (std::size_t y = 1; y < ny; ++y) min_gap = std::min(min_gap, ys[y] - ys[y - 1]);
  double best = 0.0;
  std::vector<double> g(ny);
  std::deque<std::size_t> qmax, qmin;
  for (std::size_t x1 = 0; x1 < nx; ++x1) {
    for (std::size_t x2 = x1 + 1; x2 < nx; ++x2) {
      const double du = xs[x2] - xs[x1];
      const double vmax = h / du;
      if (vmax < min_gap) continue;  // only zero-height windows remain
      // g(y) = empirical mass of the strip up to y, minus du * y
      for (std::size_t y = 0; y < ny; ++y) {
        g[y] = static_cast<double>(m[x2 * ny + y] - m[x1 * ny + y]) * inv_n -
               du * ys[y];
      }
      qmax.clear();
      qmin.clear();
      std::size_t r = 0;
      for (std::size_t y1 = 0; y1 < ny; ++y1) {
        while (r < ny && ys[r] - ys[y1] <= vmax) {
          while (!qmax.empty() && g[qmax.back()] <= g[r]) qmax.pop_back();
          qmax.push_back(r);
          while (!qmin.empty() && g[qmin.back()] >= g[r]) qmin.pop_back();
          qmin.push_back(r);
          ++r;
        }
        while (!qmax.empty() && qmax.front() < y1) qmax.pop_front();
        while (!qmin.empty() && qmin.front() < y1) qmin.pop_front();
        if (!qmax.empty()) best = std::max(best, g[qmax.front()] - g[y1]);
        if (!qmin.empty()) best = std::max(best, g[y1] - g[qmin.front()]);
      }
    }
  }
  return std::sqrt(static_cast<double>(n)) * best;
}

// ---------------------------------------------------------------------------
// Bahadur-Kiefer
// ---------------------------------------------------------------------------

namespace {

double sup_alpha_plus_beta(const Sample& s, Margin m, double w) {
  const auto& sorted = (m == Margin::U) ? s.su : s.sv;
  const std::int64_t n = s.n();
  const double sn = std::sqrt(static_cast<double>(n));

  auto fn_at = [&](double x) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) -
                               sorted.begin()) /
           static_cast<double>(n);
  };
  auto quant_at = [&](double p) {
    const std::int64_t k = rank_ceil(p, n);
    return (k == 0) ? 0.0 : sorted[static_cast<std::size_t>(k) - 1];
  };

  std::vector<double> brk;
  brk.push_back(0.0);
  brk.push_back(w);
  for (double x : sorted) {
    if (x > w) break;
    brk.push_back(x);
  }
  const auto imax =
      static_cast<std::int64_t>(std::floor(static_cast<double>(n) * w + 1e-9));
  for (std::int64_t i = 1; i <= imax; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(n);
    if (p <= w) brk.push_back(p);
  }
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

  double best = 0.0;
  // Values at the breakpoints themselves (mixed one-sided limits).
  for (double b : brk) {
    best = std::max(best, std::fabs(sn * (fn_at(b) + quant_at(b) - 2.0 * b)));
  }
  // Between breakpoints the summand is linear with slope -2 sqrt(n); probe
  // both one-sided limits via the midpoint value.
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    const double mid = 0.5 * (brk[i] + brk[i + 1]);
    const double level = fn_at(mid) + quant_at(mid);
    best = std::max(best, std::fabs(sn * (level - 2.0 * brk[i])));
    best = std::max(best, std::fabs(sn * (level - 2.0 * brk[i + 1])));
  }
  return best;
}

}  // namespace

BahadurKiefer bahadur_kiefer(const Sample& s, const TailContext& ctx) {
  BahadurKiefer out;
  out.r_u = sup_alpha_plus_beta(s, Margin::U, ctx.window);
  out.r_v = sup_alpha_plus_beta(s, Margin::V, ctx.window);
  out.r_n = bahadur_kiefer_rate(ctx.n, ctx.kn);
  return out;
}

}  // namespace tailcop
