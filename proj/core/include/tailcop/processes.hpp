#pragma once

#include <cstdint>

#include "tailcop/models.hpp"
#include "tailcop/sample.hpp"

namespace tailcop {

// ===========================================================================
// Empirical and quantile processes, their tail-scaled versions on the
// pavement [0, k_n/n]^2, the proof decomposition residuals, sup-norms,
// the oscillation modulus and Bahadur-Kiefer statistics.
// ===========================================================================

enum class ProcessKind {
  AlphaJoint,     // sqrt(n) (T_n(u,v) - u v)
  AlphaU,         // sqrt(n) (U_n(u) - u)
  AlphaV,         // sqrt(n) (V_n(v) - v)
  BetaU,          // sqrt(n) (U_n^{-1}(u) - u)
  BetaV,          // sqrt(n) (V_n^{-1}(v) - v)
  AlphaJointStar, // AlphaJoint at (u w, v w)
  AlphaUStar,     // w^{-1/2} AlphaU(u w)
  AlphaVStar,     // w^{-1/2} AlphaV(v w)
  BetaUStar,      // w^{-1/2} BetaU(u w)
  BetaVStar,      // w^{-1/2} BetaV(v w)
  GStar,          // sqrt(n) (C_n(u w, v w) - (u w)(v w))
  AlphaZeroStar,  // AlphaJoint(uw,vw) - uw AlphaV(vw) - vw AlphaU(uw)
  GStarStar,          // sqrt(n) (C_n(uw,vw) - C(uw,vw)), model-centered
  AlphaZeroStarStar,  // model-centered AlphaZeroStar with dC/du, dC/dv weights
};

// Starred kinds need ctx; the ** kinds additionally need a model.
double eval_process(const Sample& s, ProcessKind kind, const TailContext* ctx,
                    const CopulaModel* model, double u, double v);

// Residuals of the G* - alpha0* decomposition at one point.
struct ResidualRecord {
  double r_zero = 0.0;   // alpha_n at quantile point minus alpha_n at (uw,vw)
  double r_u = 0.0;      // beta_U(uw) + alpha_U(uw)
  double r_v = 0.0;      // beta_V(vw) + alpha_V(vw)
  double r_cross = 0.0;  // n^{-1/2} beta_U(uw) beta_V(vw)
};
ResidualRecord decomposition(const Sample& s, const TailContext& ctx, double u,
                             double v);

// V_n = n^{1/2} k_n^{-1/4} (log2 n)^{-1/4} (log1 n)^{-1/2}.
struct RateNormalizer {
  std::int64_t n = 0;
  double kn = 0.0;
  double value = 0.0;
};
RateNormalizer rate_normalizer(std::int64_t n, double kn);

// r_n = n^{-1/2} k_n^{1/4} (log2 n)^{1/4} (log1(k_n) + 2 log2 n)^{1/2}.
double bahadur_kiefer_rate(std::int64_t n, double kn);

// Sup of |process| over an evaluation set: the uniform (grid_m+1)^2 lattice
// on [0,1]^2, union the scaled jump coordinates of the piecewise-constant
// parts (data points U_i n/k_n and rank-grid points i/k_n, per axis), each
// point also probed at -1e-9 to catch left limits. When the jump family is
// too large the jumps are stride-subsampled so an axis never exceeds
// max_axis points; the lattice is always kept. Approximation error from the
// lattice alone is bounded by L/grid_m with L the Lipschitz constant of the
// smooth part (<= 2 sqrt(n) (k_n/n)^2 for GStar). Univariate kinds are
// evaluated exactly from their jump structure.
double sup_norm_window(const Sample& s, ProcessKind kind,
                       const TailContext* ctx, const CopulaModel* model,
                       int grid_m = 512, int max_axis = 4096);

// Sup of |G_n* - alpha_{n;0}*| over the same evaluation set; when model is
// non-null the model-centered pair (G**, alpha0**) is used instead.
double sup_approximation_gap(const Sample& s, const TailContext& ctx,
                             const CopulaModel* model, int grid_m = 512,
                             int max_axis = 4096);

// Oscillation modulus w_n(h): sup over rectangles of area <= h of the
// alpha_n rectangle measure. Corners are searched on the uniform lattice,
// augmented by the sample coordinates (and their left limits) when n <= 200,
// which makes the search exact over data-anchored rectangles in that regime.
double oscillation_modulus(const Sample& s, double h, int grid_m = 256);

// sup_{s in [0,k_n/n]} |alpha_{n;.}(s) + beta_{n;.}(s)| for both margins
// (exact, from the joint jump structure) together with the r_n scalar.
struct BahadurKiefer {
  double r_u = 0.0;
  double r_v = 0.0;
  double r_n = 0.0;
};
BahadurKiefer bahadur_kiefer(const Sample& s, const TailContext& ctx);

}  // namespace tailcop
