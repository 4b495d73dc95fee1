#pragma once

#include <cstdint>
#include <vector>

#include "tailcop/models.hpp"
#include "tailcop/sample.hpp"

namespace tailcop {

// ===========================================================================
// Weighted tail-independence statistic Omega_{n,k_n,nu1,nu2} and its Monte
// Carlo calibration against H0 : C(u,v) = uv on the pavement.
// ===========================================================================

enum class TestMethod { McEmpirical, GaussianLimit };

struct TestReport {
  double omega = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double level = 0.05;
  int reps = 0;
  TestMethod method = TestMethod::McEmpirical;
  double nu1 = 0.0, nu2 = 0.0;
  TailContext ctx;
};

// Omega = n * int_0^w int_0^w u^{2 nu1} v^{2 nu2} (C_n(u,v) - uv)^2 du dv,
// integrated exactly: C_n is constant on rank rectangles, so each cell
// contributes closed-form monomial integrals. Requires nu1, nu2 > -1/2 and a
// positive window.
double omega_statistic(const Sample& s, const TailContext& ctx, double nu1,
                       double nu2);

// Sorted null draws. McEmpirical simulates independence samples of size n
// and computes Omega; GaussianLimit simulates tied-down Brownian bridges on
// a lattice with gauss_m cells and integrates the weighted squared field
// over the window. Deterministic given seed, replication r running on stream
// derive(seed, r); the thread count does not change the output.
std::vector<double> null_distribution(std::int64_t n, const TailContext& ctx,
                                      double nu1, double nu2, int reps,
                                      std::uint64_t seed, TestMethod method,
                                      int threads = 1, int gauss_m = 256);

// Add-one Monte Carlo p-value: p = (1 + #{null >= omega}) / (reps + 1);
// reject iff p <= level.
TestReport tail_independence_test(const Sample& s, const TailContext& ctx,
                                  double nu1, double nu2, int reps,
                                  std::uint64_t seed, double level,
                                  TestMethod method, int threads = 1,
                                  int gauss_m = 256);

}  // namespace tailcop
