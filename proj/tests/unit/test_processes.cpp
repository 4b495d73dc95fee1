#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "tailcop/math.hpp"
#include "tailcop/models.hpp"
#include "tailcop/processes.hpp"
#include "tailcop/rng.hpp"
#include "tailcop/sample.hpp"

using namespace tailcop;

namespace {

Sample four_point_sample() {
  // su = [0.1, 0.3, 0.5, 0.9]
  const std::vector<std::pair<double, double>> pairs = {
      {0.1, 0.55}, {0.3, 0.25}, {0.5, 0.85}, {0.9, 0.45}};
  return build_sample(pairs);
}

Sample two_point_sample() {
  const std::vector<std::pair<double, double>> pairs = {{0.2, 0.7}, {0.6, 0.3}};
  return build_sample(pairs);
}

}  // namespace

TEST_CASE("eval_process hand-checked values") {
  const Sample s4 = four_point_sample();
  CHECK(eval_process(s4, ProcessKind::AlphaU, nullptr, nullptr, 0.5, 0.0) ==
        doctest::Approx(0.5));
  CHECK(eval_process(s4, ProcessKind::BetaU, nullptr, nullptr, 0.5, 0.0) ==
        doctest::Approx(-0.4));

  const Sample s2 = two_point_sample();
  const TailContext ctx(2, 2.0, 1.0);
  CHECK(eval_process(s2, ProcessKind::GStar, &ctx, nullptr, 1.0, 1.0) ==
        doctest::Approx(0.0));
  CHECK(eval_process(s2, ProcessKind::AlphaJoint, nullptr, nullptr, 0.0, 0.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("starred kinds require a context, ** kinds require a model") {
  const Sample s = two_point_sample();
  CHECK_THROWS_AS(
      eval_process(s, ProcessKind::GStar, nullptr, nullptr, 0.5, 0.5),
      std::invalid_argument);
  const TailContext ctx(2, 2.0, 1.0);
  CHECK_THROWS_AS(
      eval_process(s, ProcessKind::GStarStar, &ctx, nullptr, 0.5, 0.5),
      std::invalid_argument);
  CHECK_THROWS_AS(
      eval_process(s, ProcessKind::AlphaJoint, nullptr, nullptr, 1.5, 0.5),
      std::domain_error);
}

TEST_CASE("tail scaling identity: AlphaJointStar(u,v) = AlphaJoint(uw, vw)") {
  const Sample s = sample_pairs(make_independence(), 300, 8);
  const TailContext ctx = make_tail_context(300, kn_proportional(0.25));
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const double u = rng.uniform_open01();
    const double v = rng.uniform_open01();
    const double star =
        eval_process(s, ProcessKind::AlphaJointStar, &ctx, nullptr, u, v);
    const double plain = eval_process(s, ProcessKind::AlphaJoint, nullptr,
                                      nullptr, u * ctx.window, v * ctx.window);
    CHECK(star == plain);  // same floating-point path
  }
}

TEST_CASE("tail scaling identity for the margin processes") {
  const Sample s = sample_pairs(make_independence(), 200, 9);
  const TailContext ctx = make_tail_context(200, kn_proportional(0.5));
  Rng rng(18);
  for (int t = 0; t < 20; ++t) {
    const double u = rng.uniform_open01();
    const double a_star =
        eval_process(s, ProcessKind::AlphaUStar, &ctx, nullptr, u, 0.0);
    const double a_plain = eval_process(s, ProcessKind::AlphaU, nullptr, nullptr,
                                        u * ctx.window, 0.0);
    CHECK(a_star == doctest::Approx(a_plain / std::sqrt(ctx.window)).epsilon(1e-14));
    const double b_star =
        eval_process(s, ProcessKind::BetaVStar, &ctx, nullptr, 0.0, u);
    const double b_plain = eval_process(s, ProcessKind::BetaV, nullptr, nullptr,
                                        0.0, u * ctx.window);
    CHECK(b_star == doctest::Approx(b_plain / std::sqrt(ctx.window)).epsilon(1e-14));
  }
}

TEST_CASE("independence degeneracy: ** processes equal their * versions") {
  const Sample s = sample_pairs(make_fgm(0.6), 400, 12);
  const TailContext ctx = make_tail_context(400, kn_proportional(0.5));
  const CopulaModel indep = make_independence();
  for (int i = 0; i <= 16; ++i) {
    for (int j = 0; j <= 16; ++j) {
      const double u = static_cast<double>(i) / 16.0;
      const double v = static_cast<double>(j) / 16.0;
      CHECK(eval_process(s, ProcessKind::GStarStar, &ctx, &indep, u, v) ==
            eval_process(s, ProcessKind::GStar, &ctx, nullptr, u, v));
      CHECK(eval_process(s, ProcessKind::AlphaZeroStarStar, &ctx, &indep, u, v) ==
            eval_process(s, ProcessKind::AlphaZeroStar, &ctx, nullptr, u, v));
    }
  }
}

TEST_CASE("decomposition identity on random samples") {
  Rng rng(2024);
  for (int t = 0; t < 40; ++t) {
    const std::int64_t n = 5 + static_cast<std::int64_t>(rng.uniform_open01() * 120);
    const Sample s = sample_pairs(make_independence(), n,
                                  derive_stream(77, static_cast<std::uint64_t>(t)));
    const double gamma = 0.25 + 0.75 * rng.uniform_open01();
    const TailContext ctx(n, gamma * static_cast<double>(n), gamma);
    for (int p = 0; p < 25; ++p) {
      const double u = rng.uniform_open01();
      const double v = rng.uniform_open01();
      const ResidualRecord r = decomposition(s, ctx, u, v);
      const double gap =
          eval_process(s, ProcessKind::GStar, &ctx, nullptr, u, v) -
          eval_process(s, ProcessKind::AlphaZeroStar, &ctx, nullptr, u, v);
      const double recon = r.r_zero + v * ctx.window * r.r_u +
                           u * ctx.window * r.r_v + r.r_cross;
      CHECK(std::fabs(gap - recon) < 1e-10);
    }
  }
}

TEST_CASE("decomposition boundary and cross term") {
  const Sample s = two_point_sample();
  const TailContext ctx(2, 2.0, 1.0);
  const ResidualRecord zero = decomposition(s, ctx, 0.0, 0.0);
  CHECK(zero.r_zero == doctest::Approx(0.0));
  CHECK(zero.r_u == doctest::Approx(0.0));
  CHECK(zero.r_v == doctest::Approx(0.0));
  CHECK(zero.r_cross == doctest::Approx(0.0));

  const ResidualRecord r = decomposition(s, ctx, 1.0, 1.0);
  const double bu = eval_process(s, ProcessKind::BetaU, nullptr, nullptr, 1.0, 0.0);
  const double bv = eval_process(s, ProcessKind::BetaV, nullptr, nullptr, 0.0, 1.0);
  CHECK(r.r_cross ==
        doctest::Approx(bu * bv / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("rate normalizer matches its formula") {
  for (const auto& [n, kn] : std::vector<std::pair<std::int64_t, double>>{
           {100, 50.0}, {100000, 250.0}, {1 << 20, 524288.0}}) {
    const RateNormalizer r = rate_normalizer(n, kn);
    const double nd = static_cast<double>(n);
    const double expect = std::sqrt(nd) * std::pow(kn, -0.25) *
                          std::pow(tailcop::log2(nd), -0.25) *
                          std::pow(tailcop::log1(nd), -0.5);
    CHECK(std::fabs(r.value - expect) < 1e-12 * expect);
    CHECK(r.value > 0.0);
  }
}

TEST_CASE("bahadur-kiefer rate formula") {
  // at kn = 16 and tailcop::log2(n) = 1: r_n = n^{-1/2} * 2 * (log 16 + 2)^{1/2}
  const double nd = std::exp(std::exp(1.0));
  const auto n = static_cast<std::int64_t>(nd);
  const double r = bahadur_kiefer_rate(n, 16.0);
  const double expect = std::pow(static_cast<double>(n), -0.5) * 2.0 *
                        std::pow(tailcop::log2(static_cast<double>(n)), 0.25) *
                        std::sqrt(std::log(16.0) + 2.0 * tailcop::log2(static_cast<double>(n)));
  CHECK(r == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("bahadur-kiefer sup: closed form when the window holds no points") {
  // su = [0.5, 0.6, 0.7, 0.8]; window 0.2 < su[0]
  const std::vector<std::pair<double, double>> pairs = {
      {0.5, 0.5}, {0.6, 0.6}, {0.7, 0.7}, {0.8, 0.8}};
  const Sample s = build_sample(pairs);
  const TailContext ctx(4, 0.8, 0.2);
  const BahadurKiefer bk = bahadur_kiefer(s, ctx);
  // f(s) = 2(0.5 - 2s) on (0, 0.2]: sup is max(2*0.5, 2|0.5 - 2*0.2|)
  CHECK(bk.r_u == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bahadur-kiefer sup dominates the window endpoint") {
  const Sample s = sample_pairs(make_independence(), 500, 21);
  const TailContext ctx = make_tail_context(500, kn_proportional(0.5));
  const BahadurKiefer bk = bahadur_kiefer(s, ctx);
  const double w = ctx.window;
  const double end_u =
      eval_process(s, ProcessKind::AlphaU, nullptr, nullptr, w, 0.0) +
      eval_process(s, ProcessKind::BetaU, nullptr, nullptr, w, 0.0);
  CHECK(bk.r_u >= std::fabs(end_u) - 1e-12);
  const double end_v =
      eval_process(s, ProcessKind::AlphaV, nullptr, nullptr, 0.0, w) +
      eval_process(s, ProcessKind::BetaV, nullptr, nullptr, 0.0, w);
  CHECK(bk.r_v >= std::fabs(end_v) - 1e-12);
}

TEST_CASE("bahadur-kiefer sup brackets a dense scan") {
  // The summand is piecewise linear with slope -2 sqrt(n), so a dense scan
  // undershoots the exact sup by at most slope * step.
  const Sample s = sample_pairs(make_independence(), 40, 5);
  const TailContext ctx(40, 20.0, 0.5);
  const BahadurKiefer bk = bahadur_kiefer(s, ctx);
  double best = 0.0;
  const int steps = 40000;
  for (int i = 0; i <= steps; ++i) {
    const double p = ctx.window * static_cast<double>(i) / steps;
    const double f =
        eval_process(s, ProcessKind::AlphaU, nullptr, nullptr, p, 0.0) +
        eval_process(s, ProcessKind::BetaU, nullptr, nullptr, p, 0.0);
    best = std::max(best, std::fabs(f));
  }
  const double slack = 2.0 * std::sqrt(40.0) * ctx.window / steps;
  CHECK(bk.r_u >= best - 1e-12);
  CHECK(bk.r_u <= best + slack + 1e-12);
}

TEST_CASE("sup_norm_window dominates pointwise values and zero gaps vanish") {
  const Sample s = sample_pairs(make_independence(), 400, 33);
  const TailContext ctx = make_tail_context(400, kn_proportional(0.5));
  const double sup_g =
      sup_norm_window(s, ProcessKind::GStar, &ctx, nullptr, 128);
  CHECK(sup_g >=
        std::fabs(eval_process(s, ProcessKind::GStar, &ctx, nullptr, 1.0, 1.0)) -
            1e-12);
  // with the independence model the ** sup is the * sup exactly
  const CopulaModel indep = make_independence();
  const double sup_ss =
      sup_norm_window(s, ProcessKind::AlphaZeroStarStar, &ctx, &indep, 128);
  const double sup_s =
      sup_norm_window(s, ProcessKind::AlphaZeroStar, &ctx, nullptr, 128);
  CHECK(sup_ss == sup_s);
}

TEST_CASE("sup_norm_window univariate kinds bracket a dense scan") {
  const Sample s = sample_pairs(make_independence(), 150, 60);
  const TailContext ctx = make_tail_context(150, kn_proportional(0.4));
  const double sup_beta =
      sup_norm_window(s, ProcessKind::BetaUStar, &ctx, nullptr, 64);
  double best = 0.0;
  const int steps = 60000;
  for (int i = 0; i <= steps; ++i) {
    const double u = static_cast<double>(i) / steps;
    best = std::max(best, std::fabs(eval_process(s, ProcessKind::BetaUStar,
                                                 &ctx, nullptr, u, 0.0)));
  }
  // between quantile jumps the process is linear with |slope| sqrt(n w)
  const double slack =
      std::sqrt(150.0 * ctx.window) / steps + 1e-12;
  CHECK(sup_beta >= best - 1e-12);
  CHECK(sup_beta <= best + slack);
}

TEST_CASE("GStar sup is stable under grid refinement at n = 1000") {
  const Sample s = sample_pairs(make_independence(), 1000, 1234);
  const TailContext ctx(1000, 1000.0, 1.0);
  const double a = sup_norm_window(s, ProcessKind::GStar, &ctx, nullptr, 512, 16384);
  const double b = sup_norm_window(s, ProcessKind::GStar, &ctx, nullptr, 2048, 16384);
  CHECK(std::fabs(a - b) < 0.01);
}

TEST_CASE("oscillation modulus equals brute force at n = 50") {
  const Sample s = sample_pairs(make_independence(), 50, 404);
  const auto xs = oracles::oscillation_axis(s.su, 8);
  const auto ys = oracles::oscillation_axis(s.sv, 8);
  for (double h : {0.05, 0.2, 0.6}) {
    const double fast = oscillation_modulus(s, h, 8);
    const double brute = oracles::oscillation_brute_force(s, xs, ys, h);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("oscillation modulus is monotone in h and dominates corner values") {
  const Sample s = sample_pairs(make_independence(), 120, 2);
  const double w1 = oscillation_modulus(s, 0.1, 64);
  const double w2 = oscillation_modulus(s, 0.3, 64);
  const double w3 = oscillation_modulus(s, 0.999, 64);
  CHECK(w1 <= w2 + 1e-12);
  CHECK(w2 <= w3 + 1e-12);
  // the corner rectangle (0,u] x (0,v] has area <= h for h near 1
  for (double u : {0.25, 0.5, 0.75}) {
    for (double v : {0.25, 0.5, 0.75}) {
      CHECK(w3 >= std::fabs(oracles::alpha_rectangle(s, 0.0, u, 0.0, v)) - 1e-12);
    }
  }
  CHECK_THROWS_AS(oscillation_modulus(s, 0.0, 64), std::domain_error);
  CHECK_THROWS_AS(oscillation_modulus(s, 1.0, 64), std::domain_error);
}

TEST_CASE("Fact 4 oscillation inequality at small n") {
  // Evaluation coordinates are drawn from the brute-force corner family so
  // the decomposition strips of the inequality are searchable rectangles.
  Rng rng(606);
  for (int t = 0; t < 4; ++t) {
    const std::int64_t n = 20 + 10 * t;
    const Sample s = sample_pairs(make_independence(), n,
                                  derive_stream(31337, static_cast<std::uint64_t>(t)));
    const auto xs = oracles::oscillation_axis(s.su, 32);
    const auto ys = oracles::oscillation_axis(s.sv, 32);
    auto draw = [&rng](const std::vector<double>& axis) {
      const auto idx = static_cast<std::size_t>(rng.uniform_open01() *
                                                static_cast<double>(axis.size()));
      return axis[std::min(idx, axis.size() - 1)];
    };
    for (int p = 0; p < 25; ++p) {
      const double u1 = draw(xs), v1 = draw(ys);
      const double u2 = draw(xs), v2 = draw(ys);
      const double lhs =
          std::fabs(eval_process(s, ProcessKind::AlphaJoint, nullptr, nullptr,
                                 u1, v1) -
                    eval_process(s, ProcessKind::AlphaJoint, nullptr, nullptr,
                                 u2, v2));
      const double dist = std::max(std::fabs(u1 - u2), std::fabs(v1 - v2));
      if (dist <= 0.0 || dist >= 1.0) continue;
      const double wn = oracles::oscillation_brute_force(s, xs, ys, dist);
      CHECK(lhs <= 3.0 * wn + 1e-9);
    }
  }
}
