#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "tailcop/math.hpp"
#include "tailcop/models.hpp"
#include "tailcop/sample.hpp"

using namespace tailcop;

TEST_CASE("copula_eval closed forms") {
  const CopulaModel indep = make_independence();
  CHECK(copula_eval(indep, 0.3, 0.7) == doctest::Approx(0.21).epsilon(1e-15));

  const CopulaModel fgm = make_fgm(1.0);
  // direct substitution into uv(1 + theta (1-u)(1-v))
  CHECK(copula_eval(fgm, 0.5, 0.5) == doctest::Approx(0.3125).epsilon(1e-15));
  // v (1 + theta (1-2u)(1-v)) at u = v = 0.5
  CHECK(copula_eval(fgm, 0.5, 0.5, Deriv::Du) ==
        doctest::Approx(0.5).epsilon(1e-15));

  // Clayton theta = 1 is uv/(u+v-uv)
  const CopulaModel clay = make_clayton(1.0);
  CHECK(copula_eval(clay, 0.5, 0.5) == doctest::Approx(1.0 / 3.0));
  CHECK(copula_eval(clay, 0.5, 0.5, Deriv::Du) == doctest::Approx(4.0 / 9.0));
  CHECK(copula_eval(clay, 0.5, 0.5, Deriv::Du2) ==
        doctest::Approx(-16.0 / 27.0));
}

TEST_CASE("copula boundary identities") {
  const std::vector<CopulaModel> models = {make_independence(), make_fgm(1.0),
                                           make_fgm(-0.7), make_clayton(0.5),
                                           make_clayton(2.0)};
  for (const auto& m : models) {
    for (int i = 0; i <= 16; ++i) {
      const double t = static_cast<double>(i) / 16.0;
      CHECK(copula_eval(m, t, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(copula_eval(m, 0.0, t) == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(copula_eval(m, t, 1.0) == doctest::Approx(t).epsilon(1e-14));
      CHECK(copula_eval(m, 1.0, t) == doctest::Approx(t).epsilon(1e-14));
    }
  }
}

TEST_CASE("first partial derivatives lie in [0,1] and match finite differences") {
  const std::vector<CopulaModel> models = {make_independence(), make_fgm(1.0),
                                           make_fgm(-1.0), make_clayton(0.5),
                                           make_clayton(2.0)};
  for (const auto& m : models) {
    for (int i = 1; i < 32; ++i) {
      for (int j = 1; j < 32; ++j) {
        const double u = static_cast<double>(i) / 32.0;
        const double v = static_cast<double>(j) / 32.0;
        const double du = copula_eval(m, u, v, Deriv::Du);
        const double dv = copula_eval(m, u, v, Deriv::Dv);
        CHECK(du >= -1e-12);
        CHECK(du <= 1.0 + 1e-12);
        CHECK(dv >= -1e-12);
        CHECK(dv <= 1.0 + 1e-12);
        const double fdu = oracles::fd_partial(m, u, v, true);
        const double fdv = oracles::fd_partial(m, u, v, false);
        CHECK(std::fabs(du - fdu) <= 1e-6 * std::max(1.0, std::fabs(du)));
        CHECK(std::fabs(dv - fdv) <= 1e-6 * std::max(1.0, std::fabs(dv)));
      }
    }
  }
}

TEST_CASE("second derivatives match finite differences of the first") {
  const std::vector<CopulaModel> models = {make_fgm(0.8), make_clayton(1.5)};
  for (const auto& m : models) {
    for (int i = 1; i < 8; ++i) {
      for (int j = 1; j < 8; ++j) {
        const double u = static_cast<double>(i) / 8.0;
        const double v = static_cast<double>(j) / 8.0;
        const double h = 1e-5;
        const double fd_uu = (copula_eval(m, u + h, v, Deriv::Du) -
                              copula_eval(m, u - h, v, Deriv::Du)) /
                             (2.0 * h);
        const double fd_uv = (copula_eval(m, u, v + h, Deriv::Du) -
                              copula_eval(m, u, v - h, Deriv::Du)) /
                             (2.0 * h);
        CHECK(copula_eval(m, u, v, Deriv::Du2) ==
              doctest::Approx(fd_uu).epsilon(1e-5));
        CHECK(copula_eval(m, u, v, Deriv::DuDv) ==
              doctest::Approx(fd_uv).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("copula_eval domain errors") {
  const CopulaModel clay = make_clayton(1.0);
  CHECK_THROWS_AS(copula_eval(clay, -0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(copula_eval(clay, 0.5, 1.1), std::domain_error);
  CHECK_THROWS_AS(copula_eval(clay, 0.0, 0.5, Deriv::Du2), std::domain_error);
  CHECK_THROWS_AS(copula_eval(clay, 0.5, 1.0, Deriv::DuDv), std::domain_error);
  CHECK_THROWS_AS(make_fgm(1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_clayton(0.0), std::invalid_argument);
}

TEST_CASE("sampler marginals are uniform (KS at the 1% level)") {
  const std::int64_t n = 100000;
  for (const auto& m :
       {make_independence(), make_fgm(1.0), make_clayton(2.0)}) {
    const Sample s = sample_pairs(m, n, 20240601);
    const double crit = 1.6276 / std::sqrt(static_cast<double>(n));
    CHECK(oracles::ks_uniform(s.u) < crit);
    CHECK(oracles::ks_uniform(s.v) < crit);
  }
}

TEST_CASE("FGM sampler reproduces Spearman rho = theta/3") {
  const Sample s = sample_pairs(make_fgm(1.0), 100000, 7);
  CHECK(oracles::spearman_rho(s) == doctest::Approx(1.0 / 3.0).epsilon(0.06));
}

TEST_CASE("sampler/cdf consistency at interior points") {
  const std::int64_t n = 100000;
  for (const auto& m :
       {make_independence(), make_fgm(0.8), make_clayton(1.0)}) {
    const Sample s = sample_pairs(m, n, 99);
    for (double u : {0.25, 0.5, 0.75}) {
      for (double v : {0.25, 0.5, 0.75}) {
        const double c = copula_eval(m, u, v);
        const double tol = 4.0 * std::sqrt(c * (1.0 - c) / n);
        CHECK(std::fabs(ecdf_joint(s, u, v) - c) <= tol);
      }
    }
  }
}

TEST_CASE("single pair lands strictly inside the unit square") {
  for (const auto& m :
       {make_independence(), make_fgm(-1.0), make_clayton(0.25)}) {
    const Sample s = sample_pairs(m, 1, 5);
    CHECK(s.u[0] > 0.0);
    CHECK(s.u[0] < 1.0);
    CHECK(s.v[0] > 0.0);
    CHECK(s.v[0] < 1.0);
  }
}

TEST_CASE("sampling is deterministic given the seed") {
  const Sample a = sample_pairs(make_fgm(0.5), 1000, 123);
  const Sample b = sample_pairs(make_fgm(0.5), 1000, 123);
  CHECK(a.u == b.u);
  CHECK(a.v == b.v);
}

TEST_CASE("kn_value examples") {
  CHECK(kn_value(kn_proportional(0.5), 100) == doctest::Approx(50.0));
  CHECK(kn_value(kn_power(0.7), 1000) ==
        doctest::Approx(125.89254117941675).epsilon(1e-12));
  CHECK(kn_value(kn_overlog(), 8) ==
        doctest::Approx(8.0 / std::log(8.0)).epsilon(1e-12));
  CHECK(kn_value(kn_overlog(), 8) == doctest::Approx(3.8471).epsilon(1e-4));
  CHECK_THROWS_AS(kn_value(KnSpec{KnRule::Power, 1.2}, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(kn_value(KnSpec{KnRule::Proportional, 1.7}, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(kn_proportional(0.0), std::invalid_argument);
  CHECK_THROWS_AS(kn_value(kn_overlog(), 1), std::invalid_argument);
}

TEST_CASE("(H.1)-(H.4) hold on geometric schedules for all rules") {
  std::vector<std::int64_t> schedule;
  for (int k = 10; k <= 20; ++k) schedule.push_back(std::int64_t{1} << k);
  for (const auto& spec : {kn_proportional(0.25), kn_proportional(1.0),
                           kn_power(0.5), kn_power(0.9), kn_overlog()}) {
    const KnHypotheses h = check_kn_hypotheses(spec, schedule);
    CHECK(h.h1);
    CHECK(h.h2);
    CHECK(h.h3);
    CHECK(h.h4);
    CHECK(h.all());
  }
}

TEST_CASE("iterated logarithm conventions") {
  CHECK(tailcop::log1(1.0) == doctest::Approx(1.0));          // log(1 v e) = 1
  CHECK(tailcop::log1(std::exp(2.0)) == doctest::Approx(2.0));
  CHECK(tailcop::log2(std::exp(std::exp(1.0))) == doctest::Approx(1.0));
  CHECK(tailcop::log2(2.0) == doctest::Approx(1.0));          // both floors engage
}

TEST_CASE("tail context") {
  const TailContext ctx = make_tail_context(1000, kn_proportional(0.5));
  CHECK(ctx.kn == doctest::Approx(500.0));
  CHECK(ctx.window == doctest::Approx(0.5));
  CHECK(ctx.kn == doctest::Approx(ctx.window * static_cast<double>(ctx.n)));
  CHECK_THROWS_AS(TailContext(100, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TailContext(100, 150.0, 1.0), std::invalid_argument);
}
