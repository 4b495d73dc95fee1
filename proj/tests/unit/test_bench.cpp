#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tailcop/bench.hpp"
#include "tailcop/math.hpp"
#include "tailcop/processes.hpp"

using namespace tailcop;

TEST_CASE("theorem bounds") {
  CHECK(theorem_bound(0.5, TheoremCase::Thm21) ==
        doctest::Approx(3.0 / std::sqrt(2.0) + 1.0).epsilon(1e-14));
  CHECK(theorem_bound(0.5, TheoremCase::Thm21) ==
        doctest::Approx(3.1213).epsilon(1e-4));
  CHECK(theorem_bound(1.0, TheoremCase::Thm21) ==
        doctest::Approx(3.0 * std::pow(2.0, -0.75) + std::pow(2.0, 0.75))
            .epsilon(1e-14));
  CHECK(theorem_bound(1.0, TheoremCase::Thm21) ==
        doctest::Approx(3.4656).epsilon(1e-4));
  CHECK(theorem_bound(0.75, TheoremCase::Thm21) ==
        theorem_bound(0.75, TheoremCase::Thm23));
  // regime boundary: both formulas are evaluable at gamma = 1/2 (and in fact
  // coincide there: each reduces to 3/sqrt(2) + 1); recorded, not asserted
  const double lo = theorem_bound(0.5, TheoremCase::Thm21);
  const double hi = (3.0 * std::pow(2.0, -0.75) + 0.5 * std::pow(2.0, 0.75)) *
                    std::pow(0.5, -0.25);
  CHECK(std::isfinite(lo));
  CHECK(std::isfinite(hi));
  CHECK_THROWS_AS(theorem_bound(0.0, TheoremCase::Thm21), std::domain_error);
}

TEST_CASE("fact constants") {
  CHECK(fact_constant(FactKind::LilBeta, 0.5) == doctest::Approx(1.0));
  CHECK(std::sqrt(2.0) * std::sqrt(0.5) == doctest::Approx(1.0));  // branch (i)
  CHECK(1.0 / std::sqrt(2.0 * 0.5) == doctest::Approx(1.0));       // branch (ii)
  CHECK(fact_constant(FactKind::BahadurKiefer, 1.0) ==
        doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));
  CHECK(fact_constant(FactKind::BahadurKiefer, 0.0) ==
        doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
  CHECK(fact_constant(FactKind::LilGStar, 0.3) == doctest::Approx(0.25));
  CHECK(fact_constant(FactKind::Oscillation, 0.9) == doctest::Approx(1.0));
}

TEST_CASE("parse_config maps the documented keys") {
  std::istringstream cfg(
      "experiment = rate\n"
      "gamma = 0.5\n"
      "n0 = 1024\n"
      "factor = 4\n"
      "count = 6\n"
      "seed = 7\n");
  const ExperimentConfig c = parse_config(cfg);
  CHECK(c.experiment == Experiment::Rate);
  CHECK(c.kn_spec.rule == KnRule::Proportional);
  CHECK(c.kn_spec.param == doctest::Approx(0.5));
  CHECK(c.n0 == 1024);
  CHECK(c.count == 6);
  CHECK(c.seed == 7);
  CHECK(c.reps == 100);      // default
  CHECK(c.grid_m == 512);    // default
  const auto sched = c.schedule();
  REQUIRE(sched.size() == 6);
  CHECK(sched.front() == 1024);
  CHECK(sched.back() == 1024 * 1024);
}

TEST_CASE("parse_config rejects bad input with names") {
  auto expect_throw = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      parse_config(in);
      FAIL_CHECK("expected a config error for: " << text);
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      CHECK(msg.find(needle) != std::string::npos);
    }
  };
  expect_throw("experiment = rate\ngamma = 1.5\nn0 = 64\ncount = 2\nseed = 1\n",
               "H.3");
  expect_throw("experiment = rate\ngamma = 0.5\ncount = 2\nseed = 1\n", "n0");
  expect_throw("experiment = rate\ngamma = 0.5\nn0 = 64\ncount = 2\n", "seed");
  expect_throw("experiment = rate\nwat = 3\nseed = 1\n", "unknown key");
  expect_throw("experiment = nope\nseed = 1\n", "unknown experiment");
  expect_throw("experiment = rate_smoothed\ngamma = 0.5\nn0 = 64\ncount = 2\n"
               "seed = 1\n",
               "kernel");
  expect_throw("experiment = rate\nseed = 1\nn0 = 64\ncount = 2\n", "k_n rule");
}

TEST_CASE("small rate experiment: schema, normalizer column, determinism") {
  std::istringstream cfg(
      "experiment = rate\n"
      "gamma = 0.5\n"
      "n0 = 256\n"
      "factor = 2\n"
      "count = 3\n"
      "reps = 6\n"
      "grid_m = 32\n"
      "seed = 11\n");
  ExperimentConfig c = parse_config(cfg);
  const ExperimentReport rep1 = run_experiment(c, 1, false);
  const ExperimentReport rep4 = run_experiment(c, 4, false);

  REQUIRE(rep1.rows.size() == 18);
  for (std::size_t i = 0; i < rep1.rows.size(); ++i) {
    const ReportRow& r = rep1.rows[i];
    // normalizer column recomputed independently
    const double nd = static_cast<double>(r.n);
    const double vn = std::sqrt(nd) / (std::pow(r.kn, 0.25) *
                                       std::pow(tailcop::log2(nd), 0.25) *
                                       std::sqrt(tailcop::log1(nd)));
    CHECK(std::fabs(r.normalizer - vn) < 1e-12 * vn);
    CHECK(r.ratio ==
          doctest::Approx(r.observed * r.normalizer / r.bound).epsilon(1e-15));
    // byte-identical rows across thread counts
    CHECK(rep1.rows[i].observed == rep4.rows[i].observed);
    CHECK(rep1.rows[i].ratio == rep4.rows[i].ratio);
  }
  // row order: n ascending then rep ascending
  for (std::size_t i = 1; i < rep1.rows.size(); ++i) {
    const bool ordered = rep1.rows[i].n > rep1.rows[i - 1].n ||
                         (rep1.rows[i].n == rep1.rows[i - 1].n &&
                          rep1.rows[i].rep == rep1.rows[i - 1].rep + 1);
    CHECK(ordered);
  }
  // running maxima nondecreasing
  for (std::size_t k = 1; k < rep1.summary.size(); ++k) {
    CHECK(rep1.summary[k].running_max >= rep1.summary[k - 1].running_max);
  }
  std::ostringstream csv1, csv4;
  write_report_csv(csv1, rep1);
  write_report_csv(csv4, rep4);
  CHECK(csv1.str() == csv4.str());
  CHECK(csv1.str().rfind("experiment,n,kn,rep,observed,normalizer,bound,ratio",
                         0) == 0);
}

TEST_CASE("rate_general with independence reproduces rate row-for-row") {
  auto make = [](const std::string& name) {
    std::istringstream cfg("experiment = " + name +
                           "\n"
                           "gamma = 0.5\n"
                           "n0 = 200\n"
                           "factor = 2\n"
                           "count = 2\n"
                           "reps = 4\n"
                           "grid_m = 24\n"
                           "seed = 21\n");
    return parse_config(cfg);
  };
  const ExperimentReport a = run_experiment(make("rate"), 1, false);
  const ExperimentReport b = run_experiment(make("rate_general"), 1, false);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(std::fabs(a.rows[i].observed - b.rows[i].observed) < 1e-10);
  }
}

TEST_CASE("cov_check experiment flags all comparisons within 4 SE") {
  std::istringstream cfg(
      "experiment = cov_check\n"
      "reps = 3000\n"
      "grid_m = 16\n"
      "seed = 5\n");
  const ExperimentConfig c = parse_config(cfg);
  const ExperimentReport rep = run_experiment(c, 1, false);
  REQUIRE(rep.rows.size() == 3 * 45);
  CHECK(rep.summary.back().exceed_fraction == doctest::Approx(0.0));
}

TEST_CASE("assertions drive the pass flag") {
  std::istringstream cfg(
      "experiment = lil_gstar\n"
      "gamma = 1\n"
      "n0 = 256\n"
      "factor = 2\n"
      "count = 2\n"
      "reps = 4\n"
      "grid_m = 32\n"
      "seed = 2\n"
      "assert_ratio_max = 0.000001\n");
  const ExperimentConfig c = parse_config(cfg);
  const ExperimentReport rep = run_experiment(c, 1, false);
  CHECK_FALSE(rep.assertions_passed);
}
