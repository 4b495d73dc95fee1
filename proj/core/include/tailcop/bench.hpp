#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tailcop/models.hpp"
#include "tailcop/smoothing.hpp"
#include "tailcop/tailtest.hpp"

namespace tailcop {

// ===========================================================================
// Seeded Monte Carlo experiment harness: per-trajectory running maxima along
// geometric n-schedules, cross-replication exceedance fractions, CSV reports.
// ===========================================================================

enum class Experiment {
  Rate,            // V_n |G* - alpha0*| against the theorem constant
  RateGeneral,     // model-centered V_n |G** - alpha0**|
  RateSmoothed,    // V_n |Ghat* - alpha0*| with a kernel
  LilTailQuantile, // (log2 n)^{-1/2} |beta*_U| against the Fact 1 constant
  LilGStar,        // (2 log2 n)^{-1/2} |G*| against 1/4
  BahadurKiefer,   // r_n^{-1} R_U(k_n) against the Fact 2 constant
  Oscillation,     // w_n(h_n) / sqrt(2 h_n log1(1/h_n)) against 1
  CovCheck,        // Gaussian field covariances against closed forms
  TestCalibration, // size/power of the tail-independence test
};

enum class TheoremCase { Thm21, Thm23 };

// Almost-sure constants.  theorem_bound: (i) 0 < gamma <= 1/2 gives
// [3*2^{-1/4} + gamma*2^{5/4}] (1-gamma)^{1/4}; (ii) 1/2 < gamma <= 1 gives
// [3*2^{-3/4} + gamma*2^{3/4}] gamma^{-1/4}. Both theorem cases share the
// constants. gamma = 0 has no finite constant and throws.
double theorem_bound(double gamma, TheoremCase which);

enum class FactKind { LilBeta, BahadurKiefer, LilGStar, Oscillation };
double fact_constant(FactKind which, double gamma);

// h_n rules for the oscillation experiment. The proof of the rate theorem
// picks case-specific h_n sequences (the second carries an extra log1 n
// factor); both are provided so either normalization can be recorded.
enum class HRule { PowerHalf, ProofCaseI, ProofCaseII };

struct ExperimentConfig {
  Experiment experiment = Experiment::Rate;
  CopulaModel model;                 // default independence
  KnSpec kn_spec;                    // default Proportional(1)
  std::int64_t n0 = 1024;
  double factor = 4.0;
  int count = 1;
  int reps = 100;
  int grid_m = 512;
  int max_axis = 2048;
  std::uint64_t seed = 0;
  std::optional<KernelSpec> kernel;  // required for RateSmoothed
  double nu1 = 0.0, nu2 = 0.0;
  double level = 0.05;
  TestMethod method = TestMethod::McEmpirical;
  int gauss_m = 256;
  int null_reps = 2000;  // null calibration size for TestCalibration
  HRule h_rule = HRule::PowerHalf;
  std::string output_path;           // default "<experiment>.csv"

  // Optional assertions; when set, run_experiment reports violation and the
  // CLI exits with status 2.
  std::optional<double> assert_exceed_max;  // exceed_fraction at largest n
  std::optional<double> assert_ratio_min;   // final running max ratio band
  std::optional<double> assert_ratio_max;

  std::vector<std::int64_t> schedule() const;
  std::string experiment_name() const;
};

// Parses line-oriented "key = value" text. Unknown keys are rejected; errors
// carry the offending line number and the violated constraint.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

struct ReportRow {
  std::int64_t n = 0;
  double kn = 0.0;
  int rep = 0;
  double observed = 0.0;
  double normalizer = 1.0;
  double bound = 0.0;
  double ratio = 0.0;  // observed * normalizer / bound
};

struct SummaryRow {
  std::int64_t n = 0;
  double kn = 0.0;
  double running_max = 0.0;      // max of observed*normalizer over reps, n' <= n
  double exceed_fraction = 0.0;  // fraction of reps with ratio > 1 at this n
};

struct ExperimentReport {
  std::string experiment;
  std::vector<ReportRow> rows;        // ordered by (n asc, rep asc)
  std::vector<SummaryRow> summary;
  bool assertions_passed = true;
};

// Runs the configured experiment. Replications are independent seeded jobs
// (stream derive(seed, rep)); scheduling cannot change any reported value.
// Writes the CSV (and a "<stem>_summary.csv") when write_csv is true.
ExperimentReport run_experiment(const ExperimentConfig& config, int threads = 1,
                                bool write_csv = true);

void write_report_csv(std::ostream& os, const ExperimentReport& report);
void write_summary_csv(std::ostream& os, const ExperimentReport& report);

// All theorem/fact constants for one gamma, as printable lines.
std::vector<std::string> constants_table(double gamma);

}  // namespace tailcop
