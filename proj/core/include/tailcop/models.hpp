#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace tailcop {

struct Sample;  // sample.hpp

// ===========================================================================
// Parametric copula models: independence, Farlie-Gumbel-Morgenstern, Clayton.
// Closed-form cdf and partial derivatives plus exact conditional-inversion
// samplers with uniform marginals.
// ===========================================================================

enum class CopulaKind { Independence, Fgm, Clayton };

enum class Deriv { None, Du, Dv, Du2, Dv2, DuDv };

struct CopulaModel {
  CopulaKind kind = CopulaKind::Independence;
  double theta = 0.0;  // FGM: [-1,1]; Clayton: > 0; ignored for independence
};

CopulaModel make_independence();
CopulaModel make_fgm(double theta);      // throws if theta outside [-1,1]
CopulaModel make_clayton(double theta);  // throws if theta <= 0

// C(u,v) or one of its partial derivatives, in closed form.
// Domain: (u,v) in [0,1]^2; Clayton second derivatives need (0,1)^2 strictly.
double copula_eval(const CopulaModel& model, double u, double v,
                   Deriv deriv = Deriv::None);

// n i.i.d. pairs from the model, both coordinates marginally uniform (0,1).
// Deterministic given seed. FGM and Clayton draw V by conditional inversion.
Sample sample_pairs(const CopulaModel& model, std::int64_t n,
                    std::uint64_t seed);

// Raw pair generation (used when a growing trajectory is prefix-sampled).
std::vector<std::pair<double, double>> generate_pairs(const CopulaModel& model,
                                                      std::int64_t n,
                                                      std::uint64_t seed);

// ===========================================================================
// k_n sequences and the tail evaluation context
// ===========================================================================

enum class KnRule {
  Proportional,  // k_n = gamma * n, gamma in (0,1]
  Power,         // k_n = n^a, a in (0,1)       (gamma = 0 regime)
  OverLog,       // k_n = n / log1(n)           (gamma = 0 regime)
};

struct KnSpec {
  KnRule rule = KnRule::Proportional;
  double param = 1.0;  // gamma for Proportional, a for Power, unused for OverLog

  double gamma() const { return rule == KnRule::Proportional ? param : 0.0; }
};

KnSpec kn_proportional(double gamma);
KnSpec kn_power(double a);
KnSpec kn_overlog();

// k_n per rule; real-valued, never rounded. Requires n > 1.
double kn_value(const KnSpec& spec, std::int64_t n);

// Hypothesis checks (H.1)-(H.4) evaluated on a schedule of sample sizes.
// (H.4) is checked as strict growth of k_n / log2(n) along the schedule.
struct KnHypotheses {
  bool h1 = false, h2 = false, h3 = false, h4 = false;
  bool all() const { return h1 && h2 && h3 && h4; }
};
KnHypotheses check_kn_hypotheses(const KnSpec& spec,
                                 const std::vector<std::int64_t>& schedule);

// The pavement [0, k_n/n]^2 for one sample size.
struct TailContext {
  std::int64_t n = 0;
  double kn = 0.0;
  double gamma = 0.0;   // limit of k_n/n
  double window = 0.0;  // k_n/n, side of the pavement

  TailContext() = default;
  TailContext(std::int64_t n_, double kn_, double gamma_);
};

TailContext make_tail_context(std::int64_t n, const KnSpec& spec);

}  // namespace tailcop
