#include "tailcop/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tailcop/math.hpp"
#include "tailcop/rng.hpp"
#include "tailcop/sample.hpp"

namespace tailcop {

namespace {

void require_unit_square(double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("copula_eval: (u,v) outside the unit square");
  }
}

double fgm_eval(double theta, double u, double v, Deriv d) {
  switch (d) {
    case Deriv::None:
      return u * v * (1.0 + theta * (1.0 - u) * (1.0 - v));
    case Deriv::Du:
      return v * (1.0 + theta * (1.0 - 2.0 * u) * (1.0 - v));
    case Deriv::Dv:
      return u * (1.0 + theta * (1.0 - u) * (1.0 - 2.0 * v));
    case Deriv::Du2:
      return -2.0 * theta * v * (1.0 - v);
    case Deriv::Dv2:
      return -2.0 * theta * u * (1.0 - u);
    case Deriv::DuDv:
      return 1.0 + theta * (1.0 - 2.0 * u) * (1.0 - 2.0 * v);
  }
  return 0.0;
}

double independence_eval(double u, double v, Deriv d) {
  switch (d) {
    case Deriv::None: return u * v;
    case Deriv::Du: return v;
    case Deriv::Dv: return u;
    case Deriv::Du2: return 0.0;
    case Deriv::Dv2: return 0.0;
    case Deriv::DuDv: return 1.0;
  }
  return 0.0;
}

double clayton_eval(double theta, double u, double v, Deriv d) {
  const bool second = (d == Deriv::Du2 || d == Deriv::Dv2 || d == Deriv::DuDv);
  if (second && (u <= 0.0 || u >= 1.0 || v <= 0.0 || v >= 1.0)) {
    throw std::domain_error(
        "copula_eval: Clayton second derivatives need (u,v) strictly inside "
        "(0,1)^2");
  }
  // Boundary limits for the cdf and first derivatives.
  if (d == Deriv::None && (u == 0.0 || v == 0.0)) return 0.0;
  if (d == Deriv::Du) {
    if (v == 0.0) return 0.0;  // C(u,0) = 0 identically in u
    if (u == 0.0) return 1.0;  // limit of the conditional df as u -> 0
  }
  if (d == Deriv::Dv) {
    if (u == 0.0) return 0.0;
    if (v == 0.0) return 1.0;
  }
  const double up = std::pow(u, -theta);
  const double vp = std::pow(v, -theta);
  const double s = up + vp - 1.0;
  switch (d) {
    case Deriv::None:
      return std::pow(s, -1.0 / theta);
    case Deriv::Du:
      return std::pow(u, -theta - 1.0) * std::pow(s, -1.0 / theta - 1.0);
    case Deriv::Dv:
      return std::pow(v, -theta - 1.0) * std::pow(s, -1.0 / theta - 1.0);
    case Deriv::Du2:
      return (theta + 1.0) * std::pow(u, -theta - 2.0) *
             std::pow(s, -1.0 / theta - 2.0) * (1.0 - vp);
    case Deriv::Dv2:
      return (theta + 1.0) * std::pow(v, -theta - 2.0) *
             std::pow(s, -1.0 / theta - 2.0) * (1.0 - up);
    case Deriv::DuDv:
      return (theta + 1.0) * std::pow(u * v, -theta - 1.0) *
             std::pow(s, -1.0 / theta - 2.0);
  }
  return 0.0;
}

// Conditional inversion for FGM: solve v + theta (1-2u) v (1-v) = w in [0,1].
double fgm_conditional_inverse(double theta, double u, double w) {
  const double b = theta * (1.0 - 2.0 * u);
  if (std::fabs(b) < 1e-12) return w;
  const double a = 1.0 + b;
  return 2.0 * w / (a + std::sqrt(a * a - 4.0 * b * w));
}

// Conditional inversion for Clayton in closed form.
double clayton_conditional_inverse(double theta, double u, double w) {
  const double t = std::pow(w, -theta / (theta + 1.0)) - 1.0;
  return std::pow(1.0 + std::pow(u, -theta) * t, -1.0 / theta);
}

}  // namespace

CopulaModel make_independence() { return CopulaModel{CopulaKind::Independence, 0.0}; }

CopulaModel make_fgm(double theta) {
  if (!(theta >= -1.0 && theta <= 1.0)) {
    throw std::invalid_argument("FGM theta must lie in [-1,1]");
  }
  return CopulaModel{CopulaKind::Fgm, theta};
}

CopulaModel make_clayton(double theta) {
  if (!(theta > 0.0)) {
    throw std::invalid_argument("Clayton theta must be > 0");
  }
  return CopulaModel{CopulaKind::Clayton, theta};
}

double copula_eval(const CopulaModel& model, double u, double v, Deriv deriv) {
  require_unit_square(u, v);
  switch (model.kind) {
    case CopulaKind::Independence: return independence_eval(u, v, deriv);
    case CopulaKind::Fgm: return fgm_eval(model.theta, u, v, deriv);
    case CopulaKind::Clayton: return clayton_eval(model.theta, u, v, deriv);
  }
  return 0.0;
}

std::vector<std::pair<double, double>> generate_pairs(const CopulaModel& model,
                                                      std::int64_t n,
                                                      std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_pairs: n must be >= 1");
  switch (model.kind) {
    case CopulaKind::Fgm:
      if (!(model.theta >= -1.0 && model.theta <= 1.0)) {
        throw std::invalid_argument("FGM theta must lie in [-1,1]");
      }
      break;
    case CopulaKind::Clayton:
      if (!(model.theta > 0.0)) {
        throw std::invalid_argument("Clayton theta must be > 0");
      }
      break;
    case CopulaKind::Independence: break;
  }
  Rng rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = rng.uniform_open01();
    const double w = rng.uniform_open01();
    double v = w;
    switch (model.kind) {
      case CopulaKind::Independence: break;
      case CopulaKind::Fgm: v = fgm_conditional_inverse(model.theta, u, w); break;
      case CopulaKind::Clayton:
        v = clayton_conditional_inverse(model.theta, u, w);
        break;
    }
    out.emplace_back(u, v);
  }
  return out;
}

Sample sample_pairs(const CopulaModel& model, std::int64_t n,
                    std::uint64_t seed) {
  const auto pairs = generate_pairs(model, n, seed);
  return build_sample(pairs);
}

KnSpec kn_proportional(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument(
        "Proportional k_n needs gamma in (0,1] ((H.3) range)");
  }
  return KnSpec{KnRule::Proportional, gamma};
}

KnSpec kn_power(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("Power k_n needs exponent a in (0,1)");
  }
  return KnSpec{KnRule::Power, a};
}

KnSpec kn_overlog() { return KnSpec{KnRule::OverLog, 0.0}; }

double kn_value(const KnSpec& spec, std::int64_t n) {
  if (n <= 1) throw std::invalid_argument("kn_value: n must be > 1");
  const double nd = static_cast<double>(n);
  switch (spec.rule) {
    case KnRule::Proportional:
      if (!(spec.param > 0.0 && spec.param <= 1.0)) {
        throw std::invalid_argument(
            "Proportional k_n needs gamma in (0,1] ((H.3) range)");
      }
      return spec.param * nd;
    case KnRule::Power:
      if (!(spec.param > 0.0 && spec.param < 1.0)) {
        throw std::invalid_argument("Power k_n needs exponent a in (0,1)");
      }
      return std::pow(nd, spec.param);
    case KnRule::OverLog:
      return nd / log1(nd);
  }
  return 0.0;
}

KnHypotheses check_kn_hypotheses(const KnSpec& spec,
                                 const std::vector<std::int64_t>& schedule) {
  KnHypotheses out;
  if (schedule.empty()) return out;
  out.h1 = out.h2 = out.h3 = out.h4 = true;
  const double gamma = spec.gamma();
  double prev_kn = -1.0, prev_window = 2.0, prev_h4 = -1.0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const std::int64_t n = schedule[i];
    const double kn = kn_value(spec, n);
    const double window = kn / static_cast<double>(n);
    const double h4 = kn / log2(static_cast<double>(n));
    if (!(kn > 0.0 && kn <= static_cast<double>(n) + 1e-9)) out.h1 = false;
    if (i > 0) {
      if (kn < prev_kn - 1e-12) out.h2 = false;
      if (window > prev_window + 1e-12) out.h3 = false;
      if (h4 <= prev_h4) out.h4 = false;
    }
    if (window < gamma - 1e-9) out.h3 = false;
    prev_kn = kn;
    prev_window = window;
    prev_h4 = h4;
  }
  return out;
}

TailContext::TailContext(std::int64_t n_, double kn_, double gamma_)
    : n(n_), kn(kn_), gamma(gamma_), window(kn_ / static_cast<double>(n_)) {
  if (n_ < 1) throw std::invalid_argument("TailContext: n must be >= 1");
  if (!(window > 0.0 && window <= 1.0)) {
    throw std::invalid_argument("TailContext: window k_n/n must lie in (0,1]");
  }
}

TailContext make_tail_context(std::int64_t n, const KnSpec& spec) {
  return TailContext(n, kn_value(spec, n), spec.gamma());
}

}  // namespace tailcop
