#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tailcop/bench.hpp"

namespace tailcop {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

struct RawConfig {
  std::map<std::string, std::string> kv;
  std::map<std::string, std::size_t> line_of;

  bool has(const std::string& k) const { return kv.count(k) > 0; }

  std::string str(const std::string& k) const { return kv.at(k); }

  double real(const std::string& k) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(kv.at(k), &pos);
      if (pos != kv.at(k).size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      fail("key '" + k + "' (line " + std::to_string(line_of.at(k)) +
           ") is not a number");
    }
  }

  std::int64_t integer(const std::string& k) const {
    const double v = real(k);
    if (v != std::floor(v)) {
      fail("key '" + k + "' (line " + std::to_string(line_of.at(k)) +
           ") must be an integer");
    }
    return static_cast<std::int64_t>(v);
  }

  bool flag(const std::string& k) const {
    const std::string v = lower(kv.at(k));
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("key '" + k + "' (line " + std::to_string(line_of.at(k)) +
         ") must be a boolean");
  }
};

const std::map<std::string, Experiment>& experiment_names() {
  static const std::map<std::string, Experiment> names = {
      {"rate", Experiment::Rate},
      {"rate_general", Experiment::RateGeneral},
      {"rate_smoothed", Experiment::RateSmoothed},
      {"lil_tail_quantile", Experiment::LilTailQuantile},
      {"lil_gstar", Experiment::LilGStar},
      {"bahadur_kiefer", Experiment::BahadurKiefer},
      {"oscillation", Experiment::Oscillation},
      {"cov_check", Experiment::CovCheck},
      {"test_calibration", Experiment::TestCalibration},
  };
  return names;
}

}  // namespace

std::string ExperimentConfig::experiment_name() const {
  for (const auto& [name, e] : experiment_names()) {
    if (e == experiment) return name;
  }
  return "unknown";
}

std::vector<std::int64_t> ExperimentConfig::schedule() const {
  std::vector<std::int64_t> out;
  double nd = static_cast<double>(n0);
  for (int k = 0; k < count; ++k) {
    out.push_back(static_cast<std::int64_t>(std::llround(nd)));
    nd *= factor;
  }
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  static const std::map<std::string, int> known = {
      {"experiment", 0}, {"model", 0},          {"theta", 0},
      {"gamma", 0},      {"kn_power", 0},       {"kn_overlog", 0},
      {"n0", 0},         {"factor", 0},         {"count", 0},
      {"reps", 0},       {"null_reps", 0},      {"grid_m", 0},
      {"max_axis", 0},   {"seed", 0},           {"kernel", 0},
      {"bandwidth_c", 0},{"bandwidth_delta", 0},{"nu1", 0},
      {"nu2", 0},        {"level", 0},          {"method", 0},
      {"gauss_m", 0},    {"h_rule", 0},         {"out", 0},
      {"assert_exceed_max", 0}, {"assert_ratio_min", 0},
      {"assert_ratio_max", 0},
  };

  RawConfig raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      fail("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = lower(trim(t.substr(0, eq)));
    const std::string value = trim(t.substr(eq + 1));
    if (known.find(key) == known.end()) {
      fail("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (raw.has(key)) {
      fail("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    raw.kv[key] = value;
    raw.line_of[key] = lineno;
  }

  ExperimentConfig cfg;
  if (!raw.has("experiment")) fail("missing required key 'experiment'");
  {
    const std::string name = lower(raw.str("experiment"));
    const auto it = experiment_names().find(name);
    if (it == experiment_names().end()) {
      fail("unknown experiment '" + name + "'");
    }
    cfg.experiment = it->second;
  }
  if (!raw.has("seed")) fail("missing required key 'seed'");
  cfg.seed = static_cast<std::uint64_t>(raw.integer("seed"));

  // model
  const std::string model_name =
      raw.has("model") ? lower(raw.str("model")) : "independence";
  if (model_name == "independence") {
    cfg.model = make_independence();
  } else if (model_name == "fgm") {
    if (!raw.has("theta")) fail("model fgm requires key 'theta'");
    cfg.model = make_fgm(raw.real("theta"));
  } else if (model_name == "clayton") {
    if (!raw.has("theta")) fail("model clayton requires key 'theta'");
    cfg.model = make_clayton(raw.real("theta"));
  } else {
    fail("unknown model '" + model_name + "'");
  }

  // k_n rule
  const int kn_keys = (raw.has("gamma") ? 1 : 0) + (raw.has("kn_power") ? 1 : 0) +
                      (raw.has("kn_overlog") ? 1 : 0);
  if (kn_keys > 1) fail("give at most one of gamma, kn_power, kn_overlog");
  const bool needs_kn = cfg.experiment != Experiment::CovCheck;
  if (needs_kn && kn_keys == 0) {
    fail("missing k_n rule: set gamma, kn_power or kn_overlog");
  }
  if (raw.has("gamma")) {
    const double g = raw.real("gamma");
    if (!(g > 0.0 && g <= 1.0)) {
      fail("gamma = " + raw.str("gamma") +
           " violates (H.3): k_n/n must decrease to gamma in (0,1]");
    }
    cfg.kn_spec = kn_proportional(g);
  } else if (raw.has("kn_power")) {
    cfg.kn_spec = kn_power(raw.real("kn_power"));
  } else if (raw.has("kn_overlog")) {
    if (!raw.flag("kn_overlog")) fail("kn_overlog must be true when given");
    cfg.kn_spec = kn_overlog();
  }

  // schedule
  const bool needs_schedule = cfg.experiment != Experiment::CovCheck;
  if (needs_schedule) {
    if (!raw.has("n0")) fail("missing required key 'n0'");
    cfg.n0 = raw.integer("n0");
    if (cfg.n0 < 2) fail("n0 must be >= 2");
    if (cfg.experiment == Experiment::TestCalibration) {
      cfg.count = 1;
    } else {
      if (!raw.has("count")) fail("missing required key 'count'");
      cfg.count = static_cast<int>(raw.integer("count"));
      if (cfg.count < 1) fail("count must be >= 1");
    }
    cfg.factor = raw.has("factor") ? raw.real("factor") : 4.0;
    if (cfg.count > 1 && !(cfg.factor > 1.0)) {
      fail("factor must exceed 1 (n_schedule strictly increasing)");
    }
  }

  cfg.reps = raw.has("reps") ? static_cast<int>(raw.integer("reps"))
                             : (cfg.experiment == Experiment::CovCheck ? 20000
                                : cfg.experiment == Experiment::TestCalibration
                                    ? 500
                                    : 100);
  if (cfg.reps < 1) fail("reps must be >= 1");

  cfg.grid_m = raw.has("grid_m")
                   ? static_cast<int>(raw.integer("grid_m"))
                   : (cfg.experiment == Experiment::CovCheck ? 64 : 512);
  if (cfg.grid_m < 2) fail("grid_m must be >= 2");
  if (cfg.experiment == Experiment::CovCheck && cfg.grid_m % 4 != 0) {
    fail("cov_check needs grid_m divisible by 4 (lattice {0.25,0.5,0.75})");
  }
  cfg.max_axis = raw.has("max_axis") ? static_cast<int>(raw.integer("max_axis"))
                                     : 2048;
  if (cfg.max_axis < 2 * (cfg.grid_m + 1)) {
    cfg.max_axis = 2 * (cfg.grid_m + 1);
  }

  // kernel
  if (raw.has("kernel")) {
    const std::string k = lower(raw.str("kernel"));
    KernelKind kind;
    if (k == "epanechnikov") {
      kind = KernelKind::ProductEpanechnikov;
    } else if (k == "gaussian") {
      kind = KernelKind::ProductGaussian;
    } else {
      fail("unknown kernel '" + k + "'");
    }
    cfg.kernel = make_kernel(
        kind, raw.has("bandwidth_c") ? raw.real("bandwidth_c") : 1.0,
        raw.has("bandwidth_delta") ? raw.real("bandwidth_delta") : 0.05);
  }
  if (cfg.experiment == Experiment::RateSmoothed && !cfg.kernel) {
    fail("rate_smoothed requires key 'kernel'");
  }

  cfg.nu1 = raw.has("nu1") ? raw.real("nu1") : 0.0;
  cfg.nu2 = raw.has("nu2") ? raw.real("nu2") : 0.0;
  if (!(cfg.nu1 > -0.5 && cfg.nu2 > -0.5)) {
    fail("nu1 and nu2 must exceed -1/2 (weight integrability)");
  }
  cfg.level = raw.has("level") ? raw.real("level") : 0.05;
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) fail("level must lie in (0,1)");

  if (raw.has("method")) {
    const std::string m = lower(raw.str("method"));
    if (m == "mc") {
      cfg.method = TestMethod::McEmpirical;
    } else if (m == "gauss") {
      cfg.method = TestMethod::GaussianLimit;
    } else {
      fail("method must be 'mc' or 'gauss'");
    }
  }
  cfg.gauss_m = raw.has("gauss_m") ? static_cast<int>(raw.integer("gauss_m")) : 256;
  if (cfg.gauss_m < 2) fail("gauss_m must be >= 2");

  if (raw.has("h_rule")) {
    const std::string h = lower(raw.str("h_rule"));
    if (h == "power_half") {
      cfg.h_rule = HRule::PowerHalf;
    } else if (h == "proof_case_i") {
      cfg.h_rule = HRule::ProofCaseI;
    } else if (h == "proof_case_ii") {
      cfg.h_rule = HRule::ProofCaseII;
    } else {
      fail("h_rule must be power_half, proof_case_i or proof_case_ii");
    }
  }

  cfg.output_path =
      raw.has("out") ? raw.str("out") : cfg.experiment_name() + ".csv";

  if (raw.has("assert_exceed_max")) {
    cfg.assert_exceed_max = raw.real("assert_exceed_max");
  }
  if (raw.has("assert_ratio_min")) {
    cfg.assert_ratio_min = raw.real("assert_ratio_min");
  }
  if (raw.has("assert_ratio_max")) {
    cfg.assert_ratio_max = raw.real("assert_ratio_max");
  }

  if (raw.has("null_reps")) {
    cfg.null_reps = static_cast<int>(raw.integer("null_reps"));
    if (cfg.null_reps < 100) fail("null_reps must be >= 100");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  return parse_config(in);
}

}  // namespace tailcop
