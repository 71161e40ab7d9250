#include "nrlimit/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace nrlimit {
namespace {

using nlohmann::json;

const std::set<std::string> kFamilies{"zero",       "stationary",     "thm2",      "thm3",
                                      "thm4",       "counterexample", "constraint"};

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& j, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(join_path(prefix, key), "unknown key");
  }
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "must be an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) throw ConfigError(field, "must be true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "must be a string");
  return j.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& field) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(get_number(j, field));
    return out;
  }
  if (!j.is_array()) throw ConfigError(field, "must be a number or a list of numbers");
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ProbeCase parse_case(const std::string& s) {
  if (s == "i") return ProbeCase::diagonal_low;
  if (s == "ii") return ProbeCase::diagonal_high;
  if (s == "iii") return ProbeCase::off_diagonal;
  throw ConfigError("probe.case", "must be one of i, ii, iii (got '" + s + "')");
}

void require_positive_list(const std::vector<double>& v, const std::string& field) {
  if (v.empty()) throw ConfigError(field, "must not be empty");
  for (double x : v) {
    if (!(x > 0.0)) throw ConfigError(field, "values must be positive");
  }
}

}  // namespace

double DtRule::for_eps(double eps) const {
  double dt = fixed > 0.0 ? fixed : eps2_factor * eps * eps;
  return std::min(dt, max);
}

std::string probe_case_name(ProbeCase c) {
  switch (c) {
    case ProbeCase::diagonal_low:
      return "i";
    case ProbeCase::diagonal_high:
      return "ii";
    case ProbeCase::off_diagonal:
      return "iii";
  }
  return "?";
}

const std::vector<std::string>& known_norms() {
  static const std::vector<std::string> names{
      "h1_spinor",  "hdot1_a0",          "l1_charge",          "l2_charge",
      "l3_charge",  "pairing_defect",    "current_t0_defect",  "small_component",
      "h1_pauli",   "l1_current_defect", "constraint_defect_t0"};
  return names;
}

ExperimentConfig parse_config(const json& j, ConfigKind kind) {
  reject_unknown(j, "", {"grid", "eps", "t_final", "dt", "data", "sample_count", "dealias",
                         "h1_ceiling", "pairing", "norms", "probe", "output", "comment"});
  ExperimentConfig c;
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    reject_unknown(g, "grid", {"n", "period"});
    if (g.contains("n")) c.n = get_int(g["n"], "grid.n");
    if (g.contains("period")) c.period = get_number(g["period"], "grid.period");
  }
  if (j.contains("eps")) c.eps = get_numbers(j["eps"], "eps");
  if (j.contains("t_final")) c.t_final = get_number(j["t_final"], "t_final");
  if (j.contains("dt")) {
    const auto& d = j["dt"];
    if (d.is_number()) {
      c.dt.fixed = get_number(d, "dt");
    } else {
      reject_unknown(d, "dt", {"fixed", "eps2_factor", "max"});
      c.dt.fixed = 0.0;
      if (d.contains("fixed")) c.dt.fixed = get_number(d["fixed"], "dt.fixed");
      if (d.contains("eps2_factor")) c.dt.eps2_factor = get_number(d["eps2_factor"], "dt.eps2_factor");
      if (d.contains("max")) c.dt.max = get_number(d["max"], "dt.max");
    }
  }
  if (j.contains("data")) {
    const auto& d = j["data"];
    reject_unknown(d, "data", {"family", "band", "amplitude", "seed", "gauge_amplitude", "gauge_band"});
    if (d.contains("family")) c.data.family = get_string(d["family"], "data.family");
    if (d.contains("band")) c.data.band = get_int(d["band"], "data.band");
    if (d.contains("amplitude")) c.data.amplitude = get_number(d["amplitude"], "data.amplitude");
    if (d.contains("seed")) {
      if (!d["seed"].is_number_integer() || d["seed"].get<long long>() < 0) throw ConfigError("data.seed", "must be a non-negative integer");
      c.data.seed = d["seed"].get<std::uint64_t>();
    }
    if (d.contains("gauge_amplitude")) {
      c.data.gauge_amplitude = get_number(d["gauge_amplitude"], "data.gauge_amplitude");
    }
    if (d.contains("gauge_band")) c.data.gauge_band = get_int(d["gauge_band"], "data.gauge_band");
  }
  if (j.contains("sample_count")) c.sample_count = get_int(j["sample_count"], "sample_count");
  if (j.contains("dealias")) c.dealias = get_bool(j["dealias"], "dealias");
  if (j.contains("h1_ceiling")) c.h1_ceiling = get_number(j["h1_ceiling"], "h1_ceiling");
  if (j.contains("pairing")) {
    const auto& p = j["pairing"];
    reject_unknown(p, "pairing", {"t_center", "t_halfwidth", "x_center", "kappa"});
    c.pairing.enabled = true;
    if (p.contains("t_center")) c.pairing.t_center = get_number(p["t_center"], "pairing.t_center");
    if (p.contains("t_halfwidth")) {
      c.pairing.t_halfwidth = get_number(p["t_halfwidth"], "pairing.t_halfwidth");
    }
    if (p.contains("x_center")) {
      const auto xs = get_numbers(p["x_center"], "pairing.x_center");
      if (xs.size() != 3) throw ConfigError("pairing.x_center", "must have 3 entries");
      std::copy(xs.begin(), xs.end(), c.pairing.x_center.begin());
    }
    if (p.contains("kappa")) c.pairing.kappa = get_number(p["kappa"], "pairing.kappa");
  }
  if (j.contains("norms")) {
    const auto& ns = j["norms"];
    if (!ns.is_array()) throw ConfigError("norms", "must be a list of names");
    for (const auto& n : ns) c.norms.push_back(get_string(n, "norms"));
  }
  if (j.contains("probe")) {
    const auto& p = j["probe"];
    reject_unknown(p, "probe", {"case", "eps", "mu", "lambda", "trials", "t_final", "time_steps", "branch"});
    if (p.contains("case")) c.probe.which = parse_case(get_string(p["case"], "probe.case"));
    if (p.contains("eps")) c.probe.eps = get_numbers(p["eps"], "probe.eps");
    if (p.contains("mu")) c.probe.mu = get_numbers(p["mu"], "probe.mu");
    if (p.contains("lambda")) c.probe.lambda = get_numbers(p["lambda"], "probe.lambda");
    if (p.contains("trials")) c.probe.trials = get_int(p["trials"], "probe.trials");
    if (p.contains("t_final")) c.probe.t_final = get_number(p["t_final"], "probe.t_final");
    if (p.contains("time_steps")) c.probe.time_steps = get_int(p["time_steps"], "probe.time_steps");
    if (p.contains("branch")) c.probe.branch = get_int(p["branch"], "probe.branch");
  } else if (kind == ConfigKind::probe) {
    throw ConfigError("probe", "required for probe-dyadic");
  }
  if (j.contains("output")) c.output = get_string(j["output"], "output");
  validate(c, kind);
  return c;
}

void validate(const ExperimentConfig& c, ConfigKind kind) {
  if (c.n < 4 || c.n % 2 != 0) {
    throw ConfigError("grid.n", "must be an even integer >= 4 (got " + std::to_string(c.n) + ")");
  }
  if (!(c.period > 0.0)) throw ConfigError("grid.period", "must be positive");
  if (kind == ConfigKind::probe) {
    const auto& p = c.probe;
    require_positive_list(p.eps, "probe.eps");
    require_positive_list(p.mu, "probe.mu");
    require_positive_list(p.lambda, "probe.lambda");
    for (double v : p.mu) {
      if (std::abs(std::log2(v) - std::round(std::log2(v))) > 1e-12) {
        throw ConfigError("probe.mu", "values must be dyadic (powers of 2)");
      }
    }
    for (double v : p.lambda) {
      if (std::abs(std::log2(v) - std::round(std::log2(v))) > 1e-12) {
        throw ConfigError("probe.lambda", "values must be dyadic (powers of 2)");
      }
    }
    if (p.trials < 1) throw ConfigError("probe.trials", "must be >= 1");
    if (!(p.t_final > 0.0)) throw ConfigError("probe.t_final", "must be positive");
    if (p.time_steps < 0) throw ConfigError("probe.time_steps", "must be >= 0");
    if (p.branch != 1 && p.branch != -1) throw ConfigError("probe.branch", "must be 1 or -1");
    return;
  }
  require_positive_list(c.eps, "eps");
  if (kind == ConfigKind::single_run && c.eps.size() != 1) {
    throw ConfigError("eps", "a single run takes exactly one eps value");
  }
  if (kind == ConfigKind::study) {
    if (c.eps.size() < 3) {
      throw ConfigError("eps", "a rate needs at least 3 eps values (got " + std::to_string(c.eps.size()) + ")");
    }
    for (std::size_t i = 1; i < c.eps.size(); ++i) {
      if (!(c.eps[i] < c.eps[i - 1])) throw ConfigError("eps", "must be strictly decreasing");
    }
  }
  if (!(c.t_final > 0.0)) throw ConfigError("t_final", "must be positive");
  if (c.dt.fixed < 0.0 || c.dt.eps2_factor < 0.0) throw ConfigError("dt", "must be positive");
  if (!(c.dt.fixed > 0.0) && !(c.dt.eps2_factor > 0.0)) {
    throw ConfigError("dt", "give either a fixed step or eps2_factor");
  }
  if (c.dt.fixed > 0.0 && c.dt.eps2_factor > 0.0) {
    throw ConfigError("dt", "give only one of fixed and eps2_factor");
  }
  if (!(c.dt.max > 0.0)) throw ConfigError("dt.max", "must be positive");
  if (c.dt.fixed > c.dt.max) throw ConfigError("dt.fixed", "exceeds dt.max");
  if (!kFamilies.count(c.data.family)) {
    throw ConfigError("data.family", "unknown family '" + c.data.family + "'");
  }
  // Band-limited data is the smoothness class the rate studies assume.
  if (c.data.band < 0 || 3 * c.data.band >= c.n) {
    throw ConfigError("data.band", "must satisfy 0 <= 3*band < n (band-limited, resolved data)");
  }
  if (c.data.gauge_band < 0 || 3 * c.data.gauge_band >= c.n) {
    throw ConfigError("data.gauge_band", "must satisfy 0 <= 3*band < n");
  }
  if (!(c.data.amplitude >= 0.0)) throw ConfigError("data.amplitude", "must be >= 0");
  if (!(c.data.gauge_amplitude >= 0.0)) throw ConfigError("data.gauge_amplitude", "must be >= 0");
  if (c.sample_count < 1) throw ConfigError("sample_count", "must be >= 1");
  if (!(c.h1_ceiling > 0.0)) throw ConfigError("h1_ceiling", "must be positive");
  if (c.pairing.enabled) {
    if (!(c.pairing.t_halfwidth > 0.0)) throw ConfigError("pairing.t_halfwidth", "must be positive");
    if (c.pairing.t_center - c.pairing.t_halfwidth < 0.0 ||
        c.pairing.t_center + c.pairing.t_halfwidth > c.t_final) {
      throw ConfigError("pairing.t_halfwidth", "support of G exceeds the run window [0, t_final]");
    }
    if (!(c.pairing.kappa >= 0.0)) throw ConfigError("pairing.kappa", "must be >= 0");
  }
  for (const auto& n : c.norms) {
    const auto& k = known_norms();
    if (std::find(k.begin(), k.end(), n) == k.end()) {
      throw ConfigError("norms", "unknown norm '" + n + "'");
    }
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;  // std::map keys: sorted, hence canonical
  j["grid"] = {{"n", c.n}, {"period", c.period}};
  j["eps"] = c.eps;
  j["t_final"] = c.t_final;
  j["dt"] = {{"fixed", c.dt.fixed}, {"eps2_factor", c.dt.eps2_factor}, {"max", c.dt.max}};
  j["data"] = {{"family", c.data.family},
               {"band", c.data.band},
               {"amplitude", c.data.amplitude},
               {"seed", c.data.seed},
               {"gauge_amplitude", c.data.gauge_amplitude},
               {"gauge_band", c.data.gauge_band}};
  j["sample_count"] = c.sample_count;
  j["dealias"] = c.dealias;
  j["h1_ceiling"] = c.h1_ceiling;
  if (c.pairing.enabled) {
    j["pairing"] = {{"t_center", c.pairing.t_center},
                    {"t_halfwidth", c.pairing.t_halfwidth},
                    {"x_center", c.pairing.x_center},
                    {"kappa", c.pairing.kappa}};
  }
  j["norms"] = c.norms;
  j["probe"] = {{"case", probe_case_name(c.probe.which)},
                {"eps", c.probe.eps},
                {"mu", c.probe.mu},
                {"lambda", c.probe.lambda},
                {"trials", c.probe.trials},
                {"t_final", c.probe.t_final},
                {"time_steps", c.probe.time_steps},
                {"branch", c.probe.branch}};
  return j;
}

}  // namespace nrlimit
