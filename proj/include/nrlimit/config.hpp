#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace nrlimit {

/// Validation failure tied to one config field (dotted path, e.g. "grid.n").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// dt = fixed, or eps2_factor * eps^2, capped at max.
struct DtRule {
  double fixed = 1e-3;
  double eps2_factor = 0.0;
  double max = 0.05;
  double for_eps(double eps) const;
};

/// Initial-data family. Families: zero, stationary, thm2, thm3, thm4,
/// counterexample, constraint.
struct DataSpec {
  std::string family = "zero";
  int band = 2;
  double amplitude = 0.5;
  std::uint64_t seed = 0;
  double gauge_amplitude = 0.0;  // rms of the initial divergence-free A
  int gauge_band = 2;
};

/// G(t,x) = c b((t - t_center)/t_halfwidth) exp(kappa sum_j (cos(x_j - x_center_j) - 1)),
/// b(s) = exp(-1/(1 - s^2)) on |s| < 1, c chosen so that the integral of G is 1.
struct PairingBump {
  bool enabled = false;
  double t_center = 0.25;
  double t_halfwidth = 0.2;
  std::array<double, 3> x_center{3.141592653589793, 3.141592653589793, 3.141592653589793};
  double kappa = 1.0;
};

enum class ProbeCase { diagonal_low, diagonal_high, off_diagonal };

struct ProbeSpec {
  ProbeCase which = ProbeCase::diagonal_low;
  std::vector<double> eps{0.25};
  std::vector<double> mu{1, 2, 4};
  std::vector<double> lambda{4};
  int trials = 8;
  double t_final = 1.0;
  int time_steps = 0;  // 0: derived from the largest frequency
  int branch = 1;      // sign of the L_{+-} flow for v
};

std::string probe_case_name(ProbeCase c);

struct ExperimentConfig {
  int n = 16;
  double period = 6.283185307179586;
  std::vector<double> eps{0.5};
  double t_final = 0.1;
  DtRule dt;
  DataSpec data;
  int sample_count = 10;
  bool dealias = false;
  double h1_ceiling = 1e6;
  PairingBump pairing;
  std::vector<std::string> norms;  // empty: record every norm
  ProbeSpec probe;
  std::string output = "out";
};

/// What the config is for; decides which fields are required and how the eps
/// list is checked.
enum class ConfigKind { single_run, study, probe };

/// Parses and validates. Unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j, ConfigKind kind);
/// Same checks on an already built config.
void validate(const ExperimentConfig& cfg, ConfigKind kind);
/// Canonical JSON form (every field, fixed key order) used for hashing.
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Names accepted in "norms".
const std::vector<std::string>& known_norms();

}  // namespace nrlimit
