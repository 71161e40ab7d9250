#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nrlimit {

struct CheckLine {
  std::string name;
  double value = 0.0;      // residual, violation count or ratio
  double lower = 0.0;      // pass when lower <= value <= upper
  double upper = 0.0;
  bool pass() const { return value >= lower && value <= upper; }
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckLine> lines;
  bool pass() const;
};

/// matrices, projections, symbols, null-1, null-2, squared-dirac
const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown suite. `seed` offsets the
/// random data of the null suites.
SuiteResult run_suite(const std::string& name, std::uint64_t seed = 0);

}  // namespace nrlimit
