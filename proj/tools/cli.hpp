#pragma once

#include <string>
#include <vector>

namespace nrlimit::cli {

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 1 a check or run failed, 2 bad usage or invalid config.
int run(const std::vector<std::string>& args);

/// FNV-1a 64-bit hash, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace nrlimit::cli
