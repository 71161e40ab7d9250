#pragma once

#include <string>

namespace nrlimit {

/// Round-trip decimal text for a double ("%.17g"); non-finite values map to
/// "nan", "inf" or "-inf".
std::string format_double(double v);

}  // namespace nrlimit
