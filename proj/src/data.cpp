#include "nrlimit/data.hpp"

#include <cmath>

namespace nrlimit {

VectorField random_divfree_field(const FourierLattice& lat, int band, std::uint64_t seed,
                                 double rms) {
  auto u = mean_free(leray_project(real_part(random_band_limited<3>(lat, band, seed, 1.0))));
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (double v : u[c]) sum += v * v;
  }
  if (sum > 0.0) u *= rms / std::sqrt(sum / static_cast<double>(lat.size()));
  return u;
}

}  // namespace nrlimit
