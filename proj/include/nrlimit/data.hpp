#pragma once

#include <cstdint>
#include <random>

#include "nrlimit/spectral.hpp"

namespace nrlimit {

/// Random field whose Fourier coefficients are i.i.d. complex Gaussians on
/// max_j |k_j| <= band (integer wavenumbers), zero elsewhere. The result is
/// rescaled to root-mean-square amplitude `rms` over the torus.
template <std::size_t N>
Field<Complex, N> random_band_limited(const FourierLattice& lat, int band, std::uint64_t seed,
                                      double rms) {
  if (band < 0) throw std::invalid_argument("band limit must be >= 0");
  if (3 * band >= lat.n()) {
    throw std::invalid_argument("band limit " + std::to_string(band) +
                                " is not resolved (needs 3*band < n)");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Field<Complex, N> spec(lat);
  double sum = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto k = lat.wavevector(i);
    if (std::abs(k[0]) > band || std::abs(k[1]) > band || std::abs(k[2]) > band) continue;
    for (std::size_t c = 0; c < N; ++c) {
      spec[c][i] = Complex(g(rng), g(rng));
      sum += std::norm(spec[c][i]);
    }
  }
  if (sum > 0.0) spec *= Complex(rms / std::sqrt(sum));
  return fft_inverse(spec);
}

/// Real, mean-free, divergence-free random vector field of the given band and
/// root-mean-square amplitude.
VectorField random_divfree_field(const FourierLattice& lat, int band, std::uint64_t seed,
                                 double rms);

}  // namespace nrlimit
