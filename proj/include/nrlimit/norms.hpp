#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nrlimit/fft.hpp"

namespace nrlimit {

/// Sobolev weight (1+|xi|^2)^s, or |xi|^{2s} when homogeneous (0 at xi = 0).
double sobolev_weight(const Xi& xi, double s, bool homogeneous);

/// Sum over components of sum_xi w(xi) |f_hat(xi)|^2, scaled by the volume so
/// that s = 0 gives the L2 norm on [0,L)^3. Returns the square root.
template <class T, std::size_t N>
double sobolev_norm(const Field<T, N>& f, double s, bool homogeneous = false) {
  const auto spec = fft_forward(f);
  const auto& lat = f.lattice();
  if (homogeneous && s < 0.0) {
    for (std::size_t c = 0; c < N; ++c) {
      if (std::abs(spec[c][0]) > 1e-14 * (1.0 + max_abs(f))) {
        throw std::invalid_argument("homogeneous Sobolev norm with s < 0 needs a mean-free field");
      }
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double w = sobolev_weight(lat.xi(i), s, homogeneous);
    if (w == 0.0) continue;
    for (std::size_t c = 0; c < N; ++c) sum += w * std::norm(spec[c][i]);
  }
  return std::sqrt(lat.volume() * sum);
}

template <class T, std::size_t N>
double l2_norm(const Field<T, N>& f) {
  double sum = 0.0;
  for (std::size_t c = 0; c < N; ++c) {
    for (const auto& v : f[c]) sum += std::norm(v);
  }
  return std::sqrt(f.lattice().cell_volume() * sum);
}

template <class T, std::size_t N>
double h1_norm(const Field<T, N>& f) {
  return sobolev_norm(f, 1.0, false);
}

/// Grid quadrature (sum |f|^p h^3)^{1/p}; pointwise magnitude is the Euclidean
/// norm over components. p = infinity gives the max sample.
template <class T, std::size_t N>
double lp_norm(const Field<T, N>& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  const bool inf = std::isinf(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double m2 = 0.0;
    for (std::size_t c = 0; c < N; ++c) m2 += std::norm(f[c][i]);
    const double m = std::sqrt(m2);
    if (inf) {
      acc = std::max(acc, m);
    } else {
      acc += std::pow(m, p);
    }
  }
  if (inf) return acc;
  return std::pow(f.lattice().cell_volume() * acc, 1.0 / p);
}

/// Integral of f over the torus (per component 0).
double integrate(const ScalarField& f);

}  // namespace nrlimit
