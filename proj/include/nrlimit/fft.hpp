#pragma once

#include <span>

#include "nrlimit/field.hpp"

namespace nrlimit {

// Normalisation: forward produces c_k = n^-3 sum_x f(x) e^{-i k.x}, so that
// f(x) = sum_k c_k e^{i k.x} and the L2 norm on [0,L)^3 is L^{3/2} |c|_2.
//
// Plans are cached per grid size behind a mutex; execution uses the FFTW
// new-array interface and is safe from any thread. Plans are made with
// FFTW_ESTIMATE | FFTW_UNALIGNED so results do not depend on buffer alignment.

void fft_forward(int n, std::span<const Complex> in, std::span<Complex> out);
void fft_inverse(int n, std::span<const Complex> in, std::span<Complex> out);

template <std::size_t N>
Field<Complex, N> fft_forward(const Field<Complex, N>& f) {
  Field<Complex, N> out(f.lattice());
  for (std::size_t c = 0; c < N; ++c) fft_forward(f.lattice().n(), f[c], out[c]);
  return out;
}

template <std::size_t N>
Field<Complex, N> fft_inverse(const Field<Complex, N>& f) {
  Field<Complex, N> out(f.lattice());
  for (std::size_t c = 0; c < N; ++c) fft_inverse(f.lattice().n(), f[c], out[c]);
  return out;
}

template <std::size_t N>
Field<Complex, N> fft_forward(const Field<double, N>& f) {
  return fft_forward(to_complex(f));
}

}  // namespace nrlimit
