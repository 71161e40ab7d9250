#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "nrlimit/fft.hpp"

namespace nrlimit {

/// Scalar Fourier multiplier xi -> m(xi) with a printable name.
struct SymbolSpec {
  std::string name;
  std::function<Complex(const Xi&)> symbol;
};

/// Multiplies Fourier coefficients in place by m(xi) at each lattice slot.
template <std::size_t N, class Symbol>
void multiply_spectrum(Field<Complex, N>& spectrum, Symbol&& m) {
  const auto& lat = spectrum.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto factor = m(lat.xi(i));
    for (std::size_t c = 0; c < N; ++c) spectrum[c][i] *= factor;
  }
}

/// Applies the scalar multiplier m to every component of f.
template <std::size_t N, class Symbol>
Field<Complex, N> apply_multiplier(const Field<Complex, N>& f, Symbol&& m) {
  auto spec = fft_forward(f);
  multiply_spectrum(spec, std::forward<Symbol>(m));
  return fft_inverse(spec);
}

ComplexField apply_symbol(const ComplexField& f, const SymbolSpec& m);

// Named symbols.
double lambda_symbol(const Xi& xi, double eps);
/// h_eps(xi) = |xi|^2 / (1 + sqrt(1 + eps^2 |xi|^2)); eps = 0 gives |xi|^2/2.
double h_eps_symbol(const Xi& xi, double eps);

/// Multiplier (1 + eps^2 |xi|^2)^{power/2}, power = +1 or -1.
template <std::size_t N>
Field<Complex, N> lambda_eps(const Field<Complex, N>& f, double eps, int power);
ComplexField lambda_eps(const ComplexField& f, double eps, int power);
ComplexField h_eps(const ComplexField& f, double eps);

/// Leray projection I - xi xi^T / |xi|^2 per mode (identity at xi = 0).
VectorField leray_project(const VectorField& u);
ComplexVectorField leray_project(const ComplexVectorField& u);

/// Solves Laplace(A0) = rho - mean(rho) with zero-mean A0.
ScalarField poisson_solve(const ScalarField& rho);

/// Smooth cutoff: 1 on [0,1], 0 on [2,inf), C-infinity in between.
double lp_cutoff(double r);
/// Dyadic bump beta(xi) = cutoff(|xi|) - cutoff(2|xi|), supported in 1/2 <= |xi| <= 2.
double lp_bump(const Xi& xi);
double lp_bump_at(double norm_xi);
ComplexField littlewood_paley(const ComplexField& f, double mu);
template <std::size_t N>
Field<Complex, N> littlewood_paley(const Field<Complex, N>& f, double mu);

/// Low-frequency symbol: 1 for |xi| <= 1/(sqrt2 eps), 0 for |xi| >= sqrt2/eps.
double low_pass_symbol(const Xi& xi, double eps);
/// Constant C with |f_high|_{H^s} <= C eps^sigma |f_high|_{H^{s+sigma}}.
double high_frequency_constant(double sigma);
std::pair<ComplexField, ComplexField> low_high_split(const ComplexField& f, double eps);

/// 2/3-rule mask: keeps modes with |k_j| < n/3 on every axis.
bool dealias_keep(const FourierLattice& lattice, std::size_t idx);
template <class T, std::size_t N>
Field<T, N> dealias(const Field<T, N>& f);

// Differential operators (all spectral, Nyquist slot seen as zero).
template <std::size_t N>
Field<Complex, N> partial(const Field<Complex, N>& f, int axis);
ScalarField partial(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
VectorField curl(const VectorField& u);
/// |grad|^s with the zero mode mapped to zero when s < 0.
ScalarField riesz_power(const ScalarField& f, double s);
/// Spectral L2 norm of div u, scaled like the field L2 norm.
double divergence_norm(const VectorField& u);

template <class T, std::size_t N>
Field<T, N> mean_free(const Field<T, N>& f) {
  Field<T, N> out = f;
  for (std::size_t c = 0; c < N; ++c) {
    T mean{};
    for (const auto& v : f[c]) mean += v;
    mean /= static_cast<double>(f.size());
    for (auto& v : out[c]) v -= mean;
  }
  return out;
}

// ---- template definitions ----

template <std::size_t N>
Field<Complex, N> lambda_eps(const Field<Complex, N>& f, double eps, int power) {
  if (!(eps > 0.0)) throw std::invalid_argument("lambda_eps requires eps > 0");
  if (power != 1 && power != -1) throw std::invalid_argument("lambda_eps power must be +1 or -1");
  return apply_multiplier(f, [eps, power](const Xi& xi) {
    const double l = lambda_symbol(xi, eps);
    return power == 1 ? l : 1.0 / l;
  });
}

template <std::size_t N>
Field<Complex, N> littlewood_paley(const Field<Complex, N>& f, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("littlewood_paley requires mu > 0");
  return apply_multiplier(f, [mu](const Xi& xi) {
    return lp_bump({xi[0] / mu, xi[1] / mu, xi[2] / mu});
  });
}

template <class T, std::size_t N>
Field<T, N> dealias(const Field<T, N>& f) {
  auto spec = fft_forward(f);
  const auto& lat = f.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!dealias_keep(lat, i)) {
      for (std::size_t c = 0; c < N; ++c) spec[c][i] = 0.0;
    }
  }
  if constexpr (std::is_same_v<T, double>) {
    return real_part(fft_inverse(spec));
  } else {
    return fft_inverse(spec);
  }
}

template <std::size_t N>
Field<Complex, N> partial(const Field<Complex, N>& f, int axis) {
  return apply_multiplier(f, [axis](const Xi& xi) { return Complex(0.0, xi[axis]); });
}

}  // namespace nrlimit
