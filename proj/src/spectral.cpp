#include "nrlimit/spectral.hpp"

#include <cmath>
#include <numbers>

namespace nrlimit {

ComplexField apply_symbol(const ComplexField& f, const SymbolSpec& m) {
  if (!m.symbol) throw std::invalid_argument("symbol '" + m.name + "' has no evaluator");
  return apply_multiplier(f, m.symbol);
}

double lambda_symbol(const Xi& xi, double eps) { return std::sqrt(1.0 + eps * eps * norm2(xi)); }

double h_eps_symbol(const Xi& xi, double eps) {
  const double k2 = norm2(xi);
  return k2 / (1.0 + std::sqrt(1.0 + eps * eps * k2));
}

ComplexField lambda_eps(const ComplexField& f, double eps, int power) {
  return lambda_eps<1>(f, eps, power);
}

ComplexField h_eps(const ComplexField& f, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("h_eps requires eps >= 0");
  return apply_multiplier(f, [eps](const Xi& xi) { return h_eps_symbol(xi, eps); });
}

ComplexVectorField leray_project(const ComplexVectorField& u) {
  auto spec = fft_forward(u);
  const auto& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Xi xi = lat.xi(i);
    const double k2 = norm2(xi);
    if (k2 == 0.0) continue;
    const Complex dot = xi[0] * spec[0][i] + xi[1] * spec[1][i] + xi[2] * spec[2][i];
    for (int c = 0; c < 3; ++c) spec[c][i] -= xi[c] * dot / k2;
  }
  return fft_inverse(spec);
}

VectorField leray_project(const VectorField& u) { return real_part(leray_project(to_complex(u))); }

ScalarField poisson_solve(const ScalarField& rho) {
  auto spec = fft_forward(rho);
  multiply_spectrum(spec, [](const Xi& xi) {
    const double k2 = norm2(xi);
    return k2 == 0.0 ? 0.0 : -1.0 / k2;
  });
  return real_part(fft_inverse(spec));
}

namespace {
double smooth_step_weight(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double lp_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = smooth_step_weight(2.0 - r);
  const double b = smooth_step_weight(r - 1.0);
  return a / (a + b);
}

double lp_bump_at(double norm_xi) { return lp_cutoff(norm_xi) - lp_cutoff(2.0 * norm_xi); }

double lp_bump(const Xi& xi) { return lp_bump_at(std::sqrt(norm2(xi))); }

ComplexField littlewood_paley(const ComplexField& f, double mu) {
  return littlewood_paley<1>(f, mu);
}

double low_pass_symbol(const Xi& xi, double eps) {
  return lp_cutoff(std::numbers::sqrt2 * eps * std::sqrt(norm2(xi)));
}

double high_frequency_constant(double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  return std::pow(2.0, sigma / 2.0);
}

std::pair<ComplexField, ComplexField> low_high_split(const ComplexField& f, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("low_high_split requires eps > 0");
  auto low = apply_multiplier(f, [eps](const Xi& xi) { return low_pass_symbol(xi, eps); });
  auto high = f - low;
  return {std::move(low), std::move(high)};
}

bool dealias_keep(const FourierLattice& lattice, std::size_t idx) {
  const auto k = lattice.wavevector(idx);
  const int n = lattice.n();
  for (int j = 0; j < 3; ++j) {
    if (3 * std::abs(k[j]) >= n) return false;
  }
  return true;
}

ScalarField partial(const ScalarField& f, int axis) {
  return real_part(partial<1>(to_complex(f), axis));
}

VectorField gradient(const ScalarField& f) {
  const auto spec = fft_forward(f);
  ComplexVectorField g(f.lattice());
  ComplexField tmp(f.lattice());
  const auto& lat = f.lattice();
  for (int a = 0; a < 3; ++a) {
    for (std::size_t i = 0; i < lat.size(); ++i) tmp[0][i] = Complex(0.0, lat.xi(i)[a]) * spec[0][i];
    g[a] = fft_inverse(tmp)[0];
  }
  return real_part(g);
}

ScalarField divergence(const VectorField& u) {
  const auto spec = fft_forward(u);
  const auto& lat = u.lattice();
  ComplexField d(lat);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Xi xi = lat.xi(i);
    d[0][i] = Complex(0.0, 1.0) * (xi[0] * spec[0][i] + xi[1] * spec[1][i] + xi[2] * spec[2][i]);
  }
  return real_part(fft_inverse(d));
}

VectorField curl(const VectorField& u) {
  const auto spec = fft_forward(u);
  const auto& lat = u.lattice();
  ComplexVectorField c(lat);
  const Complex I(0.0, 1.0);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Xi xi = lat.xi(i);
    c[0][i] = I * (xi[1] * spec[2][i] - xi[2] * spec[1][i]);
    c[1][i] = I * (xi[2] * spec[0][i] - xi[0] * spec[2][i]);
    c[2][i] = I * (xi[0] * spec[1][i] - xi[1] * spec[0][i]);
  }
  return real_part(fft_inverse(c));
}

ScalarField riesz_power(const ScalarField& f, double s) {
  auto spec = fft_forward(f);
  multiply_spectrum(spec, [s](const Xi& xi) {
    const double k2 = norm2(xi);
    if (k2 == 0.0) return s == 0.0 ? 1.0 : 0.0;
    return std::pow(k2, s / 2.0);
  });
  return real_part(fft_inverse(spec));
}

double divergence_norm(const VectorField& u) {
  const auto spec = fft_forward(u);
  const auto& lat = u.lattice();
  double sum = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Xi xi = lat.xi(i);
    sum += std::norm(xi[0] * spec[0][i] + xi[1] * spec[1][i] + xi[2] * spec[2][i]);
  }
  return std::sqrt(lat.volume() * sum);
}

}  // namespace nrlimit
