#include "nrlimit/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nrlimit {

FourierLattice::FourierLattice(int n, double period)
    : n_(n), period_(period), size_(static_cast<std::size_t>(n) * n * n), symbol_freq_(n) {
  for (int m = 0; m < n_; ++m) {
    symbol_freq_[m] = is_nyquist(m) ? 0.0 : frequency(m);
  }
}

double FourierLattice::frequency_spacing() const { return 2.0 * std::numbers::pi / period_; }

double FourierLattice::cell_volume() const {
  const double h = period_ / n_;
  return h * h * h;
}

double FourierLattice::frequency(int m) const { return wavenumber(m) * frequency_spacing(); }

std::vector<double> FourierLattice::frequencies() const {
  std::vector<double> out;
  out.reserve(n_);
  for (int k = -n_ / 2; k < n_ / 2; ++k) out.push_back(k * frequency_spacing());
  return out;
}

std::array<int, 3> FourierLattice::unravel(std::size_t idx) const {
  const auto n = static_cast<std::size_t>(n_);
  return {static_cast<int>(idx / (n * n)), static_cast<int>((idx / n) % n),
          static_cast<int>(idx % n)};
}

Xi FourierLattice::xi(std::size_t idx) const {
  const auto m = unravel(idx);
  return {symbol_freq_[m[0]], symbol_freq_[m[1]], symbol_freq_[m[2]]};
}

std::array<int, 3> FourierLattice::wavevector(std::size_t idx) const {
  const auto m = unravel(idx);
  return {wavenumber(m[0]), wavenumber(m[1]), wavenumber(m[2])};
}

Xi FourierLattice::position(std::size_t idx) const {
  const auto m = unravel(idx);
  return {coordinate(m[0]), coordinate(m[1]), coordinate(m[2])};
}

FourierLattice make_lattice(int n, double period) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("grid n must be even and >= 4, got " + std::to_string(n));
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("period must be positive, got " + std::to_string(period));
  }
  return FourierLattice(n, period);
}

void require_same_lattice(const FourierLattice& a, const FourierLattice& b) {
  if (!(a == b)) throw std::invalid_argument("lattice mismatch");
}

}  // namespace nrlimit
