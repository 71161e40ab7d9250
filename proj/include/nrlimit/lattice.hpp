#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nrlimit {

using Xi = std::array<double, 3>;

/// Periodic cube [0, L)^3 sampled on n^3 points, together with its dual
/// frequency lattice (2*pi/L) * {-n/2, ..., n/2 - 1} per axis.
///
/// Storage index of grid point (i, j, k) is (i * n + j) * n + k, with i
/// running along x1. Fourier coefficients use the same index with the FFT
/// ordering m -> k = m for m < n/2 and k = m - n otherwise.
///
/// The unmatched Nyquist frequency -n/2 keeps its place in the lattice, but
/// every derivative or multiplier symbol sees it as 0 (see symbol_frequency).
/// That keeps real fields real under any multiplier built from xi.
class FourierLattice {
 public:
  FourierLattice() = default;
  FourierLattice(int n, double period);

  int n() const { return n_; }
  double period() const { return period_; }
  std::size_t size() const { return size_; }
  double frequency_spacing() const;
  double cell_volume() const;
  double volume() const { return period_ * period_ * period_; }
  double coordinate(int i) const { return period_ * i / n_; }

  /// Integer wavenumber of FFT slot m.
  int wavenumber(int m) const { return m < n_ / 2 ? m : m - n_; }
  bool is_nyquist(int m) const { return m == n_ / 2; }
  /// Raw frequency k * 2*pi/L of slot m.
  double frequency(int m) const;
  /// Frequency seen by symbols: raw frequency, or 0 at the Nyquist slot.
  double symbol_frequency(int m) const { return symbol_freq_[m]; }

  /// Per-axis frequencies in increasing order.
  std::vector<double> frequencies() const;

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  std::array<int, 3> unravel(std::size_t idx) const;

  /// Symbol frequency vector at storage index idx.
  Xi xi(std::size_t idx) const;
  /// Integer wavenumber triple at storage index idx.
  std::array<int, 3> wavevector(std::size_t idx) const;
  Xi position(std::size_t idx) const;

  friend bool operator==(const FourierLattice& a, const FourierLattice& b) {
    return a.n_ == b.n_ && a.period_ == b.period_;
  }

 private:
  int n_ = 0;
  double period_ = 0.0;
  std::size_t size_ = 0;
  std::vector<double> symbol_freq_;
};

/// Validating constructor: n must be even and >= 4, L > 0.
FourierLattice make_lattice(int n, double period);

/// Throws std::invalid_argument unless a and b describe the same lattice.
void require_same_lattice(const FourierLattice& a, const FourierLattice& b);

inline double norm2(const Xi& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

}  // namespace nrlimit
