#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "nrlimit/lattice.hpp"

namespace nrlimit {

using Complex = std::complex<double>;
using ComplexArray = std::vector<Complex>;
using RealArray = std::vector<double>;

/// Grid function with N components of type T, stored component-major.
template <class T, std::size_t N>
class Field {
 public:
  using value_type = T;
  static constexpr std::size_t kComponents = N;

  Field() = default;
  explicit Field(const FourierLattice& lattice) : lattice_(lattice) {
    for (auto& c : components_) c.assign(lattice.size(), T{});
  }

  const FourierLattice& lattice() const { return lattice_; }
  std::size_t size() const { return lattice_.size(); }

  std::vector<T>& operator[](std::size_t c) { return components_[c]; }
  const std::vector<T>& operator[](std::size_t c) const { return components_[c]; }

  std::vector<T>& values()
    requires(N == 1)
  {
    return components_[0];
  }
  const std::vector<T>& values() const
    requires(N == 1)
  {
    return components_[0];
  }

  Field& operator+=(const Field& other) {
    require_same_lattice(lattice_, other.lattice_);
    for (std::size_t c = 0; c < N; ++c) {
      auto& a = components_[c];
      const auto& b = other.components_[c];
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    }
    return *this;
  }
  Field& operator-=(const Field& other) {
    require_same_lattice(lattice_, other.lattice_);
    for (std::size_t c = 0; c < N; ++c) {
      auto& a = components_[c];
      const auto& b = other.components_[c];
      for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    }
    return *this;
  }
  Field& operator*=(T s) {
    for (auto& comp : components_) {
      for (auto& v : comp) v *= s;
    }
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(T s, Field a) { return a *= s; }
  friend Field operator*(Field a, T s) { return a *= s; }

 private:
  FourierLattice lattice_;
  std::array<std::vector<T>, N> components_;
};

using ScalarField = Field<double, 1>;
using VectorField = Field<double, 3>;
using ComplexField = Field<Complex, 1>;
using ComplexVectorField = Field<Complex, 3>;
using SpinorField = Field<Complex, 4>;
using TwoSpinorField = Field<Complex, 2>;

/// Samples f at every grid point. f receives the position x and returns the
/// per-component values.
template <class T, std::size_t N>
Field<T, N> sample(const FourierLattice& lattice,
                   const std::function<std::array<T, N>(const Xi&)>& f) {
  Field<T, N> out(lattice);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto v = f(lattice.position(i));
    for (std::size_t c = 0; c < N; ++c) out[c][i] = v[c];
  }
  return out;
}

template <std::size_t N>
Field<Complex, N> to_complex(const Field<double, N>& f) {
  Field<Complex, N> out(f.lattice());
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t i = 0; i < f.size(); ++i) out[c][i] = f[c][i];
  }
  return out;
}

template <std::size_t N>
Field<double, N> real_part(const Field<Complex, N>& f) {
  Field<double, N> out(f.lattice());
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t i = 0; i < f.size(); ++i) out[c][i] = f[c][i].real();
  }
  return out;
}

template <class T, std::size_t N>
double max_abs(const Field<T, N>& f) {
  double m = 0.0;
  for (std::size_t c = 0; c < N; ++c) {
    for (const auto& v : f[c]) m = std::max(m, std::abs(v));
  }
  return m;
}

template <class T, std::size_t N>
bool all_finite(const Field<T, N>& f) {
  for (std::size_t c = 0; c < N; ++c) {
    for (const auto& v : f[c]) {
      if (!std::isfinite(std::abs(v))) return false;
    }
  }
  return true;
}

/// Copy of component c as a one-component field.
template <class T, std::size_t N>
Field<T, 1> component(const Field<T, N>& f, std::size_t c) {
  Field<T, 1> out(f.lattice());
  out[0] = f[c];
  return out;
}

/// Pointwise product of a real scalar field with every component of f.
template <class T, std::size_t N>
Field<T, N> multiply(const ScalarField& s, const Field<T, N>& f) {
  require_same_lattice(s.lattice(), f.lattice());
  Field<T, N> out = f;
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t i = 0; i < f.size(); ++i) out[c][i] *= s[0][i];
  }
  return out;
}

}  // namespace nrlimit
