#pragma once

#include <filesystem>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <vector>

#include "nrlimit/field.hpp"

namespace nrlimit {

// .fld layout: one JSON line {"grid_n","period","components","dtype","time"}
// terminated by '\n', then little-endian float64 samples, component-major,
// with complex values stored as interleaved (re, im).

struct SnapshotHeader {
  int grid_n = 0;
  double period = 0.0;
  int components = 0;
  std::string dtype;  // "float64" or "complex128"
  double time = 0.0;
};

struct RawSnapshot {
  SnapshotHeader header;
  std::vector<double> data;
};

void write_snapshot_raw(const std::filesystem::path& path, const SnapshotHeader& header,
                        const std::vector<double>& data);
RawSnapshot read_snapshot_raw(const std::filesystem::path& path);

template <class T, std::size_t N>
void write_snapshot(const std::filesystem::path& path, const Field<T, N>& f, double time) {
  constexpr bool is_complex = !std::is_same_v<T, double>;
  SnapshotHeader h{f.lattice().n(), f.lattice().period(), static_cast<int>(N),
                   is_complex ? "complex128" : "float64", time};
  std::vector<double> data;
  data.reserve(N * f.size() * (is_complex ? 2 : 1));
  for (std::size_t c = 0; c < N; ++c) {
    for (const auto& v : f[c]) {
      if constexpr (is_complex) {
        data.push_back(v.real());
        data.push_back(v.imag());
      } else {
        data.push_back(v);
      }
    }
  }
  write_snapshot_raw(path, h, data);
}

template <class T, std::size_t N>
Field<T, N> read_snapshot(const std::filesystem::path& path, double* time = nullptr) {
  constexpr bool is_complex = !std::is_same_v<T, double>;
  const auto raw = read_snapshot_raw(path);
  const auto& h = raw.header;
  if (h.components != static_cast<int>(N) || h.dtype != (is_complex ? "complex128" : "float64")) {
    throw std::runtime_error(path.string() + ": snapshot type does not match requested field");
  }
  Field<T, N> f(make_lattice(h.grid_n, h.period));
  std::size_t k = 0;
  for (std::size_t c = 0; c < N; ++c) {
    for (auto& v : f[c]) {
      if constexpr (is_complex) {
        v = Complex(raw.data[k], raw.data[k + 1]);
        k += 2;
      } else {
        v = raw.data[k++];
      }
    }
  }
  if (time != nullptr) *time = h.time;
  return f;
}

}  // namespace nrlimit
