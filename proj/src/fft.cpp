#include "nrlimit/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace nrlimit {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plans] : plans_) {
      fftw_destroy_plan(plans.first);
      fftw_destroy_plan(plans.second);
    }
  }

  std::pair<fftw_plan, fftw_plan> get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    const std::size_t size = static_cast<std::size_t>(n) * n * n;
    ComplexArray a(size), b(size);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan fwd = fftw_plan_dft_3d(n, n, n, in, out, FFTW_FORWARD, flags);
    fftw_plan inv = fftw_plan_dft_3d(n, n, n, in, out, FFTW_BACKWARD, flags);
    if (fwd == nullptr || inv == nullptr) throw std::runtime_error("FFTW planning failed");
    return plans_.emplace(n, std::make_pair(fwd, inv)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, std::pair<fftw_plan, fftw_plan>> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void check_sizes(int n, std::size_t in, std::size_t out) {
  const std::size_t size = static_cast<std::size_t>(n) * n * n;
  if (in != size || out != size) throw std::invalid_argument("fft buffer size mismatch");
}

// FFTW's out-of-place complex transforms preserve their input.
fftw_complex* as_fftw(std::span<const Complex> s) {
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(s.data()));
}
fftw_complex* as_fftw(std::span<Complex> s) { return reinterpret_cast<fftw_complex*>(s.data()); }

}  // namespace

void fft_forward(int n, std::span<const Complex> in, std::span<Complex> out) {
  check_sizes(n, in.size(), out.size());
  if (in.data() == out.data()) throw std::invalid_argument("fft requires distinct buffers");
  fftw_execute_dft(cache().get(n).first, as_fftw(in), as_fftw(out));
  const double scale = 1.0 / static_cast<double>(in.size());
  for (auto& v : out) v *= scale;
}

void fft_inverse(int n, std::span<const Complex> in, std::span<Complex> out) {
  check_sizes(n, in.size(), out.size());
  if (in.data() == out.data()) throw std::invalid_argument("fft requires distinct buffers");
  fftw_execute_dft(cache().get(n).second, as_fftw(in), as_fftw(out));
}

}  // namespace nrlimit
