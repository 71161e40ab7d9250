#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "nrlimit/norms.hpp"
#include "nrlimit/snapshot.hpp"
#include "nrlimit/spectral.hpp"

using namespace nrlimit;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);

ComplexField plane_wave(const FourierLattice& lat, Xi k) {
  return sample<Complex, 1>(lat, [k](const Xi& x) {
    return std::array<Complex, 1>{std::exp(I * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]))};
  });
}

ComplexField random_field(const FourierLattice& lat, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexField f(lat);
  for (auto& v : f[0]) v = Complex(g(rng), g(rng));
  return f;
}

template <class T, std::size_t N>
double max_diff(const Field<T, N>& a, const Field<T, N>& b) {
  return max_abs(a - b);
}

}  // namespace

TEST(Lattice, FrequenciesAndSpacing) {
  const auto lat = make_lattice(4, 2 * kPi);
  const auto f = lat.frequencies();
  ASSERT_EQ(f.size(), 4u);
  EXPECT_DOUBLE_EQ(f[0], -2.0);
  EXPECT_DOUBLE_EQ(f[1], -1.0);
  EXPECT_DOUBLE_EQ(f[2], 0.0);
  EXPECT_DOUBLE_EQ(f[3], 1.0);

  const auto lat8 = make_lattice(8, 2 * kPi);
  EXPECT_EQ(lat8.size(), 512u);
  double maxf = 0;
  for (double v : lat8.frequencies()) maxf = std::max(maxf, std::abs(v));
  EXPECT_DOUBLE_EQ(maxf, 4.0);

  EXPECT_DOUBLE_EQ(make_lattice(8, 4 * kPi).frequency_spacing(), 0.5);
}

TEST(Lattice, RejectsBadInput) {
  EXPECT_THROW(make_lattice(7, 1.0), std::invalid_argument);
  EXPECT_THROW(make_lattice(2, 1.0), std::invalid_argument);
  EXPECT_THROW(make_lattice(8, 0.0), std::invalid_argument);
  EXPECT_THROW(make_lattice(8, -1.0), std::invalid_argument);
}

TEST(Fft, RoundTripAndParseval) {
  const auto lat = make_lattice(12, 2 * kPi);
  const auto f = random_field(lat, 1);
  const auto back = fft_inverse(fft_forward(f));
  EXPECT_LT(max_diff(back, f) / max_abs(f), 1e-12);
  const double phys = l2_norm(f);
  const double spec = sobolev_norm(f, 0.0);
  EXPECT_NEAR(phys, spec, 1e-12 * phys);
}

TEST(Fft, RealFieldsAreConjugateSymmetric) {
  const auto lat = make_lattice(8, 2 * kPi);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  ScalarField f(lat);
  for (auto& v : f[0]) v = g(rng);
  const auto c = fft_forward(f);
  const int n = lat.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const auto a = c[0][lat.index(i, j, k)];
        const auto b = c[0][lat.index((n - i) % n, (n - j) % n, (n - k) % n)];
        EXPECT_LT(std::abs(a - std::conj(b)), 1e-12);
      }
}

TEST(Symbols, ApplySymbolExamples) {
  const auto lat = make_lattice(8, 2 * kPi);
  const auto e1 = plane_wave(lat, {1, 0, 0});
  SymbolSpec id{"one", [](const Xi&) { return Complex(1.0); }};
  SymbolSpec sq{"|xi|^2", [](const Xi& xi) { return Complex(norm2(xi)); }};
  SymbolSpec ab{"|xi|", [](const Xi& xi) { return Complex(std::sqrt(norm2(xi))); }};
  EXPECT_LT(max_diff(apply_symbol(e1, id), e1), 1e-13);
  EXPECT_LT(max_diff(apply_symbol(e1, sq), e1), 1e-13);
  ComplexField one(lat);
  for (auto& v : one[0]) v = 1.0;
  EXPECT_LT(max_abs(apply_symbol(one, ab)), 1e-13);
}

TEST(Symbols, LambdaEps) {
  const auto lat = make_lattice(8, 2 * kPi);
  const auto e2 = plane_wave(lat, {2, 0, 0});
  EXPECT_LT(max_diff(lambda_eps(e2, 0.5, 1), std::sqrt(2.0) * e2), 1e-13);
  EXPECT_LT(max_diff(lambda_eps(e2, 0.5, -1), (1 / std::sqrt(2.0)) * e2), 1e-13);
  ComplexField c(lat);
  for (auto& v : c[0]) v = 2.5;
  EXPECT_LT(max_diff(lambda_eps(c, 0.3, 1), c), 1e-13);
  EXPECT_LT(max_diff(lambda_eps(c, 0.3, -1), c), 1e-13);
  EXPECT_THROW(lambda_eps(c, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(lambda_eps(c, -1.0, 1), std::invalid_argument);
}

TEST(Symbols, LambdaInverseSmoothing) {
  const auto lat = make_lattice(12, 2 * kPi);
  const auto f = random_field(lat, 5);
  for (double eps : {1.0, 0.5, 0.25}) {
    const auto g = lambda_eps(f, eps, -1);
    for (double r : {0.0, 0.5, 1.0}) {
      const double sigma = 1.0;
      EXPECT_LE(sobolev_norm(g, sigma), std::pow(eps, -r) * sobolev_norm(f, sigma - r) * (1 + 1e-12));
    }
  }
}

TEST(Symbols, HEps) {
  const auto lat = make_lattice(8, 2 * kPi);
  const auto e1 = plane_wave(lat, {1, 0, 0});
  EXPECT_LT(max_diff(h_eps(e1, 0.0), 0.5 * e1), 1e-13);
  EXPECT_LT(max_diff(h_eps(e1, 1.0), 0.41421356237309503 * e1), 1e-13);
  EXPECT_NEAR(h_eps_symbol({1, 0, 0}, 1.0), 0.4142136, 1e-7);
  ComplexField c(lat);
  for (auto& v : c[0]) v = 1.0;
  EXPECT_LT(max_abs(h_eps(c, 0.7)), 1e-13);
}

TEST(Symbols, PointwiseBounds) {
  const auto lat = make_lattice(16, 2 * kPi);
  for (double eps : {0.125, 0.25, 0.5, 1.0}) {
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const Xi xi = lat.xi(i);
      const double r = std::sqrt(norm2(xi));
      const double d = 1.0 - 1.0 / lambda_symbol(xi, eps);
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, std::min({1.0, eps * r, eps * eps * r * r}) + 1e-15);
      if (r > 0) {
        const double gap = r / eps - h_eps_symbol(xi, eps);
        EXPECT_GE(gap, -1e-12);
        EXPECT_LE(gap, 1.0 / (eps * eps) + 1e-12);
      }
    }
  }
}

TEST(Leray, Examples) {
  const auto lat = make_lattice(8, 2 * kPi);
  const auto u1 = sample<double, 3>(lat, [](const Xi& x) { return std::array<double, 3>{std::sin(x[1]), 0, 0}; });
  EXPECT_LT(max_diff(leray_project(u1), u1), 1e-13);
  const auto g = sample<double, 3>(lat, [](const Xi& x) { return std::array<double, 3>{std::cos(x[0]), 0, 0}; });
  EXPECT_LT(max_abs(leray_project(g)), 1e-13);
  const auto u3 = sample<double, 3>(lat, [](const Xi& x) {
    return std::array<double, 3>{std::cos(x[0]), std::cos(x[0]), 0};
  });
  const auto want = sample<double, 3>(lat, [](const Xi& x) { return std::array<double, 3>{0, std::cos(x[0]), 0}; });
  EXPECT_LT(max_diff(leray_project(u3), want), 1e-13);
}

TEST(Leray, ProjectorProperties) {
  const auto lat = make_lattice(12, 2 * kPi);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  VectorField u(lat);
  ScalarField phi(lat);
  for (int c = 0; c < 3; ++c)
    for (auto& v : u[c]) v = g(rng);
  for (auto& v : phi[0]) v = g(rng);
  const auto p = leray_project(u);
  EXPECT_LT(max_diff(leray_project(p), p), 1e-12);
  EXPECT_LT(divergence_norm(p), 1e-12);
  EXPECT_LT(max_abs(leray_project(gradient(phi))), 1e-12);
}

TEST(Poisson, Examples) {
  const auto lat = make_lattice(8, 2 * kPi);
  const auto rho = sample<double, 1>(lat, [](const Xi& x) {
    return std::array<double, 1>{std::cos(x[0]) + std::cos(2 * x[1])};
  });
  const auto want = sample<double, 1>(lat, [](const Xi& x) {
    return std::array<double, 1>{-std::cos(x[0]) - 0.25 * std::cos(2 * x[1])};
  });
  EXPECT_LT(max_diff(poisson_solve(rho), want), 1e-13);
  ScalarField c(lat);
  for (auto& v : c[0]) v = 3.0;
  EXPECT_LT(max_abs(poisson_solve(c)), 1e-13);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  ScalarField r(lat);
  for (auto& v : r[0]) v = g(rng);
  const auto a0 = poisson_solve(r);
  ScalarField lap(lat);
  for (int j = 0; j < 3; ++j) lap += partial(partial(a0, j), j);
  // Symbols see the Nyquist slot as zero, so the reference drops it too.
  auto spec = fft_forward(r);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (norm2(lat.xi(i)) == 0.0) spec[0][i] = 0.0;
  }
  EXPECT_LT(max_diff(lap, real_part(fft_inverse(spec))), 1e-10);
}

TEST(LittlewoodPaley, Examples) {
  const auto lat = make_lattice(16, 2 * kPi);
  const auto e1 = plane_wave(lat, {1, 0, 0});
  EXPECT_LT(max_diff(littlewood_paley(e1, 1.0), lp_bump({1, 0, 0}) * e1), 1e-13);
  EXPECT_DOUBLE_EQ(lp_bump({1, 0, 0}), 1.0);
  ComplexField c(lat);
  for (auto& v : c[0]) v = 1.0;
  EXPECT_LT(max_abs(littlewood_paley(c, 1.0)), 1e-13);

  const auto e3 = plane_wave(lat, {0, 3, 0});
  ComplexField sum(lat);
  for (double mu : {1.0, 2.0, 4.0}) sum += littlewood_paley(e3, mu);
  EXPECT_LT(max_diff(sum, e3), 1e-12);
}

TEST(LittlewoodPaley, PartitionOfUnity) {
  const auto lat = make_lattice(16, 2 * kPi);
  const auto f = random_field(lat, 9);
  ComplexField sum(lat);
  for (double mu = 0.5; mu <= 32.0; mu *= 2) sum += littlewood_paley(f, mu);
  auto spec = fft_forward(f);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (norm2(lat.xi(i)) == 0.0) spec[0][i] = 0.0;
  }
  const auto want = fft_inverse(spec);
  EXPECT_LT(max_diff(sum, want), 1e-10);
  for (double r = 0.0; r < 3.0; r += 0.01) {
    EXPECT_GE(lp_bump_at(r), 0.0);
    if (r < 0.5 || r > 2.0) {
      EXPECT_EQ(lp_bump_at(r), 0.0);
    }
  }
}

TEST(LowHigh, Examples) {
  const auto lat = make_lattice(16, 2 * kPi);
  const auto e1 = plane_wave(lat, {1, 0, 0});
  auto [lo, hi] = low_high_split(e1, 0.01);
  EXPECT_LT(max_diff(lo, e1), 1e-13);
  EXPECT_LT(max_abs(hi), 1e-13);
  const auto e4 = plane_wave(lat, {4, 0, 0});
  auto [lo4, hi4] = low_high_split(e4, 10.0);
  EXPECT_LT(max_abs(lo4), 1e-13);
  EXPECT_LT(max_diff(hi4, e4), 1e-13);
  const auto f = random_field(lat, 4);
  auto [l, h] = low_high_split(f, 0.2);
  EXPECT_LT(max_diff(l + h, f), 1e-12);
}

TEST(LowHigh, HighFrequencyEstimate) {
  const auto lat = make_lattice(16, 2 * kPi);
  const auto f = random_field(lat, 6);
  for (double eps : {0.5, 0.25, 0.125}) {
    const auto high = low_high_split(f, eps).second;
    for (double sigma : {0.5, 1.0, 2.0}) {
      const double lhs = sobolev_norm(high, 1.0);
      const double rhs = high_frequency_constant(sigma) * std::pow(eps, sigma) * sobolev_norm(high, 1.0 + sigma);
      EXPECT_LE(lhs, rhs * (1 + 1e-12));
    }
  }
}

TEST(Norms, SobolevExamples) {
  const auto lat = make_lattice(8, 2 * kPi);
  ComplexField one(lat);
  for (auto& v : one[0]) v = 1.0;
  const double vol = std::pow(2 * kPi, 1.5);
  EXPECT_NEAR(sobolev_norm(one, 0.0), vol, 1e-12 * vol);
  EXPECT_NEAR(sobolev_norm(plane_wave(lat, {1, 0, 0}), 1.0), std::sqrt(2.0) * vol, 1e-12 * vol);
  EXPECT_EQ(sobolev_norm(one, 1.0, true), 0.0);
  EXPECT_THROW(sobolev_norm(one, -1.0, true), std::invalid_argument);
}

TEST(Norms, LpExamples) {
  const auto lat = make_lattice(8, 2 * kPi);
  ComplexField one(lat);
  for (auto& v : one[0]) v = 1.0;
  EXPECT_NEAR(lp_norm(one, 2.0), std::pow(2 * kPi, 1.5), 1e-12);
  EXPECT_EQ(lp_norm(ComplexField(lat), 3.0), 0.0);
  EXPECT_THROW(lp_norm(one, 0.5), std::invalid_argument);
  const auto fine = make_lattice(64, 2 * kPi);
  const auto s = sample<double, 1>(fine, [](const Xi& x) { return std::array<double, 1>{std::abs(std::sin(x[0]))}; });
  EXPECT_NEAR(lp_norm(s, INFINITY), 1.0, 1e-3);
}

TEST(Snapshot, RoundTrip) {
  const auto lat = make_lattice(4, 3.0);
  const auto f = random_field(lat, 8);
  const auto path = std::filesystem::temp_directory_path() / "nrlimit_snapshot_test.fld";
  write_snapshot(path, f, 0.125);
  double t = 0;
  const auto g = read_snapshot<Complex, 1>(path, &t);
  EXPECT_EQ(t, 0.125);
  EXPECT_EQ(max_diff(f, g), 0.0);
  EXPECT_THROW((read_snapshot<double, 1>(path)), std::runtime_error);
  std::filesystem::remove(path);
}
