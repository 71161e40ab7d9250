#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nrlimit/data.hpp"
#include "nrlimit/limit.hpp"
#include "nrlimit/norms.hpp"

using namespace nrlimit;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);

TwoSpinorField plane2(const FourierLattice& lat, Xi k, Vec2 v) {
  TwoSpinorField f(lat);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Xi x = lat.position(i);
    set_spinor(f, i, std::exp(I * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2])) * v);
  }
  return f;
}

LimitState smooth_sp(const FourierLattice& lat, unsigned seed) {
  return {0.0, random_band_limited<2>(lat, 2, seed, 0.6), random_band_limited<2>(lat, 2, seed + 1, 0.4)};
}

}  // namespace

TEST(SPStep, PlaneWavePhases) {
  const auto lat = make_lattice(8, 2 * kPi);
  const double dt = 0.3;
  const LimitState a{0.0, plane2(lat, {1, 0, 0}, Vec2(1, 0)), TwoSpinorField(lat)};
  const auto a1 = sp_step(a, dt);
  TwoSpinorField want = a.vp;
  want *= std::exp(-I * dt / 2.0);
  EXPECT_LT(max_abs(a1.vp - want), 1e-13);

  const LimitState b{0.0, TwoSpinorField(lat), plane2(lat, {1, 0, 0}, Vec2(0, 1))};
  const auto b1 = sp_step(b, dt);
  TwoSpinorField wb = b.vm;
  wb *= std::exp(I * dt / 2.0);
  EXPECT_LT(max_abs(b1.vm - wb), 1e-13);

  const LimitState z{0.0, TwoSpinorField(lat), TwoSpinorField(lat)};
  const auto z1 = sp_step(z, dt);
  EXPECT_EQ(max_abs(z1.vp) + max_abs(z1.vm), 0.0);
}

TEST(SPStep, ConstantDataIsStationary) {
  const auto lat = make_lattice(8, 2 * kPi);
  TwoSpinorField c(lat);
  for (std::size_t i = 0; i < lat.size(); ++i) set_spinor(c, i, Vec2(0.3, I));
  const LimitState s{0.0, c, TwoSpinorField(lat)};
  EXPECT_LT(max_abs(sp_potential(s)), 1e-14);
  const auto tr = simulate_sp(s, 1.0, 0.05);
  EXPECT_LT(max_abs(tr.samples.back().vp - c), 1e-13);
}

TEST(SPStep, MassPreservedPerComponent) {
  const auto lat = make_lattice(12, 2 * kPi);
  const auto s = smooth_sp(lat, 1);
  const auto tr = simulate_sp(s, 1.0, 0.01, 10);
  const double mp = total_charge(s.vp), mm = total_charge(s.vm);
  for (const auto& d : tr.diagnostics) {
    EXPECT_NEAR(d.mass_plus, mp, 1e-10 * mp);
    EXPECT_NEAR(d.mass_minus, mm, 1e-10 * mm);
  }
}

TEST(SimulateSP, PlaneWaveAllTimes) {
  const auto lat = make_lattice(8, 2 * kPi);
  const LimitState s{0.0, plane2(lat, {0, 2, 0}, Vec2(0.5, 0.5)), TwoSpinorField(lat)};
  const auto tr = simulate_sp(s, 2.0, 0.1, 5);
  for (const auto& st : tr.samples) {
    TwoSpinorField want = s.vp;
    want *= std::exp(-I * 4.0 * st.t / 2.0);
    EXPECT_LT(max_abs(st.vp - want), 1e-12);
  }
}

TEST(SimulateSP, SecondOrderSelfConvergence) {
  const auto lat = make_lattice(12, 2 * kPi);
  auto s = smooth_sp(lat, 2);
  s.vp *= Complex(3.0);
  std::vector<LimitState> fin;
  for (double dt : {0.04, 0.02, 0.01}) fin.push_back(simulate_sp(s, 0.4, dt).samples.back());
  const double e1 = h1_norm(fin[0].vp - fin[1].vp) + h1_norm(fin[0].vm - fin[1].vm);
  const double e2 = h1_norm(fin[1].vp - fin[2].vp) + h1_norm(fin[1].vm - fin[2].vm);
  EXPECT_NEAR(e1 / e2, 4.0, 0.6);
}

TEST(PauliStep, ReducesToSchroedinger) {
  const auto lat = make_lattice(12, 2 * kPi);
  const auto s = smooth_sp(lat, 3);
  const LimitState sp{0.0, s.vp, TwoSpinorField(lat)};
  const auto next = sp_step(sp, 0.05);
  const auto g0 = make_gauge_sample(0.0, sp_potential(sp), VectorField(lat));
  const auto g1 = make_gauge_sample(0.05, sp_potential(next), VectorField(lat));
  for (double eps : {0.0, 0.3}) {
    const PauliState p{0.0, sp.vp, eps};
    EXPECT_LT(max_abs(pauli_step(p, g0, g1, 0.05).chi - next.vp), 1e-12);
  }
}

TEST(PauliStep, ZeemanPhase) {
  const auto lat = make_lattice(8, 2 * kPi);
  const double eps = 0.4, b = 1.3, dt = 0.2;
  GaugeSample g{0.0, ScalarField(lat), VectorField(lat), VectorField(lat)};
  for (auto& v : g.b[2]) v = b;
  TwoSpinorField chi(lat);
  for (std::size_t i = 0; i < lat.size(); ++i) set_spinor(chi, i, Vec2(1, 0));
  const auto out = pauli_step(PauliState{0.0, chi, eps}, g, g, dt);
  TwoSpinorField want = chi;
  want *= std::exp(I * eps * b * dt / 2.0);
  EXPECT_LT(max_abs(out.chi - want), 1e-13);

  const auto id = pauli_step(PauliState{0.0, chi, eps}, ScalarField(lat), VectorField(lat), dt);
  EXPECT_LT(max_abs(id.chi - chi), 1e-14);
}

TEST(PauliStep, UnitaryAndRejectsCompressibleA) {
  const auto lat = make_lattice(12, 2 * kPi);
  const auto chi = random_band_limited<2>(lat, 2, 4, 1.0);
  const auto a = random_divfree_field(lat, 2, 5, 1.0);
  const ScalarField a0 = real_part(random_band_limited<1>(lat, 2, 6, 1.0));
  const double m = total_charge(chi);
  const auto out = pauli_step(PauliState{0.0, chi, 0.5}, a0, a, 0.05);
  EXPECT_NEAR(total_charge(out.chi), m, 1e-10 * m);
  VectorField g(lat);
  for (std::size_t i = 0; i < lat.size(); ++i) g[0][i] = std::sin(lat.position(i)[0]);
  EXPECT_THROW(pauli_step(PauliState{0.0, chi, 0.5}, a0, g, 0.05), std::invalid_argument);
}

TEST(PauliStep, MixedTermMatchesMagneticLaplacian) {
  // With A frozen, a fine-step run must approach the exact flow of the full
  // Hamiltonian; compare against a dense Taylor evaluation of one short step.
  const auto lat = make_lattice(8, 2 * kPi);
  const auto chi = random_band_limited<2>(lat, 1, 7, 1.0);
  const auto a = random_divfree_field(lat, 1, 8, 1.0);
  const double eps = 0.5, T = 0.1;
  std::vector<TwoSpinorField> fin;
  for (int n : {10, 20, 40}) {
    PauliState p{0.0, chi, eps};
    for (int k = 0; k < n; ++k) p = pauli_step(p, ScalarField(lat), a, T / n);
    fin.push_back(p.chi);
  }
  const double e1 = l2_norm(fin[0] - fin[1]), e2 = l2_norm(fin[1] - fin[2]);
  EXPECT_NEAR(e1 / e2, 4.0, 0.6);

  // H chi from the expanded operator, by finite differences in time.
  PauliState p{0.0, chi, eps};
  const double h = 1e-5;
  const auto fwd = pauli_step(p, ScalarField(lat), a, h).chi;
  const auto bwd = pauli_step(p, ScalarField(lat), a, -h).chi;
  TwoSpinorField dchi = fwd - bwd;
  dchi *= Complex(0.0, 1.0 / (2 * h));  // i d/dt chi
  // (i grad + eps A)^2 / 2 - eps B.sigma / 2 applied directly.
  std::array<TwoSpinorField, 3> pi;
  for (int j = 0; j < 3; ++j) {
    pi[j] = partial(chi, j);
    pi[j] *= I;
    for (int c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < lat.size(); ++i) pi[j][c][i] += eps * a[j][i] * chi[c][i];
  }
  TwoSpinorField hchi(lat);
  for (int j = 0; j < 3; ++j) {
    TwoSpinorField t = partial(pi[j], j);
    t *= I;
    for (int c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < lat.size(); ++i) t[c][i] += eps * a[j][i] * pi[j][c][i];
    hchi += t;
  }
  hchi *= 0.5;
  const auto b = curl(a);
  const auto& d = dirac_matrices();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    Mat2 bs = b[0][i] * d.sigma[0] + b[1][i] * d.sigma[1] + b[2][i] * d.sigma[2];
    const Vec2 z = spinor_at(hchi, i) - 0.5 * eps * (bs * spinor_at(chi, i));
    set_spinor(hchi, i, z);
  }
  EXPECT_LT(l2_norm(dchi - hchi), 1e-5 * l2_norm(hchi));
}

TEST(SimulatePauli, FreeEvolutionAndSamplingChecks) {
  const auto lat = make_lattice(8, 2 * kPi);
  std::vector<GaugeSample> gauge;
  for (int k = 0; k <= 10; ++k) gauge.push_back(make_gauge_sample(0.01 * k, ScalarField(lat), VectorField(lat)));
  const auto chi = plane2(lat, {1, 1, 0}, Vec2(1, 2));
  const auto tr = simulate_pauli(PauliState{0.0, chi, 0.3}, gauge, 0.1, 0.01);
  TwoSpinorField want = chi;
  want *= std::exp(-I * 0.1);
  EXPECT_LT(max_abs(tr.samples.back().chi - want), 1e-12);
  EXPECT_THROW(simulate_pauli(PauliState{0.0, chi, 0.3}, gauge, 0.1, 0.005), std::invalid_argument);
  EXPECT_THROW(simulate_pauli(PauliState{0.0, chi, 0.3}, gauge, 0.2, 0.01), std::invalid_argument);
}

TEST(SimulatePauli, MassAndSelfConvergence) {
  const auto lat = make_lattice(12, 2 * kPi);
  const auto chi = random_band_limited<2>(lat, 2, 9, 1.0);
  const auto a_base = random_divfree_field(lat, 2, 10, 0.8);
  const ScalarField a0 = real_part(random_band_limited<1>(lat, 2, 11, 0.8));
  const auto gauge_at = [&](double t) {
    VectorField a = a_base;
    a *= std::cos(3 * t);
    ScalarField p = a0;
    p *= 1 + t;
    return make_gauge_sample(t, p, a);
  };
  std::vector<TwoSpinorField> fin;
  for (int n : {20, 40, 80}) {
    std::vector<GaugeSample> g;
    for (int k = 0; k <= n; ++k) g.push_back(gauge_at(0.5 * k / n));
    const auto tr = simulate_pauli(PauliState{0.0, chi, 0.5}, g, 0.5, 0.5 / n, 1);
    const double m0 = tr.mass.front();
    for (double m : tr.mass) EXPECT_NEAR(m, m0, 1e-8 * m0);
    fin.push_back(tr.samples.back().chi);
  }
  EXPECT_NEAR(h1_norm(fin[0] - fin[1]) / h1_norm(fin[1] - fin[2]), 4.0, 0.6);
}
