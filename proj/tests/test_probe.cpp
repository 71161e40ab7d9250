#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nrlimit/data.hpp"
#include "nrlimit/probe.hpp"
#include "nrlimit/spectral.hpp"

using namespace nrlimit;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexField plane_wave(const FourierLattice& lat, int axis) {
  ComplexField f(lat);
  for (std::size_t i = 0; i < lat.size(); ++i) f[0][i] = std::polar(1.0, lat.position(i)[axis]);
  return f;
}

// int_0^1 cos^2(t/eps) dt
double cos2_integral(double eps) { return 0.5 + eps * std::sin(2.0 / eps) / 4.0; }

}  // namespace

TEST(Dyadic, ZeroDataGiveZero) {
  const auto lat = make_lattice(16, 2 * kPi);
  const auto g = random_band_limited<1>(lat, 1, 1, 1.0);
  DyadicInput in;
  EXPECT_EQ(dyadic_ratio(ComplexField(lat), g, in), 0.0);
  EXPECT_EQ(dyadic_ratio(g, ComplexField(lat), in), 0.0);
}

TEST(Dyadic, SingleModePairMatchesQuadratureOracle) {
  // f = e^{i x1}, g = e^{i x2}: |u v| = |cos(t/eps)| pointwise, output frequency (1,1,0).
  const auto lat = make_lattice(16, 2 * kPi);
  const auto f = plane_wave(lat, 0), g = plane_wave(lat, 1);
  const double eps = 0.5, vol = lat.volume();
  DyadicInput in{ProbeCase::off_diagonal, eps, 1.0, 1.0, 1.0, 4000, 1};
  const double expect_iii = std::sqrt(vol * cos2_integral(eps)) / (std::sqrt(eps) * vol);
  const double r = dyadic_ratio(f, g, in);
  EXPECT_NEAR(r / expect_iii, 1.0, 1e-6);
  EXPECT_EQ(r, dyadic_ratio(f, g, in));  // bit-exact rerun
  in.which = ProbeCase::diagonal_low;
  const double beta = lp_bump_at(std::sqrt(2.0));
  EXPECT_NEAR(dyadic_ratio(f, g, in) / (beta * expect_iii), 1.0, 1e-6);
  in.which = ProbeCase::diagonal_high;
  EXPECT_NEAR(dyadic_ratio(f, g, in) / (beta * expect_iii), 1.0, 1e-6);
  // the v phase never enters |u v|
  in.branch = -1;
  EXPECT_NEAR(dyadic_ratio(f, g, in) / (beta * expect_iii), 1.0, 1e-6);
}

TEST(Dyadic, ScaleInvariant) {
  const auto lat = make_lattice(16, 2 * kPi);
  const auto f = random_band_limited<1>(lat, 3, 2, 1.0), g = random_band_limited<1>(lat, 3, 3, 1.0);
  for (ProbeCase c : {ProbeCase::diagonal_low, ProbeCase::diagonal_high, ProbeCase::off_diagonal}) {
    DyadicInput in{c, 0.5, 1.0, 2.0, 1.0, 0, 1};
    const double r = dyadic_ratio(f, g, in);
    const double s = dyadic_ratio(Complex(3.7, -1.1) * f, Complex(0.02) * g, in);
    EXPECT_GT(r, 0.0);
    EXPECT_NEAR(s / r, 1.0, 1e-12);
  }
}

TEST(Dyadic, Resolution) {
  const auto lat = make_lattice(16, 2 * kPi);
  EXPECT_EQ(dyadic_reach(lat, 1.0), 1);
  EXPECT_EQ(dyadic_reach(lat, 4.0), 7);
  EXPECT_NO_THROW(require_resolved(lat, 1.0, 2.0));
  EXPECT_THROW(require_resolved(lat, 1.0, 4.0), std::invalid_argument);
  DyadicInput in{ProbeCase::diagonal_low, 0.5, 1.0, 4.0, 1.0, 0, 1};
  EXPECT_THROW(dyadic_ratio(ComplexField(lat), ComplexField(lat), in), std::invalid_argument);
  in.lambda = 1.0;
  EXPECT_EQ(probe_time_steps(lat, in), 64);
  in.eps = 0.01;
  EXPECT_GT(probe_time_steps(lat, in), 64);
}

TEST(Dyadic, Regimes) {
  EXPECT_TRUE(in_regime(ProbeCase::diagonal_low, 1, 4, 0.25));
  EXPECT_FALSE(in_regime(ProbeCase::diagonal_low, 4, 2, 0.25));
  EXPECT_FALSE(in_regime(ProbeCase::diagonal_low, 1, 16, 0.25));
  EXPECT_TRUE(in_regime(ProbeCase::diagonal_high, 1, 4, 1.0));
  EXPECT_FALSE(in_regime(ProbeCase::diagonal_high, 1, 4, 0.25));
  EXPECT_TRUE(in_regime(ProbeCase::off_diagonal, 8, 1, 0.25));
}

TEST(Dyadic, SweepIsDeterministicAcrossThreads) {
  const auto cfg = parse_config(nlohmann::json::parse(
      R"({"grid":{"n":16},"probe":{"case":"iii","eps":[0.5],"mu":[1,2],"lambda":[1],"trials":3,"time_steps":64}})"),
      ConfigKind::probe);
  const auto a = dyadic_sweep(cfg, 1), b = dyadic_sweep(cfg, 3);
  ASSERT_EQ(a.size(), 6u);
  EXPECT_EQ(sweep_csv(a), sweep_csv(b));
  EXPECT_EQ(sweep_csv(a).substr(0, 25), "mu,lambda,eps,trial,ratio");
  EXPECT_EQ(a[4].mu, 2.0);
  EXPECT_EQ(a[4].trial, 1);
  EXPECT_NE(a[0].ratio, a[1].ratio);  // trials draw different data
}

TEST(Dyadic, SweepRejectsEmptyRegimeAndCoarseGrid) {
  auto j = nlohmann::json::parse(R"({"grid":{"n":16},"probe":{"case":"ii","eps":[0.25],"mu":[1],"lambda":[1]}})");
  EXPECT_THROW(dyadic_sweep(parse_config(j, ConfigKind::probe)), ConfigError);
  j = nlohmann::json::parse(R"({"grid":{"n":16},"probe":{"case":"iii","mu":[1],"lambda":[4]}})");
  try {
    dyadic_sweep(parse_config(j, ConfigKind::probe));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "grid.n");
  }
}

TEST(Dyadic, Stats) {
  std::vector<ProbeRow> rows;
  for (int t = 0; t < 3; ++t) {
    rows.push_back({1, 4, 0.25, t, 1.0 + t});
    rows.push_back({4, 4, 0.25, t, 4.0 * (1.0 + t)});
  }
  const auto s = probe_stats(rows);
  EXPECT_EQ(s.max, 12.0);
  EXPECT_EQ(s.median, 3.5);
  EXPECT_DOUBLE_EQ(s.max_over_median, 12.0 / 3.5);
  ASSERT_TRUE(s.trend_defined);
  EXPECT_NEAR(s.trend_slope, 1.0, 1e-12);
  EXPECT_FALSE(probe_stats({{1, 1, 1, 0, 1.0}}).trend_defined);
}
