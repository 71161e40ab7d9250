#include "nrlimit/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nrlimit/checks.hpp"
#include "nrlimit/data.hpp"
#include "nrlimit/dm.hpp"
#include "nrlimit/spinor.hpp"

namespace nrlimit {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double max_entry(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

SuiteResult matrices() {
  const auto& d = dirac_matrices();
  const Mat4 id = Mat4::Identity();
  const Complex i(0.0, 1.0);
  double anti = 0.0, product = 0.0, hermitian = 0.0, gamma = 0.0;
  for (int j = 0; j < 3; ++j) {
    hermitian = std::max(hermitian, max_entry(d.alpha[j] - d.alpha[j].adjoint()));
    gamma = std::max(gamma, max_entry(d.gamma0 * d.alpha[j] + d.alpha[j] * d.gamma0));
    gamma = std::max(gamma, max_entry(d.gamma[j] - d.gamma0 * d.alpha[j]));
    for (int k = 0; k < 3; ++k) {
      const Mat4 jk = d.alpha[j] * d.alpha[k];
      anti = std::max(anti, max_entry(jk + d.alpha[k] * d.alpha[j] - (j == k ? 2.0 : 0.0) * id));
      Mat4 rhs = (j == k ? 1.0 : 0.0) * id;
      for (int l = 0; l < 3; ++l) {
        // epsilon^{jkl} for a permutation of (0,1,2)
        const int e = (j == k || k == l || j == l) ? 0 : ((k - j + 3) % 3 == 1 ? 1 : -1);
        if (e != 0) rhs += static_cast<double>(e) * i * d.S[l];
      }
      product = std::max(product, max_entry(jk - rhs));
    }
  }
  SuiteResult r{"matrices", {}};
  r.lines.push_back({"alpha anticommutator", anti, 0.0, 0.0});
  r.lines.push_back({"alpha product = delta + i eps S", product, 0.0, 0.0});
  r.lines.push_back({"alpha hermitian", hermitian, 0.0, 0.0});
  r.lines.push_back({"gamma0 anticommutes with alpha, gamma = gamma0 alpha", gamma, 0.0, 0.0});
  r.lines.push_back({"gamma0 squared", max_entry(d.gamma0 * d.gamma0 - id), 0.0, 0.0});
  return r;
}

SuiteResult projections() {
  const auto lat = make_lattice(16, kTwoPi);
  const Mat4 id = Mat4::Identity();
  SuiteResult r{"projections", {}};
  for (double eps : {1.0, 0.5, 0.25}) {
    double idem = 0.0, orth = 0.0, complete = 0.0, spectral = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const Xi xi = lat.xi(i);
      const Mat4 p = pi_symbol(xi, eps, Branch::plus), m = pi_symbol(xi, eps, Branch::minus);
      idem = std::max({idem, max_entry(p * p - p), max_entry(m * m - m)});
      orth = std::max({orth, max_entry(p * m), max_entry(m * p)});
      complete = std::max(complete, max_entry(p + m - id));
      const double lambda = std::sqrt(1.0 + eps * eps * norm2(xi));
      spectral = std::max(spectral, max_entry(dirac_symbol(xi, eps) - lambda * (p - m)));
    }
    const std::string tag = " eps=" + std::to_string(eps).substr(0, 5);
    r.lines.push_back({"idempotent" + tag, idem, 0.0, 1e-12});
    r.lines.push_back({"orthogonal" + tag, orth, 0.0, 1e-12});
    r.lines.push_back({"complete" + tag, complete, 0.0, 1e-12});
    r.lines.push_back({"Q = lambda (P+ - P-)" + tag, spectral, 0.0, 1e-12});
  }
  return r;
}

SuiteResult symbols() {
  const auto lat = make_lattice(32, kTwoPi);
  SuiteResult r{"symbols", {}};
  for (double eps : {1.0, 0.5, 0.25, 0.125}) {
    int bound = 0, hest = 0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const Xi xi = lat.xi(i);
      const double k = std::sqrt(norm2(xi)), r2 = eps * eps * k * k;
      const double lambda = std::sqrt(1.0 + r2);
      const double sym = r2 / (lambda * (1.0 + lambda));  // 1 - 1/lambda without cancellation
      if (!(sym >= 0.0 && sym <= std::min({1.0, eps * k, r2}))) ++bound;
      if (k == 0.0) continue;
      const double gap = k / eps - h_eps_symbol(xi, eps);
      if (!(gap >= 0.0 && gap <= 1.0 / (eps * eps))) ++hest;
    }
    const std::string tag = " eps=" + std::to_string(eps).substr(0, 5);
    r.lines.push_back({"0 <= 1 - 1/lambda <= min(1, eps|xi|, eps^2|xi|^2) violations" + tag, double(bound), 0, 0});
    r.lines.push_back({"0 <= |xi|/eps - h_eps <= eps^-2 violations" + tag, double(hest), 0, 0});
  }
  return r;
}

SuiteResult null_first(std::uint64_t seed) {
  const auto lat = make_lattice(24, kTwoPi);
  SuiteResult r{"null-1", {}};
  for (double eps : {0.5, 0.25}) {
    double worst = 0.0, worst_second = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const std::uint64_t base = 1000 * seed + 10 * s;
      const auto a = random_divfree_field(lat, 5, base + 1, 1.0);
      const auto ea = random_divfree_field(lat, 5, base + 2, 1.0);
      const auto u = random_band_limited<4>(lat, 5, base + 3, 1.0);
      const auto du = random_band_limited<4>(lat, 5, base + 4, 1.0);
      const auto res = null_identity_check(ScalarField(lat), a, ea, i_dminus(u, du), u, du, eps);
      worst = std::max(worst, res.first);
      worst_second = std::max(worst_second, res.second);
    }
    const std::string tag = " eps=" + std::to_string(eps).substr(0, 4);
    r.lines.push_back({"identity (i) max relative residual, 10 draws" + tag, worst, 0.0, 1e-10});
    r.lines.push_back({"identity (ii) with psi = i d_- U" + tag, worst_second, 0.0, 1e-10});
  }
  return r;
}

SuiteResult null_second(std::uint64_t seed) {
  const auto lat = make_lattice(12, kTwoPi);
  const double eps = 0.5, t_final = 0.25;
  const auto psi0 = random_band_limited<4>(lat, 2, 1000 * seed + 40, 1.0);
  const auto a = random_divfree_field(lat, 2, 1000 * seed + 41, 1.0);
  const auto ea = random_divfree_field(lat, 2, 1000 * seed + 42, 1.0);
  std::vector<double> res;
  for (double h : {2e-3, 1e-3}) {
    const FreeDiracPropagator prop(lat, eps, h);
    const int count = static_cast<int>(std::lround(t_final / h)) + 1;
    std::vector<SpinorField> psi{psi0};
    for (int k = 1; k < count; ++k) psi.push_back(prop.apply(psi.back()));
    const auto useries = build_U(psi, h, eps);
    res.push_back(null_identity_check(ScalarField(lat), a, ea, psi.back(), useries.u.back(),
                                      useries.eps_dt_u.back(), eps)
                      .second);
  }
  SuiteResult r{"null-2", {}};
  r.lines.push_back({"identity (ii) residual, U step 2e-3", res[0], 0.0, INFINITY});
  r.lines.push_back({"identity (ii) residual, U step 1e-3", res[1], 0.0, 1e-5});
  r.lines.push_back({"halving ratio", res[0] / res[1], 3.0, 5.0});
  return r;
}

SuiteResult squared_dirac(std::uint64_t seed) {
  SuiteResult r{"squared-dirac", {}};
  {
    const auto lat = make_lattice(8, kTwoPi);
    DMState s{0.0, SpinorField(lat), VectorField(lat), VectorField(lat), 0.3};
    std::fill(s.psi[0].begin(), s.psi[0].end(), Complex(1.0));
    StepConfig cfg;
    cfg.dt = 1e-2;
    RunOptions opts;
    opts.sample_stride = 1;
    const auto series = squared_dirac_check(simulate_dm(s, 0.1, cfg, opts).samples);
    r.lines.push_back({"stationary solution max residual",
                       *std::max_element(series.residual.begin(), series.residual.end()), 0.0, 1e-8});
  }
  const auto lat = make_lattice(16, kTwoPi);
  const double eps = 0.5;
  DMState s;
  s.eps = eps;
  s.psi = pi_eps(random_band_limited<4>(lat, 2, 1000 * seed + 50, 0.5), eps, Branch::plus);
  s.a = random_divfree_field(lat, 2, 1000 * seed + 51, 0.3);
  s.eps_dt_a = VectorField(lat);
  std::vector<double> at_t;
  for (double dt : {4e-3, 2e-3}) {
    StepConfig cfg;
    cfg.dt = dt;
    RunOptions opts;
    opts.sample_stride = 1;
    const auto series = squared_dirac_check(simulate_dm(s, 0.048, cfg, opts).samples);
    at_t.push_back(series.residual[static_cast<std::size_t>(std::lround(0.024 / dt)) - 1]);
  }
  r.lines.push_back({"coupled run residual at t=0.024, dt 4e-3", at_t[0], 0.0, INFINITY});
  r.lines.push_back({"coupled run residual at t=0.024, dt 2e-3", at_t[1], 0.0, INFINITY});
  r.lines.push_back({"halving ratio", at_t[0] / at_t[1], 3.0, 5.0});
  return r;
}

}  // namespace

bool SuiteResult::pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"matrices", "projections", "symbols",
                                              "null-1",   "null-2",      "squared-dirac"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "matrices") return matrices();
  if (name == "projections") return projections();
  if (name == "symbols") return symbols();
  if (name == "null-1") return null_first(seed);
  if (name == "null-2") return null_second(seed);
  if (name == "squared-dirac") return squared_dirac(seed);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace nrlimit
