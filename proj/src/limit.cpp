#include "nrlimit/limit.hpp"

#include <cmath>
#include <stdexcept>

#include "nrlimit/norms.hpp"

namespace nrlimit {
namespace {

const Complex I(0.0, 1.0);

void phase_kick(TwoSpinorField& v, const ScalarField& u, double dt) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex p = std::polar(1.0, u[0][i] * dt);
    v[0][i] *= p;
    v[1][i] *= p;
  }
}

/// e^{-+ i |xi|^2 dt / 2}; sign = +1 for the electron branch.
TwoSpinorField kinetic(const TwoSpinorField& v, double dt, double sign) {
  return apply_multiplier(v, [dt, sign](const Xi& xi) { return std::polar(1.0, -sign * norm2(xi) * dt / 2); });
}

}  // namespace

ScalarField sp_potential(const LimitState& s) {
  return poisson_solve(charge_density(s.vp) + charge_density(s.vm));
}

LimitState sp_step(const LimitState& s, double dt) {
  if (!(std::abs(dt) > 0.0)) throw std::invalid_argument("sp_step requires dt != 0");
  require_same_lattice(s.vp.lattice(), s.vm.lattice());
  LimitState out = s;
  const auto u0 = sp_potential(out);
  phase_kick(out.vp, u0, dt / 2);
  phase_kick(out.vm, u0, dt / 2);
  out.vp = kinetic(out.vp, dt, 1.0);
  out.vm = kinetic(out.vm, dt, -1.0);
  const auto u1 = sp_potential(out);
  phase_kick(out.vp, u1, dt / 2);
  phase_kick(out.vm, u1, dt / 2);
  out.t = s.t + dt;
  return out;
}

SPTrajectory simulate_sp(const LimitState& init, double t_final, double dt, int sample_stride,
                         double h1_ceiling) {
  if (!(t_final > 0.0) || !(dt > 0.0)) throw std::invalid_argument("simulate_sp needs T, dt > 0");
  SPTrajectory traj;
  traj.steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  traj.dt = t_final / traj.steps;
  const auto store = [&](const LimitState& s) {
    traj.samples.push_back(s);
    traj.diagnostics.push_back({s.t, total_charge(s.vp), total_charge(s.vm), h1_norm(s.vp), h1_norm(s.vm)});
  };
  LimitState s = init;
  if (sample_stride > 0) store(s);
  for (long k = 1; k <= traj.steps; ++k) {
    s = sp_step(s, traj.dt);
    s.t = init.t + k * traj.dt;
    if (!all_finite(s.vp) || !all_finite(s.vm)) {
      throw std::runtime_error("simulate_sp: non-finite state at step " + std::to_string(k));
    }
    if (h1_norm(s.vp) + h1_norm(s.vm) > h1_ceiling) {
      throw std::runtime_error("simulate_sp: H1 ceiling exceeded at step " + std::to_string(k));
    }
    if ((sample_stride > 0 && k % sample_stride == 0) || k == traj.steps) store(s);
  }
  return traj;
}

GaugeSample make_gauge_sample(double t, const ScalarField& a0, const VectorField& a) {
  return {t, a0, a, curl(a)};
}

namespace {

/// Pointwise exp(-i dt (-A0 + eps^2|A|^2/2 - eps B.sigma/2)).
TwoSpinorField pauli_kick(const TwoSpinorField& chi, const GaugeSample& g, double eps, double dt) {
  const auto& d = dirac_matrices();
  TwoSpinorField out(chi.lattice());
  for (std::size_t i = 0; i < chi.size(); ++i) {
    double a2 = 0.0;
    for (int j = 0; j < 3; ++j) a2 += g.a[j][i] * g.a[j][i];
    const Complex scalar = std::polar(1.0, -dt * (-g.a0[0][i] + 0.5 * eps * eps * a2));
    const Xi b{g.b[0][i], g.b[1][i], g.b[2][i]};
    const double nb = std::sqrt(norm2(b));
    const Vec2 v = spinor_at(chi, i);
    Vec2 w = v;
    if (nb > 0.0) {
      // exp(i theta b.sigma) with theta = eps dt / 2.
      const double th = 0.5 * eps * dt * nb;
      const Mat2 bs = (b[0] * d.sigma[0] + b[1] * d.sigma[1] + b[2] * d.sigma[2]) / nb;
      w = std::cos(th) * v + I * std::sin(th) * (bs * v);
    }
    set_spinor(out, i, scalar * w);
  }
  return out;
}

/// M chi = (i eps / 2)(div(A chi) + A.grad chi).
TwoSpinorField mixed_operator(const TwoSpinorField& chi, const VectorField& a, double eps) {
  TwoSpinorField out(chi.lattice());
  for (int j = 0; j < 3; ++j) {
    TwoSpinorField achi = chi;
    for (int c = 0; c < 2; ++c) {
      for (std::size_t i = 0; i < chi.size(); ++i) achi[c][i] *= a[j][i];
    }
    out += partial(achi, j);
    TwoSpinorField dchi = partial(chi, j);
    for (int c = 0; c < 2; ++c) {
      for (std::size_t i = 0; i < chi.size(); ++i) dchi[c][i] *= a[j][i];
    }
    out += dchi;
  }
  out *= Complex(0.0, eps / 2);
  return out;
}

/// exp(-i dt M) chi by Taylor series summed to machine precision.
TwoSpinorField mixed_flow(const TwoSpinorField& chi, const VectorField& a, double eps, double dt) {
  if (eps == 0.0 || max_abs(a) == 0.0) return chi;
  TwoSpinorField sum = chi;
  TwoSpinorField term = chi;
  const double scale = max_abs(chi);
  for (int k = 1; k <= 200; ++k) {
    term = mixed_operator(term, a, eps);
    term *= Complex(0.0, -dt / k);
    sum += term;
    if (max_abs(term) <= 1e-17 * scale) return sum;
  }
  throw std::runtime_error("pauli_step: magnetic term series did not converge; reduce dt");
}

}  // namespace

PauliState pauli_step(const PauliState& s, const GaugeSample& start, const GaugeSample& end,
                      double dt) {
  if (!(s.eps >= 0.0)) throw std::invalid_argument("pauli_step requires eps >= 0");
  for (const auto* g : {&start, &end}) {
    require_same_lattice(s.chi.lattice(), g->a.lattice());
    if (divergence_norm(g->a) > 1e-8) {
      throw std::invalid_argument("pauli_step: magnetic potential is not divergence-free");
    }
  }
  VectorField amid = start.a + end.a;
  amid *= 0.5;
  PauliState out = s;
  out.chi = pauli_kick(s.chi, start, s.eps, dt / 2);
  out.chi = mixed_flow(out.chi, amid, s.eps, dt / 2);
  out.chi = kinetic(out.chi, dt, 1.0);
  out.chi = mixed_flow(out.chi, amid, s.eps, dt / 2);
  out.chi = pauli_kick(out.chi, end, s.eps, dt / 2);
  out.t = s.t + dt;
  return out;
}

PauliState pauli_step(const PauliState& s, const ScalarField& a0, const VectorField& a, double dt) {
  const auto g = make_gauge_sample(s.t, a0, a);
  return pauli_step(s, g, g, dt);
}

PauliTrajectory simulate_pauli(const PauliState& init, const std::vector<GaugeSample>& gauge,
                               double t_final, double dt, int sample_stride) {
  if (gauge.size() < 2) throw std::invalid_argument("simulate_pauli needs at least two gauge samples");
  if (!(t_final > 0.0) || !(dt > 0.0)) throw std::invalid_argument("simulate_pauli needs T, dt > 0");
  const double h = gauge[1].t - gauge[0].t;
  if (!(h > 0.0)) throw std::invalid_argument("gauge samples must be increasing in time");
  if (h > dt * (1 + 1e-9)) {
    throw std::invalid_argument("gauge samples are sparser than the Pauli step");
  }
  PauliTrajectory traj;
  traj.steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  traj.dt = t_final / traj.steps;
  const auto sample_at = [&](double t) -> const GaugeSample& {
    const double pos = (t - gauge[0].t) / h;
    const long idx = std::lround(pos);
    if (idx < 0 || idx >= static_cast<long>(gauge.size()) || std::abs(pos - idx) > 1e-6) {
      throw std::invalid_argument("no gauge sample at t = " + std::to_string(t));
    }
    return gauge[idx];
  };
  PauliState s = init;
  if (sample_stride > 0) {
    traj.samples.push_back(s);
    traj.mass.push_back(total_charge(s.chi));
  }
  for (long k = 1; k <= traj.steps; ++k) {
    const double t0 = init.t + (k - 1) * traj.dt;
    const double t1 = init.t + k * traj.dt;
    s = pauli_step(s, sample_at(t0), sample_at(t1), traj.dt);
    s.t = t1;
    if ((sample_stride > 0 && k % sample_stride == 0) || k == traj.steps) {
      traj.samples.push_back(s);
      traj.mass.push_back(total_charge(s.chi));
    }
  }
  return traj;
}

}  // namespace nrlimit
