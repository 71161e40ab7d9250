#include "nrlimit/dm.hpp"

#include <cmath>

#include "nrlimit/norms.hpp"

namespace nrlimit {
namespace {

const Complex I(0.0, 1.0);

Mat4 alpha_dot(const Xi& v) {
  const auto& d = dirac_matrices();
  return v[0] * d.alpha[0] + v[1] * d.alpha[1] + v[2] * d.alpha[2];
}

void require_eps(double eps, const char* who) {
  if (!(eps > 0.0)) throw std::invalid_argument(std::string(who) + " requires eps > 0");
}

}  // namespace

FreeDiracPropagator::FreeDiracPropagator(const FourierLattice& lattice, double eps, double dt)
    : lattice_(lattice), eps_(eps), cos_(lattice.size()), sin_over_lambda_(lattice.size()) {
  require_eps(eps, "free_dirac_step");
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double lam = lambda_symbol(lattice.xi(i), eps);
    const double theta = dt * lam / (eps * eps);
    cos_[i] = std::cos(theta);
    sin_over_lambda_[i] = std::sin(theta) / lam;
  }
}

void FreeDiracPropagator::apply_spectrum(SpinorField& spec) const {
  require_same_lattice(spec.lattice(), lattice_);
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    const Vec4 v = spinor_at(spec, i);
    const Vec4 q = dirac_symbol(lattice_.xi(i), eps_) * v;
    set_spinor(spec, i, cos_[i] * v - I * sin_over_lambda_[i] * q);
  }
}

SpinorField FreeDiracPropagator::apply(const SpinorField& psi) const {
  auto spec = fft_forward(psi);
  apply_spectrum(spec);
  return fft_inverse(spec);
}

SpinorField free_dirac_step(const SpinorField& psi, double dt, double eps) {
  return FreeDiracPropagator(psi.lattice(), eps, dt).apply(psi);
}

SpinorField potential_kick(const SpinorField& psi, const ScalarField& a0, const VectorField& a,
                           double dt, double eps) {
  require_eps(eps, "potential_kick");
  require_same_lattice(psi.lattice(), a0.lattice());
  require_same_lattice(psi.lattice(), a.lattice());
  SpinorField out(psi.lattice());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Xi av{a[0][i], a[1][i], a[2][i]};
    const double norm_a = std::sqrt(norm2(av));
    const Vec4 v = spinor_at(psi, i);
    Vec4 w;
    if (norm_a == 0.0) {
      w = v;
    } else {
      const double c = std::cos(norm_a * dt), s = std::sin(norm_a * dt);
      w = c * v + (I * s / norm_a) * (alpha_dot(av) * v);
    }
    set_spinor(out, i, std::polar(1.0, a0[0][i] * dt) * w);
  }
  return out;
}

std::pair<VectorField, VectorField> wave_step(const VectorField& a, const VectorField& eps_dt_a,
                                              const VectorField& j, double dt, double eps) {
  require_eps(eps, "wave_step");
  auto ah = fft_forward(a);
  auto vh = fft_forward(eps_dt_a);
  const auto jh = fft_forward(j);
  oscillator_advance(ah, vh, jh, dt, eps);
  return {real_part(fft_inverse(ah)), real_part(fft_inverse(vh))};
}

ScalarField coulomb_potential(const SpinorField& psi, bool dealias_density) {
  auto rho = charge_density(psi);
  if (dealias_density) rho = dealias(rho);
  return poisson_solve(rho);
}

VectorField transverse_current(const SpinorField& psi, double eps, bool dealias_density) {
  auto j = current_density(psi, eps);
  if (dealias_density) j = dealias(j);
  return leray_project(j);
}

namespace {

SpinorField kick(const SpinorField& psi, const ScalarField& a0, const VectorField& a, double dt,
                 double eps, int substeps) {
  if (substeps < 1) throw std::invalid_argument("kick_substeps must be >= 1");
  SpinorField out = psi;
  for (int k = 0; k < substeps; ++k) out = potential_kick(out, a0, a, dt / substeps, eps);
  return out;
}

DMState strang_step(const DMState& s, const StepConfig& cfg, const FreeDiracPropagator& half) {
  const double dt = cfg.dt, eps = s.eps;
  DMState out;
  out.eps = eps;
  out.t = s.t + dt;
  const auto a0_start = coulomb_potential(s.psi, cfg.dealias);
  auto psi = kick(s.psi, a0_start, s.a, dt / 2, eps, cfg.kick_substeps);
  psi = half.apply(psi);
  const auto j = transverse_current(psi, eps, cfg.dealias);
  std::tie(out.a, out.eps_dt_a) = wave_step(s.a, s.eps_dt_a, j, dt, eps);
  psi = half.apply(psi);
  // The kick leaves |psi|^2 unchanged pointwise, so this A0 is also the one
  // of the new state.
  const auto a0_end = coulomb_potential(psi, cfg.dealias);
  out.psi = kick(psi, a0_end, out.a, dt / 2, eps, cfg.kick_substeps);
  return out;
}

void validate(const DMState& s, const StepConfig& cfg) {
  require_eps(s.eps, "dm_strang_step");
  if (!(std::abs(cfg.dt) > 0.0)) throw std::invalid_argument("dt must be nonzero");
  if (std::abs(cfg.dt) > cfg.dt_max) {
    throw std::invalid_argument("dt exceeds dt_max");
  }
  require_same_lattice(s.psi.lattice(), s.a.lattice());
  require_same_lattice(s.psi.lattice(), s.eps_dt_a.lattice());
}

}  // namespace

DMState dm_strang_step(const DMState& s, const StepConfig& cfg) {
  validate(s, cfg);
  return strang_step(s, cfg, FreeDiracPropagator(s.psi.lattice(), s.eps, cfg.dt / 2));
}

DMDiagnostics diagnose(const DMState& s) {
  return {s.t,
          total_charge(s.psi),
          h1_norm(s.psi),
          sobolev_norm(s.a, 1.0, true),
          l2_norm(s.eps_dt_a),
          h1_norm(pi_eps(s.psi, s.eps, Branch::minus))};
}

std::pair<long, double> step_schedule(double t_final, double dt) {
  if (!(t_final > 0.0)) throw std::invalid_argument("final time must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const long n = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  return {n, t_final / static_cast<double>(n)};
}

DMTrajectory simulate_dm(const DMState& init, double t_final, const StepConfig& cfg,
                         const RunOptions& opts) {
  DMTrajectory traj;
  std::tie(traj.steps, traj.dt) = step_schedule(t_final, cfg.dt);
  StepConfig c = cfg;
  c.dt = traj.dt;
  validate(init, c);
  const FreeDiracPropagator half(init.psi.lattice(), init.eps, c.dt / 2);
  const auto store = [&](const DMState& s) {
    traj.samples.push_back(s);
    traj.diagnostics.push_back(diagnose(s));
  };
  DMState s = init;
  if (opts.observer) opts.observer(s, 0);
  if (opts.sample_stride > 0) store(s);
  for (long k = 1; k <= traj.steps; ++k) {
    s = strang_step(s, c, half);
    s.t = init.t + k * c.dt;
    if (!all_finite(s.psi) || !all_finite(s.a) || !all_finite(s.eps_dt_a)) {
      throw SimulationError("non-finite state at step " + std::to_string(k), k);
    }
    const double h1 = h1_norm(s.psi);
    if (h1 > opts.h1_ceiling) {
      throw SimulationError("H1 norm " + std::to_string(h1) + " exceeds ceiling at step " +
                                std::to_string(k),
                            k);
    }
    if (opts.observer) opts.observer(s, k);
    if ((opts.sample_stride > 0 && k % opts.sample_stride == 0) || k == traj.steps) store(s);
  }
  return traj;
}

std::pair<VectorField, VectorField> compute_EB(const ScalarField& a0, const VectorField& a,
                                               const VectorField& eps_dt_a) {
  return {gradient(a0) - eps_dt_a, curl(a)};
}

SpinorField apply_matrix(const Mat4& m, const SpinorField& psi) {
  SpinorField out(psi.lattice());
  for (std::size_t i = 0; i < psi.size(); ++i) set_spinor(out, i, m * spinor_at(psi, i));
  return out;
}

namespace {

/// alpha^j d_j psi, spectrally.
SpinorField alpha_grad(const SpinorField& psi) {
  return apply_matrix_symbol(psi, [](const Xi& xi) { return Mat4(I * alpha_dot(xi)); });
}

/// -(A.alpha) psi - A0 psi.
SpinorField potential_source(const SpinorField& psi, const ScalarField& a0, const VectorField& a) {
  SpinorField f(psi.lattice());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Vec4 v = spinor_at(psi, i);
    set_spinor(f, i, -(alpha_dot({a[0][i], a[1][i], a[2][i]}) * v) - a0[0][i] * v);
  }
  return f;
}

}  // namespace

PicardResult picard_solve(const DMState& init, double t_final, int m_max, const StepConfig& cfg) {
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  require_eps(init.eps, "picard_solve");
  const auto [steps, h] = step_schedule(t_final, cfg.dt);
  const double eps = init.eps;
  const auto& lat = init.psi.lattice();
  const FreeDiracPropagator prop(lat, eps, h);
  PicardResult res;
  res.dt = h;

  // Iterate m = -1 is identically zero.
  std::vector<SpinorField> psi_prev(steps + 1, SpinorField(lat));
  std::vector<VectorField> a_prev(steps + 1, VectorField(lat));
  int increases = 0;
  for (int m = 0; m <= m_max; ++m) {
    // Sources of iterate m - 1 at every node.
    std::vector<SpinorField> src(steps + 1);
    std::vector<VectorField> jt(steps + 1);
    for (long k = 0; k <= steps; ++k) {
      src[k] = potential_source(psi_prev[k], coulomb_potential(psi_prev[k], cfg.dealias), a_prev[k]);
      jt[k] = transverse_current(psi_prev[k], eps, cfg.dealias);
    }
    std::vector<SpinorField> psi_next(steps + 1);
    std::vector<VectorField> a_next(steps + 1);
    psi_next[0] = init.psi;
    a_next[0] = init.a;
    auto ah = fft_forward(init.a);
    auto vh = fft_forward(init.eps_dt_a);
    for (long k = 0; k < steps; ++k) {
      // psi_{k+1} = S(h)[psi_k - i h/2 F_k] - i h/2 F_{k+1}
      SpinorField f0 = src[k];
      f0 *= Complex(0.0, -h / 2);
      SpinorField f1 = src[k + 1];
      f1 *= Complex(0.0, -h / 2);
      psi_next[k + 1] = prop.apply(psi_next[k] + f0) + f1;
      VectorField jm = jt[k] + jt[k + 1];
      jm *= 0.5;
      const auto jh = fft_forward(jm);
      oscillator_advance(ah, vh, jh, h, eps);
      a_next[k + 1] = real_part(fft_inverse(ah));
    }
    double diff = 0.0;
    for (long k = 0; k <= steps; ++k) diff = std::max(diff, h1_norm(psi_next[k] - psi_prev[k]));
    if (!res.cauchy.empty() && diff > res.cauchy.back()) {
      if (++increases >= 3) res.contraction_warning = true;
    } else {
      increases = 0;
    }
    res.cauchy.push_back(diff);
    DMState fin;
    fin.t = init.t + t_final;
    fin.eps = eps;
    fin.psi = psi_next[steps];
    fin.a = a_next[steps];
    fin.eps_dt_a = real_part(fft_inverse(vh));
    res.final_iterates.push_back(std::move(fin));
    psi_prev = std::move(psi_next);
    a_prev = std::move(a_next);
  }
  return res;
}

USeries build_U(const std::vector<SpinorField>& psi, double h, double eps,
                double variation_threshold) {
  require_eps(eps, "build_U");
  if (psi.size() < 2) throw std::invalid_argument("build_U needs at least two samples");
  if (!(h > 0.0)) throw std::invalid_argument("build_U needs a positive sample spacing");
  const auto& lat = psi.front().lattice();
  USeries out;
  out.h = h;
  SpinorField uh(lat);
  SpinorField vh = fft_forward(psi.front());
  vh *= Complex(0.0, -1.0);  // eps dU/dt(0) = -i psi(0)
  out.u.push_back(SpinorField(lat));
  out.eps_dt_u.push_back(fft_inverse(vh));
  double prev_norm = -1.0;
  SpinorField prev_src;
  for (std::size_t k = 0; k + 1 < psi.size(); ++k) {
    // Source -i(eps d_t psi + alpha.grad psi) at the interval midpoint.
    SpinorField dpsi = psi[k + 1] - psi[k];
    dpsi *= Complex(eps / h);
    SpinorField mid = psi[k] + psi[k + 1];
    mid *= 0.5;
    SpinorField f = dpsi + alpha_grad(mid);
    f *= Complex(0.0, -1.0 / eps);  // kernel solves eps^2 U'' + |xi|^2 U = eps s
    if (std::isfinite(variation_threshold) && prev_norm > 0.0) {
      const double var = l2_norm(f - prev_src) / prev_norm;
      if (var > variation_threshold) {
        throw std::runtime_error("build_U: source varies by " + std::to_string(var) +
                                 " per sample; sampling too coarse");
      }
    }
    prev_norm = l2_norm(f);
    prev_src = f;
    const auto sh = fft_forward(f);
    oscillator_advance(uh, vh, sh, h, eps);
    out.u.push_back(fft_inverse(uh));
    out.eps_dt_u.push_back(fft_inverse(vh));
  }
  return out;
}

SpinorField i_dminus(const SpinorField& u, const SpinorField& eps_dt_u) {
  SpinorField out = eps_dt_u - alpha_grad(u);
  out *= I;
  return out;
}

SpinorField remainder_R(const DMState& s, const SpinorField& psi_plus,
                        const SpinorField& psi_minus) {
  const double eps = s.eps;
  require_eps(eps, "remainder_R");
  const auto& d = dirac_matrices();
  const auto& psi = s.psi;
  const auto a0 = coulomb_potential(psi);
  const auto [e, b] = compute_EB(a0, s.a, s.eps_dt_a);
  const auto div_a = divergence(s.a);
  std::array<SpinorField, 3> grad;
  for (int j = 0; j < 3; ++j) grad[j] = partial(psi, j);
  SpinorField lhs(psi.lattice());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Vec4 v = spinor_at(psi, i);
    Vec4 t1 = I * div_a[0][i] * v;
    double a2 = 0.0;
    for (int j = 0; j < 3; ++j) {
      t1 += 2.0 * I * s.a[j][i] * spinor_at(grad[j], i);
      t1 += I * e[j][i] * (d.alpha[j] * v);
      t1 -= b[j][i] * (d.S[j] * v);
      a2 += s.a[j][i] * s.a[j][i];
    }
    set_spinor(lhs, i, eps * t1 + eps * eps * a2 * v);
  }
  const SpinorField diff = psi_plus - psi_minus;
  const auto comm = multiply(a0, lambda_eps(diff, eps, 1)) - lambda_eps(multiply(a0, diff), eps, 1);
  return lambda_eps(lhs - comm, eps, -1);
}

}  // namespace nrlimit
