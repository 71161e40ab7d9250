#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrlimit/spinor.hpp"

namespace nrlimit {

/// Scaled Dirac-Maxwell state in Coulomb gauge. A0 is never stored; it is
/// recomputed from the charge density of psi whenever it is needed.
struct DMState {
  double t = 0.0;
  SpinorField psi;
  VectorField a;
  VectorField eps_dt_a;  // eps * dA/dt
  double eps = 1.0;
};

struct StepConfig {
  double dt = 1e-3;
  bool dealias = false;  // 2/3-rule on the densities that feed A0 and J
  int kick_substeps = 1;
  double dt_max = 0.05;
};

/// Raised when a run produces non-finite values or exceeds its H1 ceiling.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Exact free flow e^{-i dt Q/eps^2} of i dpsi/dt = eps^{-2} Q psi, built per
/// mode as cos(theta) I - i sin(theta) Q/lambda with theta = dt lambda / eps^2.
class FreeDiracPropagator {
 public:
  FreeDiracPropagator(const FourierLattice& lattice, double eps, double dt);
  /// Applies the flow to Fourier coefficients in place.
  void apply_spectrum(SpinorField& spec) const;
  SpinorField apply(const SpinorField& psi) const;

 private:
  FourierLattice lattice_;
  double eps_;
  std::vector<double> cos_, sin_over_lambda_;
};

SpinorField free_dirac_step(const SpinorField& psi, double dt, double eps);

/// Pointwise exact e^{-i V dt} with V = -A_j alpha^j - A0:
/// e^{i A0 dt} (cos(|A| dt) + i sin(|A| dt) (A.alpha)/|A|).
SpinorField potential_kick(const SpinorField& psi, const ScalarField& a0, const VectorField& a,
                           double dt, double eps);

/// Exact per-mode solution of eps^2 a'' + |xi|^2 a = eps s over dt with s
/// frozen, on Fourier coefficients; v stores eps a'. At xi = 0 the drift
/// a += t v/eps + t^2 s/(2 eps) is used.
template <std::size_t N>
void oscillator_advance(Field<Complex, N>& a_hat, Field<Complex, N>& v_hat,
                        const Field<Complex, N>& s_hat, double dt, double eps) {
  const auto& lat = a_hat.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double k = std::sqrt(norm2(lat.xi(i)));
    for (std::size_t c = 0; c < N; ++c) {
      const Complex a0 = a_hat[c][i], v0 = v_hat[c][i], s = s_hat[c][i];
      if (k == 0.0) {
        a_hat[c][i] = a0 + dt * v0 / eps + dt * dt * s / (2.0 * eps);
        v_hat[c][i] = v0 + dt * s;
      } else {
        const double w = k * dt / eps;
        const double cw = std::cos(w), sw = std::sin(w);
        const Complex ap = eps * s / (k * k);
        a_hat[c][i] = ap + (a0 - ap) * cw + v0 / k * sw;
        v_hat[c][i] = -(a0 - ap) * k * sw + v0 * cw;
      }
    }
  }
}

/// Wave step for eps^2 A'' - Laplace A = eps J with J frozen over dt.
std::pair<VectorField, VectorField> wave_step(const VectorField& a, const VectorField& eps_dt_a,
                                              const VectorField& j, double dt, double eps);

/// A0 = poisson_solve(charge_density(psi)), optionally from a dealiased density.
ScalarField coulomb_potential(const SpinorField& psi, bool dealias = false);
/// Leray projection of current_density(psi), optionally dealiased.
VectorField transverse_current(const SpinorField& psi, double eps, bool dealias = false);

/// One symmetric step: half kick (A0 from psi, A old), free half step, wave
/// step over dt with J from the half-step spinor, free half step, half kick
/// (A0 from psi, A new). Exactly unitary and time-reversible.
DMState dm_strang_step(const DMState& s, const StepConfig& cfg);

struct DMDiagnostics {
  double t, charge, h1_psi, h1dot_a, eps_l2_dt_a, h1_pi_minus_psi;
};
DMDiagnostics diagnose(const DMState& s);

struct RunOptions {
  int sample_stride = 0;     // store every k-th state (0: only the final one)
  double h1_ceiling = 1e6;   // blow-up guard on ||psi||_{H1}
  /// Called after every step (and once at t = 0) with the step index.
  std::function<void(const DMState&, long)> observer;
};

struct DMTrajectory {
  std::vector<DMState> samples;
  std::vector<DMDiagnostics> diagnostics;  // one row per stored sample
  long steps = 0;
  double dt = 0.0;
};

/// Number of steps and the uniform step that lands exactly on T.
std::pair<long, double> step_schedule(double t_final, double dt);

DMTrajectory simulate_dm(const DMState& init, double t_final, const StepConfig& cfg,
                         const RunOptions& opts = {});

/// E = grad A0 - eps dA/dt, B = curl A.
std::pair<VectorField, VectorField> compute_EB(const ScalarField& a0, const VectorField& a,
                                               const VectorField& eps_dt_a);

struct PicardResult {
  std::vector<DMState> final_iterates;  // state at T for m = 0..m_max
  std::vector<double> cauchy;           // sup_t ||psi^{(m+1)} - psi^{(m)}||_{H1}, m = -1..m_max-1
  bool contraction_warning = false;
  double dt = 0.0;
};

/// Picard iteration of the coupled system starting from all iterates zero at
/// m = -1. Each linear problem is solved with the exact free propagators and
/// Duhamel trapezoid quadrature on a uniform grid of step cfg.dt.
PicardResult picard_solve(const DMState& init, double t_final, int m_max, const StepConfig& cfg);

/// Time-sampled U with eps^2 U'' - Laplace U = -i(eps d_t + alpha.grad) psi,
/// U(0) = 0, i eps U'(0) = psi(0). The source on each interval is frozen at
/// its midpoint by finite differences.
struct USeries {
  std::vector<SpinorField> u;
  std::vector<SpinorField> eps_dt_u;
  double h = 0.0;
};
USeries build_U(const std::vector<SpinorField>& psi, double h, double eps,
                double variation_threshold = INFINITY);

/// i d_- U = i(eps d_t U - alpha.grad U).
SpinorField i_dminus(const SpinorField& u, const SpinorField& eps_dt_u);

/// lambda^{-1} of eps{2iA.grad + i div A + i E.alpha - B.S}psi + eps^2 A^2 psi
/// - [A0, lambda](psi_+ - psi_-).
SpinorField remainder_R(const DMState& s, const SpinorField& psi_plus,
                        const SpinorField& psi_minus);

/// Applies alpha^j (or any constant 4x4 matrix) pointwise.
SpinorField apply_matrix(const Mat4& m, const SpinorField& psi);

}  // namespace nrlimit
