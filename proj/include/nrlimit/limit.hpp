#pragma once

#include <optional>
#include <vector>

#include "nrlimit/spinor.hpp"

namespace nrlimit {

/// Schroedinger-Poisson state (v+, v-); u = poisson_solve(|v+|^2 + |v-|^2) is derived.
struct LimitState {
  double t = 0.0;
  TwoSpinorField vp;
  TwoSpinorField vm;
};

ScalarField sp_potential(const LimitState& s);

/// Strang step: e^{i u dt/2}, exact kinetic e^{-+ i |xi|^2 dt/2} for v+-, e^{i u dt/2}.
LimitState sp_step(const LimitState& s, double dt);

struct SPDiagnostics {
  double t, mass_plus, mass_minus, h1_plus, h1_minus;
};

struct SPTrajectory {
  std::vector<LimitState> samples;
  std::vector<SPDiagnostics> diagnostics;
  long steps = 0;
  double dt = 0.0;
};

SPTrajectory simulate_sp(const LimitState& init, double t_final, double dt, int sample_stride = 0,
                         double h1_ceiling = 1e6);

struct PauliState {
  double t = 0.0;
  TwoSpinorField chi;
  double eps = 0.0;
};

/// Gauge fields seen by the Pauli spinor at one instant.
struct GaugeSample {
  double t = 0.0;
  ScalarField a0;
  VectorField a;
  VectorField b;
};

GaugeSample make_gauge_sample(double t, const ScalarField& a0, const VectorField& a);

/// One symmetric step of
///   i chi' = (i grad + eps A)^2 chi / 2 - A0 chi - eps B.sigma chi / 2.
/// Pointwise kicks for -A0 + eps^2 |A|^2/2 - eps B.sigma/2 use the start and
/// end samples; the Hermitian mixed term (i eps/2)(div(A .) + A.grad) uses
/// the average of the two A samples and is exponentiated by a Taylor series.
/// Sequence: kick(start, dt/2), mixed(dt/2), kinetic(dt), mixed(dt/2), kick(end, dt/2).
PauliState pauli_step(const PauliState& s, const GaugeSample& start, const GaugeSample& end,
                      double dt);
/// Frozen gauge fields, B = curl A.
PauliState pauli_step(const PauliState& s, const ScalarField& a0, const VectorField& a, double dt);

struct PauliTrajectory {
  std::vector<PauliState> samples;
  std::vector<double> mass;
  long steps = 0;
  double dt = 0.0;
};

/// Evolves chi_P through time-dependent gauge samples spaced uniformly; every
/// step boundary must coincide with a sample.
PauliTrajectory simulate_pauli(const PauliState& init, const std::vector<GaugeSample>& gauge,
                               double t_final, double dt, int sample_stride = 0);

}  // namespace nrlimit
