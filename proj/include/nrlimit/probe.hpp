#pragma once

#include <string>
#include <vector>

#include "nrlimit/config.hpp"
#include "nrlimit/field.hpp"
#include "nrlimit/lattice.hpp"

namespace nrlimit {

/// One evaluation of a dyadic spacetime estimate.
///   u: eps^2 u_tt = Laplace u, u(0) = f, u_t(0) = 0   (per mode cos(|xi| t / eps))
///   v: i v_t = branch * h_eps v, v(0) = g              (per mode exp(-i branch t h_eps))
/// The data are localised inside: f, g -> Delta_lambda (case i, ii) or
/// f -> Delta_mu, g -> Delta_lambda (case iii).
struct DyadicInput {
  ProbeCase which = ProbeCase::diagonal_low;
  double eps = 0.25;
  double mu = 1.0;
  double lambda = 1.0;
  double t_final = 1.0;
  int time_steps = 0;  // 0: max(64, ceil(2 T omega_max))
  int branch = 1;
};

/// Largest integer wavenumber with a nonzero Littlewood-Paley weight at `scale`.
int dyadic_reach(const FourierLattice& lat, double scale);
/// Throws std::invalid_argument unless every product is alias free: 4 * reach < n.
void require_resolved(const FourierLattice& lat, double mu, double lambda);
/// Trapezoid intervals on [0, T] for this input on this lattice.
int probe_time_steps(const FourierLattice& lat, const DyadicInput& in);

/// LHS / RHS of the estimate. LHS is the L^2_{t,x} norm over [0,T] x torus by
/// trapezoid quadrature; RHS uses the exact L^2 norms of the localised data.
/// Zero data give 0.
double dyadic_ratio(const ComplexField& f, const ComplexField& g, const DyadicInput& in);

/// Whether (mu, lambda, eps) belongs to the regime of the case.
///   i    mu <= lambda <= 2/eps
///   ii   mu <= lambda, lambda * eps >= 2
///   iii  every pair
bool in_regime(ProbeCase c, double mu, double lambda, double eps);

struct ProbeRow {
  double mu = 0.0;
  double lambda = 0.0;
  double eps = 0.0;
  int trial = 0;
  double ratio = 0.0;
};

/// Every admissible (eps, mu, lambda) cell times `trials` random data pairs,
/// rows in canonical order (eps, mu, lambda, trial) regardless of threads.
std::vector<ProbeRow> dyadic_sweep(const ExperimentConfig& cfg, int threads = 1);

struct ProbeStats {
  double max = 0.0;
  double median = 0.0;
  double max_over_median = 0.0;
  /// Least-squares slope of log2(median ratio at mu) against log2(mu);
  /// undefined with fewer than two distinct mu.
  bool trend_defined = false;
  double trend_slope = 0.0;
};

ProbeStats probe_stats(const std::vector<ProbeRow>& rows);
std::string sweep_csv(const std::vector<ProbeRow>& rows);

}  // namespace nrlimit
