#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nrlimit/checks.hpp"
#include "nrlimit/config.hpp"
#include "nrlimit/limit.hpp"

namespace nrlimit {

FourierLattice lattice_of(const ExperimentConfig& cfg);

/// psi_0^eps of the configured family, with A(0) and eps d_t A(0) = 0.
///   zero            psi = 0
///   stationary      psi = (1,0,0,0)
///   thm2            psi = (v+, v-) + eps w
///   thm3, thm4      psi = Pi_+^eps (v+, 0)
///   counterexample  psi = (v+, eps v+)
///   constraint      psi = (v+, -(eps/2) i sigma.grad v+)
DMState initial_state(const ExperimentConfig& cfg, double eps);
/// Limit data v0^{+-} = Pi_{+-}^0 lim_{eps->0} psi_0^eps, in closed form per family.
LimitState limit_initial_state(const ExperimentConfig& cfg);

/// Uniform step that lands on T and on every one of `samples` equally spaced
/// sample times: returns (steps, dt) with steps divisible by samples.
std::pair<long, double> sampled_schedule(double t_final, double dt, int samples);

/// Space-time test function of the weak-* pairing.
class WeakPairing {
 public:
  WeakPairing(const PairingBump& bump, const FourierLattice& lattice);
  double time_profile(double t) const;  // includes the normalisation constant
  const ScalarField& space_profile() const { return space_; }
  /// Adds weight * int J(t,x) G(t,x) dx for one quadrature node.
  void add(double t, double weight, const VectorField& j);
  std::array<double, 3> value() const { return acc_; }

 private:
  PairingBump bump_;
  ScalarField space_;
  double norm_ = 1.0;
  std::array<double, 3> acc_{0.0, 0.0, 0.0};
};

/// Trapezoid quadrature of int int J.G dt dx over the given (not necessarily
/// uniform) time nodes, per component.
std::array<double, 3> current_weak_pairing(const std::vector<double>& t,
                                           const std::vector<VectorField>& j,
                                           const PairingBump& bump);

struct CellResult {
  double eps = 0.0;
  double dt = 0.0;
  long steps = 0;
  std::map<std::string, double> errors;
  std::map<std::string, std::array<double, 3>> vectors;  // pairing values
};

struct RateReport {
  std::string study;
  std::string family;
  std::vector<std::string> norms;  // reported columns, in order
  std::vector<CellResult> cells;   // one per eps, in config order
  std::map<std::string, RateFit> rates;
  std::map<std::string, bool> monotone;  // strictly decreasing along the eps list
  std::string version;
};

/// DM against Schroedinger-Poisson in lockstep (same dt) for each eps.
/// Records sup over sample times of the spinor, A0 and charge errors, the
/// positron part, the t = 0 current gap, and the weak-* pairing defect when a
/// bump is configured.
RateReport nonrel_convergence_study(const ExperimentConfig& cfg, int threads = 1);
/// DM against Pauli driven by the DM potentials, chi_P(0) = upper(psi_0).
RateReport seminonrel_study(const ExperimentConfig& cfg, int threads = 1);

nlohmann::json to_json(const RateReport& r);
std::string to_csv(const RateReport& r);

/// Runs f(0..count-1) on up to `threads` workers; results must be written
/// to per-index slots so the outcome does not depend on scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& f);

}  // namespace nrlimit
