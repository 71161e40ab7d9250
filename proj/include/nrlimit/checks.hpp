#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nrlimit/dm.hpp"

namespace nrlimit {

/// A field together with its d_0 = eps d_t derivative, when known.
template <std::size_t N>
struct Spacetime {
  Field<Complex, N> value;
  std::optional<Field<Complex, N>> d0;
};

/// Q_0, or Q_{ab} with a, b in 0..3 (0 is the eps-scaled time direction).
struct NullKind {
  bool q0 = false;
  int a = 0, b = 0;
  static NullKind Q0() { return {true, 0, 0}; }
  static NullKind Q(int a, int b) { return {false, a, b}; }
};

namespace detail {
template <std::size_t N>
Field<Complex, N> spacetime_derivative(const Spacetime<N>& f, int index) {
  if (index < 0 || index > 3) throw std::invalid_argument("null form index must be in 0..3");
  if (index == 0) {
    if (!f.d0) throw std::invalid_argument("null form needs the time derivative of its argument");
    return *f.d0;
  }
  return partial(f.value, index - 1);
}

template <std::size_t N>
Field<Complex, N> scalar_times(const ComplexField& u, const Field<Complex, N>& v) {
  Field<Complex, N> out(v.lattice());
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t i = 0; i < v.size(); ++i) out[c][i] = u[0][i] * v[c][i];
  }
  return out;
}
}  // namespace detail

/// Q_0(u,v) = d0u d0v - grad u . grad v and
/// Q_ab(u,v) = d_a u d_b v - d_b u d_a v, for scalar u and N-component v.
template <std::size_t N>
Field<Complex, N> null_form(const Spacetime<1>& u, const Spacetime<N>& v, NullKind kind) {
  require_same_lattice(u.value.lattice(), v.value.lattice());
  using detail::scalar_times;
  using detail::spacetime_derivative;
  if (kind.q0) {
    auto out = scalar_times(spacetime_derivative(u, 0), spacetime_derivative(v, 0));
    for (int j = 1; j <= 3; ++j) {
      out -= scalar_times(spacetime_derivative(u, j), spacetime_derivative(v, j));
    }
    return out;
  }
  if (kind.a == kind.b) {
    if (kind.a < 0 || kind.a > 3) throw std::invalid_argument("null form index must be in 0..3");
    return Field<Complex, N>(v.value.lattice());
  }
  return scalar_times(spacetime_derivative(u, kind.a), spacetime_derivative(v, kind.b)) -
         scalar_times(spacetime_derivative(u, kind.b), spacetime_derivative(v, kind.a));
}

struct NullResiduals {
  double first = 0.0;   // 2A.grad psi + Q_jk(|grad|^-1 a^jk, psi)
  double second = 0.0;  // five null forms minus {i(E_j - d_j A0)alpha^j - B_j S^j} psi
};

/// Relative residuals of the two null-structure identities with
/// a_jk = R_j A_k - R_k A_j, summed over ordered index pairs. The second
/// identity holds exactly when psi = i d_- U, so its residual measures how
/// well U reproduces psi. A and eps d_t A must be divergence free and mean free.
NullResiduals null_identity_check(const ScalarField& a0, const VectorField& a,
                                  const VectorField& eps_dt_a, const SpinorField& psi,
                                  const SpinorField& u, const SpinorField& eps_dt_u, double eps,
                                  bool dealias = true);

/// Only the first identity (no U needed).
double null_identity_first(const VectorField& a, const SpinorField& psi, bool dealias = true);

/// Residual of the squared Dirac equation at interior samples of a uniformly
/// sampled trajectory. psi is demodulated by e^{it/eps^2} before the centred
/// second difference, so the rest-energy terms cancel analytically. The
/// derivation uses the product rule, so products of the fields must be
/// resolved by the grid; otherwise aliasing leaves a dt-independent floor.
struct SquaredDiracSeries {
  std::vector<double> t;
  std::vector<double> residual;  // L2 norm
  std::vector<double> scale;     // L2 norm of the largest retained term, for reference
};
SquaredDiracSeries squared_dirac_check(const std::vector<DMState>& samples, bool dealias = false);

/// Truncated constraint defect eta + (eps/2) i sigma.grad chi, and the full
/// residual including eps^2/2 {i d_t eta + A0 eta + A.sigma chi} with d_t eta
/// from centred differences. chi, eta are the parts of e^{it/eps^2} psi.
struct ExpansionSeries {
  std::vector<double> t;
  std::vector<double> constraint_defect;
  std::vector<double> full_residual;  // NaN at the two end samples
};
ExpansionSeries naive_expansion_check(const std::vector<DMState>& samples, bool dealias = false);

/// sup_t ||Pi_-^eps psi||_{H^m} with the surrogates ||eta||_{H^m} and the
/// centred-difference ||d_t eta||_{H^{m-1}}.
struct SmallComponentSeries {
  std::vector<double> t;
  std::vector<double> pi_minus;
  std::vector<double> eta;
  std::vector<double> dt_eta;  // NaN at the end samples
  double sup = 0.0;
  double constant = 0.0;  // sup / eps^order
  int order = 1;
};
SmallComponentSeries small_component_track(const std::vector<DMState>& samples, int order,
                                           double m = 1.0);

/// Least-squares slope of log2(error) against log2(eps).
struct RateFit {
  bool defined = false;
  double rate = 0.0;
  double residual = 0.0;  // RMS deviation of the fit in log2 units
  std::string reason;
};
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& error);

}  // namespace nrlimit
