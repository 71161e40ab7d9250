#pragma once

#include <array>
#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "nrlimit/spectral.hpp"

namespace nrlimit {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;

// Inner products on C^2 and C^4 are linear in the first slot:
// <a, b> = sum_i a_i conj(b_i).

struct DiracMatrices {
  Mat4 gamma0;
  std::array<Mat4, 3> gamma;  // gamma^j = gamma0 alpha^j
  std::array<Mat4, 3> alpha;
  std::array<Mat2, 3> sigma;  // Pauli matrices
  std::array<Mat4, 3> S;      // S^m = diag(sigma^m, sigma^m)
};

const DiracMatrices& dirac_matrices();

/// Branch selector for the positive (+1) and negative (-1) energy parts.
enum class Branch : int { plus = 1, minus = -1 };
inline double sign_of(Branch b) { return static_cast<int>(b); }

inline Vec4 spinor_at(const SpinorField& f, std::size_t i) {
  return Vec4(f[0][i], f[1][i], f[2][i], f[3][i]);
}
inline void set_spinor(SpinorField& f, std::size_t i, const Vec4& v) {
  for (int c = 0; c < 4; ++c) f[c][i] = v[c];
}
inline Vec2 spinor_at(const TwoSpinorField& f, std::size_t i) { return Vec2(f[0][i], f[1][i]); }
inline void set_spinor(TwoSpinorField& f, std::size_t i, const Vec2& v) {
  f[0][i] = v[0];
  f[1][i] = v[1];
}

/// Free Dirac symbol eps alpha.xi + gamma0.
Mat4 dirac_symbol(const Xi& xi, double eps);
/// Per-mode Pi_{+-}^eps = (I +- dirac_symbol / lambda) / 2.
Mat4 pi_symbol(const Xi& xi, double eps, Branch b);

/// Multiplies each Fourier mode of psi by the 4x4 matrix m(xi).
SpinorField apply_matrix_symbol(const SpinorField& psi, const std::function<Mat4(const Xi&)>& m);

SpinorField pi_eps(const SpinorField& psi, double eps, Branch b);
SpinorField pi_zero(const SpinorField& psi, Branch b);

/// L2 norms of (Pi_+^eps - Pi_+^0) f and (Pi_+^eps - Pi_+^0 + i eps/2 alpha^k d_k) f.
/// The minus branch gives the same two numbers.
std::pair<double, double> projection_remainders(const SpinorField& f, double eps);

/// psi_{+-} = (psi +- eps^2 lambda^{-1}(i dt_psi + A0 psi)) / 2.
std::pair<SpinorField, SpinorField> kg_split(const SpinorField& psi, const SpinorField& dt_psi,
                                             const ScalarField& a0, double eps);

/// e^{+- i t / eps^2} psi.
template <std::size_t N>
Field<Complex, N> modulate(const Field<Complex, N>& psi, double t, double eps, Branch b) {
  if (!(eps > 0.0)) throw std::invalid_argument("modulate requires eps > 0");
  const Complex phase = std::polar(1.0, sign_of(b) * t / (eps * eps));
  Field<Complex, N> out = psi;
  out *= phase;
  return out;
}

TwoSpinorField upper(const SpinorField& psi);
TwoSpinorField lower(const SpinorField& psi);
SpinorField embed_upper(const TwoSpinorField& chi);
SpinorField embed_lower(const TwoSpinorField& eta);
SpinorField join(const TwoSpinorField& chi, const TwoSpinorField& eta);

ScalarField charge_density(const SpinorField& psi);
ScalarField charge_density(const TwoSpinorField& v);
/// J_k = eps^{-1} <alpha^k psi, psi>.
VectorField current_density(const SpinorField& psi, double eps);
/// <sigma^j v, v>, j = 1..3.
VectorField spin_density(const TwoSpinorField& v);
/// Im <grad v, v>.
VectorField probability_current(const TwoSpinorField& v);
/// Im<grad v+, v+> - Im<grad v-, v-> + curl<sigma v+, v+>/2 - curl<sigma v-, v->/2.
VectorField limit_current(const TwoSpinorField& vp, const TwoSpinorField& vm);
/// Im <(grad - i eps A) chi, chi>.
VectorField pauli_current(const TwoSpinorField& chi, const VectorField& a, double eps);
double total_charge(const SpinorField& psi);
double total_charge(const TwoSpinorField& v);

/// Charge and current of psi = e^{-it/eps^2} phi_+ + e^{it/eps^2} phi_-, written
/// through the upper/lower parts of phi_+-.
std::pair<ScalarField, VectorField> density_expansions(const SpinorField& phi_p,
                                                       const SpinorField& phi_m, double t,
                                                       double eps);

}  // namespace nrlimit
