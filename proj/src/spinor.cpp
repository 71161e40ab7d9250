#include "nrlimit/spinor.hpp"

#include <cmath>

#include "nrlimit/norms.hpp"

namespace nrlimit {
namespace {

const Complex I(0.0, 1.0);

DiracMatrices build_matrices() {
  DiracMatrices d;
  d.sigma[0] << 0, 1, 1, 0;
  d.sigma[1] << 0, -I, I, 0;
  d.sigma[2] << 1, 0, 0, -1;
  d.gamma0.setZero();
  d.gamma0.topLeftCorner<2, 2>() = Mat2::Identity();
  d.gamma0.bottomRightCorner<2, 2>() = -Mat2::Identity();
  for (int j = 0; j < 3; ++j) {
    d.alpha[j].setZero();
    d.alpha[j].topRightCorner<2, 2>() = d.sigma[j];
    d.alpha[j].bottomLeftCorner<2, 2>() = d.sigma[j];
    d.gamma[j] = d.gamma0 * d.alpha[j];
    d.S[j].setZero();
    d.S[j].topLeftCorner<2, 2>() = d.sigma[j];
    d.S[j].bottomRightCorner<2, 2>() = d.sigma[j];
  }
  return d;
}

double inner_re(const Vec2& a, const Vec2& b) { return (b.adjoint() * a)(0).real(); }

}  // namespace

const DiracMatrices& dirac_matrices() {
  static const DiracMatrices d = build_matrices();
  return d;
}

Mat4 dirac_symbol(const Xi& xi, double eps) {
  const auto& d = dirac_matrices();
  return eps * (xi[0] * d.alpha[0] + xi[1] * d.alpha[1] + xi[2] * d.alpha[2]) + d.gamma0;
}

Mat4 pi_symbol(const Xi& xi, double eps, Branch b) {
  const double lam = lambda_symbol(xi, eps);
  return 0.5 * (Mat4::Identity() + (sign_of(b) / lam) * dirac_symbol(xi, eps));
}

SpinorField apply_matrix_symbol(const SpinorField& psi, const std::function<Mat4(const Xi&)>& m) {
  auto spec = fft_forward(psi);
  const auto& lat = psi.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    set_spinor(spec, i, m(lat.xi(i)) * spinor_at(spec, i));
  }
  return fft_inverse(spec);
}

SpinorField pi_eps(const SpinorField& psi, double eps, Branch b) {
  if (!(eps > 0.0)) throw std::invalid_argument("pi_eps requires eps > 0");
  return apply_matrix_symbol(psi, [eps, b](const Xi& xi) { return pi_symbol(xi, eps, b); });
}

SpinorField pi_zero(const SpinorField& psi, Branch b) {
  SpinorField out = psi;
  const int first = b == Branch::plus ? 2 : 0;
  for (int c = first; c < first + 2; ++c) std::fill(out[c].begin(), out[c].end(), Complex{});
  return out;
}

std::pair<double, double> projection_remainders(const SpinorField& f, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("projection_remainders requires eps > 0");
  const auto& d = dirac_matrices();
  const Mat4 pi0 = 0.5 * (Mat4::Identity() + d.gamma0);
  const auto first = apply_matrix_symbol(
      f, [&](const Xi& xi) { return Mat4(pi_symbol(xi, eps, Branch::plus) - pi0); });
  // i eps/2 alpha^k d_k has symbol -eps/2 alpha.xi.
  const auto second = apply_matrix_symbol(f, [&](const Xi& xi) {
    const Mat4 ax = xi[0] * d.alpha[0] + xi[1] * d.alpha[1] + xi[2] * d.alpha[2];
    return Mat4(pi_symbol(xi, eps, Branch::plus) - pi0 - 0.5 * eps * ax);
  });
  return {l2_norm(first), l2_norm(second)};
}

std::pair<SpinorField, SpinorField> kg_split(const SpinorField& psi, const SpinorField& dt_psi,
                                             const ScalarField& a0, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("kg_split requires eps > 0");
  require_same_lattice(psi.lattice(), dt_psi.lattice());
  SpinorField g = dt_psi;
  g *= I;
  g += multiply(a0, psi);
  g = lambda_eps(g, eps, -1);
  g *= Complex(eps * eps);
  SpinorField plus = psi + g;
  SpinorField minus = psi - g;
  plus *= 0.5;
  minus *= 0.5;
  return {std::move(plus), std::move(minus)};
}

TwoSpinorField upper(const SpinorField& psi) {
  TwoSpinorField out(psi.lattice());
  out[0] = psi[0];
  out[1] = psi[1];
  return out;
}

TwoSpinorField lower(const SpinorField& psi) {
  TwoSpinorField out(psi.lattice());
  out[0] = psi[2];
  out[1] = psi[3];
  return out;
}

SpinorField join(const TwoSpinorField& chi, const TwoSpinorField& eta) {
  require_same_lattice(chi.lattice(), eta.lattice());
  SpinorField out(chi.lattice());
  out[0] = chi[0];
  out[1] = chi[1];
  out[2] = eta[0];
  out[3] = eta[1];
  return out;
}

SpinorField embed_upper(const TwoSpinorField& chi) { return join(chi, TwoSpinorField(chi.lattice())); }
SpinorField embed_lower(const TwoSpinorField& eta) { return join(TwoSpinorField(eta.lattice()), eta); }

template <std::size_t N>
static ScalarField density_impl(const Field<Complex, N>& psi) {
  ScalarField rho(psi.lattice());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < N; ++c) s += std::norm(psi[c][i]);
    rho[0][i] = s;
  }
  return rho;
}

ScalarField charge_density(const SpinorField& psi) { return density_impl(psi); }
ScalarField charge_density(const TwoSpinorField& v) { return density_impl(v); }

VectorField current_density(const SpinorField& psi, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("current_density requires eps > 0");
  const auto& d = dirac_matrices();
  VectorField j(psi.lattice());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Vec2 chi(psi[0][i], psi[1][i]);
    const Vec2 eta(psi[2][i], psi[3][i]);
    // <alpha^k psi, psi> = 2 Re <sigma^k chi, eta>
    for (int k = 0; k < 3; ++k) j[k][i] = 2.0 * inner_re(d.sigma[k] * chi, eta) / eps;
  }
  return j;
}

VectorField spin_density(const TwoSpinorField& v) {
  const auto& d = dirac_matrices();
  VectorField s(v.lattice());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 x = spinor_at(v, i);
    for (int k = 0; k < 3; ++k) s[k][i] = inner_re(d.sigma[k] * x, x);
  }
  return s;
}

VectorField probability_current(const TwoSpinorField& v) {
  VectorField j(v.lattice());
  for (int a = 0; a < 3; ++a) {
    const auto dv = partial(v, a);
    for (std::size_t i = 0; i < v.size(); ++i) {
      j[a][i] = (dv[0][i] * std::conj(v[0][i]) + dv[1][i] * std::conj(v[1][i])).imag();
    }
  }
  return j;
}

VectorField limit_current(const TwoSpinorField& vp, const TwoSpinorField& vm) {
  require_same_lattice(vp.lattice(), vm.lattice());
  VectorField j = probability_current(vp) - probability_current(vm);
  VectorField spin = spin_density(vp) - spin_density(vm);
  VectorField c = curl(spin);
  c *= 0.5;
  return j + c;
}

VectorField pauli_current(const TwoSpinorField& chi, const VectorField& a, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("pauli_current requires eps >= 0");
  VectorField j = probability_current(chi);
  const auto rho = charge_density(chi);
  for (int k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < chi.size(); ++i) j[k][i] -= eps * a[k][i] * rho[0][i];
  }
  return j;
}

double total_charge(const SpinorField& psi) {
  const double n = l2_norm(psi);
  return n * n;
}

double total_charge(const TwoSpinorField& v) {
  const double n = l2_norm(v);
  return n * n;
}

std::pair<ScalarField, VectorField> density_expansions(const SpinorField& phi_p,
                                                       const SpinorField& phi_m, double t,
                                                       double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("density_expansions requires eps > 0");
  require_same_lattice(phi_p.lattice(), phi_m.lattice());
  const auto& d = dirac_matrices();
  const Complex e2 = std::polar(1.0, -2.0 * t / (eps * eps));  // e^{-2it/eps^2}
  const auto inner = [](const Vec2& a, const Vec2& b) { return (b.adjoint() * a)(0); };
  ScalarField rho(phi_p.lattice());
  VectorField j(phi_p.lattice());
  for (std::size_t i = 0; i < phi_p.size(); ++i) {
    const Vec2 cp(phi_p[0][i], phi_p[1][i]), ep(phi_p[2][i], phi_p[3][i]);
    const Vec2 cm(phi_m[0][i], phi_m[1][i]), em(phi_m[2][i], phi_m[3][i]);
    rho[0][i] = cp.squaredNorm() + cm.squaredNorm() + ep.squaredNorm() + em.squaredNorm() +
                2.0 * (e2 * inner(cp, cm) + e2 * inner(ep, em)).real();
    for (int k = 0; k < 3; ++k) {
      const Mat2& s = d.sigma[k];
      const Complex v = inner(s * cp, ep) + inner(s * cm, em) + std::conj(e2) * inner(s * cm, ep) +
                        e2 * inner(s * cp, em);
      j[k][i] = 2.0 / eps * v.real();
    }
  }
  return {std::move(rho), std::move(j)};
}

}  // namespace nrlimit
