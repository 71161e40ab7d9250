#include "nrlimit/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nrlimit/norms.hpp"

namespace nrlimit {
namespace {

constexpr Complex I(0.0, 1.0);
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_coulomb(const VectorField& a) {
  const double scale = 1.0 + l2_norm(a);
  if (divergence_norm(a) > 1e-10 * scale) {
    throw std::invalid_argument("null identity needs a divergence-free A");
  }
  for (int c = 0; c < 3; ++c) {
    double mean = 0.0;
    for (double v : a[c]) mean += v;
    mean /= static_cast<double>(a.size());
    if (std::abs(mean) > 1e-12 * scale) {
      throw std::invalid_argument("null identity needs a mean-free A");
    }
  }
}

// |grad|^{-1} a^{jk} = i (xi_j A_k - xi_k A_j) / |xi|^2 for all ordered (j,k).
std::array<std::array<ComplexField, 3>, 3> riesz_pairs(const VectorField& a) {
  const auto& lat = a.lattice();
  const auto spec = fft_forward(a);
  std::array<std::array<ComplexField, 3>, 3> out;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      ComplexField b(lat);
      if (j != k) {
        for (std::size_t i = 0; i < lat.size(); ++i) {
          const Xi xi = lat.xi(i);
          const double k2 = norm2(xi);
          if (k2 == 0.0) continue;
          b[0][i] = I * (xi[j] * spec[k][i] - xi[k] * spec[j][i]) / k2;
        }
        b = fft_inverse(b);
      }
      out[j][k] = std::move(b);
    }
  }
  return out;
}

std::array<ComplexField, 3> grad(const ComplexField& f) {
  return {partial(f, 0), partial(f, 1), partial(f, 2)};
}

std::array<SpinorField, 3> grad(const SpinorField& f) {
  return {partial(f, 0), partial(f, 1), partial(f, 2)};
}

// out += c * phi * (m psi), pointwise.
void accumulate(SpinorField& out, Complex c, const ComplexField& phi, const Mat4& m,
                const SpinorField& psi) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec4 v = (c * phi[0][i]) * (m * spinor_at(psi, i));
    for (int r = 0; r < 4; ++r) out[r][i] += v[r];
  }
}

SpinorField maybe_dealias(const SpinorField& f, bool on) { return on ? dealias(f) : f; }
VectorField maybe_dealias(const VectorField& f, bool on) { return on ? dealias(f) : f; }

double relative(const SpinorField& diff, const SpinorField& reference) {
  const double r = l2_norm(reference);
  const double d = l2_norm(diff);
  return r > 0.0 ? d / r : d;
}

// Sum over ordered (j,k) of Q_jk(b_jk, m psi) with dpsi = grad psi.
void add_riesz_null_forms(SpinorField& out, Complex c,
                          const std::array<std::array<ComplexField, 3>, 3>& b, const Mat4& m,
                          const std::array<SpinorField, 3>& dpsi) {
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (j == k) continue;
      const auto db = grad(b[j][k]);
      accumulate(out, c, db[j], m, dpsi[k]);
      accumulate(out, -c, db[k], m, dpsi[j]);
    }
  }
}

int levi_civita(int j, int k, int l) {
  if (j == k || k == l || j == l) return 0;
  return ((j + 1) % 3 == k) ? 1 : -1;
}

}  // namespace

double null_identity_first(const VectorField& a_in, const SpinorField& psi_in, bool dealias_on) {
  require_same_lattice(a_in.lattice(), psi_in.lattice());
  const auto a = maybe_dealias(a_in, dealias_on);
  const auto psi = maybe_dealias(psi_in, dealias_on);
  require_coulomb(a);
  const auto dpsi = grad(psi);
  const Mat4 id = Mat4::Identity();
  SpinorField lhs(psi.lattice());
  for (int k = 0; k < 3; ++k) accumulate(lhs, 2.0, to_complex(component(a, k)), id, dpsi[k]);
  SpinorField residual = lhs;
  add_riesz_null_forms(residual, 1.0, riesz_pairs(a), id, dpsi);
  return relative(residual, lhs);
}

NullResiduals null_identity_check(const ScalarField& a0, const VectorField& a_in,
                                  const VectorField& eps_dt_a_in, const SpinorField& psi_in,
                                  const SpinorField& u_in, const SpinorField& eps_dt_u_in,
                                  double eps, bool dealias_on) {
  if (!(eps > 0.0)) throw std::invalid_argument("null_identity_check requires eps > 0");
  require_same_lattice(a0.lattice(), a_in.lattice());
  require_same_lattice(a_in.lattice(), u_in.lattice());
  NullResiduals r;
  r.first = null_identity_first(a_in, psi_in, dealias_on);

  const auto a = maybe_dealias(a_in, dealias_on);
  const auto ea = maybe_dealias(eps_dt_a_in, dealias_on);
  const auto psi = maybe_dealias(psi_in, dealias_on);
  const auto u = maybe_dealias(u_in, dealias_on);
  const auto d0u = maybe_dealias(eps_dt_u_in, dealias_on);
  require_coulomb(ea);
  const auto& lat = psi.lattice();
  const auto& dm = dirac_matrices();
  const Mat4 id = Mat4::Identity();

  // E_j - d_j A0 = -eps d_t A_j, so A0 drops out of the left side.
  const auto b_field = curl(a);
  SpinorField lhs(lat);
  for (int j = 0; j < 3; ++j) {
    accumulate(lhs, -I, to_complex(component(ea, j)), dm.alpha[j], psi);
    accumulate(lhs, -1.0, to_complex(component(b_field, j)), dm.S[j], psi);
  }

  const auto du = grad(u);
  std::array<ComplexField, 3> ac, eac;
  std::array<std::array<ComplexField, 3>, 3> dac;
  for (int j = 0; j < 3; ++j) {
    ac[j] = to_complex(component(a, j));
    eac[j] = to_complex(component(ea, j));
    dac[j] = grad(ac[j]);
  }

  SpinorField rhs(lat);
  // Q_jk(|grad|^-1 eps d_t a^jk, U)
  add_riesz_null_forms(rhs, 1.0, riesz_pairs(ea), id, du);
  // -Q_jk(|grad|^-1 d_l a^jk, alpha^l U)
  {
    const auto b = riesz_pairs(a);
    for (int l = 0; l < 3; ++l) {
      std::array<std::array<ComplexField, 3>, 3> dl;
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) dl[j][k] = j == k ? ComplexField(lat) : partial(b[j][k], l);
      }
      add_riesz_null_forms(rhs, -1.0, dl, dm.alpha[l], du);
    }
  }
  // Q_0(A_j, alpha^j U) = eps d_t A_j alpha^j eps d_t U - grad A_j . alpha^j grad U
  for (int j = 0; j < 3; ++j) {
    accumulate(rhs, 1.0, eac[j], dm.alpha[j], d0u);
    for (int m = 0; m < 3; ++m) accumulate(rhs, -1.0, dac[j][m], dm.alpha[j], du[m]);
  }
  // Q_0j(A_k, alpha^j alpha^k U)
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const Mat4 m = dm.alpha[j] * dm.alpha[k];
      accumulate(rhs, 1.0, eac[k], m, du[j]);
      accumulate(rhs, -1.0, dac[k][j], m, d0u);
    }
  }
  // -(i/2) eps^{jkl} Q_jk(A_m, S_l alpha^m U)
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        const int e = levi_civita(j, k, l);
        if (e == 0) continue;
        for (int m = 0; m < 3; ++m) {
          const Mat4 mat = dm.S[l] * dm.alpha[m];
          const Complex c = -0.5 * I * static_cast<double>(e);
          accumulate(rhs, c, dac[m][j], mat, du[k]);
          accumulate(rhs, -c, dac[m][k], mat, du[j]);
        }
      }
    }
  }
  r.second = relative(rhs - lhs, lhs);
  return r;
}

namespace {

void require_uniform(const std::vector<DMState>& samples, std::size_t min_count, const char* who) {
  if (samples.size() < min_count) {
    throw std::invalid_argument(std::string(who) + " needs at least " + std::to_string(min_count) +
                                " samples");
  }
  const double h = samples[1].t - samples[0].t;
  if (!(h > 0.0)) throw std::invalid_argument(std::string(who) + " needs increasing sample times");
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double hk = samples[k].t - samples[k - 1].t;
    if (std::abs(hk - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw std::invalid_argument(std::string(who) + " needs uniformly spaced samples");
    }
  }
}

SpinorField demodulate(const DMState& s) { return modulate(s.psi, s.t, s.eps, Branch::plus); }

}  // namespace

SquaredDiracSeries squared_dirac_check(const std::vector<DMState>& samples, bool dealias_on) {
  require_uniform(samples, 3, "squared_dirac_check");
  const double h = samples[1].t - samples[0].t;
  const auto& dm = dirac_matrices();
  const Mat4 id = Mat4::Identity();
  SquaredDiracSeries out;
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const auto& s = samples[k];
    const double eps = s.eps;
    const auto& lat = s.psi.lattice();
    const auto pm = demodulate(samples[k - 1]);
    const auto p0 = demodulate(s);
    const auto pp = demodulate(samples[k + 1]);
    const auto a0m = coulomb_potential(samples[k - 1].psi, dealias_on);
    const auto a0 = coulomb_potential(s.psi, dealias_on);
    const auto a0p = coulomb_potential(samples[k + 1].psi, dealias_on);

    const SpinorField dphi = (pp - pm) * Complex(1.0 / (2.0 * h));
    const SpinorField ddphi = (pp - p0 * Complex(2.0) + pm) * Complex(1.0 / (h * h));
    ScalarField da0(lat);
    for (std::size_t i = 0; i < lat.size(); ++i) da0[0][i] = (a0p[0][i] - a0m[0][i]) / (2.0 * h);

    // D = i d_t + A0 on the demodulated spinor:
    // eps^2 D^2 phi + 2 D phi, D^2 phi = -phi'' + i A0' phi + 2i A0 phi' + A0^2 phi.
    SpinorField res(lat);
    SpinorField first(lat);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const double v0 = a0[0][i], dv0 = da0[0][i];
      for (int c = 0; c < 4; ++c) {
        const Complex f = p0[c][i], df = dphi[c][i], ddf = ddphi[c][i];
        const Complex d1 = I * df + v0 * f;
        const Complex d2 = -ddf + I * dv0 * f + 2.0 * I * v0 * df + v0 * v0 * f;
        res[c][i] = eps * eps * d2 + 2.0 * d1;
        first[c][i] = 2.0 * d1;
      }
    }
    // (grad - i eps A)^2 phi = Lap phi - i eps (div(A phi) + A.grad phi) - eps^2 |A|^2 phi
    const auto dphis = grad(p0);
    SpinorField lap(lat), mixed(lat);
    for (int j = 0; j < 3; ++j) {
      lap += partial(dphis[j], j);
      const auto aj = to_complex(component(s.a, j));
      SpinorField aphi(lat);
      accumulate(aphi, 1.0, aj, id, p0);
      mixed += partial(aphi, j);
      accumulate(mixed, 1.0, aj, id, dphis[j]);
    }
    res += lap;
    res += mixed * Complex(0.0, -eps);
    ScalarField a2(lat);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      a2[0][i] = s.a[0][i] * s.a[0][i] + s.a[1][i] * s.a[1][i] + s.a[2][i] * s.a[2][i];
    }
    accumulate(res, -eps * eps, to_complex(a2), id, p0);
    // -i eps E.alpha phi + eps B.S phi
    const auto [e_field, b_field] = compute_EB(a0, s.a, s.eps_dt_a);
    for (int j = 0; j < 3; ++j) {
      accumulate(res, -I * eps, to_complex(component(e_field, j)), dm.alpha[j], p0);
      accumulate(res, eps, to_complex(component(b_field, j)), dm.S[j], p0);
    }
    out.t.push_back(s.t);
    out.residual.push_back(l2_norm(res));
    out.scale.push_back(std::max(l2_norm(first), l2_norm(lap)));
  }
  return out;
}

ExpansionSeries naive_expansion_check(const std::vector<DMState>& samples, bool dealias_on) {
  if (samples.empty()) throw std::invalid_argument("naive_expansion_check needs samples");
  const bool fd = samples.size() >= 3;
  if (fd) require_uniform(samples, 3, "naive_expansion_check");
  const auto& dm = dirac_matrices();
  ExpansionSeries out;
  std::vector<TwoSpinorField> etas;
  for (const auto& s : samples) etas.push_back(lower(demodulate(s)));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    const double eps = s.eps;
    const auto& lat = s.psi.lattice();
    const auto chi = upper(demodulate(s));
    const auto& eta = etas[k];
    // eta + (eps/2) i sigma^j d_j chi
    TwoSpinorField defect = eta;
    TwoSpinorField sigma_grad(lat);
    for (int j = 0; j < 3; ++j) {
      const auto dchi = partial(chi, j);
      for (std::size_t i = 0; i < lat.size(); ++i) {
        const Vec2 v = dm.sigma[j] * spinor_at(dchi, i);
        sigma_grad[0][i] += v[0];
        sigma_grad[1][i] += v[1];
      }
    }
    defect += sigma_grad * Complex(0.0, eps / 2.0);
    out.t.push_back(s.t);
    out.constraint_defect.push_back(l2_norm(defect));
    if (!fd || k == 0 || k + 1 == samples.size()) {
      out.full_residual.push_back(kNaN);
      continue;
    }
    const double h = samples[k + 1].t - samples[k - 1].t;
    const auto deta = (etas[k + 1] - etas[k - 1]) * Complex(1.0 / h);
    const auto a0 = coulomb_potential(s.psi, dealias_on);
    TwoSpinorField bracket(lat);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      Vec2 asc = Vec2::Zero();
      for (int j = 0; j < 3; ++j) asc += s.a[j][i] * (dm.sigma[j] * spinor_at(chi, i));
      const Vec2 v = I * spinor_at(deta, i) + a0[0][i] * spinor_at(eta, i) + asc;
      set_spinor(bracket, i, v);
    }
    TwoSpinorField full = defect + bracket * Complex(eps * eps / 2.0);
    out.full_residual.push_back(l2_norm(full));
  }
  return out;
}

SmallComponentSeries small_component_track(const std::vector<DMState>& samples, int order,
                                           double m) {
  if (order != 1 && order != 2) throw std::invalid_argument("order must be 1 or 2");
  if (samples.empty()) throw std::invalid_argument("small_component_track needs samples");
  const bool fd = samples.size() >= 3;
  if (fd) require_uniform(samples, 3, "small_component_track");
  SmallComponentSeries out;
  out.order = order;
  std::vector<TwoSpinorField> etas;
  for (const auto& s : samples) etas.push_back(lower(demodulate(s)));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    out.t.push_back(s.t);
    const double pm = sobolev_norm(pi_eps(s.psi, s.eps, Branch::minus), m);
    out.pi_minus.push_back(pm);
    out.eta.push_back(sobolev_norm(etas[k], m));
    if (!fd || k == 0 || k + 1 == samples.size()) {
      out.dt_eta.push_back(kNaN);
    } else {
      const double h = samples[k + 1].t - samples[k - 1].t;
      out.dt_eta.push_back(sobolev_norm((etas[k + 1] - etas[k - 1]) * Complex(1.0 / h), m - 1.0));
    }
    out.sup = std::max(out.sup, pm);
  }
  out.constant = out.sup / std::pow(samples.front().eps, order);
  return out;
}

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& error) {
  RateFit fit;
  if (eps.size() != error.size()) throw std::invalid_argument("fit_rate: size mismatch");
  if (eps.size() < 3) {
    fit.reason = "needs at least 3 eps values";
    return fit;
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw std::invalid_argument("fit_rate: eps must be positive");
    if (!(error[i] > 0.0) || !std::isfinite(error[i])) {
      fit.reason = "zero or non-finite error";
      return fit;
    }
    x.push_back(std::log2(eps[i]));
    y.push_back(std::log2(error[i]));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    fit.reason = "eps values coincide";
    return fit;
  }
  fit.defined = true;
  fit.rate = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - (my + fit.rate * (x[i] - mx));
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace nrlimit
