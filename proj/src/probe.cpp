#include "nrlimit/probe.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nrlimit/data.hpp"
#include "nrlimit/format.hpp"
#include "nrlimit/norms.hpp"
#include "nrlimit/spectral.hpp"
#include "nrlimit/studies.hpp"

namespace nrlimit {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t bits_of(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

std::uint64_t cell_seed(std::uint64_t base, double eps, double mu, double lambda, int trial,
                        int which) {
  std::uint64_t s = splitmix(base);
  for (std::uint64_t v : {bits_of(eps), bits_of(mu), bits_of(lambda),
                          static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(which)}) {
    s = splitmix(s ^ v);
  }
  return s;
}

double rhs_scale(const DyadicInput& in) {
  const double root = std::sqrt(in.eps);
  switch (in.which) {
    case ProbeCase::diagonal_low: return root * in.mu;
    case ProbeCase::diagonal_high: return root * std::sqrt(in.mu * in.lambda);
    case ProbeCase::off_diagonal: return root * std::min(in.mu, in.lambda);
  }
  return 0.0;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

int dyadic_reach(const FourierLattice& lat, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("dyadic scale must be positive");
  // beta(xi / scale) vanishes for |xi| >= 2 scale
  return static_cast<int>(std::ceil(2.0 * scale / lat.frequency_spacing())) - 1;
}

void require_resolved(const FourierLattice& lat, double mu, double lambda) {
  const int k = std::max(dyadic_reach(lat, mu), dyadic_reach(lat, lambda));
  if (4 * k >= lat.n()) {
    throw std::invalid_argument("dyadic scale " + format_double(std::max(mu, lambda)) +
                                " is beyond the lattice resolution (needs 4*" + std::to_string(k) +
                                " < n = " + std::to_string(lat.n()) + ")");
  }
}

int probe_time_steps(const FourierLattice& lat, const DyadicInput& in) {
  if (in.time_steps > 0) return in.time_steps;
  const int k = std::max(dyadic_reach(lat, in.mu), dyadic_reach(lat, in.lambda));
  const double kmax = std::sqrt(3.0) * k * lat.frequency_spacing();
  const double omega = kmax / in.eps + h_eps_symbol({kmax, 0.0, 0.0}, in.eps);
  return std::max(64, static_cast<int>(std::ceil(2.0 * in.t_final * omega)));
}

double dyadic_ratio(const ComplexField& f, const ComplexField& g, const DyadicInput& in) {
  require_same_lattice(f.lattice(), g.lattice());
  if (!(in.eps > 0.0) || !(in.t_final > 0.0)) {
    throw std::invalid_argument("dyadic_ratio needs eps > 0 and t_final > 0");
  }
  const auto& lat = f.lattice();
  require_resolved(lat, in.mu, in.lambda);
  const bool diagonal = in.which != ProbeCase::off_diagonal;
  const ComplexField fl = littlewood_paley(f, diagonal ? in.lambda : in.mu);
  const ComplexField gl = littlewood_paley(g, in.lambda);
  const double nf = l2_norm(fl), ng = l2_norm(gl);
  if (nf == 0.0 || ng == 0.0) return 0.0;

  const ComplexField fh = fft_forward(fl), gh = fft_forward(gl);
  const std::size_t size = lat.size();
  std::vector<double> wu(size), wv(size), out_weight(size, 1.0);
  for (std::size_t i = 0; i < size; ++i) {
    const Xi xi = lat.xi(i);
    wu[i] = std::sqrt(norm2(xi)) / in.eps;
    wv[i] = in.branch * h_eps_symbol(xi, in.eps);
    if (diagonal) {
      const double b = lp_bump({xi[0] / in.mu, xi[1] / in.mu, xi[2] / in.mu});
      out_weight[i] = b * b;
    }
  }

  const int steps = probe_time_steps(lat, in);
  const double dt = in.t_final / steps;
  ComplexField uh(lat), vh(lat);
  double acc = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    for (std::size_t i = 0; i < size; ++i) {
      uh[0][i] = fh[0][i] * std::cos(wu[i] * t);
      vh[0][i] = gh[0][i] * std::polar(1.0, -wv[i] * t);
    }
    ComplexField p = fft_inverse(uh);
    const ComplexField v = fft_inverse(vh);
    for (std::size_t i = 0; i < size; ++i) p[0][i] *= v[0][i];
    double norm_sq = 0.0;
    if (diagonal) {
      const ComplexField ph = fft_forward(p);
      for (std::size_t i = 0; i < size; ++i) norm_sq += out_weight[i] * std::norm(ph[0][i]);
      norm_sq *= lat.volume();
    } else {
      const double n2 = l2_norm(p);
      norm_sq = n2 * n2;
    }
    acc += (k == 0 || k == steps ? 0.5 : 1.0) * dt * norm_sq;
  }
  return std::sqrt(acc) / (rhs_scale(in) * nf * ng);
}

bool in_regime(ProbeCase c, double mu, double lambda, double eps) {
  switch (c) {
    case ProbeCase::diagonal_low: return mu <= lambda && lambda * eps <= 2.0;
    case ProbeCase::diagonal_high: return mu <= lambda && lambda * eps >= 2.0;
    case ProbeCase::off_diagonal: return true;
  }
  return false;
}

std::vector<ProbeRow> dyadic_sweep(const ExperimentConfig& cfg, int threads) {
  validate(cfg, ConfigKind::probe);
  const auto lat = lattice_of(cfg);
  const auto& p = cfg.probe;
  struct Cell {
    double eps, mu, lambda;
  };
  std::vector<Cell> cells;
  for (double eps : p.eps) {
    for (double mu : p.mu) {
      for (double lambda : p.lambda) {
        if (in_regime(p.which, mu, lambda, eps)) cells.push_back({eps, mu, lambda});
      }
    }
  }
  if (cells.empty()) {
    throw ConfigError("probe", "no (mu, lambda, eps) cell lies in the regime of case " +
                                   probe_case_name(p.which));
  }
  for (const auto& c : cells) {
    try {
      require_resolved(lat, c.mu, c.lambda);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("grid.n", e.what());
    }
  }
  const bool diagonal = p.which != ProbeCase::off_diagonal;
  std::vector<ProbeRow> rows(cells.size() * p.trials);
  parallel_for(static_cast<int>(rows.size()), threads, [&](int r) {
    const Cell& c = cells[r / p.trials];
    const int trial = r % p.trials;
    const std::uint64_t seed =
        cell_seed(cfg.data.seed, c.eps, c.mu, c.lambda, trial, static_cast<int>(p.which));
    const double f_scale = diagonal ? c.lambda : c.mu;
    const auto f = random_band_limited<1>(lat, dyadic_reach(lat, f_scale), seed, 1.0);
    const auto g = random_band_limited<1>(lat, dyadic_reach(lat, c.lambda), splitmix(seed), 1.0);
    DyadicInput in{p.which, c.eps, c.mu, c.lambda, p.t_final, p.time_steps, p.branch};
    rows[r] = {c.mu, c.lambda, c.eps, trial, dyadic_ratio(f, g, in)};
  });
  return rows;
}

ProbeStats probe_stats(const std::vector<ProbeRow>& rows) {
  ProbeStats s;
  if (rows.empty()) return s;
  std::vector<double> all;
  std::map<double, std::vector<double>> by_mu;
  for (const auto& r : rows) {
    all.push_back(r.ratio);
    by_mu[r.mu].push_back(r.ratio);
  }
  s.max = *std::max_element(all.begin(), all.end());
  s.median = median_of(all);
  s.max_over_median = s.median > 0.0 ? s.max / s.median : INFINITY;
  if (by_mu.size() < 2) return s;
  std::vector<double> x, y;
  for (const auto& [mu, v] : by_mu) {
    const double m = median_of(v);
    if (!(m > 0.0)) return s;
    x.push_back(std::log2(mu));
    y.push_back(std::log2(m));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  s.trend_defined = true;
  s.trend_slope = sxy / sxx;
  return s;
}

std::string sweep_csv(const std::vector<ProbeRow>& rows) {
  std::ostringstream os;
  os << "mu,lambda,eps,trial,ratio\n";
  for (const auto& r : rows) {
    os << format_double(r.mu) << ',' << format_double(r.lambda) << ',' << format_double(r.eps)
       << ',' << r.trial << ',' << format_double(r.ratio) << '\n';
  }
  return os.str();
}

}  // namespace nrlimit
