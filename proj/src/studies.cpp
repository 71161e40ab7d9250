#include "nrlimit/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "nrlimit/data.hpp"
#include "nrlimit/format.hpp"
#include "nrlimit/norms.hpp"

#ifndef NRLIMIT_VERSION
#define NRLIMIT_VERSION "unknown"
#endif

namespace nrlimit {
namespace {

constexpr Complex I(0.0, 1.0);

TwoSpinorField base_spinor(const ExperimentConfig& cfg, const FourierLattice& lat, std::uint64_t offset) {
  return random_band_limited<2>(lat, cfg.data.band, cfg.data.seed * 1000 + offset, cfg.data.amplitude);
}

TwoSpinorField sigma_grad(const TwoSpinorField& v) {
  const auto& dm = dirac_matrices();
  TwoSpinorField out(v.lattice());
  for (int j = 0; j < 3; ++j) {
    const auto dv = partial(v, j);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 w = dm.sigma[j] * spinor_at(dv, i);
      out[0][i] += w[0];
      out[1][i] += w[1];
    }
  }
  return out;
}

SpinorField limit_spinor(const LimitState& lim, double t, double eps) {
  return modulate(embed_upper(lim.vp), t, eps, Branch::minus) +
         modulate(embed_lower(lim.vm), t, eps, Branch::plus);
}

std::vector<std::string> select_norms(const ExperimentConfig& cfg,
                                      const std::vector<std::string>& produced,
                                      const std::string& study) {
  if (cfg.norms.empty()) return produced;
  for (const auto& n : cfg.norms) {
    if (std::find(produced.begin(), produced.end(), n) == produced.end()) {
      throw ConfigError("norms", "'" + n + "' is not produced by the " + study + " study");
    }
  }
  return cfg.norms;
}

void update_sup(std::map<std::string, double>& m, const std::string& key, double v) {
  auto it = m.find(key);
  if (it == m.end()) {
    m.emplace(key, v);
  } else {
    it->second = std::max(it->second, v);
  }
}

double sample_stride_of(long steps, int samples) { return static_cast<double>(steps / samples); }

StepConfig step_config(const ExperimentConfig& cfg, double dt) {
  StepConfig sc;
  sc.dt = dt;
  sc.dealias = cfg.dealias;
  sc.dt_max = std::max(cfg.dt.max, dt);
  return sc;
}

CellResult nonrel_cell(const ExperimentConfig& cfg, double eps) {
  const auto lat = lattice_of(cfg);
  CellResult cell;
  cell.eps = eps;
  std::tie(cell.steps, cell.dt) = sampled_schedule(cfg.t_final, cfg.dt.for_eps(eps), cfg.sample_count);
  const long stride = static_cast<long>(sample_stride_of(cell.steps, cfg.sample_count));
  const double dt = cell.dt;
  LimitState lim = limit_initial_state(cfg);
  std::optional<WeakPairing> pair_eps, pair_lim;
  if (cfg.pairing.enabled) {
    pair_eps.emplace(cfg.pairing, lat);
    pair_lim.emplace(cfg.pairing, lat);
  }
  auto& e = cell.errors;
  RunOptions opts;
  opts.h1_ceiling = cfg.h1_ceiling;
  opts.observer = [&](const DMState& s, long k) {
    if (k > 0) {
      lim = sp_step(lim, dt);
      lim.t = s.t;
    }
    if (pair_eps && pair_eps->time_profile(s.t) != 0.0) {
      const double w = (k == 0 || k == cell.steps) ? dt / 2 : dt;
      pair_eps->add(s.t, w, current_density(s.psi, eps));
      pair_lim->add(s.t, w, limit_current(lim.vp, lim.vm));
    }
    if (k == 0) {
      e["current_t0_defect"] =
          l2_norm(current_density(s.psi, eps) - limit_current(lim.vp, lim.vm));
      e["constraint_defect_t0"] = naive_expansion_check({s}).constraint_defect[0];
    }
    if (k % stride != 0) return;
    update_sup(e, "h1_spinor", h1_norm(s.psi - limit_spinor(lim, s.t, eps)));
    const auto a0 = coulomb_potential(s.psi, cfg.dealias);
    update_sup(e, "hdot1_a0", sobolev_norm(a0 - sp_potential(lim), 1.0, true));
    ScalarField n = charge_density(lim.vp) + charge_density(lim.vm);
    const ScalarField drho = charge_density(s.psi) - n;
    update_sup(e, "l1_charge", lp_norm(drho, 1.0));
    update_sup(e, "l2_charge", lp_norm(drho, 2.0));
    update_sup(e, "l3_charge", lp_norm(drho, 3.0));
    update_sup(e, "small_component", h1_norm(pi_eps(s.psi, eps, Branch::minus)));
  };
  simulate_dm(initial_state(cfg, eps), cfg.t_final, step_config(cfg, dt), opts);
  if (pair_eps) {
    const auto pe = pair_eps->value(), pl = pair_lim->value();
    cell.vectors["pairing_eps"] = pe;
    cell.vectors["pairing_limit"] = pl;
    e["pairing_defect"] = std::hypot(pe[0] - pl[0], pe[1] - pl[1], pe[2] - pl[2]);
  }
  return cell;
}

CellResult seminonrel_cell(const ExperimentConfig& cfg, double eps) {
  CellResult cell;
  cell.eps = eps;
  std::tie(cell.steps, cell.dt) = sampled_schedule(cfg.t_final, cfg.dt.for_eps(eps), cfg.sample_count);
  const long stride = static_cast<long>(sample_stride_of(cell.steps, cfg.sample_count));
  const double dt = cell.dt;
  const DMState init = initial_state(cfg, eps);
  PauliState pauli{0.0, upper(init.psi), eps};
  GaugeSample prev = make_gauge_sample(0.0, coulomb_potential(init.psi, cfg.dealias), init.a);
  auto& e = cell.errors;
  RunOptions opts;
  opts.h1_ceiling = cfg.h1_ceiling;
  opts.observer = [&](const DMState& s, long k) {
    if (k > 0) {
      GaugeSample next = make_gauge_sample(s.t, coulomb_potential(s.psi, cfg.dealias), s.a);
      pauli = pauli_step(pauli, prev, next, dt);
      pauli.t = s.t;
      prev = std::move(next);
    }
    if (k % stride != 0) return;
    const auto chi = upper(modulate(s.psi, s.t, eps, Branch::plus));
    update_sup(e, "h1_pauli", h1_norm(chi - pauli.chi));
    VectorField defect = current_density(s.psi, eps) - pauli_current(pauli.chi, s.a, eps);
    const auto spin_curl = curl(spin_density(pauli.chi));
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < defect.size(); ++i) defect[c][i] -= 0.5 * spin_curl[c][i];
    }
    update_sup(e, "l1_current_defect", lp_norm(defect, 1.0));
    update_sup(e, "small_component", h1_norm(pi_eps(s.psi, eps, Branch::minus)));
  };
  simulate_dm(init, cfg.t_final, step_config(cfg, dt), opts);
  return cell;
}

RateReport run_study(const ExperimentConfig& cfg, int threads, const std::string& study,
                     const std::vector<std::string>& produced,
                     CellResult (*cell_fn)(const ExperimentConfig&, double)) {
  validate(cfg, ConfigKind::study);
  RateReport r;
  r.study = study;
  r.family = cfg.data.family;
  r.version = NRLIMIT_VERSION;
  r.norms = select_norms(cfg, produced, study);
  r.cells.resize(cfg.eps.size());
  parallel_for(static_cast<int>(cfg.eps.size()), threads,
               [&](int i) { r.cells[i] = cell_fn(cfg, cfg.eps[i]); });
  for (const auto& n : r.norms) {
    std::vector<double> err;
    for (const auto& c : r.cells) err.push_back(c.errors.at(n));
    r.rates[n] = fit_rate(cfg.eps, err);
    bool dec = true;
    for (std::size_t i = 1; i < err.size(); ++i) dec = dec && err[i] < err[i - 1];
    r.monotone[n] = dec;
  }
  return r;
}

}  // namespace

FourierLattice lattice_of(const ExperimentConfig& cfg) { return make_lattice(cfg.n, cfg.period); }

DMState initial_state(const ExperimentConfig& cfg, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("initial_state requires eps > 0");
  const auto lat = lattice_of(cfg);
  DMState s;
  s.eps = eps;
  s.a = cfg.data.gauge_amplitude > 0.0
            ? random_divfree_field(lat, cfg.data.gauge_band, cfg.data.seed * 1000 + 3,
                                   cfg.data.gauge_amplitude)
            : VectorField(lat);
  s.eps_dt_a = VectorField(lat);
  const auto& f = cfg.data.family;
  if (f == "zero") {
    s.psi = SpinorField(lat);
  } else if (f == "stationary") {
    s.psi = SpinorField(lat);
    std::fill(s.psi[0].begin(), s.psi[0].end(), Complex(1.0));
  } else if (f == "thm2") {
    s.psi = join(base_spinor(cfg, lat, 0), base_spinor(cfg, lat, 1)) +
            Complex(eps) * random_band_limited<4>(lat, cfg.data.band, cfg.data.seed * 1000 + 2,
                                                  cfg.data.amplitude);
  } else if (f == "thm3" || f == "thm4") {
    s.psi = pi_eps(embed_upper(base_spinor(cfg, lat, 0)), eps, Branch::plus);
  } else if (f == "counterexample") {
    const auto v = base_spinor(cfg, lat, 0);
    s.psi = join(v, Complex(eps) * v);
  } else if (f == "constraint") {
    const auto v = base_spinor(cfg, lat, 0);
    s.psi = join(v, Complex(0.0, -eps / 2) * sigma_grad(v));
  } else {
    throw ConfigError("data.family", "unknown family '" + f + "'");
  }
  return s;
}

LimitState limit_initial_state(const ExperimentConfig& cfg) {
  const auto lat = lattice_of(cfg);
  LimitState s{0.0, TwoSpinorField(lat), TwoSpinorField(lat)};
  const auto& f = cfg.data.family;
  if (f == "zero") return s;
  if (f == "stationary") {
    std::fill(s.vp[0].begin(), s.vp[0].end(), Complex(1.0));
    return s;
  }
  s.vp = base_spinor(cfg, lat, 0);
  if (f == "thm2") s.vm = base_spinor(cfg, lat, 1);
  return s;
}

std::pair<long, double> sampled_schedule(double t_final, double dt, int samples) {
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
  auto [steps, h] = step_schedule(t_final, dt);
  steps = ((steps + samples - 1) / samples) * samples;
  return {steps, t_final / static_cast<double>(steps)};
}

WeakPairing::WeakPairing(const PairingBump& bump, const FourierLattice& lattice)
    : bump_(bump), space_(lattice) {
  if (!(bump.t_halfwidth > 0.0)) throw std::invalid_argument("pairing bump needs t_halfwidth > 0");
  double space_integral = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const Xi x = lattice.position(i);
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += std::cos(x[j] - bump.x_center[j]) - 1.0;
    space_[0][i] = std::exp(bump.kappa * s);
    space_integral += space_[0][i] * lattice.cell_volume();
  }
  // Time integral of the unit bump by a fine midpoint rule, independent of the run's dt.
  const int m = 20000;
  double time_integral = 0.0;
  for (int k = 0; k < m; ++k) {
    const double s = -1.0 + (k + 0.5) * 2.0 / m;
    time_integral += std::exp(-1.0 / (1.0 - s * s)) * 2.0 / m;
  }
  time_integral *= bump.t_halfwidth;
  norm_ = 1.0 / (space_integral * time_integral);
}

double WeakPairing::time_profile(double t) const {
  const double s = (t - bump_.t_center) / bump_.t_halfwidth;
  if (std::abs(s) >= 1.0) return 0.0;
  return norm_ * std::exp(-1.0 / (1.0 - s * s));
}

void WeakPairing::add(double t, double weight, const VectorField& j) {
  require_same_lattice(j.lattice(), space_.lattice());
  const double g = time_profile(t);
  if (g == 0.0) return;
  const double h3 = j.lattice().cell_volume();
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) sum += j[c][i] * space_[0][i];
    acc_[c] += weight * g * h3 * sum;
  }
}

std::array<double, 3> current_weak_pairing(const std::vector<double>& t,
                                           const std::vector<VectorField>& j,
                                           const PairingBump& bump) {
  if (t.size() != j.size()) throw std::invalid_argument("current_weak_pairing: size mismatch");
  if (t.empty()) return {0.0, 0.0, 0.0};
  if (bump.t_center - bump.t_halfwidth < t.front() - 1e-12 ||
      bump.t_center + bump.t_halfwidth > t.back() + 1e-12) {
    throw std::invalid_argument("support of G exceeds the time window of the current");
  }
  WeakPairing p(bump, j.front().lattice());
  for (std::size_t k = 0; k < t.size(); ++k) {
    double w = 0.0;
    if (k > 0) w += (t[k] - t[k - 1]) / 2;
    if (k + 1 < t.size()) w += (t[k + 1] - t[k]) / 2;
    p.add(t[k], w, j[k]);
  }
  return p.value();
}

RateReport nonrel_convergence_study(const ExperimentConfig& cfg, int threads) {
  std::vector<std::string> produced{"h1_spinor",       "hdot1_a0",          "l1_charge",
                                    "l2_charge",       "l3_charge",         "small_component",
                                    "current_t0_defect", "constraint_defect_t0"};
  if (cfg.pairing.enabled) produced.push_back("pairing_defect");
  return run_study(cfg, threads, "nonrel", produced, &nonrel_cell);
}

RateReport seminonrel_study(const ExperimentConfig& cfg, int threads) {
  return run_study(cfg, threads, "seminonrel", {"h1_pauli", "l1_current_defect", "small_component"},
                   &seminonrel_cell);
}

nlohmann::json to_json(const RateReport& r) {
  nlohmann::ordered_json j;
  j["study"] = r.study;
  j["family"] = r.family;
  j["version"] = r.version;
  std::vector<double> eps, dt;
  std::vector<long> steps;
  for (const auto& c : r.cells) {
    eps.push_back(c.eps);
    dt.push_back(c.dt);
    steps.push_back(c.steps);
  }
  j["eps"] = eps;
  j["dt"] = dt;
  j["steps"] = steps;
  nlohmann::ordered_json errors;
  for (const auto& n : r.norms) {
    std::vector<double> v;
    for (const auto& c : r.cells) v.push_back(c.errors.at(n));
    errors[n] = v;
  }
  j["errors"] = errors;
  for (const auto& n : r.norms) {
    const auto& fit = r.rates.at(n);
    if (fit.defined) {
      j[n + "_rate"] = fit.rate;
      j[n + "_rate_residual"] = fit.residual;
    } else {
      j[n + "_rate"] = "undefined";
      j[n + "_rate_residual"] = fit.reason;
    }
  }
  nlohmann::ordered_json mono;
  for (const auto& n : r.norms) mono[n] = r.monotone.at(n);
  j["monotone"] = mono;
  if (!r.cells.empty() && !r.cells.front().vectors.empty()) {
    nlohmann::ordered_json pv;
    for (const auto& [name, unused] : r.cells.front().vectors) {
      std::vector<std::array<double, 3>> rows;
      for (const auto& c : r.cells) rows.push_back(c.vectors.at(name));
      pv[name] = rows;
    }
    j["pairing"] = pv;
  }
  return nlohmann::json::parse(j.dump());
}

std::string to_csv(const RateReport& r) {
  std::ostringstream os;
  os << "eps,dt,steps";
  for (const auto& n : r.norms) os << ',' << n;
  os << '\n';
  for (const auto& c : r.cells) {
    os << format_double(c.eps) << ',' << format_double(c.dt) << ',' << c.steps;
    for (const auto& n : r.norms) os << ',' << format_double(c.errors.at(n));
    os << '\n';
  }
  return os.str();
}

void parallel_for(int count, int threads, const std::function<void(int)>& f) {
  if (count <= 0) return;
  const int workers = std::clamp(threads, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace nrlimit
