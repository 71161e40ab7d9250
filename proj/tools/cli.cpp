#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nrlimit/format.hpp"
#include "nrlimit/norms.hpp"
#include "nrlimit/probe.hpp"
#include "nrlimit/snapshot.hpp"
#include "nrlimit/studies.hpp"
#include "nrlimit/suites.hpp"

#ifndef NRLIMIT_VERSION
#define NRLIMIT_VERSION "unknown"
#endif

namespace nrlimit::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string out;
  long long seed = -1;
  int threads = 1;
  bool dealias = false;
  std::string suite;
};

class Manifest {
 public:
  Manifest(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {}

  void set_config(const ExperimentConfig& cfg) {
    config_hash_ = fnv1a_hex(to_json(cfg).dump());
    seed_ = cfg.data.seed;
  }
  void stage(const std::string& name, double seconds) { stages_[name] = seconds; }

  /// Writes a text output and records its hash.
  void write(const std::string& name, const std::string& bytes) {
    std::ofstream f(dir_ / name, std::ios::binary);
    f << bytes;
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    outputs_.push_back(name);
  }
  /// Records a file written by someone else.
  void add(const std::string& name) { outputs_.push_back(name); }

  void finish() {
    json files = json::array();
    for (const auto& name : outputs_) {
      std::ifstream f(dir_ / name, std::ios::binary);
      std::stringstream ss;
      ss << f.rdbuf();
      files.push_back({{"file", name}, {"fnv1a", fnv1a_hex(ss.str())}});
    }
    json j{{"command", command_},    {"config_hash", config_hash_}, {"seed", seed_},
           {"version", NRLIMIT_VERSION}, {"outputs", files},       {"wall_clock_seconds", stages_}};
    std::ofstream(dir_ / "manifest.json") << j.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path dir_;
  std::string config_hash_ = "none";
  std::uint64_t seed_ = 0;
  std::vector<std::string> outputs_;
  std::map<std::string, double> stages_;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// 1-based line of the first occurrence of "key" (the last segment of a dotted field).
int line_of_field(const std::string& text, const std::string& field) {
  std::string key = field.substr(field.rfind('.') + 1);
  key = key.substr(0, key.find('['));
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig load(const Options& o, ConfigKind kind) {
  if (o.config.empty()) throw UsageError("--config is required");
  const std::string text = read_text(o.config);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw UsageError(o.config + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg = parse_config(j, kind);
    if (o.seed >= 0) cfg.data.seed = static_cast<std::uint64_t>(o.seed);
    if (o.dealias) cfg.dealias = true;
    if (!o.out.empty()) cfg.output = o.out;
  } catch (const ConfigError& e) {
    const int line = line_of_field(text, e.field());
    throw UsageError(o.config + ":" + (line > 0 ? std::to_string(line) + ":" : "") + " " + e.what());
  }
  return cfg;
}

fs::path prepare_dir(const std::string& dir) {
  fs::create_directories(dir);
  return dir;
}

std::string step_name(const std::string& prefix, long k) {
  std::ostringstream os;
  os << prefix << '_' << std::setw(6) << std::setfill('0') << k << ".fld";
  return os.str();
}

int cmd_run_dm(const Options& o) {
  const auto cfg = load(o, ConfigKind::single_run);
  const auto dir = prepare_dir(cfg.output);
  Manifest m("run-dm", dir);
  m.set_config(cfg);
  Timer timer;
  const double eps = cfg.eps.front();
  const auto [steps, dt] = sampled_schedule(cfg.t_final, cfg.dt.for_eps(eps), cfg.sample_count);
  StepConfig sc;
  sc.dt = dt;
  sc.dealias = cfg.dealias;
  sc.dt_max = std::max(cfg.dt.max, dt);
  RunOptions opts;
  opts.sample_stride = static_cast<int>(steps / cfg.sample_count);
  opts.h1_ceiling = cfg.h1_ceiling;
  const auto traj = simulate_dm(initial_state(cfg, eps), cfg.t_final, sc, opts);
  m.stage("simulate", timer.seconds());
  std::ostringstream csv;
  csv << "t,charge,h1_psi,h1dot_a,eps_l2_dt_a,h1_pi_minus_psi,div_a\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const auto& d = traj.diagnostics[i];
    const long k = std::lround(s.t / dt);
    write_snapshot(dir / step_name("psi", k), s.psi, s.t);
    write_snapshot(dir / step_name("a", k), s.a, s.t);
    m.add(step_name("psi", k));
    m.add(step_name("a", k));
    csv << format_double(d.t) << ',' << format_double(d.charge) << ',' << format_double(d.h1_psi) << ','
        << format_double(d.h1dot_a) << ',' << format_double(d.eps_l2_dt_a) << ','
        << format_double(d.h1_pi_minus_psi) << ',' << format_double(divergence_norm(s.a)) << '\n';
  }
  m.write("diagnostics.csv", csv.str());
  m.finish();
  std::cout << (dir / "diagnostics.csv").string() << '\n';
  return 0;
}

int cmd_run_sp(const Options& o) {
  const auto cfg = load(o, ConfigKind::single_run);
  const auto dir = prepare_dir(cfg.output);
  Manifest m("run-sp", dir);
  m.set_config(cfg);
  Timer timer;
  const auto [steps, dt] =
      sampled_schedule(cfg.t_final, cfg.dt.for_eps(cfg.eps.front()), cfg.sample_count);
  const auto traj = simulate_sp(limit_initial_state(cfg), cfg.t_final, dt,
                                static_cast<int>(steps / cfg.sample_count), cfg.h1_ceiling);
  m.stage("simulate", timer.seconds());
  std::ostringstream csv;
  csv << "t,mass_plus,mass_minus,h1_plus,h1_minus\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const auto& d = traj.diagnostics[i];
    const long k = std::lround(s.t / dt);
    write_snapshot(dir / step_name("vplus", k), s.vp, s.t);
    write_snapshot(dir / step_name("vminus", k), s.vm, s.t);
    m.add(step_name("vplus", k));
    m.add(step_name("vminus", k));
    csv << format_double(d.t) << ',' << format_double(d.mass_plus) << ',' << format_double(d.mass_minus)
        << ',' << format_double(d.h1_plus) << ',' << format_double(d.h1_minus) << '\n';
  }
  m.write("diagnostics.csv", csv.str());
  m.finish();
  std::cout << (dir / "diagnostics.csv").string() << '\n';
  return 0;
}

// Pauli driven by the gauge fields of a DM run with the same eps and dt.
int cmd_run_pauli(const Options& o) {
  const auto cfg = load(o, ConfigKind::single_run);
  const auto dir = prepare_dir(cfg.output);
  Manifest m("run-pauli", dir);
  m.set_config(cfg);
  Timer timer;
  const double eps = cfg.eps.front();
  const auto [steps, dt] = sampled_schedule(cfg.t_final, cfg.dt.for_eps(eps), cfg.sample_count);
  const long stride = steps / cfg.sample_count;
  const DMState init = initial_state(cfg, eps);
  PauliState pauli{0.0, upper(init.psi), eps};
  GaugeSample prev = make_gauge_sample(0.0, coulomb_potential(init.psi, cfg.dealias), init.a);
  std::ostringstream csv;
  csv << "t,mass,h1_chi_minus_chi_pauli\n";
  RunOptions opts;
  opts.h1_ceiling = cfg.h1_ceiling;
  opts.observer = [&, dt = dt](const DMState& s, long k) {
    if (k > 0) {
      GaugeSample next = make_gauge_sample(s.t, coulomb_potential(s.psi, cfg.dealias), s.a);
      pauli = pauli_step(pauli, prev, next, dt);
      pauli.t = s.t;
      prev = std::move(next);
    }
    if (k % stride != 0) return;
    const auto chi = upper(modulate(s.psi, s.t, eps, Branch::plus));
    write_snapshot(dir / step_name("chi_pauli", k), pauli.chi, s.t);
    m.add(step_name("chi_pauli", k));
    csv << format_double(s.t) << ',' << format_double(total_charge(pauli.chi)) << ','
        << format_double(h1_norm(chi - pauli.chi)) << '\n';
  };
  StepConfig sc;
  sc.dt = dt;
  sc.dealias = cfg.dealias;
  sc.dt_max = std::max(cfg.dt.max, dt);
  simulate_dm(init, cfg.t_final, sc, opts);
  m.stage("simulate", timer.seconds());
  m.write("diagnostics.csv", csv.str());
  m.finish();
  std::cout << (dir / "diagnostics.csv").string() << '\n';
  return 0;
}

int cmd_study(const Options& o, bool semi) {
  const auto cfg = load(o, ConfigKind::study);
  const auto dir = prepare_dir(cfg.output);
  Manifest m(semi ? "seminonrel" : "converge", dir);
  m.set_config(cfg);
  Timer timer;
  const auto report = semi ? seminonrel_study(cfg, o.threads) : nonrel_convergence_study(cfg, o.threads);
  m.stage("study", timer.seconds());
  m.write("rate_report.json", to_json(report).dump(2) + "\n");
  m.write("rate_report.csv", to_csv(report));
  m.finish();
  for (const auto& n : report.norms) {
    const auto& fit = report.rates.at(n);
    std::cout << n << "_rate " << (fit.defined ? format_double(fit.rate) : "undefined") << '\n';
  }
  std::cout << (dir / "rate_report.json").string() << '\n' << (dir / "rate_report.csv").string() << '\n';
  return 0;
}

int cmd_probe(const Options& o) {
  const auto cfg = load(o, ConfigKind::probe);
  const auto dir = prepare_dir(cfg.output);
  Manifest m("probe-dyadic", dir);
  m.set_config(cfg);
  Timer timer;
  const auto rows = dyadic_sweep(cfg, o.threads);
  m.stage("sweep", timer.seconds());
  const auto st = probe_stats(rows);
  m.write("sweep.csv", sweep_csv(rows));
  json summary{{"case", probe_case_name(cfg.probe.which)},
               {"rows", rows.size()},
               {"max", st.max},
               {"median", st.median},
               {"max_over_median", st.max_over_median},
               {"trend_slope", st.trend_defined ? json(st.trend_slope) : json("undefined")}};
  m.write("probe_summary.json", summary.dump(2) + "\n");
  m.finish();
  std::cout << "max/median " << format_double(st.max_over_median) << "  trend slope "
            << (st.trend_defined ? format_double(st.trend_slope) : "undefined") << '\n'
            << (dir / "sweep.csv").string() << '\n';
  return 0;
}

int cmd_check(const Options& o) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
    std::string list;
    for (const auto& n : names) list += " " + n;
    throw UsageError("unknown suite '" + o.suite + "' (known:" + list + ")");
  }
  const fs::path dir = prepare_dir(o.out.empty() ? "out" : o.out);
  Manifest m("check " + o.suite, dir);
  Timer timer;
  const auto r = run_suite(o.suite, o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : 0);
  m.stage("check", timer.seconds());
  std::ostringstream os;
  for (const auto& l : r.lines) {
    os << (l.pass() ? "pass " : "FAIL ") << l.name << ": " << format_double(l.value) << " in ["
       << format_double(l.lower) << ", " << format_double(l.upper) << "]\n";
  }
  os << (r.pass() ? "suite " + o.suite + " passed\n" : "suite " + o.suite + " FAILED\n");
  std::cout << os.str();
  m.write("check_" + o.suite + ".txt", os.str());
  m.finish();
  return r.pass() ? 0 : 1;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Dirac-Maxwell nonrelativistic-limit experiments"};
  app.require_subcommand(1);
  Options o;
  const auto add_common = [&](CLI::App* c, bool needs_config) {
    auto* opt = c->add_option("--config", o.config, "JSON experiment config");
    if (needs_config) opt->required();
    c->add_option("--seed", o.seed, "override data.seed")->check(CLI::NonNegativeNumber);
    c->add_option("--out", o.out, "output directory (overrides the config)");
    c->add_option("--threads", o.threads, "worker threads for independent cells")->check(CLI::PositiveNumber);
    c->add_flag("--dealias", o.dealias, "2/3-rule on the nonlinear densities");
  };
  auto* run_dm = app.add_subcommand("run-dm", "Dirac-Maxwell run: snapshots and diagnostics");
  auto* run_sp = app.add_subcommand("run-sp", "Schroedinger-Poisson run from the limit data");
  auto* run_pauli = app.add_subcommand("run-pauli", "Pauli run driven by the DM gauge fields");
  auto* converge = app.add_subcommand("converge", "nonrelativistic convergence study");
  auto* semi = app.add_subcommand("seminonrel", "DM vs Pauli convergence study");
  auto* probe = app.add_subcommand("probe-dyadic", "dyadic spacetime estimate sweep");
  auto* check = app.add_subcommand("check", "identity suite");
  for (auto* c : {run_dm, run_sp, run_pauli, converge, semi, probe}) add_common(c, true);
  add_common(check, false);
  check->add_option("suite", o.suite, "matrices | projections | symbols | null-1 | null-2 | squared-dirac")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (*run_dm) return cmd_run_dm(o);
    if (*run_sp) return cmd_run_sp(o);
    if (*run_pauli) return cmd_run_pauli(o);
    if (*converge) return cmd_study(o, false);
    if (*semi) return cmd_study(o, true);
    if (*probe) return cmd_probe(o);
    if (*check) return cmd_check(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace nrlimit::cli
