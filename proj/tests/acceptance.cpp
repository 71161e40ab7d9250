// Acceptance run: one PASS/FAIL line per criterion; exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "nrlimit/dm.hpp"
#include "nrlimit/norms.hpp"
#include "nrlimit/probe.hpp"
#include "nrlimit/studies.hpp"
#include "nrlimit/suites.hpp"

namespace fs = std::filesystem;
using namespace nrlimit;
using nlohmann::json;

namespace {

const fs::path kPresets = NRLIMIT_PRESETS;
const fs::path kWork = fs::temp_directory_path() / "nrlimit_acceptance";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Runs the CLI quietly; returns its exit code.
int cli(std::vector<std::string> args) {
  std::streambuf* old = std::cout.rdbuf();
  std::ostringstream sink;
  std::cout.rdbuf(sink.rdbuf());
  const int rc = cli::run(args);
  std::cout.rdbuf(old);
  return rc;
}

fs::path run_preset(const std::string& command, const std::string& preset, const std::string& tag) {
  const fs::path out = kWork / (preset + "-" + tag);
  fs::remove_all(out);
  const int rc = cli({command, "--config", (kPresets / (preset + ".json")).string(), "--out", out.string()});
  if (rc != 0) throw std::runtime_error(command + " " + preset + " exited with " + std::to_string(rc));
  return out;
}

Outcome suites_within(const std::vector<std::string>& names, double seconds) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{true, ""};
  for (const auto& n : names) {
    const auto r = run_suite(n);
    double worst = 0.0;
    for (const auto& l : r.lines) {
      if (!l.pass()) o.detail += " [" + l.name + " = " + num(l.value) + "]";
      if (l.upper > 0.0 && std::isfinite(l.upper)) worst = std::max(worst, l.value);
    }
    o.pass = o.pass && r.pass();
    o.detail += " " + n + (r.pass() ? " ok" : " failed");
    if (worst > 0.0) o.detail += " (max residual " + num(worst) + ")";
  }
  const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.pass = o.pass && took < seconds;
  o.detail += ", " + num(took) + " s (limit " + num(seconds) + " s)";
  return o;
}

Outcome c1() { return suites_within({"matrices", "projections"}, 5); }
Outcome c2() { return suites_within({"symbols"}, 5); }
Outcome c3() { return suites_within({"null-1"}, 30); }
Outcome c4() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_suite("null-2");
  const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {r.pass() && took < 120, "residual at U step 1e-3 " + num(r.lines[1].value) + ", halving ratio " +
                                      num(r.lines[2].value) + ", " + num(took) + " s (limit 120 s)"};
}

Outcome c5() {
  auto cfg = parse_config(load_json(kPresets / "thm4.json"), ConfigKind::study);
  cfg.n = 24;
  const DMState init = initial_state(cfg, 0.25);
  StepConfig sc;
  sc.dt = 2e-3;
  const double q0 = total_charge(init.psi);
  double drift = 0.0, div = 0.0;
  RunOptions opts;
  opts.observer = [&](const DMState& s, long) {
    drift = std::max(drift, std::abs(total_charge(s.psi) - q0));
    div = std::max(div, divergence_norm(s.a));
  };
  simulate_dm(init, 1.0, sc, opts);
  return {drift < 1e-8 && div < 1e-10,
          "charge drift " + num(drift) + " (charge " + num(q0) + "), max ||div A|| " + num(div)};
}

Outcome c6() {
  const auto cfg = parse_config(load_json(kPresets / "stationary.json"), ConfigKind::study);
  double worst = 0.0;
  std::string list;
  for (double eps : cfg.eps) {
    list += (list.empty() ? "" : ",") + num(eps);
    StepConfig sc;
    sc.dt = cfg.dt.for_eps(eps);
    const auto traj = simulate_dm(initial_state(cfg, eps), 1.0, sc);
    const DMState& s = traj.samples.back();
    SpinorField exact(s.psi.lattice());
    std::fill(exact[0].begin(), exact[0].end(), std::polar(1.0, -s.t / (eps * eps)));
    worst = std::max(worst, h1_norm(s.psi - exact));
  }
  return {worst < 1e-9, "max H1 error at T=1 over eps {" + list + "}: " + num(worst)};
}

Outcome c7(const json& r) {
  const double rate = r["h1_spinor_rate"];
  bool mono = true;
  for (const char* n : {"hdot1_a0", "l1_charge", "l2_charge", "l3_charge"}) mono = mono && r["monotone"][n];
  return {rate >= 0.7 && rate <= 1.3 && mono,
          "H1 spinor rate " + num(rate) + " (fit residual " + num(r["h1_spinor_rate_residual"]) +
              "), A0/charge errors monotone: " + (mono ? "yes" : "no")};
}

Outcome c8() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = load_json(run_preset("seminonrel", "thm4", "a") / "rate_report.json");
  const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double pauli = r["h1_pauli_rate"], current = r["l1_current_defect_rate"];
  return {pauli >= 1.6 && pauli <= 2.4 && current >= 0.6 && current <= 1.4 && took < 45 * 60,
          "Pauli H1 rate " + num(pauli) + ", L1 current defect rate " + num(current) + ", " + num(took) + " s"};
}

Outcome c9() {
  const auto r = load_json(run_preset("converge", "thm2", "a") / "rate_report.json");
  std::vector<double> d = r["errors"]["pairing_defect"];
  bool dec = true;
  for (std::size_t i = 1; i < d.size(); ++i) dec = dec && d[i] < d[i - 1];
  return {dec, "pairing defect " + num(d[0]) + ", " + num(d[1]) + ", " + num(d[2])};
}

Outcome c10() {
  const auto r = load_json(run_preset("converge", "counterexample", "a") / "rate_report.json");
  std::vector<double> gap = r["errors"]["current_t0_defect"];
  const double lo = *std::min_element(gap.begin(), gap.end());
  const double hi = *std::max_element(gap.begin(), gap.end());
  const double rate = r["h1_spinor_rate"];
  // bounded below independently of eps: positive and flat to within a factor 2
  const bool flat = lo > 0.0 && hi / lo < 2.0;
  return {flat && rate >= 0.7 && rate <= 1.3,
          "t=0 current gap in [" + num(lo) + ", " + num(hi) + "] over eps, H1 spinor rate " + num(rate)};
}

Outcome c11() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{true, ""};
  for (const std::string c : {"i", "ii", "iii"}) {
    const auto s = load_json(run_preset("probe-dyadic", "thm31-" + c, "a") / "probe_summary.json");
    const double mm = s["max_over_median"];
    bool ok = mm < 10.0;
    o.detail += c + ": max/median " + num(mm);
    if (c != "iii") {
      const double slope = s["trend_slope"];
      ok = ok && slope < 0.5;
      o.detail += ", mu slope " + num(slope);
    }
    o.detail += "; ";
    o.pass = o.pass && ok;
  }
  const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.pass = o.pass && took < 600;
  o.detail += num(took) + " s";
  return o;
}

Outcome c12() {
  auto cfg = parse_config(load_json(kPresets / "thm3.json"), ConfigKind::study);
  const DMState init = initial_state(cfg, 0.4);
  const double t_final = 0.1, dt = 1e-3;
  StepConfig sc;
  sc.dt = dt;
  const auto picard = picard_solve(init, t_final, 6, sc);
  double factor = 0.0;
  for (std::size_t i = 3; i + 1 < picard.cauchy.size(); ++i) {
    factor = std::max(factor, picard.cauchy[i + 1] / picard.cauchy[i]);
  }
  const auto coarse = simulate_dm(init, t_final, sc).samples.back();
  StepConfig fine = sc;
  fine.dt = dt / 2;
  const auto reference = simulate_dm(init, t_final, fine).samples.back();
  const double self = h1_norm(coarse.psi - reference.psi);
  const double gap = h1_norm(picard.final_iterates[6].psi - coarse.psi);
  return {factor < 0.7 && gap <= 5 * self,
          "decay factor after m=3 " + num(factor) + ", |Picard_6 - split| " + num(gap) +
              " vs split self-error " + num(self)};
}

Outcome c13(const fs::path& thm3_first) {
  const auto again = run_preset("converge", "thm3", "b");
  const auto probe_a = kWork / "thm31-i-a";
  const auto probe_b = run_preset("probe-dyadic", "thm31-i", "b");
  bool same = true;
  for (const char* f : {"rate_report.json", "rate_report.csv"}) {
    same = same && slurp(thm3_first / f) == slurp(again / f);
  }
  same = same && slurp(probe_a / "sweep.csv") == slurp(probe_b / "sweep.csv") &&
         slurp(probe_a / "probe_summary.json") == slurp(probe_b / "probe_summary.json");
  auto ma = load_json(thm3_first / "manifest.json"), mb = load_json(again / "manifest.json");
  ma.erase("wall_clock_seconds");
  mb.erase("wall_clock_seconds");
  same = same && ma == mb;
  return {same, "thm3 report and thm31-i sweep reruns byte-identical: " + std::string(same ? "yes" : "no")};
}

}  // namespace

int main() {
  fs::create_directories(kWork);
  int failed = 0;
  const auto report = [&](int id, const std::function<Outcome()>& f) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << " [" << num(took)
              << " s]" << std::endl;
  };
  fs::path thm3;
  json thm3_report;
  report(1, c1);
  report(2, c2);
  report(3, c3);
  report(4, c4);
  report(5, c5);
  report(6, c6);
  report(7, [&] {
    thm3 = run_preset("converge", "thm3", "a");
    thm3_report = load_json(thm3 / "rate_report.json");
    return c7(thm3_report);
  });
  report(8, c8);
  report(9, c9);
  report(10, c10);
  report(11, c11);
  report(12, c12);
  report(13, [&] { return c13(thm3); });
  std::cout << (13 - failed) << " of 13 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
