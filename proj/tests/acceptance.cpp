// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "balbench/balbench.hpp"
#include "balbench/paper_suite.hpp"
#include "cli_app.hpp"

namespace {

using namespace balbench;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

Outcome care_double_integrator() {
  const auto start = Clock::now();
  const Mat k = lqr_gain(Mat{{0, 1}, {0, 0}}, Mat{{0}, {1}}, Mat::identity(2), Mat{{1}});
  const double elapsed = seconds_since(start);
  const double err = std::max(std::abs(k(0, 0) - 1.0), std::abs(k(0, 1) - std::sqrt(3.0)));
  return {err <= 1e-9 && elapsed < 1.0,
          "max |K - [1, sqrt3]| = " + fmt("%.2e", err) + ", " + fmt("%.4f", elapsed) + " s"};
}

Outcome care_residual_plant() {
  bool ok = true;
  double worst = 0.0;
  for (const auto& w : {LqrWeights::first(), LqrWeights::second()}) {
    const StateSpace lit = build_reduced(PlantParams{}, FormulaMode::PaperLiteral);
    worst = std::max(worst, norm_inf(riccati_residual(lit.a, lit.b, w.q, w.r, solve_care(lit.a, lit.b, w.q, w.r))));
    for (auto mode : {FormulaMode::PaperLiteral, FormulaMode::Standard}) {
      const StateSpace ss = build_reduced(PlantParams{}, mode);
      ok = ok && routh_hurwitz(closed_loop_poly(ss, synthesize(ss, w).k)) == Stability::Hurwitz;
    }
  }
  return {ok && worst < 1e-9,
          "worst residual " + fmt("%.2e", worst) + (ok ? ", 4/4 closed loops Hurwitz" : ", closed loop not Hurwitz")};
}

Outcome lqr_scaling() {
  const StateSpace ss = build_reduced(PlantParams{});
  const Mat base = synthesize(ss, LqrWeights::first()).k;
  double worst = 0.0;
  for (double c : {0.1, 10.0, 1000.0}) {
    const LqrWeights w = LqrWeights::diagonal(10.0 * c, 100.0 * c, 0.001 * c);
    worst = std::max(worst, max_abs(synthesize(ss, w).k - base));
  }
  return {worst <= 1e-10, "max |K(cQ,cR) - K(Q,R)| = " + fmt("%.2e", worst)};
}

Outcome pid_agreement() {
  const StateSpace ss = build_reduced(PlantParams{});
  SimConfig sc;
  sc.plant_mode = PlantMode::Linear;
  sc.initial = {0.1, 0.0};
  bool ok = true;
  std::string detail;
  for (const auto& g : paper_pid_gain_sets()) {
    const bool hurwitz = routh_hurwitz(pid_stability_poly(g, ss)) == Stability::Hurwitz;
    const Trajectory tr = run(PlantParams{}, FormulaMode::PaperLiteral, PidController{g, {}}, sc);
    // Below 1e-3 at the final sample means the whole tail settled within the horizon.
    const bool settles = !tr.diverged() && std::abs(tr.samples.back().phi) < 1e-3;
    ok = ok && hurwitz == settles;
    if (!detail.empty()) detail += "; ";
    detail += "(" + fmt("%g", g.kp) + "," + fmt("%g", g.ki) + "," + fmt("%g", g.kd) + ") " +
              (hurwitz ? "Hurwitz" : "not Hurwitz") + "/" +
              (tr.diverged() ? "diverged"
                             : (settles ? "settled" : "|phi(10)|=" + fmt("%.3g", std::abs(tr.samples.back().phi))));
  }
  return {ok, detail};
}

Outcome rk4_order() {
  auto error = [](double dt) {
    auto f = [](const StateVec<2>& x, double) { return StateVec<2>{x[1], -x[0]}; };
    const double t_end = std::numbers::pi / 2;
    StateVec<2> x{1.0, 0.0};
    double t = 0.0;
    while (t_end - t > 1e-15) {
      const double h = std::min(dt, t_end - t);
      x = rk4_step(f, x, 0.0, h);
      t += h;
    }
    return std::abs(x[0] - std::cos(t_end));
  };
  const double ratio = error(0.01) / error(0.005);
  return {ratio >= 14.0 && ratio <= 18.0, "error ratio " + fmt("%.3f", ratio)};
}

Outcome fuzzy_invariants() {
  const FuzzyConfig cfg;
  const double at_zero = infer(cfg, 0.0, 0.0);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> e(-2.0, 2.0), r(-8.0, 8.0);
  double peak = 0.0;
  for (int i = 0; i < 10000; ++i) peak = std::max(peak, std::abs(infer(cfg, e(rng), r(rng))));

  static const char* golden[5][5] = {{"HN", "N", "Z", "P", "P"},
                                     {"HN", "N", "Z", "HP", "HP"},
                                     {"HN", "HN", "Z", "HP", "HP"},
                                     {"HN", "N", "Z", "P", "HP"},
                                     {"N", "N", "Z", "P", "HP"}};
  std::istringstream text(format_rule_base(RuleBase::paper_table()));
  const RuleBase loaded = parse_rule_base(text);
  bool table_ok = true;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) table_ok = table_ok && to_string(loaded.cells[i][j]) == golden[i][j];

  double worst_pou = 0.0;
  for (const FuzzyVariable& v : {cfg.error_var, cfg.rate_var, cfg.output_var}) {
    std::uniform_real_distribution<double> x(-v.halfwidth, v.halfwidth);
    for (int i = 0; i < 1000; ++i) {
      double sum = 0.0;
      for (double d : v.degrees(x(rng))) sum += d;
      worst_pou = std::max(worst_pou, std::abs(sum - 1.0));
    }
  }
  const bool ok = std::abs(at_zero) <= 1e-9 && peak <= cfg.output_var.halfwidth && table_ok && worst_pou <= 1e-12;
  return {ok, "infer(0,0) = " + fmt("%g", at_zero) + ", max |u| = " + fmt("%.4f", peak) + ", rule table " +
                  (table_ok ? "matches" : "differs") + ", partition error " + fmt("%.1e", worst_pou)};
}

Outcome open_loop_diverges() {
  SimConfig sc;
  sc.initial = {0.01, 0.0};
  sc.plant_mode = PlantMode::Nonlinear;
  const Trajectory tr = run(PlantParams{}, FormulaMode::PaperLiteral, OpenLoop{}, sc);
  const double t = tr.samples.back().t;
  return {tr.diverged() && t < 5.0, tr.diverged() ? "diverged at t = " + fmt("%.3f", t) + " s" : "did not diverge"};
}

Outcome settling_oracle() {
  const double dt = 0.001;
  Trajectory tr;
  tr.dt = dt;
  for (int k = 0; k <= 10000; ++k) tr.samples.push_back({k * dt, 0.1 * std::exp(-k * dt), 0.0, 0.0});
  const auto m = compute_metrics(tr, SimConfig{});
  const bool ok = m.settling_time && std::abs(*m.settling_time - std::log(50.0)) <= dt;
  return {ok, m.settling_time
                  ? "settling " + fmt("%.4f", *m.settling_time) + " s vs ln 50 = " + fmt("%.4f", std::log(50.0))
                  : "no settling time"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_suite_cli(const fs::path& dir) {
  std::ostringstream out, err;
  return cli::run_cli({"paper-suite", "--outdir", dir.string()}, out, err);
}

Outcome determinism_and_round_trip(const fs::path& work) {
  run_suite_cli(work / "a");
  run_suite_cli(work / "b");
  std::size_t files = 0;
  bool identical = true;
  for (const auto& e : fs::directory_iterator(work / "a")) {
    ++files;
    identical = identical && slurp(e.path()) == slurp(work / "b" / e.path().filename());
  }

  const SuiteResult suite = run_paper_suite(PlantParams{}, FormulaMode::PaperLiteral, SimConfig{}, FuzzyConfig{});
  bool exact = true;
  for (const auto& row : suite.rows) {
    if (!row.trajectory) continue;
    std::ifstream in(work / "a" / (row.label + ".csv"));
    const Trajectory back = read_trajectory_csv(in);
    exact = exact && back.samples.size() == row.trajectory->samples.size();
    for (std::size_t k = 0; exact && k < back.samples.size(); ++k) {
      const Sample& a = back.samples[k];
      const Sample& b = row.trajectory->samples[k];
      exact = a.t == b.t && a.phi == b.phi && a.phi_dot == b.phi_dot && a.u == b.u;
    }
  }
  return {files == 9 && identical && exact, std::to_string(files) + " files " +
                                                (identical ? "byte-identical" : "differ") + ", parse " +
                                                (exact ? "exact" : "inexact")};
}

Outcome suite_runtime(const fs::path& work) {
  const auto start = Clock::now();
  const int rc = run_suite_cli(work / "timed");
  const double elapsed = seconds_since(start);
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(work / "timed")) csvs += e.path().extension() == ".csv";
  return {elapsed < 60.0 && csvs == 8,
          fmt("%.3f", elapsed) + " s, " + std::to_string(csvs) + " trajectories, exit code " + std::to_string(rc)};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "balbench_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"CARE double integrator", care_double_integrator},
      {"CARE residual on plant", care_residual_plant},
      {"LQR weight scaling", lqr_scaling},
      {"PID analytic vs simulated", pid_agreement},
      {"RK4 fourth order", rk4_order},
      {"fuzzy invariants", fuzzy_invariants},
      {"open-loop instability", open_loop_diverges},
      {"settling-time oracle", settling_oracle},
      {"determinism and CSV round trip", [&] { return determinism_and_round_trip(work); }},
      {"paper-suite runtime", [&] { return suite_runtime(work); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu  %-32s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  fs::remove_all(work);
  return failed == 0 ? 0 : 1;
}
