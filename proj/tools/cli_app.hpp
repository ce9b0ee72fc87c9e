#pragma once

// Command-line front end. Kept in a header so the test suite can drive it
// in-process; tools/balbench.cpp is a thin main().
//
// Exit codes: 0 success, 1 configuration error, 2 diverged / oracle
// contradiction, 3 Riccati solver failure.

#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "balbench/balbench.hpp"
#include "balbench/paper_suite.hpp"

namespace balbench::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kDiverged = 2, kSolverFailure = 3 };

namespace detail {

inline std::string num(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

struct PlantFlags {
  double mass_m = PlantParams::kAssumedPendulumMass;
  std::string formula_mode = "paper-literal";

  void add_to(CLI::App& app) {
    app.add_option("--mass-m", mass_m, "Pendulum mass m in kg (assumed value)")->capture_default_str();
    app.add_option("--formula-mode", formula_mode, "Plant denominator: paper-literal | standard")
        ->check(CLI::IsMember({"paper-literal", "standard"}))
        ->capture_default_str();
  }

  PlantParams params() const {
    PlantParams p;
    p.pendulum_mass = mass_m;
    p.validate();
    return p;
  }

  void echo(std::ostream& err) const {
    const PlantParams p;
    err << "# plant: M=" << num(p.cart_mass) << " kg, m=" << num(mass_m) << " kg"
        << (mass_m == PlantParams::kAssumedPendulumMass ? " (assumed default)" : "") << ", l=" << num(p.pendulum_length)
        << " m, I=" << num(p.inertia) << " kg m^2, b=" << num(p.friction) << ", g=" << num(p.gravity)
        << " m/s^2, formula-mode=" << formula_mode << "\n";
  }
};

struct SimFlags {
  double dt = 0.001;
  double t_final = 10.0;
  double initial_pitch = 0.1;
  double initial_rate = 0.0;
  double setpoint = 0.0;
  std::string plant = "nonlinear";
  double damping = 0.0;
  std::optional<double> disturb_time;
  std::optional<double> disturb_impulse;
  double divergence_threshold = std::numbers::pi / 2.0;

  void add_to(CLI::App& app) {
    app.add_option("--dt", dt, "Integration and control step, s")->capture_default_str();
    app.add_option("--t-final", t_final, "Simulated duration, s")->capture_default_str();
    app.add_option("--initial-pitch", initial_pitch, "Initial pitch, rad")->capture_default_str();
    app.add_option("--initial-rate", initial_rate, "Initial pitch rate, rad/s")->capture_default_str();
    app.add_option("--setpoint", setpoint, "Pitch setpoint, rad")->capture_default_str();
    app.add_option("--plant", plant, "Plant model: linear | nonlinear")
        ->check(CLI::IsMember({"linear", "nonlinear"}))
        ->capture_default_str();
    app.add_option("--damping", damping, "Pitch damping c_d for the nonlinear plant")->capture_default_str();
    app.add_option("--disturb-time", disturb_time, "Time of a pitch-rate impulse, s");
    app.add_option("--disturb-impulse", disturb_impulse, "Pitch-rate impulse, rad/s");
    app.add_option("--divergence-threshold", divergence_threshold, "Stop when |pitch| exceeds this, rad")
        ->capture_default_str();
  }

  SimConfig config() const {
    SimConfig sc;
    sc.dt = dt;
    sc.t_final = t_final;
    sc.initial = {initial_pitch, initial_rate};
    sc.setpoint = setpoint;
    sc.plant_mode = parse_plant_mode(plant);
    sc.damping = damping;
    sc.divergence_threshold = divergence_threshold;
    if (disturb_time.has_value() != disturb_impulse.has_value()) {
      throw InvalidInput("--disturb-time and --disturb-impulse must be given together");
    }
    if (disturb_time) sc.disturbance = Disturbance{*disturb_time, *disturb_impulse};
    sc.validate();
    return sc;
  }

  void echo(std::ostream& err) const {
    err << "# sim: dt=" << num(dt) << " s, t-final=" << num(t_final) << " s, initial=(" << num(initial_pitch)
        << " rad, " << num(initial_rate) << " rad/s), setpoint=" << num(setpoint) << " rad, plant=" << plant
        << ", damping=" << num(damping) << ", divergence-threshold=" << num(divergence_threshold) << " rad";
    if (disturb_time && disturb_impulse) {
      err << ", disturbance=" << num(*disturb_impulse) << " rad/s at " << num(*disturb_time) << " s";
    } else {
      err << ", disturbance=none";
    }
    err << "\n";
  }
};

struct FuzzyFlags {
  std::string rulebase;
  double error_universe = 0.5;
  double rate_universe = 2.0;
  double output_universe = 20.0;
  double ki = 0.8;

  void add_to(CLI::App& app, bool with_ki) {
    app.add_option("--rulebase", rulebase, "Rule-base file (5 lines x 5 labels from HN N Z P HP)");
    app.add_option("--error-universe", error_universe, "Error universe halfwidth W_e, rad")->capture_default_str();
    app.add_option("--rate-universe", rate_universe, "Error-rate universe halfwidth W_r, rad/s")->capture_default_str();
    app.add_option("--output-universe", output_universe, "Output universe halfwidth W_out")->capture_default_str();
    if (with_ki) app.add_option("--fuzzy-ki", ki, "Integral gain of the PD+I variant")->capture_default_str();
  }

  FuzzyConfig config() const {
    FuzzyConfig cfg;
    cfg.error_var.halfwidth = error_universe;
    cfg.rate_var.halfwidth = rate_universe;
    cfg.output_var.halfwidth = output_universe;
    cfg.ki = ki;
    if (!rulebase.empty()) cfg.rules = load_rule_base(rulebase);
    cfg.validate();
    return cfg;
  }

  void echo(std::ostream& err, bool with_ki) const {
    err << "# fuzzy: W_e=" << num(error_universe) << " rad, W_r=" << num(rate_universe)
        << " rad/s, W_out=" << num(output_universe) << ", rulebase=" << (rulebase.empty() ? "built-in" : rulebase);
    if (with_ki) err << ", ki(PD+I)=" << num(ki);
    err << ", operators=min/max, defuzzifier=centroid(1001 points)\n";
  }
};

inline int write_file(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    err << "error: cannot open '" << path.string() << "' for writing\n";
    return kConfigError;
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) {
    err << "error: failed writing '" << path.string() << "'\n";
    return kConfigError;
  }
  return kOk;
}

}  // namespace detail

/// Runs one invocation. args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;

  CLI::App app{"Two-wheeled balancing robot controller bench (PID, LQR, fuzzy)", "balbench"};
  app.require_subcommand(1);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run one closed-loop simulation and write its trajectory CSV");
  PlantFlags sim_plant;
  SimFlags sim_flags;
  FuzzyFlags sim_fuzzy;
  std::string controller;
  PidGains pid_gains{50.0, 0.8, 0.05};
  std::string pid_accumulation = "dt-scaled";
  std::optional<double> u_max;
  double q11 = 10.0, q22 = 100.0, r = 0.001;
  std::string out_path;
  sim_cmd->add_option("--controller", controller, "pid | lqr | fuzzy-pd | fuzzy-pdi | none")
      ->required()
      ->check(CLI::IsMember({"pid", "lqr", "fuzzy-pd", "fuzzy-pdi", "none"}));
  sim_cmd->add_option("--kp", pid_gains.kp, "PID proportional gain")->capture_default_str();
  sim_cmd->add_option("--ki", pid_gains.ki, "PID integral gain")->capture_default_str();
  sim_cmd->add_option("--kd", pid_gains.kd, "PID derivative gain")->capture_default_str();
  sim_cmd->add_option("--pid-accumulation", pid_accumulation, "dt-scaled | paper-literal")
      ->check(CLI::IsMember({"dt-scaled", "paper-literal"}))
      ->capture_default_str();
  sim_cmd->add_option("--u-max", u_max, "Symmetric PID output limit (off by default)");
  sim_cmd->add_option("--q11", q11, "LQR Q(1,1)")->capture_default_str();
  sim_cmd->add_option("--q22", q22, "LQR Q(2,2)")->capture_default_str();
  sim_cmd->add_option("--r", r, "LQR R")->capture_default_str();
  sim_cmd->add_option("--out", out_path, "Trajectory CSV path")->required();
  sim_plant.add_to(*sim_cmd);
  sim_flags.add_to(*sim_cmd);
  sim_fuzzy.add_to(*sim_cmd, true);

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Rank trajectory CSV files by response metrics");
  std::vector<std::string> cmp_files;
  double cmp_setpoint = 0.0;
  double cmp_threshold = std::numbers::pi / 2.0;
  bool cmp_csv = false;
  cmp_cmd->add_option("files", cmp_files, "Trajectory CSV files")->required();
  cmp_cmd->add_option("--setpoint", cmp_setpoint, "Pitch setpoint, rad")->capture_default_str();
  cmp_cmd->add_option("--divergence-threshold", cmp_threshold, "A final |pitch| above this counts as diverged")
      ->capture_default_str();
  cmp_cmd->add_flag("--csv", cmp_csv, "Emit the ranking as CSV");

  // lqr-gain
  auto* lqr_cmd = app.add_subcommand("lqr-gain", "Synthesize the LQR gain for the reduced pitch model");
  PlantFlags lqr_plant;
  double lq11 = 10.0, lq22 = 100.0, lr = 0.001;
  std::optional<double> a21_override, b2_override;
  lqr_cmd->add_option("--q11", lq11, "Q(1,1)")->capture_default_str();
  lqr_cmd->add_option("--q22", lq22, "Q(2,2)")->capture_default_str();
  lqr_cmd->add_option("--r", lr, "R")->capture_default_str();
  lqr_cmd->add_option("--a21", a21_override, "Override A(2,1) of the reduced model");
  lqr_cmd->add_option("--b2", b2_override, "Override B(2) of the reduced model");
  lqr_plant.add_to(*lqr_cmd);

  // fuzzy-eval
  auto* fz_cmd = app.add_subcommand("fuzzy-eval", "Evaluate the fuzzy inference once");
  FuzzyFlags fz_flags;
  double fz_error = 0.0, fz_rate = 0.0;
  fz_cmd->add_option("--error", fz_error, "Pitch error, rad")->required();
  fz_cmd->add_option("--error-rate", fz_rate, "Pitch error rate, rad/s")->required();
  fz_flags.add_to(*fz_cmd, false);

  // paper-suite
  auto* suite_cmd = app.add_subcommand("paper-suite", "Run the eight reference controller configurations");
  PlantFlags suite_plant;
  SimFlags suite_sim;
  FuzzyFlags suite_fuzzy;
  std::string outdir = "paper_suite_out";
  suite_cmd->add_option("--outdir", outdir, "Directory for the CSV files and report")->capture_default_str();
  suite_plant.add_to(*suite_cmd);
  suite_sim.add_to(*suite_cmd);
  suite_fuzzy.add_to(*suite_cmd, true);

  std::vector<const char*> argv{"balbench"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (sim_cmd->parsed()) {
      const PlantParams params = sim_plant.params();
      const FormulaMode mode = parse_formula_mode(sim_plant.formula_mode);
      const SimConfig sc = sim_flags.config();
      sim_plant.echo(err);
      sim_flags.echo(err);

      ControllerConfig cfg = OpenLoop{};
      err << "# controller: " << controller;
      if (controller == "pid") {
        pid_gains.validate();
        PidOptions opts;
        opts.accumulation = pid_accumulation == "dt-scaled" ? Accumulation::DtScaled : Accumulation::PaperLiteral;
        if (u_max) {
          if (!(*u_max > 0)) throw InvalidInput("--u-max must be positive");
          opts.output_limit = *u_max;
        }
        cfg = PidController{pid_gains, opts};
        err << " kp=" << num(pid_gains.kp) << " ki=" << num(pid_gains.ki) << " kd=" << num(pid_gains.kd)
            << " accumulation=" << pid_accumulation << " u-max=" << (u_max ? num(*u_max) : "off")
            << " setpoint-error=pitch-setpoint\n";
      } else if (controller == "lqr") {
        const LqrWeights w = LqrWeights::diagonal(q11, q22, r);
        w.validate();
        cfg = LqrDesign{w};
        err << " Q=diag(" << num(q11) << ", " << num(q22) << ") R=" << num(r) << "\n";
      } else if (controller == "fuzzy-pd" || controller == "fuzzy-pdi") {
        FuzzyConfig fc = sim_fuzzy.config();
        fc.variant = controller == "fuzzy-pd" ? FuzzyVariant::PD : FuzzyVariant::PDI;
        cfg = fc;
        err << "\n";
        sim_fuzzy.echo(err, fc.variant == FuzzyVariant::PDI);
      } else {
        err << " (u = 0)\n";
      }

      const Trajectory tr = run(params, mode, cfg, sc);
      if (const int rc = write_file(out_path, format_trajectory_csv(tr), err); rc != kOk) return rc;
      err << "# result: " << to_string(tr.termination) << ", " << tr.samples.size() << " samples -> " << out_path
          << "\n";
      return tr.diverged() ? kDiverged : kOk;
    }

    if (cmp_cmd->parsed()) {
      std::vector<LabeledMetrics> rows;
      for (const auto& f : cmp_files) {
        std::ifstream in(f);
        if (!in) throw InvalidInput("cannot open '" + f + "'");
        Trajectory tr = read_trajectory_csv(in);
        if (tr.samples.empty()) throw InvalidInput("'" + f + "' has no samples");
        if (std::abs(tr.samples.back().phi) > cmp_threshold || !std::isfinite(tr.samples.back().phi)) {
          tr.termination = Termination::Diverged;
        }
        SimConfig sc;
        sc.setpoint = cmp_setpoint;
        sc.dt = tr.dt > 0 ? tr.dt : 1.0;
        sc.t_final = tr.samples.back().t;
        rows.push_back({std::filesystem::path(f).stem().string(), compute_metrics(tr, sc)});
      }
      const ComparisonReport report = compare(std::move(rows));
      out << (cmp_csv ? report.to_csv() : report.to_text());
      return kOk;
    }

    if (lqr_cmd->parsed()) {
      const PlantParams params = lqr_plant.params();
      const FormulaMode mode = parse_formula_mode(lqr_plant.formula_mode);
      StateSpace ss = build_reduced(params, mode);
      lqr_plant.echo(err);
      if (a21_override) ss.a(1, 0) = *a21_override;
      if (b2_override) ss.b(1, 0) = *b2_override;
      err << "# model: A=[[0, 1], [" << num(ss.a(1, 0)) << ", 0]] B=[0; " << num(ss.b(1, 0)) << "]"
          << (a21_override || b2_override ? " (overridden)" : "") << "\n";
      const LqrWeights w = LqrWeights::diagonal(lq11, lq22, lr);
      err << "# weights: Q=diag(" << num(lq11) << ", " << num(lq22) << ") R=" << num(lr) << "\n";
      w.validate();
      const CareSolution sol = solve_care_detailed(ss.a, ss.b, w.q, w.r);
      const LqrController ctl = synthesize(ss, w);
      const Poly cl = closed_loop_poly(ss, ctl.k);
      out << "k1 = " << num(ctl.k(0, 0)) << "\n";
      out << "k2 = " << num(ctl.k(0, 1)) << "\n";
      out << "P = [[" << num(sol.p(0, 0)) << ", " << num(sol.p(0, 1)) << "], [" << num(sol.p(1, 0)) << ", "
          << num(sol.p(1, 1)) << "]]\n";
      out << "care_residual = " << num(sol.residual) << "\n";
      out << "closed_loop_poly = " << cl.to_string() << "\n";
      out << "closed_loop_coeffs = " << num(cl.coeff(2)) << " " << num(cl.coeff(1)) << " " << num(cl.coeff(0)) << "\n";
      out << "verdict = " << to_string(routh_hurwitz(cl)) << "\n";
      return kOk;
    }

    if (fz_cmd->parsed()) {
      const FuzzyConfig cfg = fz_flags.config();
      fz_flags.echo(err, false);
      const Inference inf = infer_detailed(cfg, fz_error, fz_rate);
      out << "error = " << num(fz_error) << ", error_rate = " << num(fz_rate) << "\n";
      for (const auto& f : inf.fired) {
        out << "rule e'=" << to_string(f.rate) << " e=" << to_string(f.error) << " -> " << to_string(f.consequent)
            << " strength " << num(f.strength) << "\n";
      }
      out << "u = " << num(inf.u) << "\n";
      return kOk;
    }

    if (suite_cmd->parsed()) {
      const PlantParams params = suite_plant.params();
      const FormulaMode mode = parse_formula_mode(suite_plant.formula_mode);
      const SimConfig sc = suite_sim.config();
      const FuzzyConfig fuzzy = suite_fuzzy.config();
      suite_plant.echo(err);
      suite_sim.echo(err);
      suite_fuzzy.echo(err, true);
      err << "# controllers: PID (25,0.8,0.1) (50,0.8,0.05) (100,0.8,0.1) (1000,0.8,0.05); fuzzy PD, PD+I; "
             "LQR Q1=diag(10,100) R1=0.001, Q2=diag(100,1000) R2=0.0001; PID accumulation=dt-scaled\n";

      std::error_code ec;
      std::filesystem::create_directories(outdir, ec);
      if (ec || !std::filesystem::is_directory(outdir)) {
        err << "error: cannot create output directory '" << outdir << "'\n";
        return kConfigError;
      }

      const SuiteResult suite = run_paper_suite(params, mode, sc, fuzzy);
      std::ostringstream report;
      report << suite.report.to_text() << "\n";
      for (const auto& row : suite.rows) {
        report << row.label << ": ";
        if (!row.trajectory) {
          report << "failed (" << row.error << ")\n";
          continue;
        }
        report << to_string(row.trajectory->termination)
               << ", analytic=" << (row.predicted ? std::string(to_string(*row.predicted)) : std::string("n/a"))
               << (row.contradicts_oracle() ? ", DID NOT SETTLE despite analytic stability" : "") << "\n";
        const std::filesystem::path csv = std::filesystem::path(outdir) / (row.label + ".csv");
        if (const int rc = write_file(csv, format_trajectory_csv(*row.trajectory), err); rc != kOk) return rc;
      }
      if (const int rc = write_file(std::filesystem::path(outdir) / "report.txt", report.str(), err); rc != kOk) {
        return rc;
      }
      out << report.str();
      for (const auto& row : suite.rows)
        if (!row.trajectory) return kSolverFailure;
      return suite.all_predictions_hold() ? kOk : kDiverged;
    }
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace balbench::cli
