#pragma once

// The reference experiment grid: four PID gain sets, fuzzy PD and PD+I, and
// LQR with the two (Q, R) pairs, run under one shared SimConfig.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "balbench/fuzzy.hpp"
#include "balbench/lqr.hpp"
#include "balbench/metrics.hpp"
#include "balbench/pid.hpp"
#include "balbench/plant.hpp"
#include "balbench/sim.hpp"

namespace balbench {

inline std::vector<PidGains> paper_pid_gain_sets() {
  return {{25.0, 0.8, 0.1}, {50.0, 0.8, 0.05}, {100.0, 0.8, 0.1}, {1000.0, 0.8, 0.05}};
}

inline std::vector<LabeledController> paper_suite_controllers(const FuzzyConfig& fuzzy_base = {}) {
  std::vector<LabeledController> out;
  for (const auto& g : paper_pid_gain_sets()) {
    char label[64];
    std::snprintf(label, sizeof label, "pid-kp%g-ki%g-kd%g", g.kp, g.ki, g.kd);
    out.push_back({label, PidController{g, {}}});
  }
  FuzzyConfig pd = fuzzy_base;
  pd.variant = FuzzyVariant::PD;
  FuzzyConfig pdi = fuzzy_base;
  pdi.variant = FuzzyVariant::PDI;
  out.push_back({"fuzzy-pd", pd});
  out.push_back({"fuzzy-pdi", pdi});
  out.push_back({"lqr-q1-r1", LqrDesign{LqrWeights::first()}});
  out.push_back({"lqr-q2-r2", LqrDesign{LqrWeights::second()}});
  return out;
}

/// Analytic stability prediction for the linearized closed loop, when one
/// exists: Routh–Hurwitz on the PID closed-loop polynomial, or on
/// char(A - BK) for LQR. Fuzzy and open-loop controllers have none.
inline std::optional<Stability> analytic_verdict(const ControllerConfig& c, const StateSpace& reduced) {
  if (const auto* pid = std::get_if<PidController>(&c)) {
    return routh_hurwitz(pid_stability_poly(pid->gains, reduced));
  }
  if (const auto* lqr = std::get_if<LqrDesign>(&c)) {
    try {
      const LqrController ctl = synthesize(reduced, lqr->weights);
      return routh_hurwitz(closed_loop_poly(reduced, ctl.k));
    } catch (const SolverFailure&) {
      return Stability::NotHurwitz;
    }
  }
  return std::nullopt;
}

struct SuiteRow {
  std::string label;
  std::optional<Trajectory> trajectory;
  std::string error;
  std::optional<ResponseMetrics> metrics;
  std::optional<Stability> predicted;

  /// The analytic oracle says stable but the simulation did not settle.
  bool contradicts_oracle() const {
    if (predicted != Stability::Hurwitz) return false;
    return !metrics || !metrics->settling_time.has_value();
  }
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  ComparisonReport report;

  bool all_predictions_hold() const {
    for (const auto& r : rows)
      if (r.contradicts_oracle()) return false;
    return true;
  }
};

inline SuiteResult run_paper_suite(const PlantParams& params, FormulaMode mode, const SimConfig& sc,
                                   const FuzzyConfig& fuzzy_base = {}) {
  const auto controllers = paper_suite_controllers(fuzzy_base);
  const StateSpace reduced = build_reduced(params, mode);
  auto batch = batch_run(params, mode, sc, controllers);

  SuiteResult result;
  std::vector<LabeledMetrics> for_report;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    SuiteRow row{batch[i].label, std::move(batch[i].trajectory), batch[i].error, std::nullopt,
                 analytic_verdict(controllers[i].controller, reduced)};
    if (row.trajectory) {
      row.metrics = compute_metrics(*row.trajectory, sc);
      for_report.push_back({row.label, *row.metrics});
    }
    result.rows.push_back(std::move(row));
  }
  if (!for_report.empty()) result.report = compare(std::move(for_report));
  return result;
}

}  // namespace balbench
