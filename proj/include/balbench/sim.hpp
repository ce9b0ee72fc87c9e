#pragma once

// Fixed-step closed-loop simulation of the pitch loop.
//
// Each step: e = phi - setpoint, the controller produces a force, the plant
// advances one RK4 step with that force held, and the sample (t, phi,
// phi_dot, u) is recorded. PID and fuzzy controllers produce a corrective
// command for a positive error; the force applied to the plant is its
// negation. LQR applies u = -K (e, phi_dot) directly.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "balbench/errors.hpp"
#include "balbench/fuzzy.hpp"
#include "balbench/lqr.hpp"
#include "balbench/numerics/rk4.hpp"
#include "balbench/pid.hpp"
#include "balbench/plant.hpp"

namespace balbench {

struct PidController {
  PidGains gains;
  PidOptions options;
};

struct LqrDesign {
  LqrWeights weights;
};

/// u = 0 at every step.
struct OpenLoop {};

using ControllerConfig = std::variant<PidController, LqrDesign, FuzzyConfig, OpenLoop>;

enum class PlantMode { Linear, Nonlinear };

inline std::string_view to_string(PlantMode m) { return m == PlantMode::Linear ? "linear" : "nonlinear"; }

inline PlantMode parse_plant_mode(std::string_view s) {
  if (s == "linear") return PlantMode::Linear;
  if (s == "nonlinear") return PlantMode::Nonlinear;
  throw InvalidInput("unknown plant mode '" + std::string(s) + "' (expected linear or nonlinear)");
}

/// Instantaneous kick added to phi_dot at the first sample with t >= time.
struct Disturbance {
  double time = 0.0;     // s
  double impulse = 0.0;  // rad/s
};

struct SimConfig {
  double t_final = 10.0;
  double dt = 0.001;
  PitchState initial{0.1, 0.0};
  double setpoint = 0.0;
  PlantMode plant_mode = PlantMode::Nonlinear;
  std::optional<Disturbance> disturbance;
  double divergence_threshold = std::numbers::pi / 2.0;
  double damping = 0.0;  // nonlinear plant only

  void validate() const {
    if (!(dt > 0) || !std::isfinite(dt)) throw InvalidInput("SimConfig: dt must be positive");
    if (!(t_final >= dt) || !std::isfinite(t_final)) throw InvalidInput("SimConfig: need 0 < dt <= t_final");
    if (!(divergence_threshold > 0)) throw InvalidInput("SimConfig: divergence threshold must be positive");
    if (!initial.finite() || !std::isfinite(setpoint)) throw InvalidInput("SimConfig: non-finite initial state");
    if (!(damping >= 0)) throw InvalidInput("SimConfig: damping must be >= 0");
    if (disturbance && (!std::isfinite(disturbance->time) || !std::isfinite(disturbance->impulse))) {
      throw InvalidInput("SimConfig: non-finite disturbance");
    }
  }

  /// floor(t_final / dt), tolerant of t_final being a float multiple of dt.
  std::size_t step_count() const { return static_cast<std::size_t>(std::floor(t_final / dt + 1e-9)); }
};

struct Sample {
  double t;
  double phi;
  double phi_dot;
  double u;

  friend bool operator==(const Sample&, const Sample&) = default;
};

enum class Termination { Completed, Diverged };

inline std::string_view to_string(Termination t) { return t == Termination::Completed ? "completed" : "diverged"; }

struct Trajectory {
  double dt = 0.0;
  std::vector<Sample> samples;
  Termination termination = Termination::Completed;

  bool diverged() const { return termination == Termination::Diverged; }
};

namespace detail {

// Stateful per-run controller built from a ControllerConfig.
class ControlLoop {
 public:
  ControlLoop(const ControllerConfig& cfg, const StateSpace& reduced) : cfg_(cfg) {
    if (const auto* lqr = std::get_if<LqrDesign>(&cfg_)) lqr_ = synthesize(reduced, lqr->weights);
    if (const auto* pid = std::get_if<PidController>(&cfg_)) pid->gains.validate();
    if (const auto* fz = std::get_if<FuzzyConfig>(&cfg_)) fz->validate();
  }

  double force(double error, double phi_dot, double dt) {
    return std::visit(
        [&](const auto& c) -> double {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, PidController>) {
            const PidStep step = pid_step(c.gains, pid_state_, error, dt, c.options);
            pid_state_ = step.state;
            return -step.u;
          } else if constexpr (std::is_same_v<T, LqrDesign>) {
            return lqr_control(*lqr_, {error, phi_dot});
          } else if constexpr (std::is_same_v<T, FuzzyConfig>) {
            // "Error Difference = Current Error - Previous Error", per unit time.
            const double rate = (error - prev_error_) / dt;
            prev_error_ = error;
            const FuzzyStep step = fuzzy_control(c, fuzzy_state_, error, rate, dt);
            fuzzy_state_ = step.state;
            return -step.u;
          } else {
            return 0.0;
          }
        },
        cfg_);
  }

 private:
  const ControllerConfig& cfg_;
  std::optional<LqrController> lqr_;
  PidState pid_state_;
  FuzzyIntegralState fuzzy_state_;
  double prev_error_ = 0.0;
};

}  // namespace detail

inline Trajectory run(const PlantParams& params, FormulaMode mode, const ControllerConfig& controller,
                      const SimConfig& sc) {
  sc.validate();
  const StateSpace reduced = build_reduced(params, mode);
  const PitchDynamics dyn = PitchDynamics::from(reduced, sc.damping);
  detail::ControlLoop loop(controller, reduced);

  const std::size_t steps = sc.step_count();
  Trajectory tr;
  tr.dt = sc.dt;
  tr.samples.reserve(steps + 1);

  StateVec<2> x{sc.initial.phi, sc.initial.phi_dot};
  bool disturbed = false;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * sc.dt;
    if (sc.disturbance && !disturbed && t >= sc.disturbance->time) {
      x[1] += sc.disturbance->impulse;
      disturbed = true;
    }
    const double u = loop.force(x[0] - sc.setpoint, x[1], sc.dt);
    tr.samples.push_back({t, x[0], x[1], u});

    if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || std::abs(x[0]) > sc.divergence_threshold) {
      tr.termination = Termination::Diverged;
      break;
    }
    if (k == steps) break;
    if (sc.plant_mode == PlantMode::Linear) {
      x = rk4_step([&](const StateVec<2>& s, double f) { return dyn.linear(s, f); }, x, u, sc.dt);
    } else {
      x = rk4_step([&](const StateVec<2>& s, double f) { return dyn.nonlinear(s, f); }, x, u, sc.dt);
    }
  }
  return tr;
}

struct LabeledController {
  std::string label;
  ControllerConfig controller;
};

struct BatchEntry {
  std::string label;
  std::optional<Trajectory> trajectory;
  std::string error;  // set when trajectory is empty

  bool ok() const { return trajectory.has_value(); }
};

/// One run per controller under a shared plant and SimConfig, in input order.
/// A failing controller is recorded against its label; the batch continues.
inline std::vector<BatchEntry> batch_run(const PlantParams& params, FormulaMode mode, const SimConfig& sc,
                                         const std::vector<LabeledController>& controllers) {
  if (controllers.empty()) throw InvalidInput("batch_run: no controllers given");
  std::vector<BatchEntry> out;
  out.reserve(controllers.size());
  for (const auto& c : controllers) {
    BatchEntry entry{c.label, std::nullopt, {}};
    try {
      entry.trajectory = run(params, mode, c.controller, sc);
    } catch (const std::exception& ex) {
      entry.error = ex.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace balbench
