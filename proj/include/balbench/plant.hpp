#pragma once

// Inverted-pendulum model of the two-wheeled balancing robot.
//
// Two linearizations are provided: the 2-state pitch model (phi, phi_dot) and
// the 4-state cart-pendulum model (x, x_dot, phi, phi_dot). Both share the
// denominator
//
//   paper-literal: D = I(M+m) + M m^2
//   standard:      D = I(M+m) + M m l^2
//
// Literal is the default; standard is the textbook cart-pole denominator.

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "balbench/errors.hpp"
#include "balbench/numerics/matrix.hpp"
#include "balbench/numerics/rk4.hpp"

namespace balbench {

struct PlantParams {
  double cart_mass = 0.0754;       // M, kg
  double pendulum_mass = 0.2;      // m, kg; assumed
  double pendulum_length = 0.157;  // l, m
  double inertia = 0.01094;        // I, kg m^2
  double friction = 0.65;          // b
  double gravity = 9.8;            // g, m/s^2

  static constexpr double kAssumedPendulumMass = 0.2;

  void validate() const {
    const bool finite = std::isfinite(cart_mass) && std::isfinite(pendulum_mass) && std::isfinite(pendulum_length) &&
                        std::isfinite(inertia) && std::isfinite(friction) && std::isfinite(gravity);
    if (!finite) throw InvalidInput("PlantParams: non-finite parameter");
    if (!(cart_mass > 0)) throw InvalidInput("PlantParams: cart mass M must be > 0");
    if (!(pendulum_mass >= 0)) throw InvalidInput("PlantParams: pendulum mass m must be >= 0");
    if (!(pendulum_length > 0)) throw InvalidInput("PlantParams: length l must be > 0");
    if (!(inertia > 0)) throw InvalidInput("PlantParams: inertia I must be > 0");
    if (!(gravity > 0)) throw InvalidInput("PlantParams: gravity g must be > 0");
    if (!(friction >= 0)) throw InvalidInput("PlantParams: friction b must be >= 0");
  }
};

enum class FormulaMode { PaperLiteral, Standard };
enum class ModelKind { Reduced2, Full4 };

inline std::string_view to_string(FormulaMode m) {
  return m == FormulaMode::PaperLiteral ? "paper-literal" : "standard";
}

inline FormulaMode parse_formula_mode(std::string_view s) {
  if (s == "paper-literal") return FormulaMode::PaperLiteral;
  if (s == "standard") return FormulaMode::Standard;
  throw InvalidInput("unknown formula mode '" + std::string(s) + "' (expected paper-literal or standard)");
}

struct PitchState {
  double phi = 0.0;      // rad
  double phi_dot = 0.0;  // rad/s

  bool finite() const { return std::isfinite(phi) && std::isfinite(phi_dot); }
  friend bool operator==(const PitchState&, const PitchState&) = default;
};

struct StateSpace {
  Mat a;
  Mat b;
  ModelKind kind;
  FormulaMode mode;
};

inline double plant_denominator(const PlantParams& p, FormulaMode mode) {
  p.validate();
  const double M = p.cart_mass, m = p.pendulum_mass, l = p.pendulum_length, I = p.inertia;
  const double d = mode == FormulaMode::PaperLiteral ? I * (M + m) + M * m * m : I * (M + m) + M * m * l * l;
  if (!(d > 0)) throw InvalidInput("plant: denominator I(M+m) + ... must be positive");
  return d;
}

/// A = [[0, 1], [mgl(M+m)/D, 0]], B = [0; ml/D] on the state (phi, phi_dot).
inline StateSpace build_reduced(const PlantParams& p, FormulaMode mode = FormulaMode::PaperLiteral) {
  const double d = plant_denominator(p, mode);
  const double M = p.cart_mass, m = p.pendulum_mass, l = p.pendulum_length, g = p.gravity;
  Mat a{{0.0, 1.0}, {m * g * l * (M + m) / d, 0.0}};
  Mat b{{0.0}, {m * l / d}};
  return {std::move(a), std::move(b), ModelKind::Reduced2, mode};
}

/// Cart-pendulum linearization on (x, x_dot, phi, phi_dot).
inline StateSpace build_full(const PlantParams& p, FormulaMode mode = FormulaMode::PaperLiteral) {
  const double d = plant_denominator(p, mode);
  const double M = p.cart_mass, m = p.pendulum_mass, l = p.pendulum_length, g = p.gravity;
  const double I = p.inertia, b = p.friction;
  Mat a{
      {0.0, 1.0, 0.0, 0.0},
      {0.0, -(I + m * l * l) * b / d, m * m * g * l * l / d, 0.0},
      {0.0, 0.0, 0.0, 1.0},
      {0.0, -m * l * b / d, m * g * l * (M + m) / d, 0.0},
  };
  Mat bm{{0.0}, {(I + m * l * l) / d}, {0.0}, {m * l / d}};
  return {std::move(a), std::move(bm), ModelKind::Full4, mode};
}

/// phi'' = a21 sin(phi) - damping phi' + b2 u. With damping = 0 its
/// linearization about phi = 0 is exactly the reduced model.
struct PitchDynamics {
  double a21;
  double b2;
  double damping = 0.0;

  static PitchDynamics from(const StateSpace& reduced, double damping = 0.0) {
    if (reduced.kind != ModelKind::Reduced2) throw InvalidInput("PitchDynamics: need the reduced model");
    return {reduced.a(1, 0), reduced.b(1, 0), damping};
  }

  StateVec<2> nonlinear(const StateVec<2>& x, double u) const {
    return {x[1], a21 * std::sin(x[0]) - damping * x[1] + b2 * u};
  }

  StateVec<2> linear(const StateVec<2>& x, double u) const { return {x[1], a21 * x[0] + b2 * u}; }
};

/// Nonlinear pitch derivative (phi_dot, phi_ddot) for a force input u.
inline PitchState nonlinear_deriv(const PlantParams& p, FormulaMode mode, const PitchState& s, double u,
                                  double damping = 0.0) {
  const auto dyn = PitchDynamics::from(build_reduced(p, mode), damping);
  const auto d = dyn.nonlinear({s.phi, s.phi_dot}, u);
  return {d[0], d[1]};
}

}  // namespace balbench
