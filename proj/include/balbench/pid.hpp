#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

#include "balbench/errors.hpp"
#include "balbench/numerics/poly.hpp"
#include "balbench/plant.hpp"

namespace balbench {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;

  void validate() const {
    if (!std::isfinite(kp) || !std::isfinite(ki) || !std::isfinite(kd)) {
      throw InvalidInput("PidGains: gains must be finite");
    }
    if (kp < 0 || ki < 0 || kd < 0) throw InvalidInput("PidGains: gains must be non-negative");
  }
};

/// Error bookkeeping carried between steps. A default-constructed state is the
/// reset state: previous error and error sum both zero.
struct PidState {
  double prev_error = 0.0;
  double error_sum = 0.0;
  bool initialized = false;
};

enum class Accumulation {
  DtScaled,      // sum += e*dt, derivative (e - prev)/dt
  PaperLiteral,  // sum += e, difference e - prev, no dt anywhere
};

inline std::string_view to_string(Accumulation a) {
  return a == Accumulation::DtScaled ? "dt-scaled" : "paper-literal";
}

struct PidOptions {
  Accumulation accumulation = Accumulation::DtScaled;
  std::optional<double> output_limit;  // symmetric |u| <= limit when set
};

struct PidStep {
  double u;
  PidState state;
};

/// u = kp e + ki sum(e) + kd diff(e), derivative taken on the error.
inline PidStep pid_step(const PidGains& gains, const PidState& st, double error, double dt,
                        const PidOptions& opts = {}) {
  if (!(dt > 0)) throw InvalidInput("pid_step: dt must be positive");
  PidState next = st;
  double derivative = 0.0;
  if (opts.accumulation == Accumulation::DtScaled) {
    next.error_sum = st.error_sum + error * dt;
    derivative = (error - st.prev_error) / dt;
  } else {
    next.error_sum = st.error_sum + error;
    derivative = error - st.prev_error;
  }
  next.prev_error = error;
  next.initialized = true;

  double u = gains.kp * error + gains.ki * next.error_sum + gains.kd * derivative;
  if (opts.output_limit) u = std::clamp(u, -*opts.output_limit, *opts.output_limit);
  return {u, next};
}

/// Closed-loop characteristic polynomial of phi'' = a21 phi + b2 u under ideal
/// continuous PID acting against the pitch error:
///   s^3 + b2 kd s^2 + (b2 kp - a21) s + b2 ki
inline Poly pid_stability_poly(const PidGains& gains, const StateSpace& reduced) {
  if (reduced.kind != ModelKind::Reduced2) throw InvalidInput("pid_stability_poly: need the reduced model");
  const double a21 = reduced.a(1, 0);
  const double b2 = reduced.b(1, 0);
  return Poly{1.0, b2 * gains.kd, b2 * gains.kp - a21, b2 * gains.ki};
}

}  // namespace balbench
