#pragma once

#include "balbench/errors.hpp"
#include "balbench/numerics/care.hpp"
#include "balbench/numerics/matrix.hpp"
#include "balbench/numerics/poly.hpp"
#include "balbench/plant.hpp"

namespace balbench {

struct LqrWeights {
  Mat q = Mat::diagonal({10.0, 100.0});
  Mat r = Mat::scalar(0.001);

  static LqrWeights diagonal(double q11, double q22, double r) { return {Mat::diagonal({q11, q22}), Mat::scalar(r)}; }
  /// Q1 = diag(10, 100), R1 = 0.001.
  static LqrWeights first() { return diagonal(10.0, 100.0, 0.001); }
  /// Q2 = diag(100, 1000), R2 = 0.0001.
  static LqrWeights second() { return diagonal(100.0, 1000.0, 0.0001); }

  void validate() const {
    if (q.rows() != 2 || q.cols() != 2 || r.rows() != 1 || r.cols() != 1) {
      throw InvalidInput("LqrWeights: Q must be 2x2 and R 1x1");
    }
    if (!q.all_finite() || !r.all_finite()) throw InvalidInput("LqrWeights: non-finite weight");
    if (!detail::is_symmetric(q) || !detail::is_positive_semidefinite(q)) {
      throw InvalidInput("LqrWeights: Q must be symmetric positive semidefinite");
    }
    if (!(r(0, 0) > 0)) throw InvalidInput("LqrWeights: R must be positive");
  }
};

struct LqrController {
  Mat k;  // 1x2, acts on (phi, phi_dot)
  LqrWeights source_weights;
};

inline LqrController synthesize(const StateSpace& reduced, const LqrWeights& w) {
  if (reduced.kind != ModelKind::Reduced2) throw InvalidInput("synthesize: LQR acts on the reduced model only");
  w.validate();
  return {lqr_gain(reduced.a, reduced.b, w.q, w.r), w};
}

/// u = -(k1 phi + k2 phi_dot)
inline double lqr_control(const LqrController& ctl, const PitchState& s) {
  return -(ctl.k(0, 0) * s.phi + ctl.k(0, 1) * s.phi_dot);
}

inline Poly closed_loop_poly(const StateSpace& ss, const Mat& k) { return char_poly(ss.a - ss.b * k); }

}  // namespace balbench
