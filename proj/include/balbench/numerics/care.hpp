#pragma once

// Continuous algebraic Riccati equation
//
//   A'P + PA - P B R^-1 B' P + Q = 0
//
// solved by Newton–Kleinman iteration. Each Newton step is a Lyapunov
// equation, solved here by vectorizing it into an n^2 x n^2 dense system
// (n <= 4). The iteration needs a stabilizing start, which is found by a grid
// search over constant feedback gains checked with Routh–Hurwitz.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "balbench/errors.hpp"
#include "balbench/numerics/matrix.hpp"
#include "balbench/numerics/poly.hpp"

namespace balbench {

struct CareOptions {
  int max_iterations = 100;
  double converged_residual = 1e-12;
  double accepted_residual = 1e-9;
  int stall_limit = 3;
};

struct CareSolution {
  Mat p;
  double residual;
  int iterations;
};

/// Solves F'X + XF + C = 0 for X.
inline Mat solve_lyapunov(const Mat& f, const Mat& c) {
  if (!f.is_square() || c.rows() != f.rows() || c.cols() != f.cols()) {
    throw InvalidInput("solve_lyapunov: dimension mismatch");
  }
  const std::size_t n = f.rows();
  const std::size_t nn = n * n;
  Mat lhs(nn, nn);
  Mat rhs(nn, 1);
  // Row (i,j): sum_k F(k,i) X(k,j) + sum_k X(i,k) F(k,j) = -C(i,j); X(r,c) lives at r*n + c.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t k = 0; k < n; ++k) {
        lhs(row, k * n + j) += f(k, i);
        lhs(row, i * n + k) += f(k, j);
      }
      rhs(row, 0) = -c(i, j);
    }
  const Mat vec = solve_linear(lhs, rhs);
  Mat x(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = vec(i * n + j, 0);
  return x;
}

inline Mat riccati_residual(const Mat& a, const Mat& b, const Mat& q, const Mat& r, const Mat& p) {
  const Mat bt_p = b.transpose() * p;
  const Mat gain = solve_linear(r, bt_p);  // R^-1 B'P
  return a.transpose() * p + p * a - bt_p.transpose() * gain + q;
}

namespace detail {

inline bool is_symmetric(const Mat& m, double rel_tol = 1e-12) {
  const double tol = rel_tol * std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

// Sylvester: PSD iff every principal minor is >= 0 (all 2^n - 1 of them, n <= 4).
inline bool is_positive_semidefinite(const Mat& m) {
  const double tol = 1e-12 * std::max(1.0, max_abs(m));
  for (unsigned mask = 1; mask < (1u << m.rows()); ++mask)
    if (determinant(principal_submatrix(m, mask)) < -tol) return false;
  return true;
}

// Sylvester: PD iff every leading principal minor is > 0.
inline bool is_positive_definite(const Mat& m) {
  for (std::size_t k = 1; k <= m.rows(); ++k)
    if (!(determinant(principal_submatrix(m, (1u << k) - 1)) > 0.0)) return false;
  return true;
}

inline void validate_care_inputs(const Mat& a, const Mat& b, const Mat& q, const Mat& r) {
  if (!a.is_square()) throw InvalidInput("solve_care: A must be square");
  const std::size_t n = a.rows();
  if (n > 4) throw InvalidInput("solve_care: state dimension above 4 is not supported");
  if (b.rows() != n) throw InvalidInput("solve_care: B must have as many rows as A");
  if (b.cols() > 4) throw InvalidInput("solve_care: more than 4 inputs is not supported");
  if (q.rows() != n || q.cols() != n) throw InvalidInput("solve_care: Q must be n x n");
  if (r.rows() != b.cols() || r.cols() != b.cols()) throw InvalidInput("solve_care: R must be m x m");
  if (!a.all_finite() || !b.all_finite() || !q.all_finite() || !r.all_finite()) {
    throw InvalidInput("solve_care: non-finite entry");
  }
  if (!is_symmetric(q) || !is_positive_semidefinite(q)) {
    throw InvalidInput("solve_care: Q must be symmetric positive semidefinite");
  }
  if (!is_symmetric(r) || !is_positive_definite(r)) {
    throw InvalidInput("solve_care: R must be symmetric positive definite");
  }
}

// Candidate gain values, smallest magnitude first. Coarser sets are used when
// the number of gain entries makes the finer grid too large to enumerate.
inline std::vector<double> gain_grid(int decades_step_halves, int lo_exp2, int hi_exp2) {
  std::vector<double> values{0.0};
  for (int e = lo_exp2; e <= hi_exp2; e += decades_step_halves) {
    const double v = std::pow(10.0, e / 2.0);
    values.push_back(v);
    values.push_back(-v);
  }
  return values;
}

inline std::optional<Mat> grid_search_gain(const Mat& a, const Mat& b, const Mat& q, const Mat& r) {
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();
  const std::size_t entries = n * m;
  constexpr double kMaxCandidates = 2e5;

  const std::vector<std::vector<double>> grids{
      gain_grid(1, -6, 12),  // 1e-3 .. 1e6 in half decades
      gain_grid(2, -4, 10),  // 1e-2 .. 1e5 in decades
      gain_grid(4, -2, 10),  // 1e-1 .. 1e5 every other decade
  };
  const std::vector<double>* grid = nullptr;
  for (const auto& g : grids) {
    if (std::pow(static_cast<double>(g.size()), static_cast<double>(entries)) <= kMaxCandidates) {
      grid = &g;
      break;
    }
  }
  if (grid == nullptr) return std::nullopt;

  // Among stabilizing candidates keep the one with the smallest initial cost
  // trace(P0), which gives Newton–Kleinman the closest start.
  std::optional<Mat> best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(entries, 0);
  Mat k(m, n);
  while (true) {
    for (std::size_t e = 0; e < entries; ++e) k(e / n, e % n) = (*grid)[idx[e]];
    const Mat closed = a - b * k;
    if (is_hurwitz(closed)) {
      try {
        const Mat p0 = solve_lyapunov(closed, q + k.transpose() * r * k);
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) cost += p0(i, i);
        if (std::isfinite(cost) && cost < best_cost) {
          best_cost = cost;
          best = k;
        }
      } catch (const InvalidInput&) {
        // near-singular Lyapunov operator; skip the candidate
      }
    }
    std::size_t pos = 0;
    while (pos < entries && ++idx[pos] == grid->size()) idx[pos++] = 0;
    if (pos == entries) break;
  }
  return best;
}

// Bass's construction for controllable pairs: with beta above every |eigenvalue|
// of A, solve (A + beta I) Z + Z (A + beta I)' = 2 B B' and take K = B' Z^-1.
inline std::optional<Mat> bass_gain(const Mat& a, const Mat& b) {
  const std::size_t n = a.rows();
  const double beta = 1.0 + norm_inf(a);
  const Mat shifted = a + Mat::identity(n) * beta;
  try {
    const Mat z = solve_lyapunov(shifted.transpose() * -1.0, b * b.transpose() * 2.0);
    Mat k = b.transpose() * inverse(symmetrized(z));
    if (is_hurwitz(a - b * k)) return k;
  } catch (const InvalidInput&) {
  }
  return std::nullopt;
}

}  // namespace detail

/// Constant feedback K with A - BK Hurwitz, or nullopt if none was found.
inline std::optional<Mat> find_stabilizing_gain(const Mat& a, const Mat& b, const Mat& q, const Mat& r) {
  if (is_hurwitz(a)) return Mat(b.cols(), a.rows());
  if (auto k = detail::grid_search_gain(a, b, q, r)) return k;
  return detail::bass_gain(a, b);
}

inline CareSolution solve_care_detailed(const Mat& a, const Mat& b, const Mat& q, const Mat& r,
                                        const CareOptions& opts = {}) {
  detail::validate_care_inputs(a, b, q, r);
  auto k0 = find_stabilizing_gain(a, b, q, r);
  if (!k0) {
    throw SolverFailure("solve_care: no stabilizing initial gain found (pair may not be stabilizable)",
                        std::numeric_limits<double>::infinity());
  }

  Mat k = *k0;
  std::optional<Mat> best_p;
  double best_residual = std::numeric_limits<double>::infinity();
  int best_iteration = 0;
  int stalled = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    Mat p(a.rows(), a.rows());
    try {
      p = symmetrized(solve_lyapunov(a - b * k, q + k.transpose() * r * k));
    } catch (const InvalidInput&) {
      break;
    }
    if (!p.all_finite()) break;
    const double res = norm_inf(riccati_residual(a, b, q, r, p));
    if (res < best_residual) {
      best_residual = res;
      best_p = p;
      best_iteration = it;
      stalled = 0;
    } else if (++stalled >= opts.stall_limit) {
      break;
    }
    if (res < opts.converged_residual) break;
    k = solve_linear(r, b.transpose() * p);
  }

  if (!best_p || !(best_residual < opts.accepted_residual)) {
    throw SolverFailure(
        "solve_care: Newton–Kleinman did not converge (best residual " + std::to_string(best_residual) + ")",
        best_residual);
  }
  return {*best_p, best_residual, best_iteration};
}

/// Stabilizing symmetric solution P of the CARE.
inline Mat solve_care(const Mat& a, const Mat& b, const Mat& q, const Mat& r) {
  return solve_care_detailed(a, b, q, r).p;
}

/// LQR gain K = R^-1 B'P; the closed loop A - BK is checked to be Hurwitz.
inline Mat lqr_gain(const Mat& a, const Mat& b, const Mat& q, const Mat& r) {
  const CareSolution sol = solve_care_detailed(a, b, q, r);
  Mat k = solve_linear(r, b.transpose() * sol.p);
  if (!is_hurwitz(a - b * k)) {
    throw SolverFailure("lqr_gain: closed loop A - BK is not Hurwitz", sol.residual);
  }
  return k;
}

}  // namespace balbench
