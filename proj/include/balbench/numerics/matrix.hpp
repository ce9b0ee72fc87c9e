#pragma once

// Small dense row-major matrices. The controllers in this project never need
// more than 4x4 state matrices; the Lyapunov solver builds n^2 x n^2 systems
// (at most 16x16) on top of the same type.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "balbench/errors.hpp"

namespace balbench {

class Mat {
 public:
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) {
      throw InvalidInput("Mat: dimensions must be at least 1x1");
    }
  }

  Mat(std::initializer_list<std::initializer_list<double>> rows)
      : Mat(rows.size(), rows.size() ? rows.begin()->size() : 0) {
    std::size_t r = 0;
    for (const auto& row : rows) {
      if (row.size() != cols_) {
        throw InvalidInput("Mat: ragged initializer");
      }
      std::size_t c = 0;
      for (double v : row) {
        if (!std::isfinite(v)) {
          throw InvalidInput("Mat: non-finite entry");
        }
        (*this)(r, c++) = v;
      }
      ++r;
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat diagonal(std::initializer_list<double> values) {
    Mat m(values.size(), values.size());
    std::size_t i = 0;
    for (double v : values) {
      m(i, i) = v;
      ++i;
    }
    return m;
  }

  static Mat scalar(double v) {
    Mat m(1, 1);
    m(0, 0) = v;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<double>& entries() const noexcept { return data_; }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  Mat& operator+=(const Mat& o) {
    require_same_shape(o, "+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  Mat& operator-=(const Mat& o) {
    require_same_shape(o, "-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  Mat& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, double s) { return a *= s; }
  friend Mat operator*(double s, Mat a) { return a *= s; }
  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  void require_same_shape(const Mat& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw InvalidInput(std::string("Mat: dimension mismatch in operator") + op);
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

inline Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw InvalidInput("mat_mul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                       std::to_string(b.rows()) + ")");
  }
  Mat out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline Mat operator*(const Mat& a, const Mat& b) { return mat_mul(a, b); }

/// Induced infinity norm (largest absolute row sum).
inline double norm_inf(const Mat& a) {
  double best = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) sum += std::abs(a(r, c));
    best = std::max(best, sum);
  }
  return best;
}

inline double max_abs(const Mat& a) {
  double best = 0.0;
  for (double v : a.entries()) best = std::max(best, std::abs(v));
  return best;
}

inline Mat symmetrized(const Mat& a) { return (a + a.transpose()) * 0.5; }

inline constexpr double kSingularPivot = 1e-12;

/// Solves a·x = b by Gaussian elimination with partial pivoting. A pivot whose
/// magnitude falls below kSingularPivot (relative to the largest entry of a,
/// or absolute when a is tiny) is reported as singular.
inline Mat solve_linear(Mat a, Mat b) {
  if (!a.is_square() || a.rows() != b.rows()) {
    throw InvalidInput("solve_linear: need square a with matching b rows");
  }
  const std::size_t n = a.rows();
  const double threshold = kSingularPivot * std::max(1.0, max_abs(a));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) < threshold) {
      throw InvalidInput("solve_linear: matrix is singular to working precision");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      for (std::size_t c = 0; c < b.cols(); ++c) std::swap(b(col, c), b(pivot, c));
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) -= f * b(col, c);
    }
  }
  Mat x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = n; i-- > 0;) {
      double s = b(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x(k, c);
      x(i, c) = s / a(i, i);
    }
  }
  return x;
}

inline Mat inverse(const Mat& a) { return solve_linear(a, Mat::identity(a.rows())); }

/// Determinant by cofactor expansion along the first row; intended for n <= 4.
inline double determinant(const Mat& a) {
  if (!a.is_square()) throw InvalidInput("determinant: matrix must be square");
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  double det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Mat minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t mc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, mc++) = a(r, c);
      }
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    det += sign * a(0, j) * determinant(minor);
  }
  return det;
}

/// Principal submatrix picked by a bitmask over row/column indices.
inline Mat principal_submatrix(const Mat& a, unsigned mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (mask & (1u << i)) idx.push_back(i);
  Mat s(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) s(r, c) = a(idx[r], idx[c]);
  return s;
}

}  // namespace balbench
