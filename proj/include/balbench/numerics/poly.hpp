#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <vector>

#include "balbench/errors.hpp"
#include "balbench/numerics/matrix.hpp"

namespace balbench {

/// Real polynomial of degree <= 4, coefficients ordered highest degree first.
class Poly {
 public:
  static constexpr std::size_t kMaxDegree = 4;

  explicit Poly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty() || coeffs_.size() > kMaxDegree + 1) {
      throw InvalidInput("Poly: degree must be between 0 and 4");
    }
    if (coeffs_.front() == 0.0) {
      throw InvalidInput("Poly: leading coefficient is zero");
    }
    for (double c : coeffs_)
      if (!std::isfinite(c)) throw InvalidInput("Poly: non-finite coefficient");
  }
  Poly(std::initializer_list<double> coeffs) : Poly(std::vector<double>(coeffs)) {}

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  /// Coefficient of s^power.
  double coeff(std::size_t power) const { return coeffs_[degree() - power]; }

  double operator()(double s) const {
    double acc = 0.0;
    for (double c : coeffs_) acc = acc * s + c;
    return acc;
  }

  std::string to_string(const char* var = "s") const;

 private:
  std::vector<double> coeffs_;
};

inline std::string Poly::to_string(const char* var) const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const std::size_t power = degree() - i;
    const double c = coeffs_[i];
    if (!out.empty())
      out += c < 0 ? " - " : " + ";
    else if (c < 0)
      out += "-";
    char mag_buf[32];
    std::snprintf(mag_buf, sizeof mag_buf, "%.10g", std::abs(c));
    const std::string mag = mag_buf;
    if (power == 0)
      out += mag;
    else {
      if (std::abs(c) != 1.0) out += mag + "*";
      out += var;
      if (power > 1) out += "^" + std::to_string(power);
    }
  }
  return out;
}

/// Monic characteristic polynomial det(sI - A) from sums of principal minors.
inline Poly char_poly(const Mat& a) {
  if (!a.is_square()) throw InvalidInput("char_poly: matrix must be square");
  const std::size_t n = a.rows();
  if (n > Poly::kMaxDegree) throw InvalidInput("char_poly: matrices larger than 4x4 are not supported");
  // Coefficient of s^(n-k) is (-1)^k times the sum of all k x k principal minors.
  std::vector<double> coeffs(n + 1, 0.0);
  coeffs[0] = 1.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    coeffs[k] += sign * determinant(principal_submatrix(a, mask));
  }
  return Poly(std::move(coeffs));
}

enum class Stability { Hurwitz, NotHurwitz };

inline const char* to_string(Stability s) { return s == Stability::Hurwitz ? "Hurwitz" : "not-Hurwitz"; }

/// Routh–Hurwitz test for degree 1..4 in closed form. Roots on the imaginary
/// axis (including s = 0) are classified not-Hurwitz.
inline Stability routh_hurwitz(const Poly& p) {
  const std::size_t n = p.degree();
  if (n < 1) throw InvalidInput("routh_hurwitz: degree must be 1..4");
  // Normalize so the leading coefficient is positive; a[i] is the coefficient of s^i.
  const double sign = p.coeffs().front() > 0 ? 1.0 : -1.0;
  std::vector<double> a(n + 1);
  for (std::size_t i = 0; i <= n; ++i) a[i] = sign * p.coeff(i);

  for (double c : a)
    if (!(c > 0.0)) return Stability::NotHurwitz;

  bool ok = true;
  switch (n) {
    case 1:
    case 2: break;
    case 3: ok = a[2] * a[1] > a[3] * a[0]; break;
    case 4: ok = a[3] * a[2] > a[4] * a[1] && a[3] * a[2] * a[1] > a[4] * a[1] * a[1] + a[3] * a[3] * a[0]; break;
  }
  return ok ? Stability::Hurwitz : Stability::NotHurwitz;
}

inline bool is_hurwitz(const Mat& a) { return routh_hurwitz(char_poly(a)) == Stability::Hurwitz; }

}  // namespace balbench
