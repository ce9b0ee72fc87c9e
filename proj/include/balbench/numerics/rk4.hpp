#pragma once

#include <array>
#include <cstddef>

namespace balbench {

template <std::size_t N>
using StateVec = std::array<double, N>;

namespace detail {

template <std::size_t N>
constexpr StateVec<N> axpy(const StateVec<N>& x, double h, const StateVec<N>& k) {
  StateVec<N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = x[i] + h * k[i];
  return out;
}

}  // namespace detail

/// One classical Runge–Kutta step of x' = f(x, u) with u held over the step.
///
/// `f` is any callable `StateVec<N>(const StateVec<N>&, double u)`. A
/// non-finite result is returned as-is; callers decide what divergence means.
template <std::size_t N, class Deriv>
StateVec<N> rk4_step(Deriv&& f, const StateVec<N>& x, double u, double dt) {
  const StateVec<N> k1 = f(x, u);
  const StateVec<N> k2 = f(detail::axpy(x, 0.5 * dt, k1), u);
  const StateVec<N> k3 = f(detail::axpy(x, 0.5 * dt, k2), u);
  const StateVec<N> k4 = f(detail::axpy(x, dt, k3), u);
  StateVec<N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace balbench
