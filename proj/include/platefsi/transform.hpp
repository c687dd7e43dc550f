#pragma once

// Graph transform theta(t, x', x_n) = (t, x', x_n + eta(t, x')) flattening the
// fluid domain, and the unit normal of the plate graph.

#include <array>
#include <cmath>
#include <string>

#include "platefsi/fft.hpp"
#include "platefsi/fields.hpp"

namespace platefsi {

namespace detail {
inline void check_shift(const Grid& g, const Field& eta) {
  const double s = sup_norm(eta);
  if (s > g.X / 4)
    throw ShiftOutOfRange("|eta|_inf = " + std::to_string(s) + " exceeds X/4 = " + std::to_string(g.X / 4));
}

inline Field shift_columns(const Grid& g, const Field& eta, const Field& f, double sign) {
  check_shift(g, eta);
  const XnOps ops(g.xn_nodes());
  Field out(f.size());
  const std::size_t M = std::size_t(g.M);
  for (std::size_t t = 0; t < g.tangential_points(); ++t) {
    const double* col = f.data() + t * M;
    for (std::size_t j = 0; j < M; ++j) out[t * M + j] = ops.interpolate(col, ops.y[j] + sign * eta[t]);
  }
  return out;
}
}  // namespace detail

/// v(x', x_n) = u(x', x_n + eta(x'))
inline Field transform_pullback(const Grid& g, const Field& eta, const Field& u) {
  return detail::shift_columns(g, eta, u, +1.0);
}

/// u(x', y) = v(x', y - eta(x'))
inline Field transform_pushforward(const Grid& g, const Field& eta, const Field& v) {
  return detail::shift_columns(g, eta, v, -1.0);
}

using Normal = std::array<double, 3>;

/// nu = (grad' eta, -1) / sqrt(1 + |grad' eta|^2); unused components are zero.
inline Normal normal_from_gradient(const std::array<double, 2>& grad, int n) {
  const double g2 = grad[0] * grad[0] + (n == 3 ? grad[1] * grad[1] : 0.0);
  const double s = 1.0 / std::sqrt(1.0 + g2);
  if (n == 2) return {grad[0] * s, -s, 0.0};
  return {grad[0] * s, grad[1] * s, -s};
}

/// Normal field of a periodic plate displacement (spectral gradient).
inline std::vector<Normal> normal_vector(const Grid& g, const Field& eta) {
  const Field d0 = d_tangential(g, eta, 1, 0);
  const Field d1 = g.n == 3 ? d_tangential(g, eta, 1, 1) : Field(eta.size(), 0.0);
  std::vector<Normal> out(eta.size());
  for (std::size_t t = 0; t < eta.size(); ++t) out[t] = normal_from_gradient({d0[t], d1[t]}, g.n);
  return out;
}

}  // namespace platefsi
