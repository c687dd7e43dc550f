#pragma once

// Computational grid: periodic x' torus times a graded interval [0, X] in x_n.
// Fields are stored as flat arrays indexed [tangential index * M + j].

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "platefsi/errors.hpp"

namespace platefsi {

struct Grid {
  int n = 2;          ///< spatial dimension, 2 or 3
  double L = 2 * std::numbers::pi;
  int N = 32;         ///< modes per tangential direction
  double X = 16 * std::numbers::pi;
  int M = 64;
  double T = 0.5;
  double dt = 1.0 / 64;
  double grading = 6.0;  ///< exponential grading strength toward x_n = 0

  void validate() const {
    if (n != 2 && n != 3) throw InvalidArgument("n", "must be 2 or 3");
    if (!(L > 0.0)) throw InvalidArgument("L", "must be positive");
    if (N < 8 || (N & (N - 1)) != 0) throw InvalidArgument("N", "must be a power of two >= 8");
    if (M < 16) throw InvalidArgument("M", "must be at least 16");
    if (!(X >= 4.0 * L)) throw InvalidArgument("X", "must be at least 4 L");
    if (!(dt > 0.0)) throw InvalidArgument("dt", "must be positive");
    if (!(T >= 0.0)) throw InvalidArgument("T", "must be non-negative");
    const double steps = T / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
      throw InvalidArgument("dt", "T/dt must be an integer");
    if (!(grading >= 0.0)) throw InvalidArgument("grading", "must be non-negative");
  }

  int tdim() const { return n - 1; }
  std::size_t tangential_points() const { return n == 2 ? std::size_t(N) : std::size_t(N) * N; }
  std::size_t size() const { return tangential_points() * std::size_t(M); }
  int steps() const { return int(std::lround(T / dt)); }
  double dx() const { return L / N; }

  /// Graded nodes y_j = X (e^{k j/(M-1)} - 1)/(e^k - 1).
  std::vector<double> xn_nodes() const {
    std::vector<double> y(M);
    for (int j = 0; j < M; ++j) {
      const double s = double(j) / (M - 1);
      y[j] = grading > 1e-12 ? X * std::expm1(grading * s) / std::expm1(grading) : X * s;
    }
    y.back() = X;
    return y;
  }

  /// Tangential multi-index of flat tangential index t.
  std::array<int, 2> tindex(std::size_t t) const {
    if (n == 2) return {int(t), 0};
    return {int(t / N), int(t % N)};
  }

  std::vector<double> tangential_coord(int dir) const {
    std::vector<double> x(tangential_points());
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = tindex(t)[dir] * dx();
    return x;
  }

  /// Signed integer wave number of FFT index k; the Nyquist index maps to 0 and is flagged.
  int signed_mode(int k) const { return k <= N / 2 ? k : k - N; }
  bool nyquist(int k) const { return k == N / 2; }
  double wavenumber(int k) const { return nyquist(k) ? 0.0 : 2 * std::numbers::pi / L * signed_mode(k); }
};

/// Fornberg's algorithm: weights of derivatives 0..m at x0 from nodes xs.
inline std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& xs, int m) {
  const int n = int(xs.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Five-point stencil per node: start index and weights for d/dx_n and d^2/dx_n^2.
struct Stencil {
  int start = 0;
  std::array<double, 5> d1{};
  std::array<double, 5> d2{};
};

struct XnOps {
  std::vector<double> y{};
  std::vector<Stencil> st{};
  std::vector<double> trap{};  ///< trapezoid weights

  explicit XnOps(std::vector<double> nodes) : y(std::move(nodes)) {
    const int M = int(y.size());
    st.resize(M);
    for (int j = 0; j < M; ++j) {
      const int s = std::clamp(j - 2, 0, M - 5);
      std::vector<double> xs(y.begin() + s, y.begin() + s + 5);
      const auto w = fornberg_weights(y[j], xs, 2);
      st[j].start = s;
      for (int k = 0; k < 5; ++k) {
        st[j].d1[k] = w[1][k];
        st[j].d2[k] = w[2][k];
      }
    }
    trap.assign(M, 0.0);
    for (int j = 0; j + 1 < M; ++j) {
      const double h = y[j + 1] - y[j];
      trap[j] += h / 2;
      trap[j + 1] += h / 2;
    }
  }

  int size() const { return int(y.size()); }

  /// Apply d/dx_n (order 1) or d^2/dx_n^2 (order 2) to a column with stride.
  template <class T>
  T apply(const T* col, std::size_t stride, int j, int order) const {
    const Stencil& s = st[j];
    const auto& w = order == 1 ? s.d1 : s.d2;
    T acc{};
    for (int k = 0; k < 5; ++k) acc += w[k] * col[std::size_t(s.start + k) * stride];
    return acc;
  }

  /// Summation-by-parts first derivative: Q = W D with Q + Q^T = diag(-1, 0, ..., 0, 1).
  template <class T>
  T sbp_d1(const T* col, int j) const {
    const int M = size();
    if (j == 0) return (col[1] - col[0]) / (y[1] - y[0]);
    if (j == M - 1) return (col[M - 1] - col[M - 2]) / (y[M - 1] - y[M - 2]);
    return (col[j + 1] - col[j - 1]) / (y[j + 1] - y[j - 1]);
  }

  /// Linear interpolation at x (linear extrapolation outside [0, X]).
  template <class T>
  T interpolate(const T* col, double x) const {
    const int M = size();
    int j = int(std::upper_bound(y.begin(), y.end(), x) - y.begin()) - 1;
    j = std::clamp(j, 0, M - 2);
    const double t = (x - y[j]) / (y[j + 1] - y[j]);
    return (1.0 - t) * col[j] + t * col[j + 1];
  }
};

}  // namespace platefsi
