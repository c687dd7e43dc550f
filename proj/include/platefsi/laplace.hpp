#pragma once

// Reference solutions of the reduced single-mode problem by numerical
// Laplace inversion along a cotangent (Talbot-type) contour.

#include <cmath>
#include <cstdio>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "platefsi/errors.hpp"
#include "platefsi/freq_solver.hpp"
#include "platefsi/symbol.hpp"

namespace platefsi {

/// sum_i c_i t^{k_i} e^{-a_i t}; the Laplace transform is sum_i c_i k_i! / (s + a_i)^{k_i + 1}.
struct ExpPolyForcing {
  struct Term {
    double c = 0.0;
    int k = 0;
    double a = 0.0;
  };
  std::vector<Term> terms{};

  static ExpPolyForcing step(double c = 1.0) { return {{{c, 0, 0.0}}}; }
  static ExpPolyForcing ramp(double c = 1.0) { return {{{c, 1, 0.0}}}; }
  /// 1 - e^{-t}(1 + t): smooth, vanishes to second order at t = 0.
  static ExpPolyForcing smooth_step(double c = 1.0) { return {{{c, 0, 0.0}, {-c, 0, 1.0}, {-c, 1, 1.0}}}; }

  bool zero() const {
    for (const auto& t : terms)
      if (t.c != 0.0) return false;
    return true;
  }

  double operator()(double t) const {
    double s = 0.0;
    for (const auto& tm : terms) s += tm.c * std::pow(t, tm.k) * std::exp(-tm.a * t);
    return s;
  }

  cplx laplace(cplx s) const {
    cplx out{};
    for (const auto& tm : terms) out += tm.c * std::tgamma(tm.k + 1.0) / std::pow(s + tm.a, tm.k + 1);
    return out;
  }
};

struct ContourSpec {
  int nodes = 32;
  double shift = 0.0;  ///< contour translated by this real amount
  double self_convergence_tol = 1e-8;
};

namespace detail {
/// Weideman-Trefethen optimised cotangent contour, midpoint rule in theta.
inline double contour_sum(const std::function<cplx(cplx)>& F, double t, int N, double shift) {
  const double mu = N / t;
  const double h = 2 * std::numbers::pi / N;
  double acc = 0.0;
  for (int k = N / 2; k < N; ++k) {
    const double th = -std::numbers::pi + (k + 0.5) * h;  // th > 0
    const double a = 0.6407 * th;
    const double cot = std::cos(a) / std::sin(a);
    const cplx s = shift + mu * cplx{-0.6122 + 0.5017 * th * cot, 0.2645 * th};
    const cplx ds = mu * cplx{0.5017 * (cot - a / (std::sin(a) * std::sin(a))), 0.2645};
    acc += (std::exp(s * t) * F(s) * ds).imag();
  }
  return acc * h / std::numbers::pi;
}
}  // namespace detail

namespace detail {
inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}
}  // namespace detail

/// f(t) for t > 0 from its transform F. Throws ContourFailure when doubling
/// the node count changes the value by more than the tolerance.
inline double invert_laplace(const std::function<cplx(cplx)>& F, double t, const ContourSpec& spec = {}) {
  if (!(t > 0.0)) throw InvalidArgument("t", "must be positive");
  const double a = detail::contour_sum(F, t, spec.nodes, spec.shift);
  const double b = detail::contour_sum(F, t, 2 * spec.nodes, spec.shift);
  const double diff = std::abs(a - b);
  if (!std::isfinite(a) || !std::isfinite(b) || diff > spec.self_convergence_tol * std::max(1.0, std::abs(b)))
    throw ContourFailure("contour quadrature not self-convergent at t=" + detail::sci(t) + " (|f_N - f_2N| = " +
                         detail::sci(diff) + " with N=" + std::to_string(spec.nodes) +
                         "); increase the node count");
  return b;
}

/// Zeros of lambda -> R(lambda, z) off the branch cut. With u = omega^2 - z^2,
/// R = z u^2 + z (alpha z^4 + beta z^2) + gamma z^3 u - u omega (omega + z) is a
/// quartic in omega; its roots with Re omega > 0 give lambda = omega^2 - z^2.
inline std::vector<cplx> boundary_symbol_zeros(const PlateParams& pp, double z) {
  std::vector<cplx> out;
  if (!(z > 0.0)) return out;
  const double z2 = z * z, z3 = z2 * z, z5 = z3 * z2;
  // ascending coefficients in omega
  std::vector<double> c = {z5 + pp.alpha * z5 + pp.beta * z3 - pp.gamma * z5, z3,
                           z2 - 2 * z3 + pp.gamma * z3, -z, z - 1.0};
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * cmax) c.pop_back();
  const int deg = int(c.size()) - 1;
  if (deg < 1) return out;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    cplx w = es.eigenvalues()[i];
    // Newton polish on the polynomial
    for (int it = 0; it < 5; ++it) {
      cplx p{}, dp{};
      for (int k = deg; k >= 0; --k) {
        dp = dp * w + p;
        p = p * w + c[k];
      }
      if (dp == cplx{}) break;
      w -= p / dp;
    }
    if (w.real() > 1e-12 * std::max(1.0, std::abs(w))) out.push_back(w * w - z2);
  }
  return out;
}

/// dR/dlambda
inline cplx eval_R_derivative(const PlateParams& pp, cplx lambda, double z) {
  const cplx om = eval_omega(lambda, cplx{z}).value;
  return z * (2.0 * lambda + pp.gamma * z * z) - om * (om + z) - lambda * (2.0 * om + z) / (2.0 * om);
}

/// eta(t) of the reduced single-mode problem (zero initial data) at wave number
/// z for plate forcing f_eta(t) = forcing(t). Zeros of R, which may lie in the
/// right half plane, are taken out as explicit residues; the remainder only
/// has singularities on the negative real axis and is inverted on the contour.
inline std::vector<double> linear_inverse_laplace_reference(const PlateParams& pp, double z,
                                                            const ExpPolyForcing& forcing,
                                                            const std::vector<double>& times,
                                                            ContourSpec spec = {}) {
  pp.validate();
  if (!(z >= 0.0)) throw InvalidArgument("z", "must be non-negative");
  std::vector<double> out(times.size(), 0.0);
  if (forcing.zero() || z == 0.0) return out;
  const std::vector<cplx> poles = boundary_symbol_zeros(pp, z);
  std::vector<cplx> res;
  for (const cplx& p : poles) res.push_back(-z * forcing.laplace(p) / eval_R_derivative(pp, p, z));
  auto G = [&](cplx s) {
    cplx v = -z * forcing.laplace(s) / eval_R(pp, Freq::scalar(s, z)).value;
    for (std::size_t i = 0; i < poles.size(); ++i) v -= res[i] / (s - poles[i]);
    return v;
  };
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!(t > 0.0)) continue;
    cplx acc{};
    for (std::size_t k = 0; k < poles.size(); ++k) acc += res[k] * std::exp(poles[k] * t);
    out[i] = invert_laplace(G, t, spec) + acc.real();
  }
  return out;
}

}  // namespace platefsi
