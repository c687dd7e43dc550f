#pragma once

// Fourier-Laplace solution operator of the reduced linear problem: the plate
// datum f_eta determines eta, the boundary traces and closed-form x_n-profiles
// of velocity and pressure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "platefsi/errors.hpp"
#include "platefsi/newton_polygon.hpp"
#include "platefsi/symbol.hpp"

namespace platefsi {

inline constexpr double kResonanceEpsilon = 1e-10;
inline constexpr double kConfluenceThreshold = 1e-8;
inline constexpr double kProfileResidualTolerance = 1e-8;

namespace detail {
inline NLParts checked_R(const PlateParams& pp, const Freq& f) {
  const NLParts r = eval_R_parts(pp, f);
  if (std::abs(r.total()) < kResonanceEpsilon * r.scale())
    throw NearResonance("boundary symbol below resonance threshold at lambda=" + std::to_string(f.lambda.real()) +
                        (f.lambda.imag() < 0 ? "" : "+") + std::to_string(f.lambda.imag()) +
                        "i, z=" + std::to_string(f.z));
  return r;
}
}  // namespace detail

/// eta_hat = -z f_eta_hat / R(lambda, z)  (= -z^2 f_eta_hat / (z R))
inline cplx solve_eta(const PlateParams& pp, const Freq& f, cplx f_eta_hat) {
  if (f_eta_hat == cplx{}) return {};
  const NLParts r = detail::checked_R(pp, f);
  return -f.z * f_eta_hat / r.total();
}

struct TraceSolution {
  cplx eta_hat{};
  cplx p0_hat{};
  std::vector<cplx> phi_prime_hat{};  ///< tangential velocity trace coefficient
  cplx phi_n_hat{};
  bool degenerate_tangential = false;  ///< z = 0; p0 is the analytic limit
};

/// Traces for tangential dimension `tangential_dim` (= n - 1).
inline TraceSolution solve_traces(const PlateParams& pp, const Freq& f, cplx f_eta_hat,
                                  std::size_t tangential_dim = 1) {
  TraceSolution ts;
  const std::vector<double> xi = f.xi_or_default(tangential_dim);
  ts.phi_prime_hat.assign(tangential_dim, cplx{});
  ts.degenerate_tangential = f.z == 0.0;
  ts.eta_hat = solve_eta(pp, f, f_eta_hat);
  if (f_eta_hat == cplx{}) return ts;

  const cplx omega = eval_omega(f).value;
  const NLParts r = detail::checked_R(pp, f);
  ts.phi_n_hat = f.lambda * ts.eta_hat;
  // p0 = lambda omega (omega + z) eta / z with eta / z = -f / R; finite at z = 0.
  ts.p0_hat = r.fluid * f_eta_hat / r.total();
  const cplx denom = omega * (omega + f.z);
  for (std::size_t j = 0; j < tangential_dim; ++j)
    ts.phi_prime_hat[j] = cplx{0.0, xi[j]} * ts.p0_hat / denom;
  return ts;
}

/// a e^{-z x} + b e^{-omega x} + c D(x), D(x) = (e^{-z x} - e^{-omega x}) / (omega - z).
/// The family is closed under d/dx: D' = -z D + e^{-omega x}.
struct ExpCombo {
  cplx a{}, b{}, c{};

  ExpCombo derivative(double z, cplx omega) const { return {-z * a, -omega * b + c, -z * c}; }
  ExpCombo operator*(cplx s) const { return {a * s, b * s, c * s}; }
  ExpCombo operator+(const ExpCombo& o) const { return {a + o.a, b + o.b, c + o.c}; }
};

/// (1 - e^{-u}) / u, stable near u = 0.
inline cplx one_minus_exp_over(cplx u) {
  if (std::abs(u) < 1e-4) return 1.0 - u / 2.0 + u * u / 6.0 - u * u * u / 24.0;
  return (1.0 - std::exp(-u)) / u;
}

struct FieldProfile {
  double z = 0.0;
  cplx omega{};
  std::vector<double> xi{};
  std::vector<ExpCombo> v_tangential{};
  ExpCombo v_normal{};
  ExpCombo pressure{};
  bool confluent = false;  ///< |omega - z| < 1e-8 |omega|

  cplx basis_D(double x) const {
    if (confluent) return x * std::exp(-omega * x);
    const cplx delta = omega - z;
    const cplx u = delta * x;
    if (std::abs(u) < 1e-4) return x * std::exp(-z * x) * one_minus_exp_over(u);
    return (std::exp(-z * x) - std::exp(-omega * x)) / delta;
  }

  cplx eval(const ExpCombo& e, double x) const {
    return e.a * std::exp(-z * x) + e.b * std::exp(-omega * x) + e.c * basis_D(x);
  }

  ExpCombo derivative(const ExpCombo& e, int order = 1) const {
    ExpCombo d = e;
    for (int k = 0; k < order; ++k) d = d.derivative(z, omega);
    return d;
  }
};

/// Closed form of the kernel ansatz: the integrals of k_+- against e^{-z s}
/// evaluate to combinations of e^{-z x}, e^{-omega x} and D(x).
inline FieldProfile build_field_profile(const PlateParams& pp, const Freq& f,
                                        const TraceSolution& ts) {
  (void)pp;
  const std::size_t dim = ts.phi_prime_hat.size();
  FieldProfile prof;
  prof.z = f.z;
  prof.xi = f.xi_or_default(dim);
  prof.omega = eval_omega(f).value;
  if (!(prof.omega.real() > 0.0)) throw InvalidArgument("lambda", "requires Re omega > 0");
  prof.confluent = std::abs(prof.omega - f.z) < kConfluenceThreshold * std::abs(prof.omega);

  const cplx om = prof.omega;
  const double z = f.z;
  const cplx inv_2w = 1.0 / (2.0 * om);
  const cplx inv_wz = 1.0 / (om + z);

  // I_+ = (D + (e^{-z x} + e^{-w x}) / (w + z)) / 2w,  I_- with a minus sign.
  const ExpCombo i_plus{inv_2w * inv_wz, inv_2w * inv_wz, inv_2w};
  const ExpCombo i_minus{inv_2w * inv_wz, -inv_2w * inv_wz, inv_2w};

  prof.v_tangential.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const cplx src = -cplx{0.0, prof.xi[j]} * ts.p0_hat;  // -i xi_j p0
    prof.v_tangential[j] = i_plus * src + ExpCombo{0.0, ts.phi_prime_hat[j], 0.0};
  }
  // -d_n p = z p0 e^{-z s}
  prof.v_normal = i_minus * (z * ts.p0_hat) + ExpCombo{0.0, ts.phi_n_hat, 0.0};
  prof.pressure = ExpCombo{ts.p0_hat, 0.0, 0.0};
  return prof;
}

struct ResidualReport {
  double momentum = 0.0;          ///< omega^2 v - v'' + (i xi', d_n) p
  double divergence = 0.0;        ///< i xi' . v' + d_n v^n
  double tangential_bc = 0.0;     ///< v'(0)
  double kinematic_bc = 0.0;      ///< lambda eta - v^n(0)
  double normal_derivative = 0.0; ///< d_n v^n(0)
  double plate_bc = 0.0;          ///< p(0) - m eta - f_eta
  bool pass = false;

  double max() const {
    return std::max({momentum, divergence, tangential_bc, kinematic_bc, normal_derivative, plate_bc});
  }
};

namespace detail {
inline double ratio(double num, double den) { return den > 0.0 ? num / den : (num > 0.0 ? 1.0 : 0.0); }
}  // namespace detail

/// 64-point logarithmic grid in x_n on which profile residuals are sampled.
inline std::vector<double> residual_grid(const FieldProfile& prof) {
  const double len = 1.0 / std::max(std::abs(prof.omega), 1e-12);
  return log_space(1e-3 * len, 1e2 * len, 64);
}

/// Residuals are normalised by the sum of moduli of the terms in each
/// equation (sup over the grid for the interior equations).
inline ResidualReport residual_check(const PlateParams& pp, const Freq& f, const FieldProfile& prof,
                                     cplx f_eta_hat, double tolerance = kProfileResidualTolerance) {
  ResidualReport rep;
  const std::size_t dim = prof.v_tangential.size();
  const cplx om2 = prof.omega * prof.omega;
  const ExpCombo dp = prof.derivative(prof.pressure);

  double mom_num = 0.0, mom_den = 0.0, div_num = 0.0, div_den = 0.0;
  for (double x : residual_grid(prof)) {
    const cplx p = prof.eval(prof.pressure, x);
    const cplx dpx = prof.eval(dp, x);
    cplx div{};
    double div_s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const cplx v = prof.eval(prof.v_tangential[j], x);
      const cplx v2 = prof.eval(prof.derivative(prof.v_tangential[j], 2), x);
      const cplx grad = cplx{0.0, prof.xi[j]} * p;
      mom_num = std::max(mom_num, std::abs(om2 * v - v2 + grad));
      mom_den = std::max(mom_den, std::abs(om2 * v) + std::abs(v2) + std::abs(grad));
      const cplx t = cplx{0.0, prof.xi[j]} * v;
      div += t;
      div_s += std::abs(t);
    }
    const cplx vn = prof.eval(prof.v_normal, x);
    const cplx vn1 = prof.eval(prof.derivative(prof.v_normal), x);
    const cplx vn2 = prof.eval(prof.derivative(prof.v_normal, 2), x);
    mom_num = std::max(mom_num, std::abs(om2 * vn - vn2 + dpx));
    mom_den = std::max(mom_den, std::abs(om2 * vn) + std::abs(vn2) + std::abs(dpx));
    div_num = std::max(div_num, std::abs(div + vn1));
    div_den = std::max(div_den, div_s + std::abs(vn1));
  }
  rep.momentum = detail::ratio(mom_num, mom_den);
  rep.divergence = detail::ratio(div_num, div_den);

  // Boundary conditions at x_n = 0, where D(0) = 0.
  double tan_num = 0.0, tan_den = 0.0;
  for (const auto& e : prof.v_tangential) {
    tan_num = std::max(tan_num, std::abs(e.a + e.b));
    tan_den = std::max(tan_den, std::abs(e.a) + std::abs(e.b));
  }
  rep.tangential_bc = detail::ratio(tan_num, tan_den);

  const cplx eta = solve_eta(pp, f, f_eta_hat);
  const cplx vn0 = prof.v_normal.a + prof.v_normal.b;
  rep.kinematic_bc = detail::ratio(std::abs(f.lambda * eta - vn0), std::abs(f.lambda * eta) + std::abs(vn0));

  const ExpCombo dvn = prof.derivative(prof.v_normal);
  rep.normal_derivative = detail::ratio(std::abs(dvn.a + dvn.b),
                                        std::abs(dvn.a) + std::abs(dvn.b) + std::abs(prof.v_normal.c));

  const cplx p0 = prof.pressure.a;
  const cplx m_eta = eval_m(pp, f) * eta;
  rep.plate_bc = detail::ratio(std::abs(p0 - m_eta - f_eta_hat),
                               std::abs(p0) + std::abs(m_eta) + std::abs(f_eta_hat));
  rep.pass = rep.max() <= tolerance;
  return rep;
}

/// Zero datum must give the zero solution.
inline bool uniqueness_probe(const PlateParams& pp, const Freq& f, std::size_t tangential_dim = 1) {
  const TraceSolution ts = solve_traces(pp, f, cplx{}, tangential_dim);
  if (ts.eta_hat != cplx{} || ts.p0_hat != cplx{} || ts.phi_n_hat != cplx{}) return false;
  for (const cplx& c : ts.phi_prime_hat)
    if (c != cplx{}) return false;
  if (!(eval_omega(f).value.real() > 0.0)) return true;  // profile undefined; traces already zero
  const FieldProfile prof = build_field_profile(pp, f, ts);
  for (double x : {0.0, 0.1, 1.0, 10.0}) {
    if (prof.eval(prof.pressure, x) != cplx{} || prof.eval(prof.v_normal, x) != cplx{}) return false;
    for (const auto& e : prof.v_tangential)
      if (prof.eval(e, x) != cplx{}) return false;
  }
  return true;
}

}  // namespace platefsi
