#pragma once

// Small-data fixed point w -> L^{-1}(N(w) + f) for the transformed system.
// Each application of L^{-1} runs the implicit Euler stepper over [0, T] with
// the nonlinearity evaluated on the previous iterate at the same time level.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "platefsi/compat.hpp"
#include "platefsi/linear_step.hpp"
#include "platefsi/nonlinearities.hpp"
#include "platefsi/sobolev_index.hpp"

namespace platefsi {

using Trajectory = std::vector<State>;  ///< states at t_k = k dt, k = 0..steps

struct FixedPointOptions {
  int max_iter = 30;
  double tol = 1e-8;           ///< stop when |w_{k+1} - w_k| <= tol max(|w_{k+1}|, 1e-300)
  double radius = std::numeric_limits<double>::infinity();  ///< ball radius r
  double kappa = std::numeric_limits<double>::infinity();   ///< bound on the data norm
  double stall_ratio = 0.95;
  int stall_count = 3;
  bool waive_compatibility = false;
};

struct FixedPointResult {
  Trajectory trajectory{};
  std::vector<double> contraction_ratios{};
  std::vector<double> differences{};
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  ///< normalised residual of the discrete transformed system
  std::vector<double> step_residuals{};
};

/// Sup of v, p, eta, eta_t and of the tangential derivatives of eta up to order 4.
inline double state_norm(const Grid& g, const State& s) {
  double m = std::max({sup_norm(s.v), sup_norm(s.p), sup_norm(s.eta), sup_norm(s.eta_t)});
  for (int k = 0; k < g.tdim(); ++k)
    for (int o = 1; o <= 4; ++o) m = std::max(m, sup_norm(d_tangential(g, s.eta, 1, k, o)));
  if (g.n == 3)
    for (int o1 = 1; o1 <= 3; ++o1)
      for (int o2 = 1; o1 + o2 <= 4; ++o2) m = std::max(m, sup_norm(spectral_derivative(g, s.eta, 1, {o1, o2})));
  return m;
}

inline State state_difference(const State& a, const State& b) {
  State d;
  for (std::size_t c = 0; c < a.v.size(); ++c) d.v.push_back(axpy(-1.0, b.v[c], a.v[c]));
  d.p = axpy(-1.0, b.p, a.p);
  d.eta = axpy(-1.0, b.eta, a.eta);
  d.eta_t = axpy(-1.0, b.eta_t, a.eta_t);
  return d;
}

inline double trajectory_norm(const Grid& g, const Trajectory& w) {
  double m = 0.0;
  for (const auto& s : w) m = std::max(m, state_norm(g, s));
  return m;
}

inline double trajectory_distance(const Grid& g, const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, state_norm(g, state_difference(a[k], b[k])));
  return m;
}

/// Discrete sup of f_v, g, f_eta, v0, eta0, eta1.
inline double data_norm(const ProblemData& d) {
  return std::max({sup_norm(d.f_v), sup_norm(d.g), sup_norm(d.f_eta), sup_norm(d.v0), sup_norm(d.eta0),
                   sup_norm(d.eta1)});
}

inline State initial_state(const ProblemData& d) {
  State s = State::zeros(d.grid);
  s.v = d.v0;
  s.eta = d.eta0;
  s.eta_t = d.eta1;
  return s;
}

/// Right-hand side of step k -> k+1: data at t_{k+1} plus N(w_prev(t_{k+1})).
inline StepRHS step_rhs(const ProblemData& d, const State* prev, double t) {
  const double s = d.profile(t);
  StepRHS rhs = StepRHS::zeros(d.grid);
  for (int c = 0; c < d.grid.n; ++c)
    for (std::size_t i = 0; i < rhs.f_v[c].size(); ++i) rhs.f_v[c][i] = s * d.f_v[c][i];
  for (std::size_t i = 0; i < rhs.g.size(); ++i) rhs.g[i] = s * d.g[i];
  for (std::size_t i = 0; i < rhs.f_eta.size(); ++i) rhs.f_eta[i] = s * d.f_eta[i];
  if (prev) {
    const Nonlinearity nl = eval_nonlinearity(d.grid, *prev);
    for (int c = 0; c < d.grid.n; ++c) rhs.f_v[c] = axpy(1.0, nl.Fv[c], rhs.f_v[c]);
    rhs.g = axpy(1.0, nl.G, rhs.g);
    rhs.f_eta = axpy(1.0, nl.H_eta, rhs.f_eta);
  }
  return rhs;
}

/// One application of K. `prev` may be empty (N = 0).
inline Trajectory apply_K(LinearStepper& stepper, const ProblemData& d, const Trajectory& prev) {
  const Grid& g = d.grid;
  Trajectory out;
  out.push_back(initial_state(d));
  SpectralState sp = stepper.to_spectral(out.back());
  for (int k = 0; k < g.steps(); ++k) {
    const double t = (k + 1) * g.dt;
    const StepRHS rhs = step_rhs(d, prev.empty() ? nullptr : &prev[k + 1], t);
    sp = stepper.step_spectral(sp, stepper.forcing_to_spectral(rhs));
    out.push_back(stepper.to_physical(sp));
  }
  return out;
}

/// Residual of L_h w - N(w) - f over all steps, normalised per mode by the
/// size of the terms.
inline std::vector<double> tfsi_residuals(LinearStepper& stepper, const ProblemData& d, const Trajectory& w) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    const double t = double(k + 1) * d.grid.dt;
    const StepRHS rhs = step_rhs(d, &w[k + 1], t);
    const auto rep = stepper.step_residual(stepper.to_spectral(w[k]), stepper.to_spectral(w[k + 1]),
                                           stepper.forcing_to_spectral(rhs));
    out.push_back(rep.residual);
  }
  return out;
}

inline FixedPointResult fixed_point_solve(const ProblemData& data, const FixedPointOptions& opt = {}) {
  data.validate();
  const Grid& g = data.grid;
  if (data.p_exponent < threshold_p(g.n).quadratic)
    throw InvalidArgument("p", "must be at least (n+2)/3 = " + to_string(threshold_p(g.n).quadratic));
  if (opt.max_iter < 1) throw InvalidArgument("max_iter", "must be positive");
  if (!(opt.tol > 0.0)) throw InvalidArgument("tol", "must be positive");
  if (data_norm(data) > opt.kappa) throw InvalidArgument("kappa", "data norm exceeds kappa");
  if (!opt.waive_compatibility) {
    const CompatReport cr = check_compatibility(data);
    if (!cr.pass()) {
      std::string msg = "compatibility conditions violated:";
      for (const auto& it : cr.items)
        if (it.status == CompatStatus::Fail) msg += " " + it.name;
      throw InvalidArgument("data", msg);
    }
  }

  LinearStepper stepper(g, data.plate);
  FixedPointResult res;
  Trajectory w;  // w_0 = 0
  int stalled = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    Trajectory next = apply_K(stepper, data, w);
    const double nn = trajectory_norm(g, next);
    const double diff = w.empty() ? nn : trajectory_distance(g, next, w);
    res.iterations = it;
    if (!std::isfinite(nn) || !std::isfinite(diff))
      throw NoContraction("iterate " + std::to_string(it) + " is not finite; reduce the data size");
    if (nn > opt.radius)
      throw NoContraction("iterate " + std::to_string(it) + " left the ball of radius " + std::to_string(opt.radius));
    if (!res.differences.empty() && res.differences.back() > 0.0) {
      const double ratio = diff / res.differences.back();
      res.contraction_ratios.push_back(ratio);
      stalled = ratio > opt.stall_ratio ? stalled + 1 : 0;
      if (stalled >= opt.stall_count)
        throw NoContraction("contraction ratio above " + std::to_string(opt.stall_ratio) + " for " +
                            std::to_string(opt.stall_count) + " consecutive iterations (last " +
                            std::to_string(ratio) + "); reduce the data size");
    }
    res.differences.push_back(diff);
    w = std::move(next);
    if (diff <= opt.tol * std::max(nn, 1e-300) || diff == 0.0) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged)
    throw NoContraction("no convergence within max_iter = " + std::to_string(opt.max_iter) + " iterations");
  res.step_residuals = tfsi_residuals(stepper, data, w);
  for (double r : res.step_residuals) res.residual = std::max(res.residual, r);
  res.trajectory = std::move(w);
  return res;
}

}  // namespace platefsi
