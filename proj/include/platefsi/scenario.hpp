#pragma once

// Problem data assembled from a RunConfig.
//
//   amplitude          plate forcing f_eta = a cos(2 pi x1 / L), constant in time
//                      (default 1e-3)
//   stream_amplitude   v0 = curl psi, psi = s sin(2 pi x1 / L) B((x_n - 2) / h)
//                      with a cubic B-spline B supported away from x_n = 0
//   eta0_amplitude     eta0 = a cos(2 pi x1 / L)
//   v0t_boundary       adds a cos(.) to v0_1 on the boundary row (violates C2)
//   v0n_boundary       adds a cos(.) to v0_n on the boundary row; eta1 keeps the
//                      unperturbed trace (violates C3 and C4)
//   g_perturbation     adds a cos(.) B(.) to g (violates C1)
//
// g is set to div v0 - grad' eta0 . d_n v0' (the discrete C1 form).

#include <cmath>
#include <numbers>

#include "platefsi/compat.hpp"
#include "platefsi/config.hpp"
#include "platefsi/fields.hpp"
#include "platefsi/fixed_point.hpp"

namespace platefsi {

inline ProblemData make_problem(const RunConfig& cfg) {
  const Grid g = cfg.grid();
  ProblemData d = ProblemData::zeros(g, cfg.plate());
  d.p_exponent = cfg.p_exponent();
  const std::size_t M = std::size_t(g.M);
  const auto y = g.xn_nodes();
  const auto x1 = g.tangential_coord(0);
  const double k = 2 * std::numbers::pi / g.L;

  const double amp = cfg.real("amplitude", 1e-3);
  for (std::size_t t = 0; t < x1.size(); ++t) d.f_eta[t] = amp * std::cos(k * x1[t]);

  const double eta0 = cfg.real("eta0_amplitude", 0.0);
  for (std::size_t t = 0; t < x1.size(); ++t) d.eta0[t] = eta0 * std::cos(k * x1[t]);

  const double bump_c = 2.0, bump_h = 0.5;
  auto bump = [&](double yy) { return cubic_bspline((yy - bump_c) / bump_h); };

  const double s = cfg.real("stream_amplitude", 0.0);
  if (s != 0.0) {
    if (y.size() < 5 || y[4] >= bump_c - 2 * bump_h)
      throw InvalidArgument("M", "grid too coarse near x_n = 0 for the stream-function data");
    Field psi(g.size());
    for (std::size_t t = 0; t < x1.size(); ++t)
      for (std::size_t j = 0; j < M; ++j) psi[t * M + j] = s * std::sin(k * x1[t]) * bump(y[j]);
    // v_1 = d_n psi, v_n = -d_1 psi; the operators commute, so div v = 0 to rounding.
    const detail::Quadrature q(g);
    d.v0[0] = q.sbp_dn(psi);
    const Field d1 = d_tangential(g, psi, g.M, 0);
    for (std::size_t i = 0; i < d1.size(); ++i) d.v0[g.n - 1][i] = -d1[i];
  }

  const double vt = cfg.real("v0t_boundary", 0.0);
  const double vn = cfg.real("v0n_boundary", 0.0);
  const double gp = cfg.real("g_perturbation", 0.0);
  for (std::size_t t = 0; t < g.tangential_points(); ++t) {
    const double c = std::cos(k * x1[t]);
    d.eta1[t] = d.v0[g.n - 1][t * M];
    d.v0[0][t * M] += vt * c;
    d.v0[g.n - 1][t * M] += vn * c;
  }

  const detail::Quadrature q(g);
  d.g = discrete_divergence(g, d.v0);
  for (int c = 0; c < g.tdim(); ++c) {
    const Field ge = d_tangential(g, d.eta0, 1, c);
    const Field dn = q.sbp_dn(d.v0[c]);
    for (std::size_t t = 0; t < g.tangential_points(); ++t)
      for (std::size_t j = 0; j < M; ++j) d.g[t * M + j] -= ge[t] * dn[t * M + j];
  }
  for (std::size_t t = 0; t < g.tangential_points(); ++t)
    for (std::size_t j = 0; j < M; ++j) d.g[t * M + j] += gp * std::cos(k * x1[t]) * bump(y[j]);
  return d;
}

inline FixedPointOptions make_fixed_point_options(const RunConfig& cfg) {
  FixedPointOptions o;
  o.max_iter = int(cfg.integer("max_iter", o.max_iter));
  o.tol = cfg.real("tol", o.tol);
  o.radius = cfg.real("radius", o.radius);
  if (o.max_iter < 1) throw InvalidArgument("max_iter", "must be positive");
  if (!(o.tol > 0.0)) throw InvalidArgument("tol", "must be positive");
  if (!(o.radius > 0.0)) throw InvalidArgument("radius", "must be positive");
  return o;
}

}  // namespace platefsi
