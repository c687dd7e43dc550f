#pragma once

// Nonlinear right-hand sides of the transformed system: spectral tangential
// derivatives, fourth-order finite differences in x_n.

#include <vector>

#include "platefsi/fft.hpp"
#include "platefsi/fields.hpp"

namespace platefsi {

/// d/dx_n of a volume field, column by column.
inline Field d_normal(const Grid& g, const XnOps& ops, const Field& f, int order = 1) {
  Field out(f.size());
  const std::size_t M = std::size_t(g.M);
  for (std::size_t t = 0; t < g.tangential_points(); ++t)
    for (int j = 0; j < g.M; ++j) out[t * M + j] = ops.apply(f.data() + t * M, 1, j, order);
  return out;
}

struct Nonlinearity {
  std::vector<Field> Fv{};
  Field G{};
  Field H_eta{};
};

namespace detail {

struct Derivs {
  std::vector<Field> dn{};                     ///< d_n v_c
  std::vector<Field> dnn{};                    ///< d_n^2 v_c
  std::vector<std::vector<Field>> dt{};        ///< d_{x_d} v_c
  std::vector<std::vector<Field>> dt_dn{};     ///< d_{x_d} d_n v_c
  Field dn_p{};
  std::vector<Field> grad_eta{};               ///< tangential grid
  Field lap_eta{};
};

inline Derivs derivatives(const Grid& g, const State& s, bool need_volume_tangential) {
  const XnOps ops(g.xn_nodes());
  Derivs d;
  for (int c = 0; c < g.n; ++c) {
    d.dn.push_back(d_normal(g, ops, s.v[c], 1));
    d.dnn.push_back(d_normal(g, ops, s.v[c], 2));
  }
  d.dn_p = d_normal(g, ops, s.p, 1);
  for (int k = 0; k < g.tdim(); ++k) d.grad_eta.push_back(d_tangential(g, s.eta, 1, k));
  d.lap_eta = laplacian_tangential(g, s.eta, 1);
  if (need_volume_tangential) {
    d.dt.resize(g.n);
    d.dt_dn.resize(g.n);
    for (int c = 0; c < g.n; ++c)
      for (int k = 0; k < g.tdim(); ++k) {
        d.dt[c].push_back(d_tangential(g, s.v[c], g.M, k));
        d.dt_dn[c].push_back(d_tangential(g, d.dn[c], g.M, k));
      }
  }
  return d;
}

}  // namespace detail

/// Evaluates F_v, G and H_eta together; they share most derivatives.
inline Nonlinearity eval_nonlinearity(const Grid& g, const State& s) {
  const detail::Derivs d = detail::derivatives(g, s, true);
  const std::size_t M = std::size_t(g.M);
  const int n = g.n, td = g.tdim();
  Nonlinearity out;
  out.Fv.assign(n, Field(g.size(), 0.0));
  out.G.assign(g.size(), 0.0);
  out.H_eta.assign(g.tangential_points(), 0.0);

  for (std::size_t t = 0; t < g.tangential_points(); ++t) {
    double ge2 = 0.0;
    for (int k = 0; k < td; ++k) ge2 += d.grad_eta[k][t] * d.grad_eta[k][t];
    const double coef = s.eta_t[t] - d.lap_eta[t];
    for (std::size_t j = 0; j < M; ++j) {
      const std::size_t i = t * M + j;
      double v_dot_grad_eta = 0.0;
      for (int k = 0; k < td; ++k) v_dot_grad_eta += s.v[k][i] * d.grad_eta[k][t];
      for (int c = 0; c < n; ++c) {
        double val = coef * d.dn[c][i];
        for (int k = 0; k < td; ++k) val -= 2.0 * d.grad_eta[k][t] * d.dt_dn[c][k][i];
        val += ge2 * d.dnn[c][i];
        double transport = s.v[n - 1][i] * d.dn[c][i];
        for (int k = 0; k < td; ++k) transport += s.v[k][i] * d.dt[c][k][i];
        val -= transport;
        val += v_dot_grad_eta * d.dn[c][i];
        if (c < td) val += d.grad_eta[c][t] * d.dn_p[i];
        out.Fv[c][i] = val;
      }
      double gval = 0.0;
      for (int k = 0; k < td; ++k) gval += d.grad_eta[k][t] * d.dn[k][i];
      out.G[i] = gval;
    }
    double h = 0.0;
    for (int k = 0; k < td; ++k) h -= d.grad_eta[k][t] * (d.dn[k][t * M] + d.dt[n - 1][k][t * M]);
    out.H_eta[t] = h;
  }
  return out;
}

inline std::vector<Field> eval_Fv(const Grid& g, const State& s) { return eval_nonlinearity(g, s).Fv; }
inline Field eval_G(const Grid& g, const State& s) { return eval_nonlinearity(g, s).G; }
inline Field eval_H_eta(const Grid& g, const State& s) { return eval_nonlinearity(g, s).H_eta; }

}  // namespace platefsi
