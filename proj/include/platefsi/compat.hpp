#pragma once

// Discrete compatibility conditions between initial data and right-hand sides.
// Divergence and gradient use a summation-by-parts pair in x_n (trapezoid
// weights) and spectral derivatives in x', so discrete integration by parts
// holds to rounding.

#include <cmath>
#include <string>
#include <vector>

#include "platefsi/fft.hpp"
#include "platefsi/fields.hpp"

namespace platefsi {

enum class CompatStatus { Pass, Fail, NotRequired };

inline const char* to_string(CompatStatus s) {
  switch (s) {
    case CompatStatus::Pass: return "PASS";
    case CompatStatus::Fail: return "FAIL";
    case CompatStatus::NotRequired: return "NOT_REQUIRED";
  }
  return "?";
}

struct CompatItem {
  std::string name{};
  CompatStatus status = CompatStatus::Pass;
  double violation = 0.0;  ///< measured defect (relative for C1/C4, absolute sup for C2/C3)
  std::string detail{};
};

struct CompatReport {
  std::vector<CompatItem> items{};  ///< C1, C2, C3, C4 in this order

  bool pass() const {
    for (const auto& i : items)
      if (i.status == CompatStatus::Fail) return false;
    return true;
  }
  const CompatItem& operator[](std::size_t k) const { return items.at(k); }
};

struct CompatTolerances {
  double weak = 1e-8;       ///< C1, relative to the size of the terms
  double pointwise = 1e-10; ///< C2, C3
  double ibp = 1e-10;       ///< C4
};

/// Uniform cubic B-spline with unit knot spacing centred at 0.
inline double cubic_bspline(double x) {
  const double a = std::abs(x);
  if (a >= 2.0) return 0.0;
  if (a >= 1.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
  return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
}

inline double cubic_bspline_d(double x) {
  const double a = std::abs(x), s = x < 0 ? -1.0 : 1.0;
  if (a >= 2.0) return 0.0;
  if (a >= 1.0) return -0.5 * s * (2.0 - a) * (2.0 - a);
  return s * (-2.0 * a + 1.5 * a * a);
}

/// Fixed test-function family: 4 periodic splines per tangential direction
/// times 8 splines in x_n of spacing X/16 centred at -h, 0, ..., 6h (the first
/// three do not vanish at x_n = 0; all vanish near x_n = X).
struct TestFamily {
  std::vector<Field> phi{};  ///< volume samples
  static constexpr int kTangential = 4;
  static constexpr int kNormal = 8;

  explicit TestFamily(const Grid& g) {
    const auto y = g.xn_nodes();
    const double h = g.X / 16;
    const double ht = g.L / kTangential;
    auto periodic = [&](double x, int a) {
      double s = 0.0;
      for (int w = -2; w <= 2; ++w) s += cubic_bspline((x - a * ht + w * g.L) / ht);
      return s;
    };
    const int na = kTangential, nb = g.n == 3 ? kTangential : 1;
    const std::size_t M = std::size_t(g.M);
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b)
        for (int c = 0; c < kNormal; ++c) {
          Field f(g.size());
          for (std::size_t t = 0; t < g.tangential_points(); ++t) {
            const auto idx = g.tindex(t);
            double tv = periodic(idx[0] * g.dx(), a);
            if (g.n == 3) tv *= periodic(idx[1] * g.dx(), b);
            for (std::size_t j = 0; j < M; ++j) f[t * M + j] = tv * cubic_bspline((y[j] - (c - 1) * h) / h);
          }
          phi.push_back(std::move(f));
        }
  }
};

namespace detail {

struct Quadrature {
  const Grid& g;
  XnOps ops;
  double cell;
  explicit Quadrature(const Grid& grid) : g(grid), ops(grid.xn_nodes()), cell(std::pow(grid.dx(), grid.tdim())) {}

  double volume(const Field& a, const Field& b) const {
    const std::size_t M = std::size_t(g.M);
    double s = 0.0;
    for (std::size_t t = 0; t < g.tangential_points(); ++t)
      for (std::size_t j = 0; j < M; ++j) s += a[t * M + j] * b[t * M + j] * ops.trap[j];
    return s * cell;
  }
  double boundary(const Field& bd, const Field& vol) const {
    double s = 0.0;
    for (std::size_t t = 0; t < g.tangential_points(); ++t) s += bd[t] * vol[t * std::size_t(g.M)];
    return s * cell;
  }
  Field sbp_dn(const Field& f) const {
    const std::size_t M = std::size_t(g.M);
    Field out(f.size());
    for (std::size_t t = 0; t < g.tangential_points(); ++t)
      for (int j = 0; j < g.M; ++j) out[t * M + j] = ops.sbp_d1(f.data() + t * M, j);
    return out;
  }
};

inline Field trace0(const Grid& g, const Field& f) {
  Field out(g.tangential_points());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = f[t * std::size_t(g.M)];
  return out;
}

inline double l2(const Field& f) {
  double s = 0.0;
  for (double x : f) s += x * x;
  return std::sqrt(s);
}

}  // namespace detail

/// Discrete divergence used by the compatibility checks.
inline Field discrete_divergence(const Grid& g, const std::vector<Field>& v) {
  const detail::Quadrature q(g);
  Field div = q.sbp_dn(v[g.n - 1]);
  for (int k = 0; k < g.tdim(); ++k) {
    const Field d = d_tangential(g, v[k], g.M, k);
    for (std::size_t i = 0; i < div.size(); ++i) div[i] += d[i];
  }
  return div;
}

inline CompatReport check_compatibility(const ProblemData& data, const CompatTolerances& tol = {}) {
  CompatReport rep;
  const Grid& g = data.grid;
  try {
    data.validate();
  } catch (const Error& e) {
    for (const char* nm : {"C1", "C2", "C3", "C4"}) rep.items.push_back({nm, CompatStatus::Fail, INFINITY, e.what()});
    return rep;
  }
  const detail::Quadrature q(g);
  const TestFamily fam(g);
  const int td = g.tdim();
  const double g0s = data.profile(0.0);
  Field g0 = data.g;
  for (double& x : g0) x *= g0s;

  // (C1) nonlinear form: div v0 - grad' eta0 . d_n v0' - g0 = 0 weakly.
  {
    const Field div = discrete_divergence(g, data.v0);
    Field r(div), mag(div.size(), 0.0);
    const std::size_t M = std::size_t(g.M);
    for (int k = 0; k < td; ++k) {
      const Field ge = d_tangential(g, data.eta0, 1, k);
      const Field dn = q.sbp_dn(data.v0[k]);
      for (std::size_t t = 0; t < g.tangential_points(); ++t)
        for (std::size_t j = 0; j < M; ++j) {
          const double term = ge[t] * dn[t * M + j];
          r[t * M + j] -= term;
          mag[t * M + j] += std::abs(term);
        }
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] -= g0[i];
      mag[i] += std::abs(div[i]) + std::abs(g0[i]);
    }
    const double scale = std::sqrt(q.volume(mag, mag));
    double worst = 0.0;
    for (const auto& phi : fam.phi) {
      const double pn = std::sqrt(q.volume(phi, phi));
      if (pn > 0.0 && scale > 0.0) worst = std::max(worst, std::abs(q.volume(r, phi)) / (pn * scale));
    }
    rep.items.push_back({"C1", worst <= tol.weak ? CompatStatus::Pass : CompatStatus::Fail, worst,
                         "max_phi |<div v0 - grad'eta0.d_n v0' - g0, phi>| / (|phi| |terms|)"});
  }

  // (C2), (C3) pointwise on the boundary grid when p > 3/2.
  const bool required = data.p_exponent > Rational(3, 2);
  {
    double c2 = 0.0;
    for (int k = 0; k < td; ++k) c2 = std::max(c2, sup_norm(detail::trace0(g, data.v0[k])));
    Field d = detail::trace0(g, data.v0[g.n - 1]);
    for (std::size_t t = 0; t < d.size(); ++t) d[t] -= data.eta1[t];
    const double c3 = sup_norm(d);
    auto status = [&](double v) {
      return !required ? CompatStatus::NotRequired : (v <= tol.pointwise ? CompatStatus::Pass : CompatStatus::Fail);
    };
    rep.items.push_back({"C2", status(c2), c2, "sup |v0'(x', 0)|"});
    rep.items.push_back({"C3", status(c3), c3, "sup |v0^n(x', 0) - eta1|"});
  }

  // (C4) (g, d_t eta)(phi) = int g phi + int eta1 phi(., 0) against -int v0 . grad phi
  // (outward normal -e_n). Defects are measured against the largest term over
  // the whole family, so test functions that miss the data do not count.
  // The linear problem sees g0 + grad' eta0 . d_n v0', as in C1.
  {
    Field glin = g0;
    const std::size_t M = std::size_t(g.M);
    for (int k = 0; k < td; ++k) {
      const Field ge = d_tangential(g, data.eta0, 1, k);
      const Field dn = q.sbp_dn(data.v0[k]);
      for (std::size_t t = 0; t < g.tangential_points(); ++t)
        for (std::size_t j = 0; j < M; ++j) glin[t * M + j] += ge[t] * dn[t * M + j];
    }
    double worst = 0.0, scale = 0.0;
    for (const auto& phi : fam.phi) {
      const double a = q.volume(glin, phi), b = q.boundary(data.eta1, phi);
      double rhs = -q.volume(data.v0[g.n - 1], q.sbp_dn(phi));
      scale = std::max({scale, std::abs(a), std::abs(b), std::abs(rhs)});
      for (int k = 0; k < td; ++k) {
        const double c = -q.volume(data.v0[k], d_tangential(g, phi, g.M, k));
        rhs += c;
        scale = std::max(scale, std::abs(c));
      }
      worst = std::max(worst, std::abs(a + b - rhs));
    }
    const double rel = scale > 0.0 ? worst / scale : 0.0;
    rep.items.push_back({"C4", rel <= tol.ibp ? CompatStatus::Pass : CompatStatus::Fail, rel,
                         "max_phi |(g, eta1)(phi) + int v0 . grad phi| / largest term"});
  }
  return rep;
}

}  // namespace platefsi
