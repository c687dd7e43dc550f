#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "platefsi/grid.hpp"
#include "platefsi/newton_polygon.hpp"
#include "platefsi/symbol.hpp"

namespace platefsi {

using Field = std::vector<double>;

struct State {
  std::vector<Field> v{};  ///< n components on the volume grid
  Field p{};
  Field eta{};    ///< tangential grid
  Field eta_t{};  ///< tangential grid

  static State zeros(const Grid& g) {
    State s;
    s.v.assign(g.n, Field(g.size(), 0.0));
    s.p.assign(g.size(), 0.0);
    s.eta.assign(g.tangential_points(), 0.0);
    s.eta_t.assign(g.tangential_points(), 0.0);
    return s;
  }

  bool finite() const {
    auto ok = [](const Field& f) { return std::all_of(f.begin(), f.end(), [](double x) { return std::isfinite(x); }); };
    return std::all_of(v.begin(), v.end(), ok) && ok(p) && ok(eta) && ok(eta_t);
  }
};

/// Right-hand sides and initial data. The forcing fields are spatial; their
/// value at time t is the field times time_profile(t).
struct ProblemData {
  Grid grid{};
  PlateParams plate{};
  std::vector<Field> f_v{};
  Field g{};
  Field f_eta{};
  std::vector<Field> v0{};
  Field eta0{};
  Field eta1{};
  Rational p_exponent{2};
  std::function<double(double)> time_profile{};

  static ProblemData zeros(const Grid& g, const PlateParams& pp) {
    ProblemData d;
    d.grid = g;
    d.plate = pp;
    d.f_v.assign(g.n, Field(g.size(), 0.0));
    d.g.assign(g.size(), 0.0);
    d.f_eta.assign(g.tangential_points(), 0.0);
    d.v0.assign(g.n, Field(g.size(), 0.0));
    d.eta0.assign(g.tangential_points(), 0.0);
    d.eta1.assign(g.tangential_points(), 0.0);
    return d;
  }

  double profile(double t) const { return time_profile ? time_profile(t) : 1.0; }

  void validate() const {
    grid.validate();
    plate.validate();
    const auto vs = grid.size(), ts = grid.tangential_points();
    auto vec_ok = [&](const std::vector<Field>& f) {
      return f.size() == std::size_t(grid.n) &&
             std::all_of(f.begin(), f.end(), [&](const Field& c) { return c.size() == vs; });
    };
    if (!vec_ok(f_v)) throw InvalidArgument("f_v", "shape does not match grid");
    if (!vec_ok(v0)) throw InvalidArgument("v0", "shape does not match grid");
    if (g.size() != vs) throw InvalidArgument("g", "shape does not match grid");
    if (f_eta.size() != ts) throw InvalidArgument("f_eta", "shape does not match grid");
    if (eta0.size() != ts) throw InvalidArgument("eta0", "shape does not match grid");
    if (eta1.size() != ts) throw InvalidArgument("eta1", "shape does not match grid");
    if (!(p_exponent > 1)) throw InvalidArgument("p", "must exceed 1");
  }
};

inline double sup_norm(const Field& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

inline double sup_norm(const std::vector<Field>& f) {
  double m = 0.0;
  for (const auto& c : f) m = std::max(m, sup_norm(c));
  return m;
}

inline Field axpy(double a, const Field& x, const Field& y) {
  Field out(y);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
  return out;
}

}  // namespace platefsi
