#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "platefsi.hpp"

namespace oracle {

using platefsi::cplx;
using platefsi::ExponentPoint;
using platefsi::Rational;

/// Vertices of the upper-right chain by brute force: a point is a vertex iff
/// no convex combination of two other points dominates it componentwise.
/// Sorted by decreasing b.
inline std::vector<ExponentPoint> brute_force_vertices(std::vector<ExponentPoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // t in [lo, hi] such that t*q + (1-t)*r >= p in one coordinate
  auto clip = [](Rational q, Rational r, Rational p, Rational& lo, Rational& hi) {
    // t (q - r) >= p - r
    const Rational d = q - r, rhs = p - r;
    if (d == Rational{0}) {
      if (rhs > Rational{0}) hi = Rational{-1};
    } else if (d > Rational{0}) {
      lo = std::max(lo, rhs / d);
    } else {
      hi = std::min(hi, rhs / d);
    }
  };
  std::vector<ExponentPoint> out;
  for (const auto& p : pts) {
    bool dominated = false;
    for (const auto& q : pts) {
      for (const auto& r : pts) {
        if (q == p || r == p) continue;
        Rational lo{0}, hi{1};
        clip(q.b, r.b, p.b, lo, hi);
        clip(q.a, r.a, p.a, lo, hi);
        if (lo <= hi) dominated = true;
      }
      if (dominated) break;
    }
    if (!dominated) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.b > r.b; });
  return out;
}

/// Integral of a complex function of s over [a, b] (b may be infinite).
template <class F>
cplx integrate(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 61>::integrate([&](double s) { return f(s).real(); }, a, b, 12, 1e-12);
  const double im = gauss_kronrod<double, 61>::integrate([&](double s) { return f(s).imag(); }, a, b, 12, 1e-12);
  return {re, im};
}

/// Half-line Green's functions of omega^2 - d^2: Neumann (+) and Dirichlet (-).
inline cplx green(cplx om, double x, double s, int sign) {
  return (std::exp(-om * std::abs(x - s)) + double(sign) * std::exp(-om * (x + s))) / (2.0 * om);
}

/// Velocity profile by quadrature of the kernel integrals against the pressure
/// gradient source; component `j < dim` tangential, `j == dim` normal.
inline cplx profile_by_quadrature(const platefsi::PlateParams& pp, const platefsi::Freq& f,
                                  const platefsi::TraceSolution& ts, std::size_t j, double x) {
  (void)pp;
  const cplx om = platefsi::eval_omega(f).value;
  const double z = f.z;
  const std::size_t dim = ts.phi_prime_hat.size();
  const auto xi = f.xi_or_default(dim);
  cplx src;
  int sign;
  cplx trace;
  if (j < dim) {
    src = -cplx{0.0, xi[j]} * ts.p0_hat;
    sign = +1;
    trace = ts.phi_prime_hat[j];
  } else {
    src = z * ts.p0_hat;
    sign = -1;
    trace = ts.phi_n_hat;
  }
  auto integrand = [&](double s) { return green(om, x, s, sign) * src * std::exp(-z * s); };
  // beyond x the integrand decays like e^{-(Re omega + z)(s - x)}; cut the tail at e^{-40}
  const double tail = 40.0 / (om.real() + z);
  cplx I = integrate(integrand, 0.0, x);
  I += integrate(integrand, x, x + tail);
  return I + trace * std::exp(-om * x);
}

/// Central difference of a complex function of a real variable.
template <class F>
cplx central_diff(F f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct ParamSampler {
  std::mt19937_64 rng;
  explicit ParamSampler(unsigned long long seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

  platefsi::PlateParams plate(bool with_beta = true) {
    return {log_uniform(0.1, 10.0), with_beta ? uniform(-1.0, 1.0) : 0.0, log_uniform(0.1, 10.0)};
  }
  /// lambda in the closed right half plane minus a neighbourhood of 0.
  cplx lambda() { return std::polar(log_uniform(0.05, 50.0), uniform(-0.45, 0.45) * M_PI); }
};

}  // namespace oracle
