#pragma once

// Newton polygon of a two-variable symbol in (lambda, z) whose terms may carry
// powers of omega = sqrt(lambda + z^2). Geometry is exact (rational); only the
// principal-symbol evaluators use floating point.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "platefsi/errors.hpp"
#include "platefsi/parallel.hpp"
#include "platefsi/symbol.hpp"

namespace platefsi {

// boost 1.74 rational recurses forever on `q == int` under C++20 rewritten
// comparisons; compare against Rational{k} or the numerator instead.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

inline std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

/// coeff * lambda^a * z^b * omega^c
struct MixedTerm {
  cplx coeff{1.0};
  Rational a{0};
  Rational b{0};
  int c = 0;
  std::string label{};

  void validate() const {
    if (a < 0 || b < 0) throw InvalidArgument("exponent", "must be non-negative");
    if (c < 0) throw InvalidArgument("c", "omega exponent must be non-negative");
    if (coeff == cplx{}) throw InvalidArgument("coeff", "must be non-zero");
  }
};

/// Exponent point, stored as (z-exponent b, lambda-exponent a).
struct ExponentPoint {
  Rational b{0};
  Rational a{0};

  friend bool operator==(const ExponentPoint&, const ExponentPoint&) = default;
  friend bool operator<(const ExponentPoint& l, const ExponentPoint& r) {
    return l.b != r.b ? l.b < r.b : l.a < r.a;
  }
};

/// Positive rational weight r of the scaling lambda ~ z^r, or infinity.
struct Weight {
  Rational value{1};
  bool infinite = false;

  static Weight inf() { return {Rational{0}, true}; }
  double to_double() const {
    return infinite ? std::numeric_limits<double>::infinity() : platefsi::to_double(value);
  }
  std::string str() const { return infinite ? "inf" : to_string(value); }
  friend bool operator==(const Weight&, const Weight&) = default;
};

/// omega ~ max(lambda^{1/2}, z): omega^c contributes lambda^{c/2} on one side
/// and z^c on the other.
inline std::vector<ExponentPoint> term_points(const MixedTerm& t) {
  if (t.c == 0) return {{t.b, t.a}};
  return {{t.b, t.a + Rational(t.c, 2)}, {t.b + t.c, t.a}};
}

struct PolygonEdge {
  std::size_t from = 0;  ///< index into vertices
  std::size_t to = 0;
  Rational r{};          ///< weight for which both endpoints have equal quasi-degree
  std::vector<ExponentPoint> on_edge{};  ///< collinear non-vertex points
};

struct NewtonPolygon {
  std::vector<ExponentPoint> points{};    ///< all term points, sorted, unique
  std::vector<ExponentPoint> vertices{};  ///< upper-right chain, decreasing b
  std::vector<PolygonEdge> edges{};       ///< consecutive vertex pairs, increasing r
};

/// Quasi-degree r*a + b of a point for the scaling lambda ~ z^r.
inline Rational quasi_degree(const ExponentPoint& p, const Rational& r) { return r * p.a + p.b; }

/// Upper-right boundary of conv(points plus their axis projections), found by
/// gift wrapping in exact arithmetic. The chain starts at the point of largest
/// b (largest a among ties) and ends at the point of largest a.
inline NewtonPolygon build_polygon(std::span<const MixedTerm> terms) {
  if (terms.empty()) throw EmptyTermSet();
  NewtonPolygon poly;
  for (const auto& t : terms) {
    t.validate();
    for (const auto& p : term_points(t)) poly.points.push_back(p);
  }
  std::sort(poly.points.begin(), poly.points.end());
  poly.points.erase(std::unique(poly.points.begin(), poly.points.end()), poly.points.end());

  ExponentPoint current = poly.points.back();  // largest b, then largest a
  poly.vertices.push_back(current);
  for (;;) {
    std::optional<Rational> best_r;
    ExponentPoint next{};
    std::vector<ExponentPoint> tied;
    for (const auto& q : poly.points) {
      if (q.a <= current.a) continue;
      const Rational r = (current.b - q.b) / (q.a - current.a);
      if (!best_r || r < *best_r) {
        best_r = r;
        tied.assign({q});
      } else if (r == *best_r) {
        tied.push_back(q);
      }
    }
    if (!best_r) break;
    // Farthest tied point is the vertex; the others sit on the edge.
    next = *std::max_element(tied.begin(), tied.end(),
                             [](const auto& l, const auto& r) { return l.a < r.a; });
    PolygonEdge e;
    e.from = poly.vertices.size() - 1;
    e.to = poly.vertices.size();
    e.r = *best_r;
    for (const auto& q : tied)
      if (!(q == next)) e.on_edge.push_back(q);
    std::sort(e.on_edge.begin(), e.on_edge.end());
    poly.vertices.push_back(next);
    poly.edges.push_back(std::move(e));
    current = next;
  }
  return poly;
}

/// Terms of z^2 m(lambda, z) + lambda omega^2 (omega + z).
inline std::vector<MixedTerm> nl_terms(const PlateParams& pp) {
  std::vector<MixedTerm> t{
      {cplx{1.0}, Rational{2}, Rational{2}, 0, "z^2 lambda^2"},
      {cplx{pp.alpha}, Rational{0}, Rational{6}, 0, "alpha z^6"},
      {cplx{pp.gamma}, Rational{1}, Rational{4}, 0, "gamma lambda z^4"},
      {cplx{1.0}, Rational{1}, Rational{0}, 3, "lambda omega^3"},
      {cplx{1.0}, Rational{1}, Rational{1}, 2, "lambda omega^2 z"},
  };
  if (pp.beta != 0.0) t.push_back({cplx{pp.beta}, Rational{0}, Rational{4}, 0, "beta z^4"});
  return t;
}

/// Terms of m(lambda, z) itself.
inline std::vector<MixedTerm> m_terms(const PlateParams& pp) {
  std::vector<MixedTerm> t{
      {cplx{1.0}, Rational{2}, Rational{0}, 0, "lambda^2"},
      {cplx{pp.alpha}, Rational{0}, Rational{4}, 0, "alpha z^4"},
      {cplx{pp.gamma}, Rational{1}, Rational{2}, 0, "gamma lambda z^2"},
  };
  if (pp.beta != 0.0) t.push_back({cplx{pp.beta}, Rational{0}, Rational{2}, 0, "beta z^2"});
  return t;
}

/// x^e on the principal branch; integer exponents are exact products.
inline cplx rational_power(cplx x, const Rational& e) {
  if (e.numerator() == 0) return cplx{1.0};
  if (e.denominator() == 1 && e.numerator() > 0 && e.numerator() <= 16) {
    cplx acc{1.0};
    for (std::int64_t k = 0; k < e.numerator(); ++k) acc *= x;
    return acc;
  }
  if (x == cplx{}) return cplx{};
  if (x.imag() == 0.0) x = cplx{x.real(), 0.0};
  return std::exp(to_double(e) * std::log(x));
}

enum class OmegaLimit { Z, Full, SqrtLambda };

/// Leading part of a symbol under lambda ~ z^r.
struct PrincipalSymbol {
  Weight r{};
  std::vector<MixedTerm> terms{};
  OmegaLimit omega = OmegaLimit::Full;

  cplx omega_value(cplx lambda, cplx z) const {
    switch (omega) {
      case OmegaLimit::Z: return z;
      case OmegaLimit::SqrtLambda: return principal_sqrt(lambda);
      case OmegaLimit::Full: break;
    }
    return principal_sqrt(lambda + z * z);
  }

  cplx term_value(const MixedTerm& t, cplx lambda, cplx z, cplx om) const {
    cplx v = t.coeff * rational_power(lambda, t.a) * rational_power(z, t.b);
    for (int k = 0; k < t.c; ++k) v *= om;
    return v;
  }

  cplx operator()(cplx lambda, cplx z) const {
    const cplx om = omega_value(lambda, z);
    cplx s{};
    for (const auto& t : terms) s += term_value(t, lambda, z, om);
    return s;
  }

  /// Sum of term moduli, used to normalise |P_r|.
  double scale(cplx lambda, cplx z) const { return value_and_scale(lambda, z).second; }

  std::pair<cplx, double> value_and_scale(cplx lambda, cplx z) const {
    const cplx om = omega_value(lambda, z);
    cplx s{};
    double m = 0.0;
    for (const auto& t : terms) {
      const cplx v = term_value(t, lambda, z, om);
      s += v;
      m += std::abs(v);
    }
    return {s, m};
  }
};

/// Selects the terms whose points attain the maximal quasi-degree and replaces
/// omega by its leading behaviour for this r (omega itself is homogeneous of
/// weight 2).
inline PrincipalSymbol principal_symbol(std::span<const MixedTerm> terms, const Weight& r) {
  if (terms.empty()) throw EmptyTermSet();
  if (!r.infinite && !(r.value > 0)) throw InvalidArgument("r", "must be positive");

  // For r = inf order points lexicographically by (a, b).
  auto key = [&](const ExponentPoint& p) -> std::pair<Rational, Rational> {
    if (r.infinite) return {p.a, p.b};
    return {quasi_degree(p, r.value), Rational{0}};
  };
  auto term_key = [&](const MixedTerm& t) {
    auto pts = term_points(t);
    auto best = key(pts.front());
    for (const auto& p : pts) best = std::max(best, key(p));
    return best;
  };

  auto top = term_key(terms.front());
  for (const auto& t : terms) top = std::max(top, term_key(t));

  PrincipalSymbol ps;
  ps.r = r;
  for (const auto& t : terms)
    if (term_key(t) == top) ps.terms.push_back(t);
  if (r.infinite || r.value > 2) {
    ps.omega = OmegaLimit::SqrtLambda;
  } else if (r.value < 2) {
    ps.omega = OmegaLimit::Z;
  } else {
    ps.omega = OmegaLimit::Full;
  }
  return ps;
}

struct SamplingSpec {
  std::size_t n_moduli = 16;   ///< log-spaced moduli per variable
  std::size_t n_args = 9;      ///< uniformly spaced arguments per variable
  double modulus_min = 1e-3;
  double modulus_max = 1e3;
  double threshold = 1e-3;     ///< minimal admissible |P_r| / scale

  std::size_t points_per_r() const { return n_moduli * n_args * n_moduli * n_args; }
};

enum class ParabolicityStatus { Pass, Fail, SectorTooWide, ThetaTooWide };

inline const char* to_string(ParabolicityStatus s) {
  switch (s) {
    case ParabolicityStatus::Pass: return "PASS";
    case ParabolicityStatus::Fail: return "FAIL";
    case ParabolicityStatus::SectorTooWide: return "SECTOR_TOO_WIDE";
    case ParabolicityStatus::ThetaTooWide: return "THETA_TOO_WIDE";
  }
  return "?";
}

struct RSample {
  Weight r{};
  double min_modulus = 0.0;   ///< min |P_r| / scale over the sample
  cplx argmin_lambda{};
  cplx argmin_z{};
  std::size_t samples = 0;
  bool pass = false;
};

struct ParabolicityReport {
  double phi0 = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  std::vector<RSample> per_r{};
  bool roots_outside_sector = false;  ///< exact zeros of m_0 avoid Sigma_{pi - phi}
  ParabolicityStatus status = ParabolicityStatus::Fail;

  bool pass() const { return status == ParabolicityStatus::Pass; }
  std::size_t total_samples() const {
    std::size_t s = 0;
    for (const auto& r : per_r) s += r.samples;
    return s;
  }
};

/// Edge weights plus one representative inside every open interval between
/// them, one below the smallest and one above the largest.
inline std::vector<Weight> relevant_weights(const NewtonPolygon& poly) {
  std::vector<Rational> rs;
  for (const auto& e : poly.edges) rs.push_back(e.r);
  std::sort(rs.begin(), rs.end());
  if (rs.empty()) return {Weight{Rational{1}}};
  std::vector<Weight> out;
  out.push_back({rs.front() / 2});
  for (std::size_t i = 0; i < rs.size(); ++i) {
    out.push_back({rs[i]});
    if (i + 1 < rs.size()) out.push_back({(rs[i] + rs[i + 1]) / 2});
  }
  out.push_back({rs.back() * 2});
  return out;
}

inline std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = std::sqrt(lo * hi);
    return v;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * double(i) / double(n - 1));
  return v;
}

inline std::vector<double> lin_space(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = 0.5 * (lo + hi);
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
  return v;
}

/// Samples every r-principal symbol on the closed sectors
/// |arg lambda| <= pi - phi, |arg z| <= theta and checks |P_r| / scale stays
/// above the threshold. For r = 2 the exact zeros of m_0 are checked as well.
inline RSample sample_principal(const PrincipalSymbol& ps, double phi, double theta,
                                const SamplingSpec& spec) {
  const auto moduli = log_space(spec.modulus_min, spec.modulus_max, spec.n_moduli);
  const auto lam_args = lin_space(-(std::numbers::pi - phi), std::numbers::pi - phi, spec.n_args);
  const auto z_args = lin_space(-theta, theta, spec.n_args);

  struct Partial {
    double min = std::numeric_limits<double>::infinity();
    cplx lam{}, z{};
  };
  std::vector<Partial> partial(moduli.size());
  parallel_for(moduli.size(), [&](std::size_t i) {
    Partial best;
    for (double la : lam_args) {
      const cplx lam = std::polar(moduli[i], la);
      for (double zm : moduli) {
        for (double za : z_args) {
          const cplx z = std::polar(zm, za);
          const auto [val, sc] = ps.value_and_scale(lam, z);
          const double ratio = sc > 0.0 ? std::abs(val) / sc : 0.0;
          if (ratio < best.min) best = {ratio, lam, z};
        }
      }
    }
    partial[i] = best;
  });

  RSample out;
  out.r = ps.r;
  out.samples = spec.points_per_r();
  out.min_modulus = std::numeric_limits<double>::infinity();
  for (const auto& p : partial) {
    if (p.min < out.min_modulus) {
      out.min_modulus = p.min;
      out.argmin_lambda = p.lam;
      out.argmin_z = p.z;
    }
  }
  out.pass = out.min_modulus > spec.threshold;
  return out;
}

/// True when both zeros of m_0(., z), |arg z| <= theta, avoid Sigma_{pi - phi}.
inline bool m0_roots_outside_sector(const PlateParams& pp, double phi, double theta) {
  const auto roots = roots_m(pp.without_tension(), 1.0);
  for (const cplx& root : roots) {
    for (double chi : {-theta, theta}) {
      const cplx rotated = root * std::polar(1.0, 2.0 * chi);
      if (std::abs(std::arg(rotated)) < std::numbers::pi - phi) return false;
    }
  }
  return true;
}

inline ParabolicityReport check_parabolicity(std::span<const MixedTerm> terms,
                                             const PlateParams& pp, double phi, double theta,
                                             const SamplingSpec& spec = {}) {
  pp.validate();
  if (!(phi > 0.0 && phi < std::numbers::pi / 2)) throw InvalidArgument("phi", "must lie in (0, pi/2)");
  if (!(theta > 0.0)) throw InvalidArgument("theta", "must be positive");

  ParabolicityReport rep;
  rep.phi0 = sector_angle_phi0(pp);
  rep.phi = phi;
  rep.theta = theta;
  if (phi <= rep.phi0 + 1e-12) {
    rep.status = ParabolicityStatus::SectorTooWide;
    return rep;
  }

  const NewtonPolygon poly = build_polygon(terms);
  bool all = true;
  for (const Weight& r : relevant_weights(poly)) {
    rep.per_r.push_back(sample_principal(principal_symbol(terms, r), phi, theta, spec));
    all = all && rep.per_r.back().pass;
  }
  rep.roots_outside_sector = m0_roots_outside_sector(pp, phi, theta);

  if (!(theta < (phi - rep.phi0) / 4)) {
    rep.status = ParabolicityStatus::ThetaTooWide;
  } else {
    rep.status = (all && rep.roots_outside_sector) ? ParabolicityStatus::Pass
                                                   : ParabolicityStatus::Fail;
  }
  return rep;
}

}  // namespace platefsi
