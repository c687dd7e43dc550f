#pragma once

// Plate symbol m(lambda, z), Stokes exponent omega and the coupled boundary
// symbol N_L. All fractional powers use the principal branch, arg in (-pi, pi].

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "platefsi/errors.hpp"

namespace platefsi {

using cplx = std::complex<double>;

/// Closed-form identities are checked against this relative tolerance.
inline constexpr double kIdentityTolerance = 1e-12;

struct PlateParams {
  double alpha = 1.0;  ///< bending stiffness, > 0
  double beta = 0.0;   ///< tension, any sign
  double gamma = 1.0;  ///< structural damping, > 0

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha", "must be positive");
    if (!std::isfinite(beta)) throw InvalidArgument("beta", "must be finite");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma", "must be positive");
  }

  /// Same plate with the tension term removed; its symbol is m_0.
  PlateParams without_tension() const { return {alpha, 0.0, gamma}; }
};

/// Laplace covariable lambda and tangential wave number z = |xi'|.
/// The vector xi' is only needed by the trace solver; when it is absent the
/// direction defaults to z e_1.
struct Freq {
  cplx lambda{};
  double z = 0.0;
  std::vector<double> xi_prime{};

  static Freq scalar(cplx lambda, double z) {
    if (!(z >= 0.0)) throw InvalidArgument("z", "must be non-negative");
    return {lambda, z, {}};
  }

  static Freq vector(cplx lambda, std::vector<double> xi) {
    double s = 0.0;
    for (double x : xi) s += x * x;
    return {lambda, std::sqrt(s), std::move(xi)};
  }

  std::vector<double> xi_or_default(std::size_t dim) const {
    if (!xi_prime.empty()) {
      if (xi_prime.size() != dim) throw InvalidArgument("xi_prime", "dimension mismatch");
      return xi_prime;
    }
    std::vector<double> xi(dim, 0.0);
    if (dim > 0) xi[0] = z;
    return xi;
  }
};

/// Open sector {zeta != 0 : |arg zeta| < vertex_angle}.
struct Sector {
  double vertex_angle = std::numbers::pi / 2;

  void validate() const {
    if (!(vertex_angle > 0.0 && vertex_angle <= std::numbers::pi))
      throw InvalidArgument("vertex_angle", "must lie in (0, pi]");
  }
  bool contains(cplx zeta) const {
    return zeta != cplx{} && std::abs(std::arg(zeta)) < vertex_angle;
  }
};

/// A value together with a flag raised when the square root was taken on the
/// branch cut (-inf, 0).
struct Flagged {
  cplx value{};
  bool branch_edge = false;
};

/// Principal square root with sqrt(-x) = +i sqrt(x), regardless of the sign of
/// a zero imaginary part.
inline cplx principal_sqrt(cplx w) {
  if (w.imag() == 0.0) w = cplx{w.real(), 0.0};
  return std::sqrt(w);
}

inline cplx eval_m(const PlateParams& pp, cplx lambda, cplx z) {
  const cplx z2 = z * z;
  return lambda * lambda + pp.alpha * z2 * z2 + pp.beta * z2 + pp.gamma * lambda * z2;
}

inline cplx eval_m(const PlateParams& pp, const Freq& f) { return eval_m(pp, f.lambda, cplx{f.z}); }

/// Sum of the moduli of the monomials of m; the natural scale for residuals.
inline double m_scale(const PlateParams& pp, cplx lambda, double z) {
  const double z2 = z * z;
  const double l = std::abs(lambda);
  return l * l + pp.alpha * z2 * z2 + std::abs(pp.beta) * z2 + pp.gamma * l * z2;
}

/// Both zeros of lambda -> m(lambda, z), ordered as {-gz^2/2 + sqrt(.), -gz^2/2 - sqrt(.)}.
inline std::array<cplx, 2> roots_m(const PlateParams& pp, double z) {
  if (!(z >= 0.0)) throw InvalidArgument("z", "must be non-negative");
  const double z2 = z * z;
  const double half_b = 0.5 * pp.gamma * z2;
  const double c = pp.alpha * z2 * z2 + pp.beta * z2;
  const cplx root_disc = principal_sqrt(cplx{half_b * half_b - c});
  // half_b >= 0 and Re(root_disc) >= 0, so this sum never cancels.
  const cplx minus = -(half_b + root_disc);
  const cplx plus = (minus != cplx{}) ? cplx{c} / minus : -half_b + root_disc;
  return {plus, minus};
}

/// phi_0 = pi - min |arg(-gamma -+ sqrt(gamma^2 - 4 alpha))|: the zeros of m_0
/// lie on the two rays at angle pi - phi_0 off the positive real axis.
inline double sector_angle_phi0(const PlateParams& pp) {
  if (!(pp.gamma > 0.0)) throw InvalidArgument("gamma", "must be positive");
  const cplx root = principal_sqrt(cplx{pp.gamma * pp.gamma - 4.0 * pp.alpha});
  const double a1 = std::abs(std::arg(-pp.gamma - root));
  const double a2 = std::abs(std::arg(-pp.gamma + root));
  return std::numbers::pi - std::min(a1, a2);
}

inline Flagged eval_omega(cplx lambda, cplx z) {
  const cplx w = lambda + z * z;
  return {principal_sqrt(w), w.imag() == 0.0 && w.real() < 0.0};
}

inline Flagged eval_omega(const Freq& f) { return eval_omega(f.lambda, cplx{f.z}); }

/// The two parts of N_L = z^2 m + lambda omega^2 (omega + z), kept apart because
/// they scale with different quasi-homogeneous weights.
struct NLParts {
  cplx plate{};   ///< z^2 m(lambda, z)
  cplx fluid{};   ///< lambda omega^2 (omega + z)
  bool branch_edge = false;

  cplx total() const { return plate + fluid; }
  double scale() const { return std::abs(plate) + std::abs(fluid); }
};

inline NLParts eval_NL_parts(const PlateParams& pp, const Freq& f) {
  const Flagged om = eval_omega(f);
  const double z2 = f.z * f.z;
  return {z2 * eval_m(pp, f), f.lambda * (f.lambda + z2) * (om.value + f.z), om.branch_edge};
}

inline Flagged eval_NL(const PlateParams& pp, const Freq& f) {
  const NLParts parts = eval_NL_parts(pp, f);
  return {parts.total(), parts.branch_edge};
}

/// Boundary symbol of the resolvent system as it is actually solved by the
/// k_+- ansatz: R = z m - lambda omega (omega + z). The divergence condition
/// on the ansatz gives i xi'.phi' = omega phi^n - z p0 / omega, which turns the
/// plate condition into R eta = -z f_eta. Same split as NLParts.
inline NLParts eval_R_parts(const PlateParams& pp, const Freq& f) {
  const Flagged om = eval_omega(f);
  return {f.z * eval_m(pp, f), -f.lambda * om.value * (om.value + f.z), om.branch_edge};
}

inline Flagged eval_R(const PlateParams& pp, const Freq& f) {
  const NLParts parts = eval_R_parts(pp, f);
  return {parts.total(), parts.branch_edge};
}

}  // namespace platefsi
