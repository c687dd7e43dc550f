#pragma once

// Sobolev index of anisotropic function spaces and the sufficient conditions
// for pointwise multiplication used to bound the nonlinear terms.

#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "platefsi/errors.hpp"
#include "platefsi/newton_polygon.hpp"

namespace platefsi {

enum class SpaceScale { BesselPotential, Besov, SobolevSlobodeckii, Lebesgue };

inline const char* to_string(SpaceScale s) {
  switch (s) {
    case SpaceScale::BesselPotential: return "H";
    case SpaceScale::Besov: return "B";
    case SpaceScale::SobolevSlobodeckii: return "W";
    case SpaceScale::Lebesgue: return "L";
  }
  return "?";
}

/// Anisotropic space over R^{n_1} x ... x R^{n_k} with weight vector omega.
/// A Banach-space fibre (e.g. values in L^p(R_+)) is not listed in dims.
struct AnisoSpace {
  SpaceScale scale = SpaceScale::BesselPotential;
  Rational s{0};
  std::vector<int> weight{};
  std::vector<int> dims{};
  Rational p{2};
  std::optional<Rational> q{};
  std::string name{};

  void validate() const {
    if (weight.size() != dims.size() || weight.empty())
      throw InvalidArgument("weight", "weight and dims must have the same non-zero length");
    for (int w : weight)
      if (w <= 0) throw InvalidArgument("weight", "entries must be positive");
    for (int d : dims)
      if (d <= 0) throw InvalidArgument("dims", "entries must be positive");
    if (scale == SpaceScale::Lebesgue ? p < 1 : p <= 1) throw InvalidArgument("p", "out of range");
    if (scale == SpaceScale::SobolevSlobodeckii && s < 0)
      throw InvalidArgument("s", "must be non-negative on the Sobolev-Slobodeckii scale");
  }
};

/// (s - sum_j omega_j n_j / p) / lcm(omega)
inline Rational index(const AnisoSpace& sp) {
  sp.validate();
  int lcm = 1;
  int weighted = 0;
  for (std::size_t j = 0; j < sp.weight.size(); ++j) {
    lcm = std::lcm(lcm, sp.weight[j]);
    weighted += sp.weight[j] * sp.dims[j];
  }
  return (sp.s - Rational(weighted) / sp.p) / Rational(lcm);
}

enum class EmbeddingVerdict { HoldsByNonneg, HoldsBySum, HoldsByMultiplier, Fails };

inline const char* to_string(EmbeddingVerdict v) {
  switch (v) {
    case EmbeddingVerdict::HoldsByNonneg: return "HOLDS_BY_NONNEG";
    case EmbeddingVerdict::HoldsBySum: return "HOLDS_BY_SUM";
    case EmbeddingVerdict::HoldsByMultiplier: return "HOLDS_BY_MULTIPLIER";
    case EmbeddingVerdict::Fails: return "FAILS";
  }
  return "?";
}

inline bool holds(EmbeddingVerdict v) { return v != EmbeddingVerdict::Fails; }

inline void require_same_anisotropy(const AnisoSpace& a, const AnisoSpace& b) {
  if (a.weight != b.weight || a.dims != b.dims)
    throw IncompatibleAnisotropy("spaces '" + a.name + "' and '" + b.name +
                                 "' have different weights or dimensions");
}

/// Product of any number of factors into target. Holds when all factor
/// indices are non-negative and each dominates the target index, or when the
/// sum of all factor indices reaches the target index.
inline EmbeddingVerdict product_embedding_check(std::span<const AnisoSpace> factors,
                                                const AnisoSpace& target) {
  if (factors.empty()) throw InvalidArgument("factors", "need at least one factor");
  for (const auto& f : factors) require_same_anisotropy(f, target);
  const Rational t = index(target);
  std::vector<Rational> ind;
  for (const auto& f : factors) ind.push_back(index(f));

  if (factors.size() == 2) {
    const Rational hi = std::max(ind[0], ind[1]);
    const Rational lo = std::min(ind[0], ind[1]);
    if (hi >= 0 && lo >= t) return EmbeddingVerdict::HoldsByNonneg;
    if (hi < 0 && ind[0] + ind[1] >= t) return EmbeddingVerdict::HoldsBySum;
    return EmbeddingVerdict::Fails;
  }
  bool all_nonneg = true;
  Rational sum{0};
  for (const auto& i : ind) {
    all_nonneg = all_nonneg && i >= 0;
    sum += i;
  }
  if (all_nonneg) return EmbeddingVerdict::HoldsByNonneg;
  return sum >= t ? EmbeddingVerdict::HoldsBySum : EmbeddingVerdict::Fails;
}

inline EmbeddingVerdict product_embedding_check(const AnisoSpace& sp1, const AnisoSpace& sp2,
                                                const AnisoSpace& target) {
  const AnisoSpace f[] = {sp1, sp2};
  return product_embedding_check(std::span<const AnisoSpace>(f), target);
}

/// Multiplication by factors from spaces with strictly positive index keeps
/// the space of `operand`, provided operand embeds into target by index.
inline EmbeddingVerdict multiplier_embedding_check(std::span<const AnisoSpace> multipliers,
                                                   const AnisoSpace& operand,
                                                   const AnisoSpace& target) {
  for (const auto& m : multipliers) {
    require_same_anisotropy(m, target);
    if (!(index(m) > 0)) return EmbeddingVerdict::Fails;
  }
  require_same_anisotropy(operand, target);
  return index(operand) >= index(target) ? EmbeddingVerdict::HoldsByMultiplier
                                         : EmbeddingVerdict::Fails;
}

struct PThresholds {
  Rational quadratic{};   ///< (n+2)/3
  Rational multiplier{};  ///< (n+2)/4
  Rational triple{};      ///< (2n+3)/6
};

inline PThresholds threshold_p(int n) {
  if (n < 2) throw InvalidArgument("n", "must be at least 2");
  PThresholds t{Rational(n + 2, 3), Rational(n + 2, 4), Rational(2 * n + 3, 6)};
  if (t.quadratic < t.multiplier || t.quadratic < t.triple)
    throw Error("threshold dominance violated");  // unreachable for n >= 2
  return t;
}

/// The anisotropic spaces with weight (2,1) used for the nonlinear estimates.
/// `boundary` spaces live on J x R^{n-1}; `domain` spaces on J x R^n_+.
struct SpaceFactory {
  int n = 2;
  Rational p{2};

  AnisoSpace boundary(SpaceScale sc, Rational s, std::string name) const {
    return {sc, s, {2, 1}, {1, n - 1}, p, {}, std::move(name)};
  }
  AnisoSpace domain(SpaceScale sc, Rational s, std::string name) const {
    return {sc, s, {2, 1}, {1, n}, p, {}, std::move(name)};
  }
  /// W^{s - 1/p,(2,1)} on the boundary: traces of the plate derivatives.
  AnisoSpace boundary_trace(Rational s, std::string name) const {
    return boundary(SpaceScale::SobolevSlobodeckii, s - Rational(1) / p, std::move(name));
  }
};

struct EmbeddingCheck {
  std::string name{};
  EmbeddingVerdict verdict = EmbeddingVerdict::Fails;
  std::vector<Rational> factor_indices{};
  Rational target_index{};
};

/// Every embedding needed to map the nonlinearities F_v, G, H_eta and the
/// compatibility term into the data spaces, evaluated at (n, p).
inline std::vector<EmbeddingCheck> nonlinear_embedding_catalog(int n, const Rational& p) {
  const SpaceFactory F{n, p};
  using SS = SpaceScale;
  const AnisoSpace w2 = F.boundary_trace(Rational{2}, "W^{2-1/p} (d_t eta, Delta' eta)");
  const AnisoSpace w4 = F.boundary_trace(Rational{4}, "W^{4-1/p} (grad' eta)");
  const AnisoSpace w1 = F.boundary_trace(Rational{1}, "W^{1-1/p} (traces of grad v)");
  const AnisoSpace h0 = F.boundary(SS::BesselPotential, Rational{0}, "H^0(L^p)");
  const AnisoSpace h1 = F.boundary(SS::BesselPotential, Rational{1}, "H^1(L^p)");
  const AnisoSpace h2 = F.boundary(SS::BesselPotential, Rational{2}, "H^2(L^p)");
  const AnisoSpace h1_h1 = F.boundary(SS::BesselPotential, Rational{1}, "H^1(H^1_p)");
  const AnisoSpace dom_h2 = F.domain(SS::BesselPotential, Rational{2}, "H^2 (v)");
  const AnisoSpace dom_h1 = F.domain(SS::BesselPotential, Rational{1}, "H^1 (grad v)");
  const AnisoSpace dom_h0 = F.domain(SS::BesselPotential, Rational{0}, "H^0");

  std::vector<EmbeddingCheck> out;
  auto product = [&](std::string name, std::vector<AnisoSpace> fs, const AnisoSpace& t) {
    EmbeddingCheck c{std::move(name), product_embedding_check(fs, t), {}, index(t)};
    for (const auto& f : fs) c.factor_indices.push_back(index(f));
    out.push_back(std::move(c));
  };
  auto multiplier = [&](std::string name, std::vector<AnisoSpace> ms, const AnisoSpace& operand,
                        const AnisoSpace& t) {
    EmbeddingCheck c{std::move(name), multiplier_embedding_check(ms, operand, t), {}, index(t)};
    for (const auto& m : ms) c.factor_indices.push_back(index(m));
    c.factor_indices.push_back(index(operand));
    out.push_back(std::move(c));
  };

  product("F_v: (d_t eta - Delta' eta) d_n v", {w2, h1}, h0);
  multiplier("F_v: grad' eta . grad' d_n v, (grad' eta, 0) d_n p", {w4}, h0, h0);
  multiplier("F_v: |grad' eta|^2 d_n^2 v", {w4, w4}, h0, h0);
  product("F_v: (v . grad) v", {dom_h2, dom_h1}, dom_h0);
  product("F_v: (v' . grad' eta) d_n v", {h1_h1, w4, h1}, h0);
  product("G: d_t grad' eta . v'", {F.boundary_trace(Rational{1}, "W^{1-1/p} (d_t grad' eta)"), h2},
          h0);
  multiplier("G: grad' eta . d_t v'", {w4}, h0, h0);
  multiplier("H_eta: grad' eta . (d_n v', grad' v^n)", {w4}, w1, w1);
  multiplier("compatibility: grad' eta . v' in H^1(L^p)", {w4}, h2, h2);
  return out;
}

}  // namespace platefsi
