#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"

using namespace platefsi;

namespace {

std::vector<ExponentPoint> pts(std::initializer_list<std::pair<Rational, Rational>> l) {
  std::vector<ExponentPoint> out;
  for (const auto& [b, a] : l) out.push_back({b, a});
  return out;
}

std::vector<ExponentPoint> all_points(const std::vector<MixedTerm>& terms) {
  std::vector<ExponentPoint> out;
  for (const auto& t : terms)
    for (const auto& p : term_points(t)) out.push_back(p);
  return out;
}

}  // namespace

TEST(NewtonPolygon, TermPoints) {
  EXPECT_EQ(term_points({cplx{1}, Rational{1}, Rational{0}, 3}), pts({{0, Rational(5, 2)}, {3, 1}}));
  EXPECT_EQ(term_points({cplx{1}, Rational{0}, Rational{6}, 0}), pts({{6, 0}}));
  EXPECT_EQ(term_points({cplx{1}, Rational{1}, Rational{1}, 2}), pts({{1, 2}, {3, 1}}));
}

TEST(NewtonPolygon, NLVertices) {
  oracle::ParamSampler s(21);
  for (int i = 0; i < 20; ++i) {
    const auto terms = nl_terms(s.plate());
    const NewtonPolygon poly = build_polygon(terms);
    EXPECT_EQ(poly.vertices, pts({{6, 0}, {2, 2}, {0, Rational(5, 2)}}));
    EXPECT_EQ(poly.vertices, oracle::brute_force_vertices(all_points(terms)));
    ASSERT_EQ(poly.edges.size(), 2u);
    EXPECT_EQ(poly.edges[0].r, Rational{2});
    EXPECT_EQ(poly.edges[1].r, Rational{4});
  }
}

TEST(NewtonPolygon, SingleTerm) {
  const std::vector<MixedTerm> t{{cplx{1}, Rational{2}, Rational{0}, 0}};
  const NewtonPolygon poly = build_polygon(t);
  EXPECT_EQ(poly.vertices, pts({{0, 2}}));
  EXPECT_TRUE(poly.edges.empty());
}

TEST(NewtonPolygon, PlateSymbolAlone) {
  const auto terms = m_terms({1, 0, 1});
  const NewtonPolygon poly = build_polygon(terms);
  EXPECT_EQ(poly.vertices, pts({{4, 0}, {0, 2}}));
  ASSERT_EQ(poly.edges.size(), 1u);
  EXPECT_EQ(poly.edges[0].on_edge, pts({{2, 1}}));
  EXPECT_EQ(poly.vertices, oracle::brute_force_vertices(all_points(terms)));
}

TEST(NewtonPolygon, RandomPointSetsAgainstBruteForce) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> coord(0, 12), count(1, 9);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<MixedTerm> terms;
    const int k = count(rng);
    for (int i = 0; i < k; ++i)
      terms.push_back({cplx{1}, Rational(coord(rng), 2), Rational(coord(rng), 2), 0});
    const NewtonPolygon poly = build_polygon(terms);
    EXPECT_EQ(poly.vertices, oracle::brute_force_vertices(all_points(terms))) << "trial " << trial;
    for (const auto& e : poly.edges) {
      EXPECT_EQ(quasi_degree(poly.vertices[e.from], e.r), quasi_degree(poly.vertices[e.to], e.r));
      for (const auto& p : poly.points) EXPECT_LE(quasi_degree(p, e.r), quasi_degree(poly.vertices[e.from], e.r));
    }
  }
}

TEST(NewtonPolygon, EmptyAndInvalid) {
  EXPECT_THROW(build_polygon(std::vector<MixedTerm>{}), EmptyTermSet);
  const std::vector<MixedTerm> bad{{cplx{1}, Rational{-1}, Rational{0}, 0}};
  EXPECT_THROW(build_polygon(bad), InvalidArgument);
}

TEST(NewtonPolygon, PrincipalSymbolTable) {
  const PlateParams pp{1.3, 0.4, 0.7};
  const auto terms = nl_terms(pp);
  const cplx lam{0.8, 0.3}, z{1.7, 0.1};
  auto labels = [&](Weight w) {
    std::vector<std::string> out;
    for (const auto& t : principal_symbol(terms, w).terms) out.push_back(t.label);
    return out;
  };
  using V = std::vector<std::string>;
  EXPECT_EQ(labels({Rational{1}}), (V{"alpha z^6"}));
  EXPECT_EQ(labels({Rational{2}}), (V{"z^2 lambda^2", "alpha z^6", "gamma lambda z^4"}));
  EXPECT_EQ(labels({Rational{3}}), (V{"z^2 lambda^2"}));
  EXPECT_EQ(labels({Rational{4}}), (V{"z^2 lambda^2", "lambda omega^3"}));
  EXPECT_EQ(labels({Rational{8}}), (V{"lambda omega^3"}));
  EXPECT_EQ(labels(Weight::inf()), (V{"lambda omega^3"}));

  const cplx m0 = lam * lam + pp.alpha * std::pow(z, 4) + pp.gamma * lam * z * z;
  EXPECT_NEAR(std::abs(principal_symbol(terms, {Rational{2}})(lam, z) - m0 * z * z), 0.0, 1e-12);
  const cplx p4 = lam * lam * z * z + lam * lam * std::sqrt(lam);
  EXPECT_NEAR(std::abs(principal_symbol(terms, {Rational{4}})(lam, z) - p4), 0.0, 1e-12);
}

TEST(NewtonPolygon, PrincipalSymbolDominatesAlongScaling) {
  // lambda = mu z^r: N_L / P_r -> 1 as z grows
  const PlateParams pp{1, 0, 1};
  const auto terms = nl_terms(pp);
  for (double r : {1.0, 2.0, 8.0 / 3.0, 4.0, 8.0}) {
    const Rational rq = r == 8.0 / 3.0 ? Rational(8, 3) : Rational(std::int64_t(r));
    const PrincipalSymbol ps = principal_symbol(terms, {rq});
    const double z = 1e4;
    const cplx lam = cplx{0.7, 0.2} * std::pow(z, r);
    const cplx full = eval_NL(pp, Freq::scalar(lam, z)).value;
    EXPECT_NEAR(std::abs(full / ps(lam, z) - 1.0), 0.0, 1e-2) << "r = " << r;
  }
}

TEST(NewtonPolygon, RelevantWeights) {
  const NewtonPolygon poly = build_polygon(nl_terms({1, 0, 1}));
  std::vector<std::string> ws;
  for (const auto& w : relevant_weights(poly)) ws.push_back(w.str());
  EXPECT_EQ(ws, (std::vector<std::string>{"1", "2", "3", "4", "8"}));
}

TEST(NewtonPolygon, ParabolicityPass) {
  const PlateParams pp{1, 0, 2};
  SamplingSpec spec;
  spec.n_moduli = 10;
  spec.n_args = 6;
  const auto rep = check_parabolicity(nl_terms(pp), pp, std::numbers::pi / 4, std::numbers::pi / 32, spec);
  EXPECT_NEAR(rep.phi0, 0.0, 1e-15);
  EXPECT_EQ(rep.status, ParabolicityStatus::Pass);
  EXPECT_EQ(rep.per_r.size(), 5u);
}

TEST(NewtonPolygon, SectorTooWide) {
  const PlateParams pp{1, 0, 1};
  const auto rep = check_parabolicity(nl_terms(pp), pp, std::numbers::pi / 3, 0.01);
  EXPECT_EQ(rep.status, ParabolicityStatus::SectorTooWide);
  EXPECT_TRUE(rep.per_r.empty());
}

TEST(NewtonPolygon, ThetaTooWide) {
  const PlateParams pp{1, 0, 1};
  SamplingSpec spec;
  spec.n_moduli = 4;
  spec.n_args = 3;
  const double phi = 5 * std::numbers::pi / 12;
  const auto rep = check_parabolicity(nl_terms(pp), pp, phi, (phi - std::numbers::pi / 3) / 2, spec);
  EXPECT_EQ(rep.status, ParabolicityStatus::ThetaTooWide);
}

TEST(NewtonPolygon, HeatLikeSymbols) {
  // {lambda, z^2} is parabolic on these sectors; {lambda^2, z^4} vanishes at
  // lambda = i z^2, which lies in Sigma_{3 pi / 4}, so the check must fail.
  // phi0 = 0 for gamma = 2, so theta must stay below pi / 16. The grid holds
  // lambda = i, z = 1 (args step 3 pi / 12, moduli 10^k).
  const PlateParams pp{1, 0, 2};
  SamplingSpec spec;
  spec.n_moduli = 7;
  spec.n_args = 7;
  const std::vector<MixedTerm> heat{{cplx{1}, Rational{1}, Rational{0}, 0}, {cplx{1}, Rational{0}, Rational{2}, 0}};
  EXPECT_EQ(check_parabolicity(heat, pp, std::numbers::pi / 4, std::numbers::pi / 20, spec).status,
            ParabolicityStatus::Pass);
  const std::vector<MixedTerm> sq{{cplx{1}, Rational{2}, Rational{0}, 0}, {cplx{1}, Rational{0}, Rational{4}, 0}};
  EXPECT_EQ(check_parabolicity(sq, pp, std::numbers::pi / 4, std::numbers::pi / 20, spec).status,
            ParabolicityStatus::Fail);
}

TEST(NewtonPolygon, RationalPowerBranch) {
  EXPECT_NEAR(std::abs(rational_power(cplx{4}, Rational(5, 2)) - cplx{32}), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(rational_power(cplx{-1, 0}, Rational(1, 2)) - cplx{0, 1}), 0.0, 1e-15);
  EXPECT_EQ(rational_power(cplx{3, 1}, Rational{0}), cplx{1});
}
