#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"

using namespace platefsi;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Symbol, MVanishesAtOrigin) { EXPECT_EQ(eval_m({1, 0, 1}, cplx{0}, cplx{0}), cplx{0}); }

TEST(Symbol, DoubleRootWhenDiscriminantVanishes) {
  const PlateParams pp{1, 0, 2};
  EXPECT_EQ(eval_m(pp, cplx{-1}, cplx{1}), cplx{0});
  const auto r = roots_m(pp, 1.0);
  EXPECT_NEAR(std::abs(r[0] - cplx{-1}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r[1] - cplx{-1}), 0.0, 1e-15);
}

TEST(Symbol, RootsAtZeroFrequency) {
  const auto r = roots_m({1, 0, 1}, 0.0);
  EXPECT_EQ(r[0], cplx{0});
  EXPECT_EQ(r[1], cplx{0});
}

TEST(Symbol, RootsOfLambdaSquaredPlusLambdaPlusOne) {
  const auto r = roots_m({1, 0, 1}, 1.0);
  const cplx a{-0.5, std::sqrt(3.0) / 2}, b{-0.5, -std::sqrt(3.0) / 2};
  const bool match = (std::abs(r[0] - a) < 1e-15 && std::abs(r[1] - b) < 1e-15) ||
                     (std::abs(r[0] - b) < 1e-15 && std::abs(r[1] - a) < 1e-15);
  EXPECT_TRUE(match) << r[0] << " " << r[1];
}

TEST(Symbol, RootsAreZerosOfM) {
  oracle::ParamSampler s(11);
  for (int i = 0; i < 2000; ++i) {
    const PlateParams pp = s.plate();
    const double z = s.log_uniform(1e-3, 1e3);
    for (const cplx& root : roots_m(pp, z)) {
      const double scale = m_scale(pp, root, z);
      EXPECT_LE(std::abs(eval_m(pp, root, cplx{z})), 1e-12 * scale) << pp.alpha << " " << pp.beta << " " << z;
    }
  }
}

TEST(Symbol, RootsInLeftHalfPlaneWithoutTension) {
  oracle::ParamSampler s(12);
  for (int i = 0; i < 2000; ++i) {
    const PlateParams pp = s.plate(false);
    const double z = s.log_uniform(1e-3, 1e3);
    for (const cplx& root : roots_m(pp, z)) EXPECT_LT(root.real(), 0.0);
  }
}

TEST(Symbol, Phi0) {
  EXPECT_NEAR(sector_angle_phi0({1, 0, 2}), 0.0, 1e-15);
  EXPECT_NEAR(sector_angle_phi0({1, 0, 1}), kPi / 3, 1e-14);
  oracle::ParamSampler s(13);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(sector_angle_phi0(s.plate()), kPi / 2);
}

TEST(Symbol, Phi0MatchesRootArgument) {
  // the zeros of m_0 at z = 1 lie on rays at angle pi - phi0
  oracle::ParamSampler s(14);
  for (int i = 0; i < 200; ++i) {
    const PlateParams pp = s.plate(false);
    double m = kPi;
    for (const cplx& r : roots_m(pp, 1.0)) m = std::min(m, std::abs(std::arg(r)));
    EXPECT_NEAR(sector_angle_phi0(pp), kPi - m, 1e-12);
  }
}

TEST(Symbol, Omega) {
  EXPECT_EQ(eval_omega(cplx{0}, cplx{2}).value, cplx{2});
  EXPECT_EQ(eval_omega(cplx{1}, cplx{0}).value, cplx{1});
  const Flagged w = eval_omega(cplx{-1, 0}, cplx{0});
  EXPECT_NEAR(std::abs(w.value - cplx{0, 1}), 0.0, 1e-15);
  EXPECT_TRUE(w.branch_edge);
  // negative zero imaginary part still lands on +i
  EXPECT_NEAR(std::abs(eval_omega(cplx{-4, -0.0}, cplx{0}).value - cplx{0, 2}), 0.0, 1e-15);
}

TEST(Symbol, NLHandValues) {
  const PlateParams pp{1, 0, 1};
  EXPECT_NEAR(std::abs(eval_NL(pp, Freq::scalar(1.0, 0.0)).value - cplx{1}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_NL(pp, Freq::scalar(4.0, 0.0)).value - cplx{32}), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(eval_NL(pp, Freq::scalar(1.0, 1.0)).value - cplx{5 + 2 * std::sqrt(2.0)}), 0.0, 1e-14);
}

TEST(Symbol, RHandValues) {
  // R = z m - lambda omega (omega + z); at (1, 1): 3 - sqrt2 (sqrt2 + 1) = 1 - sqrt2
  const PlateParams pp{1, 0, 1};
  EXPECT_NEAR(std::abs(eval_R(pp, Freq::scalar(1.0, 1.0)).value - cplx{1 - std::sqrt(2.0)}), 0.0, 1e-14);
  // z = 0: -lambda^2
  EXPECT_NEAR(std::abs(eval_R(pp, Freq::scalar(3.0, 0.0)).value - cplx{-9}), 0.0, 1e-13);
}

TEST(Symbol, RelationBetweenNLAndR) {
  // N_L = z R + lambda omega (omega + z)^2, with omega^2 = lambda + z^2
  oracle::ParamSampler s(15);
  for (int i = 0; i < 500; ++i) {
    const PlateParams pp = s.plate();
    const Freq f = Freq::scalar(s.lambda(), s.log_uniform(1e-2, 1e2));
    const cplx om = eval_omega(f).value;
    const cplx nl = eval_NL(pp, f).value;
    const cplx rhs = f.z * eval_R(pp, f).value + f.lambda * om * (om + f.z) * (om + f.z);
    EXPECT_LE(std::abs(nl - rhs), 1e-12 * (eval_NL_parts(pp, f).scale() + std::abs(rhs)));
  }
}

TEST(Symbol, Validation) {
  EXPECT_THROW((PlateParams{-1, 0, 1}.validate()), InvalidArgument);
  EXPECT_THROW((PlateParams{1, 0, 0}.validate()), InvalidArgument);
  EXPECT_NO_THROW((PlateParams{1, -5, 1}.validate()));
  EXPECT_THROW(Freq::scalar(1.0, -1.0), InvalidArgument);
  try {
    PlateParams{0, 0, 1}.validate();
  } catch (const InvalidArgument& e) {
    EXPECT_EQ(e.key(), "alpha");
  }
}

TEST(Symbol, SectorContains) {
  const Sector s{kPi / 4};
  EXPECT_TRUE(s.contains(cplx{1, 0.5}));
  EXPECT_FALSE(s.contains(cplx{1, 2}));
  EXPECT_FALSE(s.contains(cplx{0}));
  EXPECT_THROW((Sector{0.0}.validate()), InvalidArgument);
}
