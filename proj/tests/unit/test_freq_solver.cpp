#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace platefsi;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Sample {
  PlateParams pp;
  Freq f;
  cplx fhat;
};

std::vector<Sample> samples(unsigned long long seed, int count) {
  oracle::ParamSampler s(seed);
  std::vector<Sample> out;
  while (int(out.size()) < count) {
    const PlateParams pp = s.plate();
    const Freq f = Freq::scalar(s.lambda(), s.log_uniform(1e-2, 1e2));
    const cplx fhat = std::polar(s.log_uniform(0.1, 10.0), s.uniform(-3.14, 3.14));
    try {
      (void)solve_eta(pp, f, fhat);
    } catch (const NearResonance&) {
      continue;
    }
    out.push_back({pp, f, fhat});
  }
  return out;
}

}  // namespace

TEST(FreqSolver, ZeroDatum) {
  EXPECT_EQ(solve_eta({1, 0, 1}, Freq::scalar(1.0, 1.0), cplx{}), cplx{});
  const TraceSolution ts = solve_traces({1, 0, 1}, Freq::scalar(1.0, 1.0), cplx{});
  EXPECT_EQ(ts.p0_hat, cplx{});
  EXPECT_EQ(ts.phi_n_hat, cplx{});
}

TEST(FreqSolver, ZeroTangentialFrequency) {
  const TraceSolution ts = solve_traces({1, 0, 1}, Freq::scalar(1.0, 0.0), cplx{1});
  EXPECT_EQ(ts.eta_hat, cplx{});
  EXPECT_EQ(ts.phi_n_hat, cplx{});
  EXPECT_TRUE(ts.degenerate_tangential);
  // the whole load is carried by the pressure: p0 = f_eta
  EXPECT_NEAR(std::abs(ts.p0_hat - cplx{1}), 0.0, 1e-15);
}

TEST(FreqSolver, HandValue) {
  // R(1, 1) = 1 - sqrt2, eta = -1 / R = 1 + sqrt2
  const cplx eta = solve_eta({1, 0, 1}, Freq::scalar(1.0, 1.0), cplx{1});
  EXPECT_NEAR(std::abs(eta - cplx{1 + std::sqrt(2.0)}), 0.0, 1e-13);
}

TEST(FreqSolver, TraceRelations) {
  for (const auto& [pp, f, fhat] : samples(31, 200)) {
    const TraceSolution ts = solve_traces(pp, f, fhat);
    const cplx om = eval_omega(f).value;
    // kinematic condition
    EXPECT_LE(rel(ts.phi_n_hat, f.lambda * ts.eta_hat), 1e-12);
    // z p0 = lambda omega (omega + z) eta
    EXPECT_LE(std::abs(f.z * ts.p0_hat - f.lambda * om * (om + f.z) * ts.eta_hat),
              1e-12 * std::abs(f.z * ts.p0_hat));
    // plate condition p0 = m eta + f
    const cplx m = eval_m(pp, f);
    EXPECT_LE(std::abs(ts.p0_hat - m * ts.eta_hat - fhat),
              1e-12 * (std::abs(ts.p0_hat) + std::abs(m * ts.eta_hat) + std::abs(fhat)));
    // divergence at the boundary: i xi'.phi' = omega phi^n - z p0 / omega
    const cplx lhs = cplx{0, f.z} * ts.phi_prime_hat[0];
    const cplx rhs = om * ts.phi_n_hat - f.z * ts.p0_hat / om;
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (std::abs(lhs) + std::abs(om * ts.phi_n_hat)));
  }
}

TEST(FreqSolver, LiteralTraceRelationsViolateDivergence) {
  // Traces built from eta = -z^2 f / N_L, p0 = m eta + f and
  // i xi'.phi' = omega phi^n do not satisfy i xi'.v' + d_n v^n = 0.
  const PlateParams pp{1, 0, 1};
  const Freq f = Freq::scalar(1.0, 1.0);
  const cplx fhat{1};
  TraceSolution lit;
  lit.eta_hat = -f.z * f.z * fhat / eval_NL(pp, f).value;
  lit.phi_n_hat = f.lambda * lit.eta_hat;
  lit.p0_hat = eval_m(pp, f) * lit.eta_hat + fhat;
  const cplx om = eval_omega(f).value;
  lit.phi_prime_hat = {cplx{0, f.z} * lit.p0_hat / (om * (om + f.z))};
  EXPECT_NEAR(std::abs(lit.eta_hat - cplx{-1 / (5 + 2 * std::sqrt(2.0))}), 0.0, 1e-14);
  const ResidualReport lit_rep = residual_check(pp, f, build_field_profile(pp, f, lit), fhat);
  EXPECT_GT(lit_rep.divergence, 1e-2);
  EXPECT_FALSE(lit_rep.pass);

  const TraceSolution ts = solve_traces(pp, f, fhat);
  EXPECT_TRUE(residual_check(pp, f, build_field_profile(pp, f, ts), fhat).pass);
}

TEST(FreqSolver, ResidualsOnRandomSample) {
  for (const auto& [pp, f, fhat] : samples(32, 100)) {
    const TraceSolution ts = solve_traces(pp, f, fhat);
    const ResidualReport r = residual_check(pp, f, build_field_profile(pp, f, ts), fhat);
    EXPECT_TRUE(r.pass) << "lambda=" << f.lambda << " z=" << f.z << " max=" << r.max();
  }
}

TEST(FreqSolver, ResidualsInThreeDimensions) {
  oracle::ParamSampler s(33);
  for (int i = 0; i < 50; ++i) {
    const PlateParams pp = s.plate();
    const Freq f = Freq::vector(s.lambda(), {s.uniform(-3, 3), s.uniform(-3, 3)});
    const TraceSolution ts = solve_traces(pp, f, cplx{1}, 2);
    EXPECT_TRUE(residual_check(pp, f, build_field_profile(pp, f, ts), cplx{1}).pass);
  }
}

TEST(FreqSolver, ProfileMatchesQuadrature) {
  int count = 0;
  for (const auto& [pp, f, fhat] : samples(34, 40)) {
    const TraceSolution ts = solve_traces(pp, f, fhat);
    const FieldProfile prof = build_field_profile(pp, f, ts);
    if (prof.confluent) continue;
    for (double x : {0.05, 0.5, 1.0, 3.0}) {
      const cplx vt = prof.eval(prof.v_tangential[0], x), vn = prof.eval(prof.v_normal, x);
      const cplx qt = oracle::profile_by_quadrature(pp, f, ts, 0, x);
      const cplx qn = oracle::profile_by_quadrature(pp, f, ts, 1, x);
      const double scale = std::abs(ts.phi_n_hat) + std::abs(ts.p0_hat) / std::abs(eval_omega(f).value) + 1e-300;
      EXPECT_LE(std::abs(vt - qt), 1e-8 * std::max(std::abs(qt), scale)) << "x=" << x;
      EXPECT_LE(std::abs(vn - qn), 1e-8 * std::max(std::abs(qn), scale)) << "x=" << x;
    }
    ++count;
  }
  EXPECT_GT(count, 30);
}

TEST(FreqSolver, HandCaseAgainstQuadrature) {
  const PlateParams pp{1, 0, 1};
  const Freq f = Freq::scalar(1.0, 1.0);
  const TraceSolution ts = solve_traces(pp, f, cplx{1});
  const FieldProfile prof = build_field_profile(pp, f, ts);
  EXPECT_LE(rel(prof.eval(prof.v_normal, 1.0), oracle::profile_by_quadrature(pp, f, ts, 1, 1.0)), 1e-8);
  EXPECT_LE(rel(prof.eval(prof.v_tangential[0], 1.0), oracle::profile_by_quadrature(pp, f, ts, 0, 1.0)), 1e-8);
}

TEST(FreqSolver, DerivativesMatchFiniteDifferences) {
  for (const auto& [pp, f, fhat] : samples(35, 30)) {
    const TraceSolution ts = solve_traces(pp, f, fhat);
    const FieldProfile prof = build_field_profile(pp, f, ts);
    const double x = 0.7 / std::max(1.0, std::abs(prof.omega));
    for (const ExpCombo& e : {prof.v_tangential[0], prof.v_normal, prof.pressure}) {
      const ExpCombo d = prof.derivative(e);
      const cplx fd = oracle::central_diff([&](double s) { return prof.eval(e, s); }, x, 1e-5 * (1 + x));
      const double scale = std::abs(prof.eval(d, x)) + std::abs(prof.omega) * std::abs(prof.eval(e, x)) + 1e-300;
      EXPECT_LE(std::abs(prof.eval(d, x) - fd), 1e-6 * scale);
    }
  }
}

TEST(FreqSolver, TangentialVelocityVanishesOnBoundary) {
  for (const auto& [pp, f, fhat] : samples(36, 200)) {
    const TraceSolution ts = solve_traces(pp, f, fhat);
    const FieldProfile prof = build_field_profile(pp, f, ts);
    EXPECT_LE(std::abs(prof.eval(prof.v_tangential[0], 0.0)), 1e-13 * (std::abs(ts.phi_prime_hat[0]) + 1e-300));
  }
}

TEST(FreqSolver, CorruptedPressureIsFlagged) {
  const PlateParams pp{1, 0, 1};
  const Freq f = Freq::scalar(cplx{1, 1}, 2.0);
  TraceSolution ts = solve_traces(pp, f, cplx{1});
  ts.p0_hat *= 1.01;
  const ResidualReport r = residual_check(pp, f, build_field_profile(pp, f, ts), cplx{1});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.plate_bc, 1e-4);
}

TEST(FreqSolver, ZeroDataZeroResiduals) {
  const PlateParams pp{1, 0, 1};
  const Freq f = Freq::scalar(cplx{2, 1}, 1.5);
  const TraceSolution ts = solve_traces(pp, f, cplx{});
  EXPECT_EQ(residual_check(pp, f, build_field_profile(pp, f, ts), cplx{}).max(), 0.0);
}

TEST(FreqSolver, Uniqueness) {
  EXPECT_TRUE(uniqueness_probe({1, 0.5, 1}, Freq::scalar(cplx{1, 1}, 2.0)));
  EXPECT_TRUE(uniqueness_probe({1, 0, 1}, Freq::scalar(cplx{1, 0}, 0.0)));
  oracle::ParamSampler s(37);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(uniqueness_probe(s.plate(), Freq::scalar(s.lambda(), s.log_uniform(1e-3, 1e3))));
}

TEST(FreqSolver, ConfluentLimit) {
  // omega -> z as lambda -> 0; D(x) -> x e^{-z x}
  const PlateParams pp{1, 0, 1};
  const Freq f = Freq::scalar(cplx{1e-12, 0}, 1.0);
  const TraceSolution ts = solve_traces(pp, f, cplx{1});
  const FieldProfile prof = build_field_profile(pp, f, ts);
  EXPECT_TRUE(prof.confluent);
  EXPECT_NEAR(std::abs(prof.basis_D(2.0) - 2.0 * std::exp(-2.0)), 0.0, 1e-9);
}

TEST(FreqSolver, ImplicitEulerStepIsTheResolventAtOneOverDt) {
  // One implicit Euler step from rest solves the x_n-discretised resolvent
  // problem at lambda = 1/dt.
  Grid g;
  g.M = 128;
  const XnOps ops(g.xn_nodes());
  const PlateParams pp{1, 0.3, 1};
  for (double dt : {0.1, 0.01}) {
    for (double z : {0.5, 1.0, 3.0}) {
      const ModeSolver ms(pp, ops, 2, {z, 0.0}, dt);
      ModeForcing fo = ms.zero_forcing();
      fo.f_eta = cplx{1};
      const ModeState s1 = ms.step(ms.zero_state(), fo);
      const cplx ref = solve_eta(pp, Freq::scalar(1.0 / dt, z), cplx{1});
      EXPECT_LE(rel(s1.eta, ref), 1e-4) << "dt=" << dt << " z=" << z;
    }
  }
}

TEST(FreqSolver, NearResonanceThrows) {
  // R(., 1) has a real zero near 0.7549 for (1, 0, 1)
  const PlateParams pp{1, 0, 1};
  const auto zeros = boundary_symbol_zeros(pp, 1.0);
  ASSERT_FALSE(zeros.empty());
  const cplx l0 = zeros.front();
  EXPECT_LE(std::abs(eval_R(pp, Freq::scalar(l0, 1.0)).value), 1e-12);
  EXPECT_THROW(solve_eta(pp, Freq::scalar(l0, 1.0), cplx{1}), NearResonance);
}
