#pragma once

// Implicit Euler for the linearised coupled Stokes-plate system, solved
// mode by mode in xi'. Per mode the unknowns at node j are interleaved as
// [u_1 .. u_{n-1}, w, p]; eta is eliminated through eta^{k+1} = eta^k + dt w(0).

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "platefsi/errors.hpp"
#include "platefsi/fft.hpp"
#include "platefsi/fields.hpp"
#include "platefsi/parallel.hpp"
#include "platefsi/symbol.hpp"

namespace platefsi {

/// Coefficients of one tangential mode.
struct ModeState {
  std::vector<cplx> x{};  ///< (n+1) M unknowns, interleaved per node
  cplx eta{};
  cplx eta_t{};
};

struct ModeForcing {
  std::vector<std::vector<cplx>> f{};  ///< n components, M values each
  std::vector<cplx> g{};
  cplx f_eta{};
};

class ModeSolver {
 public:
  using SpMat = Eigen::SparseMatrix<cplx>;
  using Vec = Eigen::VectorXcd;

  ModeSolver(const PlateParams& pp, const XnOps& ops, int n, std::array<double, 2> xi, double dt,
             std::size_t mode_id = 0)
      : pp_(pp), ops_(&ops), n_(n), xi_(xi), dt_(dt) {
    z_ = std::sqrt(xi[0] * xi[0] + (n == 3 ? xi[1] * xi[1] : 0.0));
    assemble();
    lu_.compute(A_);
    if (lu_.info() != Eigen::Success)
      throw SolverSingular(mode_id, "sparse LU failed (z = " + std::to_string(z_) + ", dt = " + std::to_string(dt) + ")");
  }

  int n() const { return n_; }
  int M() const { return ops_->size(); }
  int width() const { return n_ + 1; }
  double z() const { return z_; }
  std::size_t index(int j, int c) const { return std::size_t(j) * (n_ + 1) + c; }

  ModeState zero_state() const { return {std::vector<cplx>(std::size_t(width()) * M()), {}, {}}; }
  ModeForcing zero_forcing() const {
    return {std::vector<std::vector<cplx>>(n_, std::vector<cplx>(M())), std::vector<cplx>(M()), {}};
  }

  /// One implicit Euler step; returns the new state.
  ModeState step(const ModeState& s, const ModeForcing& f) const {
    const Vec b = rhs(s, f);
    Vec sol = lu_.solve(b);
    ModeState out;
    out.x.assign(sol.data(), sol.data() + sol.size());
    const cplx w0 = out.x[index(0, n_ - 1)];
    out.eta = s.eta + dt_ * w0;
    out.eta_t = w0;
    return out;
  }

  /// max_i |(A x - b)_i| / max_i (sum_k |A_ik x_k| + |b_i|), plus the same
  /// measure restricted to the continuity rows and the kinematic update. The
  /// raw maxima are kept so that several modes can be combined.
  struct Residual {
    double num = 0.0, den = 0.0;    ///< all rows
    double cnum = 0.0, cden = 0.0;  ///< continuity rows
    double knum = 0.0, kden = 0.0;  ///< eta update
    static double ratio(double a, double b) { return b > 0.0 ? a / b : 0.0; }
    double all() const { return std::max(ratio(num, den), ratio(knum, kden)); }
    double continuity() const { return ratio(cnum, cden); }
    void merge(const Residual& o) {
      num = std::max(num, o.num), den = std::max(den, o.den);
      cnum = std::max(cnum, o.cnum), cden = std::max(cden, o.cden);
      knum = std::max(knum, o.knum), kden = std::max(kden, o.kden);
    }
  };

  Residual residual(const ModeState& s_old, const ModeState& s_new, const ModeForcing& f) const {
    const Vec b = rhs(s_old, f);
    const Eigen::Map<const Vec> x(s_new.x.data(), Eigen::Index(s_new.x.size()));
    const Vec r = A_ * x - b;
    Eigen::VectorXd mag = b.cwiseAbs();
    for (int k = 0; k < A_.outerSize(); ++k)
      for (SpMat::InnerIterator it(A_, k); it; ++it) mag[it.row()] += std::abs(it.value() * x[it.col()]);
    Residual res;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      res.num = std::max(res.num, std::abs(r[i]));
      res.den = std::max(res.den, mag[i]);
      if (continuity_row_[i]) {
        res.cnum = std::max(res.cnum, std::abs(r[i]));
        res.cden = std::max(res.cden, mag[i]);
      }
    }
    const cplx w0 = s_new.x[index(0, n_ - 1)];
    res.knum = std::abs(s_new.eta - s_old.eta - dt_ * w0);
    res.kden = std::abs(s_new.eta) + std::abs(s_old.eta) + std::abs(dt_ * w0);
    return res;
  }

 private:
  double stiffness() const { return pp_.alpha * z_ * z_ * z_ * z_ + pp_.beta * z_ * z_; }

  void assemble() {
    const int M = this->M(), td = n_ - 1, wc = n_ - 1, pc = n_;
    const std::size_t size = std::size_t(width()) * M;
    std::vector<Eigen::Triplet<cplx>> trip;
    continuity_row_.assign(size, false);
    const double idt = 1.0 / dt_;
    const double z2 = z_ * z_;
    const bool zero_mode = z_ == 0.0;
    auto add_stencil = [&](std::size_t row, int j, int comp, int order, cplx scale) {
      const Stencil& s = ops_->st[j];
      const auto& w = order == 1 ? s.d1 : s.d2;
      for (int k = 0; k < 5; ++k) trip.emplace_back(row, index(s.start + k, comp), scale * w[k]);
    };
    auto momentum = [&](std::size_t row, int j, int comp) {
      trip.emplace_back(row, index(j, comp), cplx{idt + z2});
      add_stencil(row, j, comp, 2, -1.0);
      if (comp < td) {
        if (xi_[comp] != 0.0) trip.emplace_back(row, index(j, pc), cplx{0.0, xi_[comp]});
      } else {
        add_stencil(row, j, pc, 1, 1.0);
      }
    };
    auto continuity = [&](std::size_t row, int j) {
      continuity_row_[row] = true;
      for (int c = 0; c < td; ++c)
        if (xi_[c] != 0.0) trip.emplace_back(row, index(j, c), cplx{0.0, xi_[c]});
      add_stencil(row, j, wc, 1, 1.0);
    };
    auto plate = [&](std::size_t row) {
      add_stencil(row, 0, wc, 1, -2.0);
      trip.emplace_back(row, index(0, pc), 1.0);
      trip.emplace_back(row, index(0, wc), -(idt + stiffness() * dt_ + pp_.gamma * z2));
    };

    for (int j = 0; j < M; ++j) {
      const bool edge = j == 0 || j == M - 1;
      for (int c = 0; c < td; ++c) {
        const std::size_t row = index(j, c);
        if (edge)
          trip.emplace_back(row, row, 1.0);
        else
          momentum(row, j, c);
      }
      const std::size_t wrow = index(j, wc), prow = index(j, pc);
      if (!zero_mode) {
        if (j == M - 1)
          trip.emplace_back(wrow, wrow, 1.0);
        else if (j == 0)
          plate(wrow);
        else
          momentum(wrow, j, wc);
        continuity(prow, j);
      } else {
        if (j == M - 1)
          trip.emplace_back(wrow, wrow, 1.0);
        else
          continuity(wrow, j);
        if (j == 0)
          plate(prow);
        else
          momentum(prow, j, wc);
      }
    }
    A_.resize(Eigen::Index(size), Eigen::Index(size));
    A_.setFromTriplets(trip.begin(), trip.end());
    A_.makeCompressed();
    row_kind_.assign(size, 0);
    for (int j = 0; j < M; ++j) {
      const bool edge = j == 0 || j == M - 1;
      for (int c = 0; c < td; ++c) row_kind_[index(j, c)] = edge ? kDirichlet : kMomentum0 + c;
      const std::size_t wrow = index(j, wc), prow = index(j, pc);
      if (!zero_mode) {
        row_kind_[wrow] = j == M - 1 ? kDirichlet : (j == 0 ? kPlate : kMomentum0 + wc);
        row_kind_[prow] = kContinuity;
      } else {
        row_kind_[wrow] = j == M - 1 ? kDirichlet : kContinuity;
        row_kind_[prow] = j == 0 ? kPlate : kMomentum0 + wc;
      }
    }
  }

  Vec rhs(const ModeState& s, const ModeForcing& f) const {
    const int M = this->M();
    Vec b = Vec::Zero(Eigen::Index(std::size_t(width()) * M));
    const double idt = 1.0 / dt_;
    for (int j = 0; j < M; ++j)
      for (int c = 0; c < width(); ++c) {
        const std::size_t row = index(j, c);
        const int kind = row_kind_[row];
        if (kind == kDirichlet) continue;
        if (kind == kContinuity) {
          b[Eigen::Index(row)] = f.g[j];
        } else if (kind == kPlate) {
          b[Eigen::Index(row)] = f.f_eta - s.eta_t * idt + stiffness() * s.eta;
        } else {
          const int comp = kind - kMomentum0;
          b[Eigen::Index(row)] = f.f[comp][j] + s.x[index(j, comp)] * idt;
        }
      }
    return b;
  }

  static constexpr int kDirichlet = -3, kContinuity = -2, kPlate = -1, kMomentum0 = 0;

  PlateParams pp_;
  const XnOps* ops_;
  int n_;
  std::array<double, 2> xi_;
  double dt_;
  double z_ = 0.0;
  SpMat A_;
  Eigen::SparseLU<SpMat> lu_;
  std::vector<bool> continuity_row_;
  std::vector<int> row_kind_;
};

/// Forcing of one time step in physical space (evaluated at the new time level).
struct StepRHS {
  std::vector<Field> f_v{};
  Field g{};
  Field f_eta{};

  static StepRHS zeros(const Grid& g) {
    return {std::vector<Field>(g.n, Field(g.size(), 0.0)), Field(g.size(), 0.0),
            Field(g.tangential_points(), 0.0)};
  }
};

struct StepReport {
  double residual = 0.0;    ///< max defect over modes / max term size over modes
  double divergence = 0.0;  ///< continuity rows only
};

/// Spectral coefficients of a full state, one ModeState per tangential index.
using SpectralState = std::vector<ModeState>;

class LinearStepper {
 public:
  LinearStepper(const Grid& g, const PlateParams& pp)
      : grid_(g), pp_(pp), ops_(g.xn_nodes()), vol_fft_(g, g.M), bd_fft_(g, 1) {
    g.validate();
    pp.validate();
    const std::size_t T = g.tangential_points();
    solvers_.resize(T);
    canonical_.clear();
    for (std::size_t t = 0; t < T; ++t)
      if (!is_nyquist(g, t) && t <= conjugate_index(t)) canonical_.push_back(t);
    parallel_for(canonical_.size(), [&](std::size_t i) {
      const std::size_t t = canonical_[i];
      solvers_[t] = std::make_unique<ModeSolver>(pp_, ops_, g.n, wave_vector(g, t), g.dt, t);
    });
  }

  const Grid& grid() const { return grid_; }
  const XnOps& ops() const { return ops_; }

  std::size_t conjugate_index(std::size_t t) const {
    const auto idx = grid_.tindex(t);
    const int N = grid_.N;
    const int a = (N - idx[0]) % N;
    if (grid_.n == 2) return std::size_t(a);
    const int b = (N - idx[1]) % N;
    return std::size_t(a) * N + b;
  }

  SpectralState to_spectral(const State& s) {
    const std::size_t T = grid_.tangential_points(), M = std::size_t(grid_.M);
    const int w = grid_.n + 1;
    SpectralState out(T);
    for (auto& m : out) m.x.assign(std::size_t(w) * M, cplx{});
    auto put = [&](const Field& f, int comp) {
      const auto fh = vol_fft_.forward(f);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < M; ++j) out[t].x[j * w + comp] = fh[t * M + j];
    };
    for (int c = 0; c < grid_.n; ++c) put(s.v[c], c);
    put(s.p, grid_.n);
    const auto eh = bd_fft_.forward(s.eta), eth = bd_fft_.forward(s.eta_t);
    for (std::size_t t = 0; t < T; ++t) {
      out[t].eta = eh[t];
      out[t].eta_t = eth[t];
    }
    return out;
  }

  State to_physical(const SpectralState& sp) {
    const std::size_t T = grid_.tangential_points(), M = std::size_t(grid_.M);
    const int w = grid_.n + 1;
    State s;
    auto take = [&](int comp) {
      std::vector<cplx> fh(T * M);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < M; ++j) fh[t * M + j] = sp[t].x[j * w + comp];
      return vol_fft_.backward_real(fh);
    };
    for (int c = 0; c < grid_.n; ++c) s.v.push_back(take(c));
    s.p = take(grid_.n);
    std::vector<cplx> eh(T), eth(T);
    for (std::size_t t = 0; t < T; ++t) {
      eh[t] = sp[t].eta;
      eth[t] = sp[t].eta_t;
    }
    s.eta = bd_fft_.backward_real(eh);
    s.eta_t = bd_fft_.backward_real(eth);
    return s;
  }

  std::vector<ModeForcing> forcing_to_spectral(const StepRHS& rhs) {
    const std::size_t T = grid_.tangential_points(), M = std::size_t(grid_.M);
    std::vector<ModeForcing> out(T);
    for (auto& m : out) {
      m.f.assign(grid_.n, std::vector<cplx>(M));
      m.g.assign(M, cplx{});
    }
    for (int c = 0; c < grid_.n; ++c) {
      const auto fh = vol_fft_.forward(rhs.f_v[c]);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < M; ++j) out[t].f[c][j] = fh[t * M + j];
    }
    const auto gh = vol_fft_.forward(rhs.g);
    const auto fe = bd_fft_.forward(rhs.f_eta);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t j = 0; j < M; ++j) out[t].g[j] = gh[t * M + j];
      out[t].f_eta = fe[t];
    }
    return out;
  }

  /// Advance spectral coefficients by one step. Nyquist modes are set to zero.
  SpectralState step_spectral(const SpectralState& s, const std::vector<ModeForcing>& f,
                              StepReport* report = nullptr) const {
    SpectralState out(s.size());
    std::vector<ModeSolver::Residual> res(canonical_.size());
    parallel_for(canonical_.size(), [&](std::size_t i) {
      const std::size_t t = canonical_[i];
      out[t] = solvers_[t]->step(s[t], f[t]);
      if (report) res[i] = solvers_[t]->residual(s[t], out[t], f[t]);
    });
    fill_conjugates(out);
    if (report) {
      ModeSolver::Residual all;
      for (const auto& r : res) all.merge(r);
      *report = {all.all(), all.continuity()};
    }
    return out;
  }

  /// Normalised residual of the discrete step equations for a given pair of states.
  StepReport step_residual(const SpectralState& s_old, const SpectralState& s_new,
                           const std::vector<ModeForcing>& f) const {
    ModeSolver::Residual all;
    for (std::size_t t : canonical_) all.merge(solvers_[t]->residual(s_old[t], s_new[t], f[t]));
    return {all.all(), all.continuity()};
  }

  State step(const State& s, const StepRHS& rhs, StepReport* report = nullptr) {
    return to_physical(step_spectral(to_spectral(s), forcing_to_spectral(rhs), report));
  }

  /// Kinetic plus plate energy: 1/2 int |v|^2 + 1/2 int (eta_t^2 + alpha |Delta' eta|^2 + beta |grad' eta|^2).
  double energy(const State& s) const {
    const std::size_t T = grid_.tangential_points(), M = std::size_t(grid_.M);
    const double cell = std::pow(grid_.dx(), grid_.tdim());
    double e = 0.0;
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t j = 0; j < M; ++j) {
        double v2 = 0.0;
        for (int c = 0; c < grid_.n; ++c) v2 += s.v[c][t * M + j] * s.v[c][t * M + j];
        e += 0.5 * v2 * ops_.trap[j] * cell;
      }
    const Field lap = laplacian_tangential(grid_, s.eta, 1);
    double grad2 = 0.0;
    for (int k = 0; k < grid_.tdim(); ++k) {
      const Field d = d_tangential(grid_, s.eta, 1, k);
      for (double x : d) grad2 += x * x;
    }
    double plate = 0.0;
    for (std::size_t t = 0; t < T; ++t) plate += s.eta_t[t] * s.eta_t[t] + pp_.alpha * lap[t] * lap[t];
    plate += pp_.beta * grad2;
    return e + 0.5 * plate * cell;
  }

  const std::vector<std::size_t>& canonical_modes() const { return canonical_; }
  const ModeSolver& mode_solver(std::size_t t) const { return *solvers_[t]; }

 private:
  void fill_conjugates(SpectralState& s) const {
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (solvers_[t]) continue;
      if (is_nyquist(grid_, t)) {
        s[t].x.assign(std::size_t(grid_.n + 1) * grid_.M, cplx{});
        s[t].eta = s[t].eta_t = cplx{};
        continue;
      }
      const ModeState& src = s[conjugate_index(t)];
      s[t].x.resize(src.x.size());
      for (std::size_t i = 0; i < src.x.size(); ++i) s[t].x[i] = std::conj(src.x[i]);
      s[t].eta = std::conj(src.eta);
      s[t].eta_t = std::conj(src.eta_t);
    }
  }

  Grid grid_;
  PlateParams pp_;
  XnOps ops_;
  TangentialFFT vol_fft_;
  TangentialFFT bd_fft_;
  std::vector<std::unique_ptr<ModeSolver>> solvers_;
  std::vector<std::size_t> canonical_;
};

}  // namespace platefsi
