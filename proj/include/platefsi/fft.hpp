#pragma once

// Tangential FFTs of grid fields (all x_n levels at once) and spectral
// derivatives on the torus.

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "platefsi/grid.hpp"

namespace platefsi {

namespace detail {
inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// In-place complex transforms over the n-1 tangential dimensions of a field
/// with `levels` samples per tangential point (levels = M for volume fields,
/// 1 for boundary fields).
class TangentialFFT {
 public:
  TangentialFFT(const Grid& g, int levels) : grid_(g), levels_(levels), buf_(g.tangential_points() * levels) {
    int dims[2] = {g.N, g.N};
    auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
    std::lock_guard lock(detail::fftw_plan_mutex());
    fwd_ = fftw_plan_many_dft(g.tdim(), dims, levels, p, nullptr, levels, 1, p, nullptr, levels, 1,
                              FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_many_dft(g.tdim(), dims, levels, p, nullptr, levels, 1, p, nullptr, levels, 1,
                              FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~TangentialFFT() {
    std::lock_guard lock(detail::fftw_plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  TangentialFFT(const TangentialFFT&) = delete;
  TangentialFFT& operator=(const TangentialFFT&) = delete;

  std::vector<std::complex<double>> forward(const std::vector<double>& f) {
    for (std::size_t i = 0; i < buf_.size(); ++i) buf_[i] = f[i];
    fftw_execute(fwd_);
    return buf_;
  }

  std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& f) {
    buf_ = f;
    fftw_execute(fwd_);
    return buf_;
  }

  /// Inverse transform with 1/N^{n-1} normalisation; returns the real part.
  std::vector<double> backward_real(const std::vector<std::complex<double>>& fh) {
    buf_ = fh;
    fftw_execute(bwd_);
    const double s = 1.0 / double(grid_.tangential_points());
    std::vector<double> out(buf_.size());
    for (std::size_t i = 0; i < buf_.size(); ++i) out[i] = buf_[i].real() * s;
    return out;
  }

  std::vector<std::complex<double>> backward(const std::vector<std::complex<double>>& fh) {
    buf_ = fh;
    fftw_execute(bwd_);
    const double s = 1.0 / double(grid_.tangential_points());
    for (auto& c : buf_) c *= s;
    return buf_;
  }

  int levels() const { return levels_; }

 private:
  Grid grid_;
  int levels_;
  std::vector<std::complex<double>> buf_;
  fftw_plan fwd_{};
  fftw_plan bwd_{};
};

/// Wave vector of flat tangential index t (Nyquist components zeroed).
inline std::array<double, 2> wave_vector(const Grid& g, std::size_t t) {
  const auto idx = g.tindex(t);
  std::array<double, 2> k{g.wavenumber(idx[0]), 0.0};
  if (g.n == 3) k[1] = g.wavenumber(idx[1]);
  return k;
}

inline bool is_nyquist(const Grid& g, std::size_t t) {
  const auto idx = g.tindex(t);
  return g.nyquist(idx[0]) || (g.n == 3 && g.nyquist(idx[1]));
}

/// Spectral derivative of multi-order `orders` (one entry per tangential
/// direction) of a real field with `levels` samples per tangential point.
inline std::vector<double> spectral_derivative(const Grid& g, const std::vector<double>& f, int levels,
                                               std::array<int, 2> orders) {
  TangentialFFT fft(g, levels);
  auto fh = fft.forward(f);
  for (std::size_t t = 0; t < g.tangential_points(); ++t) {
    const auto k = wave_vector(g, t);
    std::complex<double> mult{1.0, 0.0};
    for (int d = 0; d < g.tdim(); ++d)
      for (int o = 0; o < orders[d]; ++o) mult *= std::complex<double>{0.0, k[d]};
    if (is_nyquist(g, t) && (orders[0] + orders[1]) > 0) mult = 0.0;
    for (int j = 0; j < levels; ++j) fh[t * levels + j] *= mult;
  }
  return fft.backward_real(fh);
}

inline std::vector<double> d_tangential(const Grid& g, const std::vector<double>& f, int levels, int dir,
                                        int order = 1) {
  std::array<int, 2> o{0, 0};
  o[dir] = order;
  return spectral_derivative(g, f, levels, o);
}

/// Tangential Laplacian.
inline std::vector<double> laplacian_tangential(const Grid& g, const std::vector<double>& f, int levels) {
  std::vector<double> out = d_tangential(g, f, levels, 0, 2);
  if (g.n == 3) {
    const auto b = d_tangential(g, f, levels, 1, 2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  }
  return out;
}

}  // namespace platefsi
