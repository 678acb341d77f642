#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "lrb/torus.hpp"

namespace lrb {

using cplx = std::complex<double>;

/// How a finite Fourier sum over the dual grid is evaluated.
enum class SumPath {
  direct,  // O(|Lambda|^2) explicit double loop; the reference path
  fast,    // multi-dimensional FFT of size (2L)^nu; the production path
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Position of coordinate x (or dual index l) inside a length-2L FFT axis.
inline std::size_t fft_position(const TorusLattice& lat, std::size_t i) {
  std::size_t p = 0;
  const long s = lat.side();
  for (int j = 0; j < lat.nu(); ++j) {
    const long x = lat.coord(i, j);
    p = p * static_cast<std::size_t>(s) + static_cast<std::size_t>(((x % s) + s) % s);
  }
  return p;
}

class FftwPlan {
 public:
  FftwPlan(const TorusLattice& lat, cplx* in, cplx* out) {
    std::vector<int> dims(static_cast<std::size_t>(lat.nu()), lat.side());
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft(lat.nu(), dims.data(), reinterpret_cast<fftw_complex*>(in),
                          reinterpret_cast<fftw_complex*>(out), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  ~FftwPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    if (plan_) fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

}  // namespace detail

/// S(x) = (1/|Lambda|) sum_{k in dual} coeff[k] e^{i k.x} for every site x.
///
/// coeff is indexed like the dual grid (index-aligned with the sites). Both
/// paths evaluate the same finite sum; the fast path is an exact FFT of the
/// periodic (2L)^nu grid, not a continuum approximation.
inline std::vector<cplx> dual_sum(const TorusLattice& lat, std::span<const cplx> coeff,
                                  SumPath path = SumPath::fast) {
  const std::size_t n = lat.size();
  if (coeff.size() != n) throw precondition_error("dual_sum: coefficient array has wrong size");
  const double inv = 1.0 / static_cast<double>(n);
  std::vector<cplx> out(n);

  if (path == SumPath::direct) {
    // e^{i k.x} = e^{i pi m / L} with m = sum_j l_j x_j mod 2L.
    const long s = lat.side();
    std::vector<cplx> phase(static_cast<std::size_t>(s));
    for (long m = 0; m < s; ++m)
      phase[static_cast<std::size_t>(m)] = std::polar(1.0, std::numbers::pi * m / lat.half_side());
    for (std::size_t x = 0; x < n; ++x) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        long m = 0;
        for (int j = 0; j < lat.nu(); ++j) m += static_cast<long>(lat.coord(k, j)) * lat.coord(x, j);
        acc += coeff[k] * phase[static_cast<std::size_t>(((m % s) + s) % s)];
      }
      out[x] = acc * inv;
    }
    return out;
  }

  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = detail::fft_position(lat, i);
  std::vector<cplx> in(n), res(n);
  detail::FftwPlan plan(lat, in.data(), res.data());
  for (std::size_t k = 0; k < n; ++k) in[pos[k]] = coeff[k];
  plan.execute();
  for (std::size_t x = 0; x < n; ++x) out[x] = res[pos[x]] * inv;
  return out;
}

}  // namespace lrb
