#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "lrb/anharmonic.hpp"
#include "lrb/error.hpp"
#include "lrb/fourier.hpp"
#include "lrb/torus.hpp"
#include "lrb/weyl.hpp"

namespace lrb {

/// Two-point functions of the harmonic ground state, indexed by the site x - y.
struct GroundStateCovariance {
  std::vector<double> qq;  // <q_x q_y> = (1/2|Lambda|) sum_k e^{ik(x-y)} / gamma(k)
  std::vector<double> pp;  // <p_x p_y> = (1/2|Lambda|) sum_k gamma(k) e^{ik(x-y)}
  double gap = 0.0;        // 2 omega
  TorusLattice lattice;
  Couplings couplings;
};

inline GroundStateCovariance ground_covariance(const TorusLattice& lat, const Couplings& c,
                                               SumPath path = SumPath::fast) {
  require_compatible(lat, c);
  if (!(c.omega() > 0.0))
    throw singular_mode_error("ground_covariance: omega = 0 makes <q q> diverge through 1/gamma(0)");
  const auto gamma = dispersion_table(lat, c);
  const std::size_t n = lat.size();
  std::vector<cplx> cq(n), cp(n);
  for (std::size_t k = 0; k < n; ++k) {
    cq[k] = 0.5 / gamma[k];
    cp[k] = 0.5 * gamma[k];
  }
  const auto sq = dual_sum(lat, cq, path), sp = dual_sum(lat, cp, path);
  GroundStateCovariance cov{std::vector<double>(n), std::vector<double>(n), 2.0 * c.omega(), lat, c};
  for (std::size_t x = 0; x < n; ++x) {
    cov.qq[x] = sq[x].real();
    cov.pp[x] = sp[x].real();
  }
  return cov;
}

namespace detail {

// sum_{x,y} a_x a'_y qq(x-y) + b_x b'_y pp(x-y) with a = Re h, b = Im h.
inline double covariance_form(const GroundStateCovariance& cov, const WeylFunction& h1,
                              const WeylFunction& h2) {
  const auto& lat = cov.lattice;
  double s = 0.0;
  for (std::size_t x : h1.support())
    for (std::size_t y : h2.support()) {
      const std::size_t d = lat.sub(x, y);
      s += h1[x].real() * h2[y].real() * cov.qq[d] + h1[x].imag() * h2[y].imag() * cov.pp[d];
    }
  return s;
}

// e^z - 1 without cancellation for small |z|.
inline cplx expm1_complex(cplx z) {
  const double u = z.real(), v = z.imag();
  const double s = std::sin(0.5 * v);
  return {std::expm1(u) * std::cos(v) - 2.0 * s * s, std::exp(u) * std::sin(v)};
}

}  // namespace detail

/// <W(h)> = exp(-<B(h)^2> / 2) in the ground state.
inline double weyl_expectation(const GroundStateCovariance& cov, const WeylFunction& h) {
  if (!(h.lattice() == cov.lattice)) throw precondition_error("weyl_expectation: lattice mismatch");
  return std::exp(-0.5 * detail::covariance_form(cov, h, h));
}

/// <W(f) W(g)> - <W(f)><W(g)>, using W(f) W(g) = e^{-(i/2) Im<f,g>} W(f+g).
/// Complex in general; real when Im<f,g> = 0.
inline cplx weyl_correlation(const GroundStateCovariance& cov, const WeylFunction& f,
                             const WeylFunction& g) {
  if (!(f.lattice() == cov.lattice) || !(g.lattice() == cov.lattice))
    throw precondition_error("weyl_correlation: lattice mismatch");
  const double cross = detail::covariance_form(cov, f, g);
  const double phase = 0.5 * symplectic_form(f, g);
  return weyl_expectation(cov, f) * weyl_expectation(cov, g) *
         detail::expm1_complex(cplx{-cross, -phase});
}

/// xi = (2 (mu+eps) v(mu+eps) + gap) / (mu gap).
inline double xi_theorem(double mu, double eps, double v, double gap) {
  if (!(gap > 0.0)) throw domain_error("xi_theorem: spectral gap must be > 0");
  return (2.0 * (mu + eps) * v + gap) / (mu * gap);
}

struct ClusteringFit {
  std::vector<int> distances;
  std::vector<double> correlations;  // |<W(f)W(g)> - <W(f)><W(g)>|
  double fitted_xi = 0.0;            // -1 / slope of log|corr| against d
  double fit_intercept = 0.0;
  std::size_t fit_points = 0;
  double xi_theorem = 0.0;
  double v = 0.0;
  double C_fit = 0.0;                // max |corr(d)| e^{d/xi} over 1 <= d < xi
  double domination_margin = std::numeric_limits<double>::infinity();  // min envelope/|corr|, d >= xi
  bool dominated = true;
  bool abs_fit = false;              // some correlation was not positive; fitted |corr|
  bool degenerate = false;           // no usable nonzero correlations

  double tightness() const { return xi_theorem > 0.0 ? fitted_xi / xi_theorem : 0.0; }
};

/// Correlations of W(amp delta_0) and W(amp delta_{d e_1}) for d = 1..max_distance,
/// their log-linear fit, and the check |corr(d)| <= C_fit e^{-d/xi} for d >= xi.
/// v is the harmonic v_h(mu+eps) (kappa_V = 0); points below `floor` relative
/// to the largest correlation are left out of the fit.
inline ClusteringFit clustering_fit(const GroundStateCovariance& cov, double mu, double eps,
                                    int max_distance, cplx amp = 1.0, double floor = 1e-12) {
  const AnharmonicBoundParams b(mu, eps, cov.couplings);
  const auto& lat = cov.lattice;
  if (max_distance < 1 || max_distance > lat.half_side())
    throw domain_error("clustering_fit: max_distance must lie in [1, L]");
  ClusteringFit out;
  out.v = harmonic_velocity(cov.couplings, mu + eps);
  out.xi_theorem = xi_theorem(mu, eps, out.v, cov.gap);

  std::vector<int> o(static_cast<std::size_t>(lat.nu()), 0);
  const auto f = WeylFunction::delta(lat, o, amp);
  for (int d = 1; d <= max_distance; ++d) {
    auto y = o;
    y[0] = d;
    const cplx c = weyl_correlation(cov, f, WeylFunction::delta(lat, y, amp));
    out.distances.push_back(d);
    out.correlations.push_back(std::abs(c));
    if (!(c.real() > 0.0)) out.abs_fit = true;
  }

  const double cmax = *std::max_element(out.correlations.begin(), out.correlations.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < out.distances.size(); ++i) {
    const double v = out.correlations[i];
    if (!(v > floor * cmax) || v == 0.0) continue;
    const double x = out.distances[i], y = std::log(v);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  out.fit_points = n;
  if (n >= 2 && cmax > 0.0) {
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.fit_intercept = (sy - slope * sx) / n;
    out.fitted_xi = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
  } else {
    out.degenerate = true;
  }

  for (std::size_t i = 0; i < out.distances.size(); ++i)
    if (out.distances[i] < out.xi_theorem)
      out.C_fit = std::max(out.C_fit, out.correlations[i] * std::exp(out.distances[i] / out.xi_theorem));
  for (std::size_t i = 0; i < out.distances.size(); ++i) {
    if (out.distances[i] < out.xi_theorem) continue;
    const double env = out.C_fit * std::exp(-out.distances[i] / out.xi_theorem);
    if (out.correlations[i] > env) out.dominated = false;
    if (out.correlations[i] > 0.0) out.domination_margin = std::min(out.domination_margin, env / out.correlations[i]);
  }
  return out;
}

}  // namespace lrb
