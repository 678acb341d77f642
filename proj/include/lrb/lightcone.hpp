#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "lrb/error.hpp"
#include "lrb/kernels.hpp"
#include "lrb/parallel.hpp"
#include "lrb/weyl.hpp"

namespace lrb {

/// Root mu_0 of 2/mu = e^{mu/2 + 1}, bisected on (1/2, 1).
inline double mu_star() {
  auto f = [](double mu) { return 2.0 / mu - std::exp(0.5 * mu + 1.0); };
  double lo = 0.5, hi = 1.0;
  if (!(f(lo) > 0.0 && f(hi) < 0.0)) throw convergence_error("mu_star: root not bracketed");
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  if (!(mu > 0.5 && mu < 1.0)) throw convergence_error("mu_star: root left (1/2, 1)");
  return mu;
}

/// mu_0 does not depend on the couplings; this overload exists for call sites
/// that carry a Couplings anyway.
inline double mu_star(const Couplings&) { return mu_star(); }

/// v_h(mu_0) = 2 c / mu_0, the smallest harmonic bound velocity.
inline double optimal_velocity(const Couplings& c) {
  const double mu = mu_star();
  const double v = harmonic_velocity(c, mu);
  if (!(v <= 4.0 * c.c_max() * (1.0 + 1e-12)))
    throw convergence_error("optimal_velocity: v_h(mu_0) exceeds 4c");
  return v;
}

/// Commutator norms sampled on (t, r): values[ir][it].
struct FrontSeries {
  std::vector<double> t;
  std::vector<int> r;
  std::vector<std::vector<double>> values;
};

struct FrontData {
  double threshold = 0.0;
  std::map<int, double> arrivals;   // r -> t*(r)
  std::vector<int> unreached;       // distances whose series never hit the threshold
  double fitted_velocity = 0.0;     // slope of r against t*(r), r >= min_fit_distance
  double fit_intercept = 0.0;
  double fit_residual = 0.0;        // rms deviation in r
  std::size_t fit_points = 0;

  bool fit_ok() const noexcept { return fit_points >= 2 && std::isfinite(fitted_velocity); }

  bool monotone() const noexcept {
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [r, ts] : arrivals) {
      if (ts < prev) return false;
      prev = ts;
    }
    return true;
  }
};

/// First time each series reaches threshold, linearly interpolated between
/// grid points, plus a least-squares fit of r against t*(r).
inline FrontData extract_front(const FrontSeries& s, double threshold, int min_fit_distance = 3) {
  if (!(threshold > 0.0 && threshold < 2.0))
    throw domain_error("extract_front: threshold must lie in (0, 2)");
  if (s.t.empty()) throw precondition_error("extract_front: empty time grid");
  for (std::size_t i = 1; i < s.t.size(); ++i)
    if (!(s.t[i] > s.t[i - 1])) throw precondition_error("extract_front: time grid not increasing");
  if (s.values.size() != s.r.size())
    throw precondition_error("extract_front: one series per distance expected");

  FrontData out;
  out.threshold = threshold;
  for (std::size_t ir = 0; ir < s.r.size(); ++ir) {
    const auto& v = s.values[ir];
    if (v.size() != s.t.size()) throw precondition_error("extract_front: series length mismatch");
    std::size_t j = 0;
    while (j < v.size() && v[j] < threshold) ++j;
    if (j == v.size()) {
      out.unreached.push_back(s.r[ir]);
      continue;
    }
    double ts = s.t[j];
    if (j > 0) {
      const double w = (threshold - v[j - 1]) / (v[j] - v[j - 1]);
      ts = s.t[j - 1] + w * (s.t[j] - s.t[j - 1]);
    }
    out.arrivals[s.r[ir]] = ts;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& [r, ts] : out.arrivals) {
    if (r < min_fit_distance) continue;
    sx += ts; sy += r; sxx += ts * ts; sxy += ts * r;
    ++n;
  }
  out.fit_points = n;
  if (n >= 2) {
    const double det = n * sxx - sx * sx;
    if (det > 0.0) {
      out.fitted_velocity = (n * sxy - sx * sy) / det;
      out.fit_intercept = (sy - out.fitted_velocity * sx) / n;
      double ss = 0.0;
      for (const auto& [r, ts] : out.arrivals) {
        if (r < min_fit_distance) continue;
        const double e = r - (out.fitted_velocity * ts + out.fit_intercept);
        ss += e * e;
      }
      out.fit_residual = std::sqrt(ss / n);
    } else {
      out.fitted_velocity = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

/// Exact commutator norms || [tau_t(W(delta_0)), W(delta_{r e_1})] || for the
/// harmonic lattice, for every (t, r) of the grids.
inline FrontSeries harmonic_front_series(const TorusLattice& lat, const Couplings& c,
                                         const std::vector<double>& tgrid,
                                         const std::vector<int>& rgrid,
                                         SumPath path = SumPath::fast, unsigned threads = 1) {
  FrontSeries s{tgrid, rgrid, std::vector<std::vector<double>>(rgrid.size(),
                                                               std::vector<double>(tgrid.size()))};
  std::vector<int> o(static_cast<std::size_t>(lat.nu()), 0);
  const auto f = WeylFunction::delta(lat, o);
  std::vector<WeylFunction> gs;
  for (int r : rgrid) {
    std::vector<int> y = o;
    y[0] = lat.wrap(r);
    if (std::abs(y[0]) != r) throw domain_error("harmonic_front_series: distance exceeds the torus");
    gs.push_back(WeylFunction::delta(lat, y));
  }
  const bool zero = c.omega() == 0.0;
  parallel_for(tgrid.size(), threads, [&](std::size_t it) {
    const auto ft = evolve(f, tgrid[it], compute_h(lat, c, tgrid[it], zero, path));
    for (std::size_t ir = 0; ir < gs.size(); ++ir)
      s.values[ir][it] = 2.0 * std::abs(std::sin(0.5 * symplectic_form(gs[ir], ft)));
  });
  return s;
}

}  // namespace lrb
