#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <limits>

namespace lrb {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
};

/// Adaptive 61-point Gauss-Kronrod on [a, b]; either end may be infinite.
inline QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-13, unsigned max_depth = 30) {
  QuadratureResult r;
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth,
                                                                          rel_tol, &r.error, &l1);
  return r;
}

/// Integral over the whole real line, split at `split` so a kink there
/// (|w| or |s| weights) does not straddle a panel.
inline QuadratureResult integrate_real_line(const std::function<double(double)>& f,
                                            double split = 0.0, double rel_tol = 1e-13) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto lo = integrate(f, -inf, split, rel_tol);
  const auto hi = integrate(f, split, inf, rel_tol);
  return {lo.value + hi.value, lo.error + hi.error};
}

}  // namespace lrb
