#pragma once

#include <cmath>
#include <vector>

#include "lrb/error.hpp"
#include "lrb/torus.hpp"

namespace lrb {

/// Number of z in Z^nu with |z|_1 = r, as polynomial coefficients in m = 1 + r
/// (valid for r >= 1): N(r) = sum_k 2^k C(nu,k) C(r-1,k-1).
inline std::vector<double> shell_count_polynomial(int nu) {
  if (nu < 1) throw domain_error("shell_count_polynomial: nu must be >= 1");
  std::vector<double> total(static_cast<std::size_t>(nu), 0.0);
  double binom_nu_k = 1.0;
  for (int k = 1; k <= nu; ++k) {
    binom_nu_k = binom_nu_k * (nu - k + 1) / k;
    // C(m-2, k-1) = prod_{i=2}^{k} (m - i) / (k-1)!
    std::vector<double> p{1.0};
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) {
      std::vector<double> q(p.size() + 1, 0.0);
      for (std::size_t j = 0; j < p.size(); ++j) {
        q[j + 1] += p[j];
        q[j] -= i * p[j];
      }
      p = std::move(q);
      fact *= (i - 1);
    }
    const double w = std::pow(2.0, k) * binom_nu_k / fact;
    for (std::size_t j = 0; j < p.size(); ++j) total[j] += w * p[j];
  }
  return total;
}

/// Number of z in Z^nu with |z|_1 = r.
inline double shell_count(int nu, int r) {
  if (r == 0) return 1.0;
  const auto p = shell_count_polynomial(nu);
  double v = 0.0, m = 1.0 + r;
  for (std::size_t j = p.size(); j-- > 0;) v = v * m + p[j];
  return std::round(v);
}

/// sum over z in Z^nu of (1 + |z|)^{-s}, s > nu, summed shell by shell in
/// closed form through the Riemann zeta function.
inline double power_lattice_sum_infinite(int nu, double s) {
  if (!(s > nu)) throw domain_error("power_lattice_sum_infinite: needs s > nu for convergence");
  const auto p = shell_count_polynomial(nu);
  double total = 1.0;  // z = 0
  for (std::size_t j = 0; j < p.size(); ++j)
    total += p[j] * (std::riemann_zeta(s - static_cast<double>(j)) - 1.0);
  return total;
}

/// sum over z in Lambda_L of (1 + |z|)^{-s}, with |z| the torus norm.
inline double power_lattice_sum(const TorusLattice& lat, double s) {
  double total = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) total += std::pow(1.0 + lat.norm(i), -s);
  return total;
}

}  // namespace lrb
