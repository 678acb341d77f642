#pragma once
// Independent reference implementations used only by the tests.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "lrb/lrb.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

inline std::vector<double> momentum(const lrb::TorusLattice& lat, std::size_t i) {
  std::vector<double> k;
  for (int x : lat.site(i)) k.push_back(x * pi / lat.half_side());
  return k;
}

inline double gamma(const lrb::Couplings& c, const std::vector<double>& k) {
  double s = c.omega() * c.omega();
  for (std::size_t j = 0; j < k.size(); ++j) s += 4.0 * c.lambda()[j] * std::pow(std::sin(0.5 * k[j]), 2);
  return std::sqrt(s);
}

inline double dot(const std::vector<double>& k, const std::vector<int>& x) {
  double s = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) s += k[j] * x[j];
  return s;
}

/// H^(m)(t, x) by summing every dual point.
inline double kernel_H(const lrb::TorusLattice& lat, const lrb::Couplings& c, int m, double t, std::size_t x) {
  const auto xs = lat.site(x);
  cplx s = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto k = momentum(lat, i);
    const double g = gamma(c, k);
    const double w = m == 0 ? 1.0 : (m == 1 ? g : 1.0 / g);
    s += w * std::polar(1.0, dot(k, xs) - 2.0 * g * t);
  }
  s /= static_cast<double>(lat.size());
  return m == 0 ? s.real() : s.imag();
}

/// f_t from the normal modes b_k, which rotate as e^{-2 i gamma(k) t}.
/// Splitting f = a + i b (a couples to q, b to p), each Fourier mode of (a, b)
/// evolves by the rotation (a, b) -> (cos a - gamma sin b, sin a / gamma + cos b), angle 2 gamma t.
inline std::vector<cplx> mode_space_evolve(const lrb::TorusLattice& lat, const lrb::Couplings& c,
                                           const std::vector<cplx>& f, double t) {
  const std::size_t n = lat.size();
  std::vector<cplx> ah(n), bh(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = momentum(lat, i);
    for (std::size_t x = 0; x < n; ++x) {
      const cplx e = std::polar(1.0, -dot(k, lat.site(x)));
      ah[i] += f[x].real() * e;
      bh[i] += f[x].imag() * e;
    }
  }
  std::vector<cplx> a2(n), b2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gamma(c, momentum(lat, i));
    const double C = std::cos(2.0 * g * t), S = std::sin(2.0 * g * t);
    a2[i] = C * ah[i] - g * S * bh[i];
    b2[i] = S / g * ah[i] + C * bh[i];
  }
  std::vector<cplx> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    cplx a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx e = std::polar(1.0, dot(momentum(lat, i), lat.site(x)));
      a += a2[i] * e;
      b += b2[i] * e;
    }
    out[x] = cplx{a.real(), b.real()} / static_cast<double>(n);
  }
  return out;
}

/// Quadratic Hamiltonian sum p_x^2 + q^T K q, given by its potential matrix K.
struct Quadratic {
  Eigen::MatrixXd K;
};

/// K for omega^2 q^2 plus lambda (q_x - q_y)^2 per listed bond (a bond may repeat).
inline Quadratic quadratic(int n, double omega, double lambda, const std::vector<std::pair<int, int>>& bonds) {
  Eigen::MatrixXd K = omega * omega * Eigen::MatrixXd::Identity(n, n);
  for (auto [x, y] : bonds) {
    K(x, x) += lambda;
    K(y, y) += lambda;
    K(x, y) -= lambda;
    K(y, x) -= lambda;
  }
  return {K};
}

inline Quadratic quadratic(const lrb::TorusLattice& lat, const lrb::Couplings& c) {
  const int n = static_cast<int>(lat.size());
  Eigen::MatrixXd K = c.omega() * c.omega() * Eigen::MatrixXd::Identity(n, n);
  for (int x = 0; x < n; ++x)
    for (int j = 0; j < lat.nu(); ++j) {
      auto s = lat.site(static_cast<std::size_t>(x));
      s[j] += 1;
      const int y = static_cast<int>(lat.wrapped_index(s));
      const double l = c.lambda()[static_cast<std::size_t>(j)];
      K(x, x) += l;
      K(y, y) += l;
      K(x, y) -= l;
      K(y, x) -= l;
    }
  return {K};
}

/// f_t by integrating dq/dt = 2p, dp/dt = -2Kq exactly in the eigenbasis of K.
inline std::vector<cplx> symplectic_evolve(const Quadratic& H, const std::vector<cplx>& f, double t) {
  const Eigen::Index n = H.K.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.K);
  const Eigen::MatrixXd& V = es.eigenvectors();
  Eigen::VectorXd a(n), b(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    a[x] = f[static_cast<std::size_t>(x)].real();
    b[x] = f[static_cast<std::size_t>(x)].imag();
  }
  const Eigen::VectorXd am = V.transpose() * a, bm = V.transpose() * b;
  Eigen::VectorXd a2(n), b2(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = std::sqrt(std::max(0.0, es.eigenvalues()[k]));
    const double C = std::cos(2.0 * s * t);
    const double S_over = s > 0.0 ? std::sin(2.0 * s * t) / s : 2.0 * t;
    a2[k] = C * am[k] - s * std::sin(2.0 * s * t) * bm[k];
    b2[k] = S_over * am[k] + C * bm[k];
  }
  const Eigen::VectorXd ao = V * a2, bo = V * b2;
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (Eigen::Index x = 0; x < n; ++x) out[static_cast<std::size_t>(x)] = {ao[x], bo[x]};
  return out;
}

/// 2 |sin(sigma/2)| with sigma = Im <g, f_t>.
inline double commutator_norm(const std::vector<cplx>& ft, const std::vector<cplx>& g) {
  double s = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) s += (std::conj(g[x]) * ft[x]).imag();
  return 2.0 * std::abs(std::sin(0.5 * s));
}

/// Ground-state <q_x q_y>, <p_x p_y> of sum p^2 + q^T K q: K^{-1/2}/2 and K^{1/2}/2.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ground_covariance(const Quadratic& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.K);
  const Eigen::VectorXd s = es.eigenvalues().cwiseSqrt();
  const Eigen::MatrixXd& V = es.eigenvectors();
  return {0.5 * V * s.cwiseInverse().asDiagonal() * V.transpose(), 0.5 * V * s.asDiagonal() * V.transpose()};
}

// ---- bounded-interaction framework, brute force ----

struct RandomGraph {
  std::vector<std::vector<double>> d;
  std::vector<std::pair<std::vector<std::size_t>, double>> terms;
};

/// Shortest-path metric of a random connected weighted graph plus random interaction terms.
inline RandomGraph random_graph(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> w(1, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double inf = 1e300;
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t x = 0; x < n; ++x) d[x][x] = 0.0;
  for (std::size_t x = 1; x < n; ++x) {
    const std::size_t y = rng() % x;
    d[x][y] = d[y][x] = w(rng);
  }
  for (std::size_t e = 0; e < n / 2; ++e) {
    const std::size_t x = rng() % n, y = rng() % n;
    if (x != y) d[x][y] = d[y][x] = std::min<double>(d[x][y], w(rng));
  }
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) d[x][y] = std::min(d[x][y], d[x][z] + d[z][y]);
  RandomGraph g{d, {}};
  const std::size_t nt = 1 + rng() % (2 * n);
  for (std::size_t i = 0; i < nt; ++i) {
    std::set<std::size_t> Z;
    const std::size_t k = 1 + rng() % 3;
    for (std::size_t j = 0; j < k; ++j) Z.insert(rng() % n);
    g.terms.push_back({std::vector<std::size_t>(Z.begin(), Z.end()), u(rng) * 2.0});
  }
  return g;
}

inline double Fa(double p, double a, double r) { return std::exp(-a * r) * std::pow(1.0 + r, -p); }

inline double norm_F(const RandomGraph& g, double p, double a) {
  double best = 0.0;
  for (std::size_t x = 0; x < g.d.size(); ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < g.d.size(); ++y) s += Fa(p, a, g.d[x][y]);
    best = std::max(best, s);
  }
  return best;
}

inline double C_a(const RandomGraph& g, double p, double a) {
  double best = 0.0;
  const std::size_t n = g.d.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double s = 0.0;
      for (std::size_t z = 0; z < n; ++z) s += Fa(p, a, g.d[x][z]) * Fa(p, a, g.d[z][y]);
      best = std::max(best, s / Fa(p, a, g.d[x][y]));
    }
  return best;
}

inline double phi_norm(const RandomGraph& g, double p, double a) {
  double best = 0.0;
  const std::size_t n = g.d.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double s = 0.0;
      for (const auto& [Z, nrm] : g.terms)
        if (std::count(Z.begin(), Z.end(), x) && std::count(Z.begin(), Z.end(), y)) s += nrm;
      best = std::max(best, s / Fa(p, a, g.d[x][y]));
    }
  return best;
}

inline std::vector<std::size_t> boundary(const RandomGraph& g, const std::vector<std::size_t>& X) {
  std::vector<std::size_t> out;
  for (std::size_t x : X) {
    bool hit = false;
    for (const auto& [Z, nrm] : g.terms) {
      if (nrm == 0.0 || !std::count(Z.begin(), Z.end(), x)) continue;
      for (std::size_t z : Z)
        if (!std::count(X.begin(), X.end(), z)) hit = true;
    }
    if (hit) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline double D_a(const RandomGraph& g, double p, double a, const std::vector<std::size_t>& X,
                  const std::vector<std::size_t>& Y) {
  auto sum = [&](const std::vector<std::size_t>& A, const std::vector<std::size_t>& B) {
    double s = 0.0;
    for (std::size_t x : A)
      for (std::size_t y : B) s += Fa(p, a, g.d[x][y]);
    return s;
  };
  return std::min(sum(boundary(g, X), Y), sum(X, boundary(g, Y)));
}

}  // namespace oracle
