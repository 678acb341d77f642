#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lrb/error.hpp"

namespace lrb {

/// The periodic cube (-L, L]^nu of Z^nu together with its dual grid
/// {x pi / L : x in the cube}.
///
/// Sites are enumerated row-major over (-L+1, ..., L)^nu, first coordinate
/// most significant. Dual point i is site i scaled by pi/L, so both
/// enumerations share one index. The class stores only (nu, L); coordinates
/// are decoded arithmetically, which keeps it a cheap value type.
class TorusLattice {
 public:
  TorusLattice(int nu, int half_side) : nu_(nu), half_(half_side) {
    if (nu < 1) throw domain_error("TorusLattice: dimension must be >= 1");
    if (half_side < 1) throw domain_error("TorusLattice: half side L must be >= 1");
    std::size_t n = 1;
    for (int j = 0; j < nu; ++j) {
      n *= static_cast<std::size_t>(side());
      if (n > (std::size_t{1} << 26)) throw domain_error("TorusLattice: too many sites");
    }
    size_ = n;
  }

  int nu() const noexcept { return nu_; }
  int half_side() const noexcept { return half_; }
  int side() const noexcept { return 2 * half_; }
  std::size_t size() const noexcept { return size_; }

  /// Coordinate j of site i, in (-L, L].
  int coord(std::size_t i, int j) const noexcept {
    return static_cast<int>((i / stride(j)) % static_cast<std::size_t>(side())) - half_ + 1;
  }

  std::vector<int> site(std::size_t i) const {
    std::vector<int> x(static_cast<std::size_t>(nu_));
    for (int j = 0; j < nu_; ++j) x[static_cast<std::size_t>(j)] = coord(i, j);
    return x;
  }

  /// Dual point k = x pi / L for site index i.
  std::vector<double> momentum(std::size_t i) const {
    std::vector<double> k(static_cast<std::size_t>(nu_));
    for (int j = 0; j < nu_; ++j)
      k[static_cast<std::size_t>(j)] = std::numbers::pi * coord(i, j) / half_;
    return k;
  }

  bool contains(std::span<const int> x) const noexcept {
    if (x.size() != static_cast<std::size_t>(nu_)) return false;
    for (int xj : x)
      if (xj <= -half_ || xj > half_) return false;
    return true;
  }

  std::size_t index(std::span<const int> x) const {
    if (x.size() != static_cast<std::size_t>(nu_))
      throw domain_error("TorusLattice: site has " + std::to_string(x.size()) +
                         " coordinates, lattice dimension is " + std::to_string(nu_));
    std::size_t i = 0;
    for (int j = 0; j < nu_; ++j) {
      const int xj = x[static_cast<std::size_t>(j)];
      if (xj <= -half_ || xj > half_)
        throw domain_error("TorusLattice: coordinate " + std::to_string(xj) + " outside (-" +
                           std::to_string(half_) + ", " + std::to_string(half_) + "]");
      i = i * static_cast<std::size_t>(side()) + static_cast<std::size_t>(xj + half_ - 1);
    }
    return i;
  }

  /// Index of an arbitrary integer point after reduction modulo 2L.
  std::size_t wrapped_index(std::span<const int> x) const {
    std::vector<int> w(x.begin(), x.end());
    for (int& xj : w) xj = wrap(xj);
    return index(w);
  }

  /// Representative of x modulo 2L in (-L, L].
  int wrap(long x) const noexcept {
    const long s = side();
    long r = ((x + half_ - 1) % s + s) % s;
    return static_cast<int>(r - half_ + 1);
  }

  std::size_t origin() const noexcept {
    std::size_t i = 0;
    for (int j = 0; j < nu_; ++j)
      i = i * static_cast<std::size_t>(side()) + static_cast<std::size_t>(half_ - 1);
    return i;
  }

  /// Index of -x, with the convention that the coordinate L maps to itself
  /// (the dual coordinate pi is its own negative). Pure integer arithmetic.
  std::size_t neg(std::size_t i) const noexcept {
    std::size_t r = 0;
    for (int j = 0; j < nu_; ++j)
      r = r * static_cast<std::size_t>(side()) + digit(wrap(-static_cast<long>(coord(i, j))));
    return r;
  }

  /// Index of x_a - x_b reduced onto the torus.
  std::size_t sub(std::size_t a, std::size_t b) const noexcept {
    std::size_t r = 0;
    for (int j = 0; j < nu_; ++j)
      r = r * static_cast<std::size_t>(side()) +
          digit(wrap(static_cast<long>(coord(a, j)) - coord(b, j)));
    return r;
  }

  /// Index of x_a + x_b reduced onto the torus.
  std::size_t add(std::size_t a, std::size_t b) const noexcept {
    std::size_t r = 0;
    for (int j = 0; j < nu_; ++j)
      r = r * static_cast<std::size_t>(side()) +
          digit(wrap(static_cast<long>(coord(a, j)) + coord(b, j)));
    return r;
  }

  /// Torus distance sum_j min_eta |x_j - y_j + 2 L eta|.
  int distance(std::size_t a, std::size_t b) const noexcept {
    int d = 0;
    for (int j = 0; j < nu_; ++j) d += std::abs(wrap(static_cast<long>(coord(a, j)) - coord(b, j)));
    return d;
  }

  /// |x| for x in (-L, L]^nu; equals the torus distance to the origin.
  int norm(std::size_t i) const noexcept {
    int d = 0;
    for (int j = 0; j < nu_; ++j) d += std::abs(coord(i, j));
    return d;
  }

  std::vector<std::vector<int>> sites() const {
    std::vector<std::vector<int>> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back(site(i));
    return out;
  }

  std::vector<std::vector<double>> dual() const {
    std::vector<std::vector<double>> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back(momentum(i));
    return out;
  }

  friend bool operator==(const TorusLattice& a, const TorusLattice& b) noexcept {
    return a.nu_ == b.nu_ && a.half_ == b.half_;
  }

 private:
  std::size_t stride(int j) const noexcept {
    std::size_t s = 1;
    for (int q = j + 1; q < nu_; ++q) s *= static_cast<std::size_t>(side());
    return s;
  }
  std::size_t digit(int x) const noexcept { return static_cast<std::size_t>(x + half_ - 1); }

  int nu_;
  int half_;
  std::size_t size_ = 0;
};

/// Distance on the torus between two sites given by coordinates.
inline int torus_distance(const TorusLattice& lat, std::span<const int> x, std::span<const int> y) {
  return lat.distance(lat.index(x), lat.index(y));
}

/// On-site frequency omega and bond couplings lambda_j of the harmonic lattice.
class Couplings {
 public:
  Couplings(double omega, std::vector<double> lambda) : omega_(omega), lambda_(std::move(lambda)) {
    if (!(omega >= 0.0) || !std::isfinite(omega))
      throw domain_error("Couplings: omega must be finite and >= 0");
    if (lambda_.empty()) throw domain_error("Couplings: need one lambda per lattice direction");
    double s = 0.0;
    for (double l : lambda_) {
      if (!(l >= 0.0) || !std::isfinite(l))
        throw domain_error("Couplings: every lambda_j must be finite and >= 0");
      s += l;
    }
    c_max_ = std::sqrt(omega_ * omega_ + 4.0 * s);
    if (!(c_max_ > 0.0)) throw domain_error("Couplings: omega and all lambda_j vanish");
  }

  double omega() const noexcept { return omega_; }
  const std::vector<double>& lambda() const noexcept { return lambda_; }
  int nu() const noexcept { return static_cast<int>(lambda_.size()); }

  /// c_{omega,lambda} = (omega^2 + 4 sum_j lambda_j)^{1/2}, the largest mode frequency.
  double c_max() const noexcept { return c_max_; }

  friend bool operator==(const Couplings& a, const Couplings& b) noexcept {
    return a.omega_ == b.omega_ && a.lambda_ == b.lambda_;
  }

 private:
  double omega_;
  std::vector<double> lambda_;
  double c_max_ = 0.0;
};

inline void require_compatible(const TorusLattice& lat, const Couplings& c) {
  if (lat.nu() != c.nu())
    throw precondition_error("couplings carry " + std::to_string(c.nu()) +
                             " bond constants but the lattice has dimension " +
                             std::to_string(lat.nu()));
}

/// gamma(k) = sqrt(omega^2 + 4 sum_j lambda_j sin^2(k_j / 2)).
inline double dispersion(const Couplings& c, std::span<const double> k) {
  if (k.size() != c.lambda().size())
    throw precondition_error("dispersion: momentum dimension does not match couplings");
  double s = c.omega() * c.omega();
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double h = std::sin(0.5 * k[j]);
    s += 4.0 * c.lambda()[j] * h * h;
  }
  return std::sqrt(s);
}

/// gamma over the dual grid, index-aligned with the site enumeration.
inline std::vector<double> dispersion_table(const TorusLattice& lat, const Couplings& c) {
  require_compatible(lat, c);
  std::vector<double> g(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) g[i] = dispersion(c, lat.momentum(i));
  return g;
}

}  // namespace lrb
