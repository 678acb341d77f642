#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "lrb/error.hpp"
#include "lrb/kernels.hpp"
#include "lrb/quadrature.hpp"
#include "lrb/torus.hpp"

namespace lrb {

/// Complex field f on the lattice with an explicit support set X.
///
/// Re f shifts momenta and Im f shifts positions under W(f). Values off the
/// support are zero; the support may contain sites where f happens to vanish.
class WeylFunction {
 public:
  explicit WeylFunction(TorusLattice lat) : lat_(lat), values_(lat.size()) {}

  /// f supported on the listed sites with the given amplitudes.
  static WeylFunction from_sites(const TorusLattice& lat,
                                 const std::vector<std::pair<std::vector<int>, cplx>>& entries) {
    WeylFunction f(lat);
    for (const auto& [x, amp] : entries) f.set(lat.index(x), amp);
    return f;
  }

  static WeylFunction delta(const TorusLattice& lat, std::span<const int> x, cplx amplitude = 1.0) {
    WeylFunction f(lat);
    f.set(lat.index(x), amplitude);
    return f;
  }

  /// Full-lattice field; the support is recorded as the whole lattice.
  static WeylFunction from_values(const TorusLattice& lat, std::vector<cplx> values) {
    if (values.size() != lat.size())
      throw precondition_error("WeylFunction: value array does not match lattice size");
    WeylFunction f(lat);
    f.values_ = std::move(values);
    f.support_.resize(lat.size());
    for (std::size_t i = 0; i < lat.size(); ++i) f.support_[i] = i;
    return f;
  }

  void set(std::size_t i, cplx v) {
    if (i >= values_.size()) throw domain_error("WeylFunction: site index outside lattice");
    auto it = std::lower_bound(support_.begin(), support_.end(), i);
    if (it == support_.end() || *it != i) support_.insert(it, i);
    values_[i] = v;
  }

  const TorusLattice& lattice() const noexcept { return lat_; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  const std::vector<std::size_t>& support() const noexcept { return support_; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  double sup_norm() const noexcept {
    double m = 0.0;
    for (std::size_t i : support_) m = std::max(m, std::abs(values_[i]));
    return m;
  }

 private:
  TorusLattice lat_;
  std::vector<cplx> values_;
  std::vector<std::size_t> support_;  // sorted, unique
};

inline void require_same_lattice(const WeylFunction& f, const WeylFunction& g) {
  if (!(f.lattice() == g.lattice()))
    throw precondition_error("Weyl functions live on different lattices");
}

/// Pairwise distances between two supports; everything the bound
/// evaluators need to know about X and Y.
struct SupportGeometry {
  int nu = 1;
  std::vector<int> pair_distances;  // d(x, y) for x in X, y in Y
  int min_distance = 0;             // d(X, Y)
  std::size_t size_x = 0;
  std::size_t size_y = 0;
};

template <class Distance>
SupportGeometry support_geometry(int nu, std::span<const std::size_t> X,
                                 std::span<const std::size_t> Y, Distance&& dist) {
  if (X.empty() || Y.empty()) throw precondition_error("support_geometry: empty support");
  SupportGeometry g;
  g.nu = nu;
  g.size_x = X.size();
  g.size_y = Y.size();
  g.min_distance = std::numeric_limits<int>::max();
  g.pair_distances.reserve(X.size() * Y.size());
  for (std::size_t x : X)
    for (std::size_t y : Y) {
      const int d = dist(x, y);
      g.pair_distances.push_back(d);
      g.min_distance = std::min(g.min_distance, d);
    }
  return g;
}

inline SupportGeometry support_geometry(const WeylFunction& f, const WeylFunction& g) {
  require_same_lattice(f, g);
  const auto& lat = f.lattice();
  return support_geometry(lat.nu(), f.support(), g.support(),
                          [&](std::size_t x, std::size_t y) { return lat.distance(x, y); });
}

/// Im <f, g> with <f, g> = sum_x conj(f_x) g_x.
inline double symplectic_form(const WeylFunction& f, const WeylFunction& g) {
  require_same_lattice(f, g);
  double s = 0.0;
  for (std::size_t x : f.support()) s += (std::conj(f[x]) * g[x]).imag();
  return s;
}

/// Harmonic evolution f_t = f * conj(h1) + conj(f) * h2 (periodic convolution).
/// The kernels must belong to the lattice of f and to time t.
inline WeylFunction evolve(const WeylFunction& f, double t,
                           const std::pair<KernelField, KernelField>& kernels) {
  const auto& [h1, h2] = kernels;
  const auto& lat = f.lattice();
  if (!(h1.lattice == lat) || !(h2.lattice == lat))
    throw precondition_error("evolve: kernels were computed on a different lattice");
  const bool regular = h1.kind == KernelKind::h1 && h2.kind == KernelKind::h2;
  const bool zero_mode = h1.kind == KernelKind::h01 && h2.kind == KernelKind::h02;
  if (!regular && !zero_mode) throw precondition_error("evolve: expected an (h1, h2) kernel pair");
  if (h1.t != t || h2.t != t) throw precondition_error("evolve: kernels belong to another time");

  const std::size_t n = lat.size();
  std::vector<cplx> out(n);
  for (std::size_t y : f.support()) {
    const cplx fy = f[y];
    if (fy == cplx{}) continue;
    const cplx fyc = std::conj(fy);
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t d = lat.sub(x, y);
      out[x] += fy * std::conj(h1.values[d]) + fyc * h2.values[d];
    }
  }
  return WeylFunction::from_values(lat, std::move(out));
}

inline WeylFunction evolve(const WeylFunction& f, double t, const Couplings& c,
                           SumPath path = SumPath::fast) {
  return evolve(f, t, compute_h(f.lattice(), c, t, c.omega() == 0.0, path));
}

/// sigma = Im <g, f_t>; the commutator of W(f_t) and W(g) is
/// W(f_t) W(g) (1 - e^{-i sigma}).
inline double commutator_phase(const WeylFunction& f, const WeylFunction& g, double t,
                               const std::pair<KernelField, KernelField>& kernels) {
  require_same_lattice(f, g);
  return symplectic_form(g, evolve(f, t, kernels));
}

/// Exact || [tau_t(W(f)), W(g)] || = |1 - e^{-i sigma}| = 2 |sin(sigma / 2)|.
inline double commutator_norm_exact(const WeylFunction& f, const WeylFunction& g, double t,
                                    const std::pair<KernelField, KernelField>& kernels) {
  return 2.0 * std::abs(std::sin(0.5 * commutator_phase(f, g, t, kernels)));
}

inline double commutator_norm_exact(const WeylFunction& f, const WeylFunction& g, double t,
                                    const Couplings& c, SumPath path = SumPath::fast) {
  return commutator_norm_exact(f, g, t, compute_h(f.lattice(), c, t, c.omega() == 0.0, path));
}

struct HarmonicBoundParams {
  double mu;
  double a;  // only used by the corollary form, must lie in (0, 1) there
  Couplings couplings;

  HarmonicBoundParams(double mu_, double a_, Couplings c) : mu(mu_), a(a_), couplings(std::move(c)) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw domain_error("HarmonicBoundParams: mu must be > 0");
  }
};

enum class HarmonicForm { theorem, corollary, small_time };

/// C = 2 + c e^{mu/2} + 1/c.
inline double harmonic_constant(const Couplings& c, double mu) {
  return 2.0 + c.c_max() * std::exp(0.5 * mu) + 1.0 / c.c_max();
}

/// sum over z in Z^nu of e^{-beta |z|}, as the nu-th power of the 1-d sum coth(beta/2).
inline double exponential_lattice_sum(int nu, double beta) {
  if (!(beta > 0.0)) throw domain_error("exponential_lattice_sum: decay rate must be > 0");
  return std::pow(1.0 / std::tanh(0.5 * beta), nu);
}

/// Right-hand side of the harmonic Lieb-Robinson bound for Weyl operators.
///   theorem:    C |f| |g| sum_{x,y} exp(-mu (d(x,y) - v_h |t|))
///   corollary:  C~ |f| |g| min(|X|,|Y|) exp(-mu (a d(X,Y) - v_h |t|)),
///               C~ = C sum_{z in Z^nu} e^{-mu (1-a) |z|}
///   small_time: |t|^{2 d(X,Y)} times the theorem form; needs d(X,Y) > 1 + c e^{mu/2+1}
inline double harmonic_bound_rhs(double norm_f, double norm_g, const SupportGeometry& geo, double t,
                                 const HarmonicBoundParams& p, HarmonicForm form) {
  const double C = harmonic_constant(p.couplings, p.mu);
  const double v = harmonic_velocity(p.couplings, p.mu);
  const double at = std::abs(t);
  auto theorem = [&] {
    double s = 0.0;
    for (int d : geo.pair_distances) s += std::exp(-p.mu * (d - v * at));
    return C * norm_f * norm_g * s;
  };
  switch (form) {
    case HarmonicForm::theorem:
      return theorem();
    case HarmonicForm::corollary: {
      if (!(p.a > 0.0 && p.a < 1.0))
        throw domain_error("harmonic corollary bound needs 0 < a < 1");
      const double Ct = C * exponential_lattice_sum(geo.nu, p.mu * (1.0 - p.a));
      return Ct * norm_f * norm_g * static_cast<double>(std::min(geo.size_x, geo.size_y)) *
             std::exp(-p.mu * (p.a * geo.min_distance - v * at));
    }
    case HarmonicForm::small_time: {
      const double need = 1.0 + p.couplings.c_max() * std::exp(0.5 * p.mu + 1.0);
      if (!(geo.min_distance > need))
        throw precondition_error("small-time bound needs d(X,Y) > 1 + c e^{mu/2+1} = " +
                                 std::to_string(need));
      if (at == 0.0) return 0.0;
      return std::pow(at, 2.0 * geo.min_distance) * theorem();
    }
  }
  return 0.0;
}

inline double harmonic_bound_rhs(const WeylFunction& f, const WeylFunction& g, double t,
                                 const HarmonicBoundParams& p, HarmonicForm form) {
  return harmonic_bound_rhs(f.sup_norm(), g.sup_norm(), support_geometry(f, g), t, p, form);
}

/// Bound for A(b(f)) = int A^(s) W(s f) ds and B(b(g)) from a Weyl-operator bound:
/// bound * int |s A^(s)| ds * int |s B^(s)| ds.
inline double observable_transfer(double bound, double weight_a, double weight_b) {
  if (!(bound >= 0.0)) throw domain_error("observable_transfer: bound must be >= 0");
  if (!(weight_a >= 0.0) || !(weight_b >= 0.0))
    throw domain_error("observable_transfer: weights must be >= 0");
  return bound * weight_a * weight_b;
}

/// int |s A^(s)| ds over the real line, for a user-specified Fourier weight A^.
inline QuadratureResult observable_weight(const std::function<double(double)>& a_hat) {
  return integrate_real_line([&](double s) { return std::abs(s * a_hat(s)); });
}

}  // namespace lrb
