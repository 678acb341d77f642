#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lrb/error.hpp"
#include "lrb/kernels.hpp"
#include "lrb/lattice_sums.hpp"
#include "lrb/quadrature.hpp"
#include "lrb/torus.hpp"
#include "lrb/weyl.hpp"

namespace lrb {

/// Where the perturbation acts in the Hamiltonian. Only the Fock-space
/// builder looks at this; the bound formulas are the same for all tags.
enum class PerturbationTag { onsite_q, onsite_p, bond_q, bond_p };

inline std::string to_string(PerturbationTag t) {
  switch (t) {
    case PerturbationTag::onsite_q: return "onsite_q";
    case PerturbationTag::onsite_p: return "onsite_p";
    case PerturbationTag::bond_q: return "bond_q";
    case PerturbationTag::bond_p: return "bond_p";
  }
  return "?";
}

/// Anharmonic perturbation V together with |V'^(w)|, where
/// V'^(w) = (2 pi)^{-1} int V'(q) e^{-iqw} dq.
struct PerturbationSpec {
  enum class Kind { none, gaussian, cosine, tabulated, custom };

  Kind kind = Kind::none;
  PerturbationTag tag = PerturbationTag::onsite_q;
  double alpha = 0.0;                      // gaussian: V = alpha e^{-q^2/2}; cosine: amplitude
  double beta = 0.0;                       // cosine: V = alpha cos(beta q)
  std::vector<double> table_w, table_abs;  // tabulated |V'^| on w >= 0, linear in between
  std::function<double(double)> potential;       // custom V(q), optional
  std::function<double(double)> abs_vprime_hat;  // custom |V'^(w)|

  static PerturbationSpec none() { return {}; }

  static PerturbationSpec gaussian(double alpha, PerturbationTag tag = PerturbationTag::onsite_q) {
    if (!std::isfinite(alpha)) throw domain_error("gaussian perturbation: alpha must be finite");
    PerturbationSpec p;
    p.kind = Kind::gaussian;
    p.alpha = alpha;
    p.tag = tag;
    return p;
  }

  /// V(q) = amp cos(beta q). Its V'^ is a pair of point masses at w = +-beta,
  /// so kappa_V and the l1 norm are sums over the two atoms.
  static PerturbationSpec cosine(double amp, double beta, PerturbationTag tag = PerturbationTag::onsite_q) {
    if (!std::isfinite(amp) || !std::isfinite(beta)) throw domain_error("cosine perturbation: non-finite parameter");
    PerturbationSpec p;
    p.kind = Kind::cosine;
    p.alpha = amp;
    p.beta = beta;
    p.tag = tag;
    return p;
  }

  /// |V'^| tabulated on 0 <= w_0 < w_1 < ...; even in w, zero beyond the table.
  static PerturbationSpec tabulated(std::vector<double> w, std::vector<double> abs_hat) {
    if (w.size() != abs_hat.size() || w.size() < 2)
      throw domain_error("tabulated perturbation: need matching w and |V'^| columns, at least 2 rows");
    if (w[0] < 0.0) throw domain_error("tabulated perturbation: w must start at >= 0");
    for (std::size_t i = 1; i < w.size(); ++i)
      if (!(w[i] > w[i - 1])) throw domain_error("tabulated perturbation: w must increase");
    for (double v : abs_hat)
      if (!(v >= 0.0) || !std::isfinite(v)) throw domain_error("tabulated perturbation: |V'^| must be >= 0");
    PerturbationSpec p;
    p.kind = Kind::tabulated;
    p.table_w = std::move(w);
    p.table_abs = std::move(abs_hat);
    return p;
  }

  static PerturbationSpec custom(std::function<double(double)> abs_hat,
                                 std::function<double(double)> V = {}) {
    PerturbationSpec p;
    p.kind = Kind::custom;
    p.abs_vprime_hat = std::move(abs_hat);
    p.potential = std::move(V);
    return p;
  }

  bool is_zero() const noexcept {
    return kind == Kind::none || ((kind == Kind::gaussian || kind == Kind::cosine) && alpha == 0.0);
  }

  /// V(q), when the spec knows it.
  double V(double q) const {
    switch (kind) {
      case Kind::none: return 0.0;
      case Kind::gaussian: return alpha * std::exp(-0.5 * q * q);
      case Kind::cosine: return alpha * std::cos(beta * q);
      case Kind::custom:
        if (potential) return potential(q);
        break;
      case Kind::tabulated: break;
    }
    throw precondition_error("perturbation has no potential V(q); only |V'^| is known");
  }

  bool has_potential() const noexcept {
    return kind != Kind::tabulated && (kind != Kind::custom || static_cast<bool>(potential));
  }
};

namespace detail {

inline double gaussian_abs_hat(double alpha, double w) {
  return std::abs(alpha) * std::abs(w) * std::exp(-0.5 * w * w) / std::sqrt(2.0 * std::numbers::pi);
}

// int_{w0}^{w1} w^k (v0 + s (w - w0)) dw for k in {0, 1}
inline double linear_moment(double w0, double w1, double v0, double v1, int k) {
  const double s = (v1 - v0) / (w1 - w0);
  const double c = v0 - s * w0;  // v(w) = c + s w
  if (k == 0) return c * (w1 - w0) + 0.5 * s * (w1 * w1 - w0 * w0);
  return 0.5 * c * (w1 * w1 - w0 * w0) + s * (w1 * w1 * w1 - w0 * w0 * w0) / 3.0;
}

inline QuadratureResult checked_real_line(const std::function<double(double)>& h, const char* what) {
  QuadratureResult r;
  try {
    r = integrate_real_line(h, 0.0, 1e-12);
  } catch (const std::exception&) {
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.error = std::numeric_limits<double>::infinity();
  }
  const double scale = std::max(std::abs(r.value), 1e-300);
  if (!std::isfinite(r.value) || !std::isfinite(r.error) || r.error > 1e-8 * scale) {
    const auto part = integrate([&](double w) { return h(w); }, -1e3, 1e3, 1e-10);
    throw divergence_error(std::string(what) + ": integral over the real line did not converge",
                           part.value, r.error);
  }
  return r;
}

}  // namespace detail

/// |V'^(w)| for function-valued specs.
inline double abs_vprime_hat(const PerturbationSpec& p, double w) {
  using K = PerturbationSpec::Kind;
  switch (p.kind) {
    case K::none: return 0.0;
    case K::gaussian: return detail::gaussian_abs_hat(p.alpha, w);
    case K::custom: return p.abs_vprime_hat(w);
    case K::tabulated: {
      const double a = std::abs(w);
      const auto& x = p.table_w;
      if (a < x.front() || a > x.back()) return 0.0;
      const auto it = std::upper_bound(x.begin(), x.end(), a);
      const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - x.begin()), x.size() - 1);
      const std::size_t i = j - 1;
      const double u = (a - x[i]) / (x[j] - x[i]);
      return (1.0 - u) * p.table_abs[i] + u * p.table_abs[j];
    }
    case K::cosine: break;
  }
  throw precondition_error("cosine perturbation: V'^ is a point measure, not a function");
}

/// kappa_V = int |w| |V'^(w)| dw with an absolute error estimate.
inline QuadratureResult kappa_V(const PerturbationSpec& p) {
  using K = PerturbationSpec::Kind;
  switch (p.kind) {
    case K::none: return {0.0, 0.0};
    case K::cosine: return {std::abs(p.alpha) * p.beta * p.beta, 0.0};
    case K::tabulated: {
      double s = 0.0;
      for (std::size_t i = 1; i < p.table_w.size(); ++i)
        s += detail::linear_moment(p.table_w[i - 1], p.table_w[i], p.table_abs[i - 1], p.table_abs[i], 1);
      return {2.0 * s, 0.0};
    }
    case K::gaussian:
    case K::custom:
      return detail::checked_real_line([&](double w) { return std::abs(w) * abs_vprime_hat(p, w); },
                                       "kappa_V");
  }
  return {0.0, 0.0};
}

/// kappa_V for a user-supplied |V'^|.
inline QuadratureResult kappa_V(const std::function<double(double)>& abs_hat) {
  return kappa_V(PerturbationSpec::custom(abs_hat));
}

/// ||V'^||_1 = int |V'^(w)| dw.
inline QuadratureResult vprime_hat_l1(const PerturbationSpec& p) {
  using K = PerturbationSpec::Kind;
  switch (p.kind) {
    case K::none: return {0.0, 0.0};
    case K::cosine: return {std::abs(p.alpha * p.beta), 0.0};
    case K::tabulated: {
      double s = 0.0;
      for (std::size_t i = 1; i < p.table_w.size(); ++i)
        s += detail::linear_moment(p.table_w[i - 1], p.table_w[i], p.table_abs[i - 1], p.table_abs[i], 0);
      return {2.0 * s, 0.0};
    }
    case K::gaussian:
    case K::custom:
      return detail::checked_real_line([&](double w) { return abs_vprime_hat(p, w); }, "||V'^||_1");
  }
  return {0.0, 0.0};
}

struct AnharmonicBoundParams {
  double mu;
  double epsilon;
  Couplings couplings;

  AnharmonicBoundParams(double mu_, double eps, Couplings c)
      : mu(mu_), epsilon(eps), couplings(std::move(c)) {
    if (!(mu >= 1.0) || !std::isfinite(mu))
      throw domain_error("anharmonic bound requires mu >= 1 (theorem hypothesis), got mu = " +
                         std::to_string(mu_));
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
      throw domain_error("anharmonic bound requires epsilon > 0");
  }
  int nu() const noexcept { return couplings.nu(); }
};

/// C_nu = 2^{nu+1} sum_z (1 + |z|)^{-nu-1}.
inline double cnu_lattice(const TorusLattice& lat) {
  return std::pow(2.0, lat.nu() + 1) * power_lattice_sum(lat, lat.nu() + 1.0);
}
inline double cnu_infinite(int nu) {
  return std::pow(2.0, nu + 1) * power_lattice_sum_infinite(nu, nu + 1.0);
}
/// C_nu over a vertex-transitive finite site set, given d(0, z) for every z.
inline double cnu_from_distances(int nu, const std::vector<int>& distances_from_origin) {
  double s = 0.0;
  for (int d : distances_from_origin) s += std::pow(1.0 + d, -(nu + 1.0));
  return std::pow(2.0, nu + 1) * s;
}

enum class CnuMode { lattice, z_limit };

struct AnharmConstants {
  double C;           // (2 + c e^{(mu+eps)/2} + 1/c) sup_s (1+s)^{nu+1} e^{-eps s}
  double sup_factor;  // the sup, attained at s* = max(0, (nu+1)/eps - 1)
  double Cnu;
  double kappa;
  double v_h;         // v_h(mu + eps)
  double v;           // v_h(mu + eps) + C Cnu kappa / (mu + eps)
};

/// sup_{s >= 0} (1 + s)^{nu+1} e^{-eps s}.
inline double anharm_sup_factor(int nu, double eps) {
  const double s = std::max(0.0, (nu + 1.0) / eps - 1.0);
  return std::pow(1.0 + s, nu + 1.0) * std::exp(-eps * s);
}

inline AnharmConstants anharm_constants(const AnharmonicBoundParams& b, double kappa, double Cnu) {
  if (!(kappa >= 0.0)) throw domain_error("anharm_constants: kappa_V must be >= 0");
  if (!(Cnu > 0.0)) throw domain_error("anharm_constants: C_nu must be > 0");
  const double me = b.mu + b.epsilon;
  const double c = b.couplings.c_max();
  AnharmConstants k{};
  k.sup_factor = anharm_sup_factor(b.nu(), b.epsilon);
  k.C = (2.0 + c * std::exp(0.5 * me) + 1.0 / c) * k.sup_factor;
  k.Cnu = Cnu;
  k.kappa = kappa;
  k.v_h = harmonic_velocity(b.couplings, me);
  k.v = k.v_h + k.C * Cnu * kappa / me;
  return k;
}

inline AnharmConstants anharm_constants(const AnharmonicBoundParams& b, const PerturbationSpec& p,
                                        const TorusLattice& lat, CnuMode mode = CnuMode::lattice) {
  require_compatible(lat, b.couplings);
  const double Cnu = mode == CnuMode::lattice ? cnu_lattice(lat) : cnu_infinite(b.nu());
  return anharm_constants(b, kappa_V(p).value, Cnu);
}

/// F_mu(r) = e^{-mu r} / (1 + r)^{nu+1}.
inline double F_mu(double mu, int nu, double r) {
  return std::exp(-mu * r) * std::pow(1.0 + r, -(nu + 1.0));
}

enum class AnharmForm { theorem, corollary };

/// Right-hand side of the anharmonic Lieb-Robinson bound.
///   theorem:   C |f| |g| e^{(mu+eps) v |t|} sum_{x,y} F_mu(d(x,y))
///   corollary: C~ |f| |g| min(|X|,|Y|) e^{-mu (d(X,Y) - (1 + eps/mu) v |t|)},
///              C~ = C sum_{z in Z^nu} (1+|z|)^{-nu-1}
inline double anharm_bound_rhs(double norm_f, double norm_g, const SupportGeometry& geo, double t,
                               const AnharmonicBoundParams& b, const AnharmConstants& k,
                               AnharmForm form) {
  const double at = std::abs(t);
  if (form == AnharmForm::theorem) {
    double s = 0.0;
    for (int d : geo.pair_distances) s += F_mu(b.mu, geo.nu, d);
    return k.C * norm_f * norm_g * std::exp((b.mu + b.epsilon) * k.v * at) * s;
  }
  const double Ct = k.C * power_lattice_sum_infinite(geo.nu, geo.nu + 1.0);
  return Ct * norm_f * norm_g * static_cast<double>(std::min(geo.size_x, geo.size_y)) *
         std::exp(-b.mu * (geo.min_distance - (1.0 + b.epsilon / b.mu) * k.v * at));
}

inline double anharm_bound_rhs(const WeylFunction& f, const WeylFunction& g, double t,
                               const AnharmonicBoundParams& b, const AnharmConstants& k,
                               AnharmForm form) {
  return anharm_bound_rhs(f.sup_norm(), g.sup_norm(), support_geometry(f, g), t, b, k, form);
}

}  // namespace lrb
