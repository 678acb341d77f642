#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "lrb/error.hpp"
#include "lrb/fourier.hpp"
#include "lrb/torus.hpp"

namespace lrb {

enum class KernelKind { H0, H1, Hm1, h1, h2, h01, h02 };

inline std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::H0: return "H0";
    case KernelKind::H1: return "H1";
    case KernelKind::Hm1: return "Hm1";
    case KernelKind::h1: return "h1";
    case KernelKind::h2: return "h2";
    case KernelKind::h01: return "h01";
    case KernelKind::h02: return "h02";
  }
  return "?";
}

/// One sampled kernel over the whole lattice at a fixed time.
struct KernelField {
  double t = 0.0;
  KernelKind kind = KernelKind::H0;
  std::vector<cplx> values;  // indexed by site
  Couplings couplings;
  TorusLattice lattice;

  const cplx& operator[](std::size_t i) const { return values[i]; }
};

/// Velocity v_h(mu) = c_{omega,lambda} max(2/mu, e^{mu/2 + 1}).
inline double harmonic_velocity(const Couplings& c, double mu) {
  if (!(mu > 0.0)) throw domain_error("harmonic_velocity: mu must be > 0");
  return c.c_max() * std::max(2.0 / mu, std::exp(0.5 * mu + 1.0));
}

struct EnvelopeParams {
  double mu;
  Couplings couplings;

  EnvelopeParams(double mu_, Couplings c) : mu(mu_), couplings(std::move(c)) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw domain_error("EnvelopeParams: mu must be > 0");
  }
};

namespace detail {

struct FourierKernels {
  std::vector<double> h0, h1, hm1;
};

inline void check_order(int m) {
  if (m < -1 || m > 1) throw domain_error("kernel order m must be -1, 0 or 1");
}

// H^(0), H^(1), H^(-1) at time t; orders not in `wanted` are left empty.
// With exclude_zero the k = 0 term is dropped from every sum.
inline FourierKernels fourier_kernels(const TorusLattice& lat, const Couplings& c, double t,
                                      SumPath path, bool exclude_zero, bool want_h0,
                                      bool want_h1, bool want_hm1) {
  const std::vector<double> gamma = dispersion_table(lat, c);
  const std::size_t n = lat.size();
  const std::size_t zero = lat.origin();
  std::vector<cplx> c0(n), c1(n), cm1(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (exclude_zero && k == zero) continue;
    const cplx e = std::polar(1.0, -2.0 * gamma[k] * t);
    c0[k] = e;
    c1[k] = gamma[k] * e;
    if (want_hm1) {
      if (gamma[k] == 0.0)
        throw singular_mode_error("H^(-1): gamma(k) vanishes at k = 0 (omega = 0); 1/gamma is singular");
      cm1[k] = e / gamma[k];
    }
  }
  FourierKernels out;
  auto take = [&](const std::vector<cplx>& coeff, bool real_part) {
    const auto s = dual_sum(lat, coeff, path);
    std::vector<double> v(n);
    for (std::size_t x = 0; x < n; ++x) v[x] = real_part ? s[x].real() : s[x].imag();
    return v;
  };
  if (want_h0) out.h0 = take(c0, true);
  if (want_h1) out.h1 = take(c1, false);
  if (want_hm1) out.hm1 = take(cm1, false);
  return out;
}

inline std::vector<cplx> as_complex(const std::vector<double>& v) {
  return std::vector<cplx>(v.begin(), v.end());
}

}  // namespace detail

/// Real Fourier kernel H^(m)_L(t, .) for m in {-1, 0, 1}:
///   H^(0)  = Re (1/|Lambda|) sum_k e^{ik.x - 2i gamma(k) t}
///   H^(1)  = Im (1/|Lambda|) sum_k gamma(k) e^{ik.x - 2i gamma(k) t}
///   H^(-1) = Im (1/|Lambda|) sum_k gamma(k)^{-1} e^{ik.x - 2i gamma(k) t}
/// Stored as complex values with zero imaginary part.
inline KernelField compute_H(const TorusLattice& lat, const Couplings& c, int m, double t,
                             SumPath path = SumPath::fast) {
  detail::check_order(m);
  require_compatible(lat, c);
  if (m == -1 && c.omega() == 0.0)
    throw singular_mode_error(
        "H^(-1) with omega = 0: gamma(k) vanishes at the zero mode k = 0");
  auto fk = detail::fourier_kernels(lat, c, t, path, false, m == 0, m == 1, m == -1);
  KernelField f{t, KernelKind::H0, {}, c, lat};
  if (t == 0.0) {
    // exact by orthogonality: H0 is the delta at the origin, H1 and H^(-1) vanish
    f.kind = m == 0 ? KernelKind::H0 : (m == 1 ? KernelKind::H1 : KernelKind::Hm1);
    f.values.assign(lat.size(), cplx{});
    if (m == 0) f.values[lat.origin()] = 1.0;
    return f;
  }
  switch (m) {
    case 0: f.kind = KernelKind::H0; f.values = detail::as_complex(fk.h0); break;
    case 1: f.kind = KernelKind::H1; f.values = detail::as_complex(fk.h1); break;
    default: f.kind = KernelKind::Hm1; f.values = detail::as_complex(fk.hm1); break;
  }
  return f;
}

/// Evolution kernels h_{1,t} = H0 + (i/2)(H1 + Hm1) and h_{2,t} = (i/2)(H1 - Hm1).
///
/// With zero_omega (which requires omega = 0) the zero mode is removed from
/// every sum and replaced by its exact contribution: (1 - it)/|Lambda| in h01
/// and it/|Lambda| in h02.
inline std::pair<KernelField, KernelField> compute_h(const TorusLattice& lat, const Couplings& c,
                                                     double t, bool zero_omega = false,
                                                     SumPath path = SumPath::fast) {
  require_compatible(lat, c);
  if (!zero_omega && c.omega() == 0.0)
    throw singular_mode_error(
        "h-kernels with omega = 0 need the zero-mode variant: gamma(0) = 0 makes 1/gamma singular");
  if (zero_omega && c.omega() != 0.0)
    throw precondition_error("zero-mode kernels apply only when omega = 0");

  const std::size_t n = lat.size();
  const KernelKind k1 = zero_omega ? KernelKind::h01 : KernelKind::h1;
  const KernelKind k2 = zero_omega ? KernelKind::h02 : KernelKind::h2;
  std::vector<cplx> v1(n), v2(n);
  if (t == 0.0) {
    // h1 = delta and h2 = 0 exactly, so that f_0 = f bit for bit
    v1[lat.origin()] = 1.0;
    return {KernelField{t, k1, std::move(v1), c, lat}, KernelField{t, k2, std::move(v2), c, lat}};
  }
  const auto fk = detail::fourier_kernels(lat, c, t, path, zero_omega, true, true, true);
  const cplx I{0.0, 1.0};
  for (std::size_t x = 0; x < n; ++x) {
    v1[x] = fk.h0[x] + 0.5 * I * (fk.h1[x] + fk.hm1[x]);
    v2[x] = 0.5 * I * (fk.h1[x] - fk.hm1[x]);
  }
  if (zero_omega) {
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t x = 0; x < n; ++x) {
      v1[x] += cplx{1.0, -t} * inv;
      v2[x] += cplx{0.0, t} * inv;
    }
  }
  return {KernelField{t, k1, std::move(v1), c, lat}, KernelField{t, k2, std::move(v2), c, lat}};
}

/// Exponential envelope for |H^(m)(t, x)| at |x| = r:
/// prefactor(m) * exp(-mu (r - v_h(mu) |t|)) with prefactors 1, c e^{mu/2}, 1/c.
inline double envelope(const EnvelopeParams& e, int m, double t, double r) {
  detail::check_order(m);
  const double c = e.couplings.c_max();
  const double pref = m == 0 ? 1.0 : (m == 1 ? c * std::exp(0.5 * e.mu) : 1.0 / c);
  return pref * std::exp(-e.mu * (r - harmonic_velocity(e.couplings, e.mu) * std::abs(t)));
}

/// Short-time bound (2c|t|)^{2r} / (2r)! * e^{2c|t|} on |H^(0)(t, x)|, |x| = r.
inline double small_time_kernel_bound(const Couplings& c, double t, int r) {
  const double z = 2.0 * c.c_max() * std::abs(t);
  if (r == 0) return std::exp(z);
  if (z == 0.0) return 0.0;
  const double two_r = 2.0 * r;
  return std::exp(two_r * std::log(z) - std::lgamma(two_r + 1.0) + z);
}

}  // namespace lrb
