#pragma once

#include <lapacke.h>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "lrb/anharmonic.hpp"
#include "lrb/error.hpp"
#include "lrb/fourier.hpp"
#include "lrb/torus.hpp"

namespace lrb {

enum class Topology { chain, ring };

/// A few oscillators on a chain or ring, each truncated to number states 0..n-1.
struct FockSpec {
  int sites = 1;
  Topology topology = Topology::ring;
  int trunc = 16;
  Couplings couplings{1.0, {1.0}};
  PerturbationSpec perturbation{};
  double omega0 = 0.0;  // basis frequency; 0 picks omega (or 1 if omega = 0)

  static constexpr std::size_t max_dimension = 20736;
};

/// Site pairs (x, x+1) carrying the bond coupling. On a 2-site ring both
/// (0,1) and (1,0) are bonds, matching the periodic torus with L = 1.
inline std::vector<std::pair<int, int>> fock_bonds(int N, Topology top) {
  std::vector<std::pair<int, int>> b;
  if (top == Topology::chain) {
    for (int x = 0; x + 1 < N; ++x) b.emplace_back(x, x + 1);
  } else if (N >= 2) {
    for (int x = 0; x < N; ++x) b.emplace_back(x, (x + 1) % N);
  }
  return b;
}

/// Graph distance between two sites of the chain or ring.
inline int fock_distance(int N, Topology top, int x, int y) {
  const int d = std::abs(x - y);
  return top == Topology::chain ? d : std::min(d, N - d);
}

namespace detail {

using MatD = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

// Eigen-decomposition of a real symmetric matrix in place (columns of a
// become eigenvectors), via LAPACK divide and conquer.
inline Eigen::VectorXd symmetric_eigen(MatD& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data());
  if (info != 0) throw convergence_error("dsyevd failed with info = " + std::to_string(info));
  return w;
}

// f(M) for a real symmetric M by spectral calculus.
template <class F>
MatD symmetric_function(const MatD& m, F&& f) {
  MatD u = m;
  const auto w = symmetric_eigen(u);
  Eigen::VectorXd fw(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) fw[i] = f(w[i]);
  return u * fw.asDiagonal() * u.transpose();
}

// phase i^{j-k} attached to entry (j, k); p = omega0 R q R^dagger with R = diag(i^j)
inline cplx ipow(long m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline MatD real_part_checked(const MatC& m, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.imag().cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw precondition_error(std::string(what) +
                             ": V of a momentum variable must be even for a real Hamiltonian");
  return m.real();
}

}  // namespace detail

/// Exact dynamics of the truncated system. H is split into blocks of fixed
/// total number parity whenever it has no matrix elements between them.
class FockSystem {
 public:
  using MatD = detail::MatD;
  using MatC = detail::MatC;
  using VecC = detail::VecC;

  struct Block {
    std::vector<std::size_t> states;  // basis indices, ascending
    MatD U;                           // eigenvectors (columns)
    Eigen::VectorXd E;                // eigenvalues, ascending
  };

  explicit FockSystem(FockSpec spec) : spec_(std::move(spec)) {
    const int N = spec_.sites, n = spec_.trunc;
    if (N < 1 || N > 4) throw domain_error("FockSystem: 1 to 4 sites supported");
    if (n < 2) throw domain_error("FockSystem: truncation must be >= 2");
    if (spec_.couplings.nu() != 1) throw precondition_error("FockSystem: couplings must be one-dimensional");
    dim_ = 1;
    for (int x = 0; x < N; ++x) {
      dim_ *= static_cast<std::size_t>(n);
      if (dim_ > FockSpec::max_dimension)
        throw domain_error("FockSystem: n^N = " + std::to_string(dim_) + " exceeds " +
                           std::to_string(FockSpec::max_dimension));
    }
    omega0_ = spec_.omega0 > 0.0 ? spec_.omega0
                                 : (spec_.couplings.omega() > 0.0 ? spec_.couplings.omega() : 1.0);
    build_single_site();
    assemble();
    diagonalize();
  }

  const FockSpec& spec() const noexcept { return spec_; }
  std::size_t dimension() const noexcept { return dim_; }
  double omega0() const noexcept { return omega0_; }
  const Eigen::SparseMatrix<double>& hamiltonian() const noexcept { return H_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

  /// Single-site truncated q and p.
  const MatD& q_site() const noexcept { return q1_; }
  const MatC& p_site() const noexcept { return p1_; }

  /// q_x or p_x on the full space (dense; small systems only).
  MatC q_full(int x) const { return embed(q1_.cast<cplx>(), x); }
  MatC p_full(int x) const { return embed(p1_, x); }

  /// All eigenvalues, ascending.
  Eigen::VectorXd spectrum() const {
    std::vector<double> e;
    for (const auto& b : blocks_) e.insert(e.end(), b.E.data(), b.E.data() + b.E.size());
    std::sort(e.begin(), e.end());
    return Eigen::Map<Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(e.size()));
  }

  /// Ground multiplet: eigenvectors within 1e-9 (relative) of the lowest energy.
  std::vector<VecC> ground_multiplet(std::size_t min_states = 1) const {
    struct Level { double e; std::size_t b; Eigen::Index i; };
    std::vector<Level> lv;
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (Eigen::Index i = 0; i < blocks_[b].E.size(); ++i) lv.push_back({blocks_[b].E[i], b, i});
    std::sort(lv.begin(), lv.end(), [](const Level& a, const Level& c) { return a.e < c.e; });
    const double tol = 1e-9 * std::max(1.0, std::abs(lv[0].e));
    std::size_t k = std::min(std::max<std::size_t>(min_states, 1), lv.size());
    while (k < lv.size() && lv[k].e - lv[k - 1].e <= tol) ++k;
    std::vector<VecC> out;
    for (std::size_t j = 0; j < k; ++j) {
      VecC v = VecC::Zero(static_cast<Eigen::Index>(dim_));
      const auto& B = blocks_[lv[j].b];
      for (std::size_t s = 0; s < B.states.size(); ++s)
        v[static_cast<Eigen::Index>(B.states[s])] = B.U(static_cast<Eigen::Index>(s), lv[j].i);
      out.push_back(std::move(v));
    }
    return out;
  }

  double ground_energy() const { return spectrum()[0]; }

  /// e^{-iHt} v.
  VecC propagate(const VecC& v, double t) const {
    VecC out(v.size());
    for (const auto& B : blocks_) {
      const Eigen::Index m = static_cast<Eigen::Index>(B.states.size());
      MatD x(m, 2);
      for (Eigen::Index s = 0; s < m; ++s) {
        const cplx c = v[static_cast<Eigen::Index>(B.states[static_cast<std::size_t>(s)])];
        x(s, 0) = c.real();
        x(s, 1) = c.imag();
      }
      MatD y = B.U.transpose() * x;
      for (Eigen::Index s = 0; s < m; ++s) {
        const cplx c = cplx{y(s, 0), y(s, 1)} * std::polar(1.0, -B.E[s] * t);
        y(s, 0) = c.real();
        y(s, 1) = c.imag();
      }
      const MatD z = B.U * y;
      for (Eigen::Index s = 0; s < m; ++s)
        out[static_cast<Eigen::Index>(B.states[static_cast<std::size_t>(s)])] = cplx{z(s, 0), z(s, 1)};
    }
    return out;
  }

  /// Single-site factor e^{i (a q + b p)} of a Weyl operator.
  MatC weyl_site(cplx f) const {
    MatC m = f.real() * q1_.cast<cplx>() + f.imag() * p1_;
    Eigen::SelfAdjointEigenSolver<MatC> es(m);
    if (es.info() != Eigen::Success) throw convergence_error("weyl_site: eigensolver failed");
    VecC ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, es.eigenvalues()[i]);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  }

  /// W(f) v, with W(f) = prod_x e^{i (q_x Re f_x + p_x Im f_x)} applied factor by factor.
  VecC apply_weyl(const std::vector<cplx>& f, const VecC& v) const {
    check_field(f);
    VecC out = v;
    for (int x = 0; x < spec_.sites; ++x)
      if (f[static_cast<std::size_t>(x)] != cplx{}) apply_site(weyl_site(f[static_cast<std::size_t>(x)]), x, out);
    return out;
  }

  /// Dense W(f) on the full space (small systems only).
  MatC weyl_matrix(const std::vector<cplx>& f) const {
    check_field(f);
    MatC w = MatC::Identity(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (Eigen::Index c = 0; c < w.cols(); ++c) w.col(c) = apply_weyl(f, w.col(c));
    return w;
  }

  /// Dense e^{-iHt} (small systems only).
  MatC propagator(double t) const {
    const Eigen::Index D = static_cast<Eigen::Index>(dim_);
    MatC u = MatC::Identity(D, D);
    for (Eigen::Index c = 0; c < D; ++c) u.col(c) = propagate(u.col(c), t);
    return u;
  }

  /// || [W(f_t-evolved), W(g)] P || with P the projector on `states`.
  /// For the harmonic system this equals the full operator norm.
  double commutator_norm(const std::vector<cplx>& f, const std::vector<cplx>& g, double t,
                         const std::vector<VecC>& states) const {
    std::vector<VecC> cs;
    for (const auto& psi : states) {
      // tau_t(W(f)) W(g) psi - W(g) tau_t(W(f)) psi, tau_t(A) = e^{iHt} A e^{-iHt}
      const VecC a = propagate(apply_weyl(f, propagate(apply_weyl(g, psi), t)), -t);
      const VecC b = apply_weyl(g, propagate(apply_weyl(f, propagate(psi, t)), -t));
      cs.push_back(a - b);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(cs.size());
    MatC G(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) G(i, j) = cs[static_cast<std::size_t>(i)].dot(cs[static_cast<std::size_t>(j)]);
    Eigen::SelfAdjointEigenSolver<MatC> es(G, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }

  /// max_x || [q_x, p_x] - i || restricted to number states 0..n-3 of site x.
  double ccr_residual() const {
    const Eigen::Index n = spec_.trunc;
    const MatC q = q1_.cast<cplx>();
    const MatC c = q * p1_ - p1_ * q - cplx{0, 1} * MatC::Identity(n, n);
    if (n <= 2) return 0.0;
    return c.topLeftCorner(n - 2, n - 2).operatorNorm();
  }

 private:
  void check_field(const std::vector<cplx>& f) const {
    if (f.size() != static_cast<std::size_t>(spec_.sites))
      throw precondition_error("Weyl field must have one value per site");
  }

  std::size_t stride(int x) const {
    std::size_t s = 1;
    for (int j = x + 1; j < spec_.sites; ++j) s *= static_cast<std::size_t>(spec_.trunc);
    return s;
  }

  std::size_t digit(std::size_t I, int x) const {
    return (I / stride(x)) % static_cast<std::size_t>(spec_.trunc);
  }

  void apply_site(const MatC& u, int x, VecC& v) const {
    const std::size_t n = static_cast<std::size_t>(spec_.trunc), s = stride(x);
    VecC tmp(static_cast<Eigen::Index>(n));
    for (std::size_t hi = 0; hi < dim_; hi += s * n)
      for (std::size_t lo = 0; lo < s; ++lo) {
        for (std::size_t m = 0; m < n; ++m) tmp[static_cast<Eigen::Index>(m)] = v[static_cast<Eigen::Index>(hi + lo + m * s)];
        const VecC r = u * tmp;
        for (std::size_t m = 0; m < n; ++m) v[static_cast<Eigen::Index>(hi + lo + m * s)] = r[static_cast<Eigen::Index>(m)];
      }
  }

  MatC embed(const MatC& a, int x) const {
    const Eigen::Index D = static_cast<Eigen::Index>(dim_);
    MatC out = MatC::Identity(D, D);
    for (Eigen::Index c = 0; c < D; ++c) {
      VecC col = out.col(c);
      apply_site(a, x, col);
      out.col(c) = col;
    }
    return out;
  }

  void build_single_site() {
    const Eigen::Index n = spec_.trunc;
    q1_ = MatD::Zero(n, n);
    for (Eigen::Index m = 0; m + 1 < n; ++m)
      q1_(m, m + 1) = q1_(m + 1, m) = std::sqrt(static_cast<double>(m + 1) / (2.0 * omega0_));
    p1_ = MatC::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) p1_(j, k) = omega0_ * detail::ipow(j - k) * q1_(j, k);
  }

  using Triplets = std::vector<Eigen::Triplet<double>>;

  // Adds an operator on one site: entries (m, k) of `a` with all other digits fixed.
  void add_one_site(Triplets& tr, const MatD& a, int x) const {
    const std::size_t n = static_cast<std::size_t>(spec_.trunc), s = stride(x);
    for (std::size_t I = 0; I < dim_; ++I) {
      const std::size_t k = digit(I, x), base = I - k * s;
      for (std::size_t m = 0; m < n; ++m) {
        const double v = a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
        if (v != 0.0) tr.emplace_back(static_cast<int>(base + m * s), static_cast<int>(I), v);
      }
    }
  }

  // Adds an operator on the pair (x, y); `a` is indexed by (digit_x * n + digit_y).
  void add_two_site(Triplets& tr, const MatD& a, int x, int y) const {
    const std::size_t n = static_cast<std::size_t>(spec_.trunc), sx = stride(x), sy = stride(y);
    for (std::size_t I = 0; I < dim_; ++I) {
      const std::size_t kx = digit(I, x), ky = digit(I, y), base = I - kx * sx - ky * sy;
      const Eigen::Index col = static_cast<Eigen::Index>(kx * n + ky);
      for (std::size_t mx = 0; mx < n; ++mx)
        for (std::size_t my = 0; my < n; ++my) {
          const double v = a(static_cast<Eigen::Index>(mx * n + my), col);
          if (v != 0.0) tr.emplace_back(static_cast<int>(base + mx * sx + my * sy), static_cast<int>(I), v);
        }
    }
  }

  void assemble() {
    const int N = spec_.sites;
    const Eigen::Index n = spec_.trunc;
    const double w2 = spec_.couplings.omega() * spec_.couplings.omega();
    const double lam = spec_.couplings.lambda()[0];
    const auto& V = spec_.perturbation;
    const bool pert = !V.is_zero();
    if (pert && !V.has_potential())
      throw precondition_error("FockSystem: perturbation needs an explicit potential V");

    const MatD q2 = q1_ * q1_;
    const MatD p2 = (p1_ * p1_).real();
    MatD onsite = p2 + w2 * q2;
    if (pert && V.tag == PerturbationTag::onsite_q)
      onsite += detail::symmetric_function(q1_, [&](double s) { return V.V(s); });
    if (pert && V.tag == PerturbationTag::onsite_p) {
      const MatD m = detail::symmetric_function(q1_, [&](double s) { return V.V(omega0_ * s); });
      MatC r(n, n);
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) r(j, k) = detail::ipow(j - k) * m(j, k);
      onsite += detail::real_part_checked(r, "onsite_p perturbation");
    }

    // Two-site pieces, indexed (jx * n + jy).
    const Eigen::Index n2 = n * n;
    const MatD I1 = MatD::Identity(n, n);
    const MatD dq = Eigen::kroneckerProduct(q1_, I1).eval() - Eigen::kroneckerProduct(I1, q1_).eval();
    MatD bond = lam * dq * dq;
    if (pert && (V.tag == PerturbationTag::bond_q || V.tag == PerturbationTag::bond_p)) {
      const double scale = V.tag == PerturbationTag::bond_p ? omega0_ : 1.0;
      const MatD m = detail::symmetric_function(dq, [&](double s) { return V.V(scale * s); });
      if (V.tag == PerturbationTag::bond_q) {
        bond += m;
      } else {
        MatC r(n2, n2);
        for (Eigen::Index a = 0; a < n2; ++a)
          for (Eigen::Index b = 0; b < n2; ++b)
            r(a, b) = detail::ipow((a / n - b / n) + (a % n - b % n)) * m(a, b);
        bond += detail::real_part_checked(r, "bond_p perturbation");
      }
    }
    prune(onsite);
    prune(bond);

    Triplets tr;
    for (int x = 0; x < N; ++x) add_one_site(tr, onsite, x);
    for (const auto& [x, y] : fock_bonds(N, spec_.topology)) add_two_site(tr, bond, x, y);
    H_.resize(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    H_.setFromTriplets(tr.begin(), tr.end());
    H_.makeCompressed();

    Eigen::SparseMatrix<double> diff = H_ - Eigen::SparseMatrix<double>(H_.transpose());
    if (sparse_max_abs(diff) > 1e-10 * std::max(1.0, sparse_max_abs(H_)))
      throw convergence_error("FockSystem: assembled Hamiltonian is not symmetric");
  }

  static double sparse_max_abs(Eigen::SparseMatrix<double>& m) {
    m.makeCompressed();
    return m.nonZeros() ? m.coeffs().cwiseAbs().maxCoeff() : 0.0;
  }

  static void prune(MatD& m) {
    const double cut = 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff());
    m = m.unaryExpr([cut](double v) { return std::abs(v) < cut ? 0.0 : v; });
  }

  std::size_t parity(std::size_t I) const {
    std::size_t s = 0;
    for (int x = 0; x < spec_.sites; ++x) s += digit(I, x);
    return s & 1u;
  }

  void diagonalize() {
    const double hmax = sparse_max_abs(H_);
    bool split = true;
    for (Eigen::Index c = 0; c < H_.outerSize() && split; ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(H_, c); it; ++it)
        if (parity(static_cast<std::size_t>(it.row())) != parity(static_cast<std::size_t>(it.col())) &&
            std::abs(it.value()) > 1e-12 * hmax) {
          split = false;
          break;
        }

    std::vector<std::vector<std::size_t>> groups(split ? 2 : 1);
    for (std::size_t I = 0; I < dim_; ++I) groups[split ? parity(I) : 0].push_back(I);

    std::vector<Eigen::Index> pos(dim_);
    for (const auto& g : groups)
      for (std::size_t s = 0; s < g.size(); ++s) pos[g[s]] = static_cast<Eigen::Index>(s);
    std::vector<std::size_t> owner(dim_);
    for (std::size_t b = 0; b < groups.size(); ++b)
      for (std::size_t I : groups[b]) owner[I] = b;

    for (std::size_t b = 0; b < groups.size(); ++b) {
      Block B;
      B.states = groups[b];
      const Eigen::Index m = static_cast<Eigen::Index>(B.states.size());
      B.U = MatD::Zero(m, m);
      for (Eigen::Index c = 0; c < H_.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(H_, c); it; ++it) {
          const auto r = static_cast<std::size_t>(it.row()), cc = static_cast<std::size_t>(it.col());
          if (owner[r] == b && owner[cc] == b) B.U(pos[r], pos[cc]) = it.value();
        }
      B.E = detail::symmetric_eigen(B.U);
      blocks_.push_back(std::move(B));
    }
  }

  FockSpec spec_;
  std::size_t dim_ = 1;
  double omega0_ = 1.0;
  MatD q1_;
  MatC p1_;
  Eigen::SparseMatrix<double> H_;
  std::vector<Block> blocks_;
};

inline FockSystem build_system(const FockSpec& spec) { return FockSystem(spec); }

/// tau_t(A) = e^{itH} A e^{-itH} (dense; small systems only).
inline Eigen::MatrixXcd evolve_observable(const FockSystem& sys, const Eigen::MatrixXcd& A, double t) {
  const auto D = static_cast<Eigen::Index>(sys.dimension());
  if (A.rows() != D || A.cols() != D) throw precondition_error("evolve_observable: dimension mismatch");
  const Eigen::MatrixXcd U = sys.propagator(t);  // e^{-iHt}
  return U.adjoint() * A * U;
}

struct FockFront {
  std::vector<double> t;
  std::vector<double> norms;
  std::size_t states = 1;      // size of the low-energy subspace the norm is taken on
  double short_time_C = 0.0;   // slope C of norm ~ C |t| min(|X|,|Y|) |f| |g|, |t| <= short_window
  double short_time_residual = 0.0;  // rms relative deviation from the linear law
  std::size_t short_time_points = 0;
};

struct FockFrontOptions {
  std::size_t min_states = 1;
  double short_window = 0.05;
};

inline std::vector<std::size_t> field_support(const std::vector<cplx>& f) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != cplx{}) s.push_back(i);
  return s;
}

inline double field_sup(const std::vector<cplx>& f) {
  double m = 0.0;
  for (const auto& v : f) m = std::max(m, std::abs(v));
  return m;
}

/// || [tau_t(W(f)), W(g)] || on the ground multiplet for every grid time,
/// plus the short-time linear fit.
inline FockFront commutator_front(const FockSystem& sys, const std::vector<cplx>& f,
                                  const std::vector<cplx>& g, const std::vector<double>& tgrid,
                                  const FockFrontOptions& opt = {}) {
  const auto X = field_support(f), Y = field_support(g);
  if (X.empty() || Y.empty()) throw precondition_error("commutator_front: empty support");
  for (std::size_t x : X)
    if (std::find(Y.begin(), Y.end(), x) != Y.end())
      throw precondition_error("commutator_front: supports of f and g overlap");

  const auto psi = sys.ground_multiplet(opt.min_states);
  FockFront out;
  out.t = tgrid;
  out.states = psi.size();
  for (double t : tgrid) out.norms.push_back(sys.commutator_norm(f, g, t, psi));

  const double scale = static_cast<double>(std::min(X.size(), Y.size())) * field_sup(f) * field_sup(g);
  double sxy = 0.0, sxx = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < tgrid.size(); ++i) {
    const double at = std::abs(tgrid[i]);
    if (at == 0.0 || at > opt.short_window) continue;
    const double y = out.norms[i] / scale;
    pts.emplace_back(at, y);
    sxy += at * y;
    sxx += at * at;
  }
  out.short_time_points = pts.size();
  if (!pts.empty() && sxx > 0.0) {
    out.short_time_C = sxy / sxx;
    double ss = 0.0;
    for (const auto& [at, y] : pts) {
      const double model = out.short_time_C * at;
      const double e = model != 0.0 ? (y - model) / model : y;
      ss += e * e;
    }
    out.short_time_residual = std::sqrt(ss / static_cast<double>(pts.size()));
  }
  return out;
}

struct ConvergedFront {
  FockFront front;         // at the requested truncation n
  double max_change = 0.0; // max |norm(n) - norm(n + step)| over the grid
  bool converged = false;
};

/// Runs the front at truncation n and n + step; converged when no norm moves by tol or more.
inline ConvergedFront converged_commutator_front(FockSpec spec, const std::vector<cplx>& f,
                                                 const std::vector<cplx>& g,
                                                 const std::vector<double>& tgrid, int step = 4,
                                                 double tol = 1e-4, const FockFrontOptions& opt = {}) {
  ConvergedFront r;
  r.front = commutator_front(FockSystem(spec), f, g, tgrid, opt);
  spec.trunc += step;
  const auto hi = commutator_front(FockSystem(spec), f, g, tgrid, opt);
  for (std::size_t i = 0; i < tgrid.size(); ++i)
    r.max_change = std::max(r.max_change, std::abs(r.front.norms[i] - hi.norms[i]));
  r.converged = r.max_change < tol;
  return r;
}

/// <psi0| W(f) |psi0> for the (first) ground state.
inline cplx ground_expectation(const FockSystem& sys, const std::vector<cplx>& f) {
  const auto psi = sys.ground_multiplet().front();
  return psi.dot(sys.apply_weyl(f, psi));
}

/// <W(f) W(g)> - <W(f)><W(g)> in the (first) ground state.
inline cplx ground_weyl_correlation(const FockSystem& sys, const std::vector<cplx>& f,
                                    const std::vector<cplx>& g) {
  const auto psi = sys.ground_multiplet().front();
  const cplx fg = psi.dot(sys.apply_weyl(f, sys.apply_weyl(g, psi)));
  return fg - psi.dot(sys.apply_weyl(f, psi)) * psi.dot(sys.apply_weyl(g, psi));
}

}  // namespace lrb
