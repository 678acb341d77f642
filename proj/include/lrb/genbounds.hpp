#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "lrb/error.hpp"
#include "lrb/lattice_sums.hpp"
#include "lrb/torus.hpp"

namespace lrb {

/// Non-increasing positive F with exponential weight a: F_a(r) = e^{-a r} F(r).
class DecayFunction {
 public:
  DecayFunction(std::function<double(double)> base, double a, std::string name = "custom")
      : base_(std::move(base)), a_(a), name_(std::move(name)) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw domain_error("DecayFunction: a must be >= 0");
  }

  /// F(r) = (1 + r)^{-p}.
  static DecayFunction power_law(double p, double a = 0.0) {
    if (!(p > 0.0)) throw domain_error("DecayFunction::power_law: exponent must be > 0");
    return DecayFunction([p](double r) { return std::pow(1.0 + r, -p); }, a,
                         "power_law(" + std::to_string(p) + ")");
  }

  double a() const noexcept { return a_; }
  const std::string& name() const noexcept { return name_; }
  double base(double r) const { return base_(r); }
  double operator()(double r) const { return std::exp(-a_ * r) * base_(r); }

  /// Same F with another weight a.
  DecayFunction with_weight(double a) const { return DecayFunction(base_, a, name_); }

 private:
  std::function<double(double)> base_;
  double a_;
  std::string name_;
};

/// A finite site set with a metric and interaction terms Z -> ||Phi(Z)||.
class InteractionGraph {
 public:
  struct Term {
    std::vector<std::size_t> sites;  // sorted, unique, nonempty
    double norm;
  };

  explicit InteractionGraph(std::vector<std::vector<double>> metric) : d_(std::move(metric)) {
    const std::size_t n = d_.size();
    if (n == 0) throw domain_error("InteractionGraph: empty site set");
    for (const auto& row : d_)
      if (row.size() != n) throw domain_error("InteractionGraph: metric table is not square");
    const double tol = 1e-12;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const double dxy = d_[x][y];
        if (!std::isfinite(dxy) || dxy < 0.0) throw domain_error("metric: negative or non-finite distance");
        if ((x == y) != (dxy == 0.0)) throw domain_error("metric: d(x,y) = 0 exactly when x = y");
        if (std::abs(dxy - d_[y][x]) > tol) throw domain_error("metric: not symmetric");
        for (std::size_t z = 0; z < n; ++z)
          if (dxy > d_[x][z] + d_[z][y] + tol) throw domain_error("metric: triangle inequality fails");
      }
  }

  /// Path 0 - 1 - ... - (n-1) with d(x,y) = |x - y|.
  static InteractionGraph chain(std::size_t n) {
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) d[x][y] = std::abs(double(x) - double(y));
    return InteractionGraph(std::move(d));
  }

  /// The torus Lambda_L with its periodic distance.
  static InteractionGraph torus(const TorusLattice& lat) {
    std::vector<std::vector<double>> d(lat.size(), std::vector<double>(lat.size()));
    for (std::size_t x = 0; x < lat.size(); ++x)
      for (std::size_t y = 0; y < lat.size(); ++y) d[x][y] = lat.distance(x, y);
    return InteractionGraph(std::move(d));
  }

  void add_term(std::vector<std::size_t> Z, double norm) {
    if (Z.empty()) throw domain_error("InteractionGraph: empty interaction support");
    if (!(norm >= 0.0) || !std::isfinite(norm)) throw domain_error("InteractionGraph: term norm must be >= 0");
    std::sort(Z.begin(), Z.end());
    Z.erase(std::unique(Z.begin(), Z.end()), Z.end());
    if (Z.back() >= size()) throw domain_error("InteractionGraph: term references unknown site");
    terms_.push_back({std::move(Z), norm});
  }

  /// Adds ||Phi({x, y})|| = J for every pair at distance 1.
  void add_nearest_neighbour_terms(double J) {
    for (std::size_t x = 0; x < size(); ++x)
      for (std::size_t y = x + 1; y < size(); ++y)
        if (d_[x][y] == 1.0) add_term({x, y}, J);
  }

  std::size_t size() const noexcept { return d_.size(); }
  double distance(std::size_t x, std::size_t y) const { return d_[x][y]; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  double set_distance(const std::vector<std::size_t>& X, const std::vector<std::size_t>& Y) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t x : X)
      for (std::size_t y : Y) m = std::min(m, d_[x][y]);
    return m;
  }

 private:
  std::vector<std::vector<double>> d_;
  std::vector<Term> terms_;
};

struct DecayConstants {
  double norm_F;  // ||F_a|| = sup_x sum_y F_a(d(x,y))
  double C_a;     // sup_{x,y} sum_z F_a(d(x,z)) F_a(d(z,y)) / F_a(d(x,y))
};

namespace detail {

inline std::vector<std::vector<double>> decay_table(const InteractionGraph& G, const DecayFunction& F) {
  const std::size_t n = G.size();
  std::vector<std::vector<double>> Fa(n, std::vector<double>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double v = F(G.distance(x, y));
      if (!(v > 0.0) || !std::isfinite(v))
        throw domain_error("decay function is not positive at r = " + std::to_string(G.distance(x, y)));
      Fa[x][y] = v;
    }
  return Fa;
}

inline void check_subset(const InteractionGraph& G, const std::vector<std::size_t>& X, const char* name) {
  for (std::size_t x : X)
    if (x >= G.size()) throw domain_error(std::string(name) + " contains a site outside the graph");
}

}  // namespace detail

inline DecayConstants decay_constants(const InteractionGraph& G, const DecayFunction& F) {
  const auto Fa = detail::decay_table(G, F);
  const std::size_t n = G.size();
  DecayConstants k{0.0, 0.0};
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < n; ++y) s += Fa[x][y];
    k.norm_F = std::max(k.norm_F, s);
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double s = 0.0;
      for (std::size_t z = 0; z < n; ++z) s += Fa[x][z] * Fa[z][y];
      k.C_a = std::max(k.C_a, s / Fa[x][y]);
    }
  return k;
}

/// ||Phi||_a = max_{x,y} F_a(d(x,y))^{-1} sum_{Z containing x and y} ||Phi(Z)||, x = y included.
inline double interaction_norm(const InteractionGraph& G, const DecayFunction& F) {
  const std::size_t n = G.size();
  std::vector<std::vector<double>> S(n, std::vector<double>(n, 0.0));
  for (const auto& term : G.terms())
    for (std::size_t x : term.sites)
      for (std::size_t y : term.sites) S[x][y] += term.norm;
  const auto Fa = detail::decay_table(G, F);
  double m = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) m = std::max(m, S[x][y] / Fa[x][y]);
  return m;
}

/// Sites of X lying in some nonzero term that meets both X and its complement.
inline std::vector<std::size_t> phi_boundary(const InteractionGraph& G, const std::vector<std::size_t>& X) {
  detail::check_subset(G, X, "X");
  std::vector<char> in_x(G.size(), 0), hit(G.size(), 0);
  for (std::size_t x : X) in_x[x] = 1;
  for (const auto& term : G.terms()) {
    if (term.norm == 0.0) continue;
    bool inside = false, outside = false;
    for (std::size_t z : term.sites) (in_x[z] ? inside : outside) = true;
    if (!(inside && outside)) continue;
    for (std::size_t z : term.sites)
      if (in_x[z]) hit[z] = 1;
  }
  std::vector<std::size_t> b;
  for (std::size_t x = 0; x < G.size(); ++x)
    if (hit[x]) b.push_back(x);
  return b;
}

struct PhiBoundary {
  std::vector<std::size_t> boundary_x;
  std::vector<std::size_t> boundary_y;
  double D_a;  // min of the two boundary-weighted double sums; 0 if either boundary is empty
};

inline PhiBoundary phi_boundary_and_D(const InteractionGraph& G, const DecayFunction& F,
                                      const std::vector<std::size_t>& X,
                                      const std::vector<std::size_t>& Y) {
  detail::check_subset(G, Y, "Y");
  PhiBoundary out{phi_boundary(G, X), phi_boundary(G, Y), 0.0};
  auto dsum = [&](const std::vector<std::size_t>& A, const std::vector<std::size_t>& B) {
    double s = 0.0;
    for (std::size_t x : A)
      for (std::size_t y : B) s += F(G.distance(x, y));
    return s;
  };
  out.D_a = std::min(dsum(out.boundary_x, Y), dsum(X, out.boundary_y));
  return out;
}

/// g_a(t) = e^{2 ||Phi||_a C_a |t|} - 1 when the supports are apart, without the -1 otherwise.
inline double g_a(double phi_norm, double C_a, double t, bool separated) {
  const double x = 2.0 * phi_norm * C_a * std::abs(t);
  return separated ? std::expm1(x) : std::exp(x);
}

enum class PhiForm { theorem, corollary, lrexp };

/// Right-hand side of the bounded-interaction Lieb-Robinson bound.
///   theorem:   (2 |A| |B| / C_a) g_a(t) D_a(X,Y)
///   corollary: (2 |A| |B| ||F|| / C_a) min(|dX|,|dY|) e^{-a d(X,Y) + 2 ||Phi||_a C_a |t|}
///   lrexp:     2^{-(nu+1)} |A| |B| min(|dX|,|dY|) e^{-(a d(X,Y) - 2 ||Phi||_a C |t|)}
///              with F = (1+r)^{-nu-1} at the weight a of F and C = 2^{nu+1} sum_{Z^nu} (1+|x|)^{-nu-1}
/// ||F|| in the corollary is the unweighted norm of the base function.
inline double theorem_phi_bound(const InteractionGraph& G, const DecayFunction& F,
                                const std::vector<std::size_t>& X, const std::vector<std::size_t>& Y,
                                double normA, double normB, double t, PhiForm form, int nu = 0) {
  if (X.empty() || Y.empty()) throw precondition_error("theorem_phi_bound: empty support");
  if (!(normA >= 0.0) || !(normB >= 0.0)) throw domain_error("theorem_phi_bound: norms must be >= 0");
  const auto pb = phi_boundary_and_D(G, F, X, Y);
  const double dXY = G.set_distance(X, Y);
  const double nb = static_cast<double>(std::min(pb.boundary_x.size(), pb.boundary_y.size()));

  if (form == PhiForm::lrexp) {
    if (nu < 1) throw precondition_error("lrexp form needs the lattice dimension nu");
    if (!(F.a() > 0.0)) throw domain_error("lrexp form needs a > 0");
    const auto Flr = DecayFunction::power_law(nu + 1.0, F.a());
    const double C = std::pow(2.0, nu + 1) * power_lattice_sum_infinite(nu, nu + 1.0);
    const double phi = interaction_norm(G, Flr);
    return std::pow(2.0, -(nu + 1)) * normA * normB * nb *
           std::exp(-(F.a() * dXY - 2.0 * phi * C * std::abs(t)));
  }

  const auto k = decay_constants(G, F);
  if (!(k.C_a > 0.0)) throw domain_error("theorem_phi_bound: degenerate graph, C_a = 0");
  const double phi = interaction_norm(G, F);
  if (form == PhiForm::theorem)
    return 2.0 * normA * normB / k.C_a * g_a(phi, k.C_a, t, dXY > 0.0) * pb.D_a;

  const double normF = decay_constants(G, F.with_weight(0.0)).norm_F;
  return 2.0 * normA * normB * normF / k.C_a * nb *
         std::exp(-F.a() * dXY + 2.0 * phi * k.C_a * std::abs(t));
}

}  // namespace lrb
