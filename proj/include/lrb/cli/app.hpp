#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lrb/cli/emit.hpp"
#include "lrb/cli/scenario.hpp"
#include "lrb/lrb.hpp"

namespace lrb::cli {

enum exit_code : int { ok = 0, invalid = 1, unconverged = 2 };

/// Raised when a numerical gate rejects the run (exit status 2).
class rejected_run : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string command;
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

struct Context {
  Scenario s;
  RunOptions opt;
  std::ostream& log;

  std::string path(const std::string& name) const {
    return (std::filesystem::path(opt.out) / name).string();
  }
  std::string csv_name(const std::string& def) const { return s.csv.empty() ? def + ".csv" : s.csv; }
  std::string svg_name(const std::string& def) const { return s.svg.empty() ? def + ".svg" : s.svg; }
  std::uint64_t seed() const { return opt.seed ? *opt.seed : (s.seed ? *s.seed : 20240607u); }
};

namespace detail {

inline void need(bool present, const std::string& what, const std::string& cmd) {
  if (!present) throw config_error("'" + cmd + "' needs a '" + what + "' section in the scenario");
}

inline std::pair<KernelField, KernelField> h_kernels(const TorusLattice& lat, const Couplings& c, double t) {
  return compute_h(lat, c, t, c.omega() == 0.0);
}

inline int cmd_kernels(Context& ctx) {
  const auto& s = ctx.s;
  need(!s.times.empty(), "time", "kernels");
  need(s.has_bound, "bound", "kernels");
  const auto lat = s.lattice();
  const auto c = s.couplings();
  const EnvelopeParams env(s.mu, c);
  std::vector<int> orders{0, 1};
  if (c.omega() > 0.0) orders.push_back(-1);
  else ctx.log << "kernels: omega = 0, H^(-1) is singular and omitted\n";

  std::vector<std::vector<KernelField>> fields(s.times.size());
  parallel_for(s.times.size(), ctx.opt.threads, [&](std::size_t i) {
    for (int m : orders) fields[i].push_back(compute_H(lat, c, m, s.times[i]));
  });
  Table t({"t", "site", "r", "m", "value", "envelope"});
  std::size_t violations = 0;
  for (std::size_t i = 0; i < s.times.size(); ++i)
    for (std::size_t k = 0; k < orders.size(); ++k)
      for (std::size_t x = 0; x < lat.size(); ++x) {
        const double v = fields[i][k][x].real();
        const double e = envelope(env, orders[k], s.times[i], lat.norm(x));
        if (std::abs(v) > e + 1e-12) ++violations;
        t.add({s.times[i], double(x), double(lat.norm(x)), double(orders[k]), v, e});
      }
  emit_csv(t, ctx.path(ctx.csv_name("kernels")));
  ctx.log << "kernels: " << t.rows.size() << " rows, " << violations << " envelope violations\n";
  return ok;
}

inline int cmd_evolve(Context& ctx) {
  const auto& s = ctx.s;
  need(!s.times.empty(), "time", "evolve");
  need(!s.f.empty(), "observables", "evolve");
  const auto lat = s.lattice();
  const auto c = s.couplings();
  const auto f = s.weyl(s.f);
  std::vector<std::vector<cplx>> ft(s.times.size());
  parallel_for(s.times.size(), ctx.opt.threads, [&](std::size_t i) {
    ft[i] = evolve(f, s.times[i], h_kernels(lat, c, s.times[i])).values();
  });
  Table t({"t", "site", "r", "re", "im"});
  for (std::size_t i = 0; i < s.times.size(); ++i)
    for (std::size_t x = 0; x < lat.size(); ++x)
      t.add({s.times[i], double(x), double(lat.norm(x)), ft[i][x].real(), ft[i][x].imag()});
  emit_csv(t, ctx.path(ctx.csv_name("evolve")));
  ctx.log << "evolve: " << s.times.size() << " times x " << lat.size() << " sites\n";
  return ok;
}

inline int cmd_commutator(Context& ctx) {
  const auto& s = ctx.s;
  need(!s.times.empty(), "time", "commutator");
  need(!s.f.empty(), "observables", "commutator");
  need(s.has_bound, "bound", "commutator");
  const auto lat = s.lattice();
  const auto c = s.couplings();
  const auto f = s.weyl(s.f), g = s.weyl(s.g);
  const auto geo = support_geometry(f, g);
  const HarmonicBoundParams p(s.mu, s.a, c);
  const std::size_t n = s.times.size();
  std::vector<double> exact(n), thm(n), cor(n);
  parallel_for(n, ctx.opt.threads, [&](std::size_t i) {
    const double t = s.times[i];
    exact[i] = commutator_norm_exact(f, g, t, h_kernels(lat, c, t));
    thm[i] = harmonic_bound_rhs(f.sup_norm(), g.sup_norm(), geo, t, p, HarmonicForm::theorem);
    cor[i] = harmonic_bound_rhs(f.sup_norm(), g.sup_norm(), geo, t, p, HarmonicForm::corollary);
  });
  Table t({"t", "r", "exact_norm", "bound_theorem", "bound_corollary"});
  std::size_t violations = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (exact[i] > thm[i]) ++violations;
    t.add({s.times[i], double(geo.min_distance), exact[i], thm[i], cor[i]});
  }
  emit_csv(t, ctx.path(ctx.csv_name("commutator")));
  Plot plot{"commutator norm and harmonic bounds, d(X,Y) = " + std::to_string(geo.min_distance), "t",
            "norm", {}};
  plot.series.push_back({"exact", s.times, exact, false});
  plot.series.push_back({"theorem bound", s.times, thm, true});
  plot.series.push_back({"corollary bound", s.times, cor, true});
  emit_svg(plot, ctx.path(ctx.svg_name("commutator")));
  ctx.log << "commutator: " << n << " times, " << violations << " bound violations\n";
  return ok;
}

inline int cmd_lightcone(Context& ctx) {
  const auto& s = ctx.s;
  need(!s.times.empty(), "time", "lightcone");
  need(s.lightcone.has_value(), "lightcone", "lightcone");
  const auto& lc = *s.lightcone;
  const auto lat = s.lattice();
  const auto c = s.couplings();
  std::vector<int> rs;
  for (int r = lc.r_min; r <= lc.r_max; ++r) rs.push_back(r);
  const auto series = harmonic_front_series(lat, c, s.times, rs, SumPath::fast, ctx.opt.threads);
  const double mu0 = mu_star(), vb = optimal_velocity(c);

  Table arr({"threshold", "r", "t_star"});
  Table fit({"threshold", "fitted_velocity", "fit_residual", "fit_points", "unreached", "monotone", "v_bound", "mu0"});
  double vmin = 1e300, vmax = 0.0;
  for (double th : lc.thresholds) {
    const auto fd = extract_front(series, th, lc.fit_min_r);
    for (const auto& [r, ts] : fd.arrivals) arr.add({th, double(r), ts});
    fit.add({th, fd.fitted_velocity, fd.fit_residual, double(fd.fit_points), double(fd.unreached.size()),
             fd.monotone() ? 1.0 : 0.0, vb, mu0});
    if (fd.fit_ok()) {
      vmin = std::min(vmin, fd.fitted_velocity);
      vmax = std::max(vmax, fd.fitted_velocity);
    }
    for (int r : fd.unreached) ctx.log << "lightcone: threshold " << th << " never reached at r = " << r << "\n";
  }
  emit_csv(arr, ctx.path(ctx.csv_name("lightcone")));
  emit_csv(fit, ctx.path("lightcone_fit.csv"));

  Plot plot{"commutator vs distance, dashed: bound at mu_0", "r", "norm", {}};
  const HarmonicBoundParams p(mu0, 0.5, c);
  const int k = std::max(1, lc.plot_times);
  for (int j = 1; j <= k; ++j) {
    const std::size_t it = (s.times.size() - 1) * static_cast<std::size_t>(j) / static_cast<std::size_t>(k);
    Series data{"t = " + format_number(s.times[it]), {}, {}, false};
    Series env{"bound t = " + format_number(s.times[it]), {}, {}, true};
    for (std::size_t ir = 0; ir < rs.size(); ++ir) {
      data.x.push_back(rs[ir]);
      data.y.push_back(series.values[ir][it]);
      env.x.push_back(rs[ir]);
      SupportGeometry geo{lat.nu(), {rs[ir]}, rs[ir], 1, 1};
      env.y.push_back(harmonic_bound_rhs(1.0, 1.0, geo, s.times[it], p, HarmonicForm::theorem));
    }
    plot.series.push_back(std::move(data));
    plot.series.push_back(std::move(env));
  }
  emit_svg(plot, ctx.path(ctx.svg_name("lightcone")));
  ctx.log << "lightcone: mu0 = " << format_number(mu0) << ", v_h(mu0) = " << format_number(vb)
          << ", fitted velocities in [" << format_number(vmin) << ", " << format_number(vmax) << "]\n";
  return ok;
}

inline int cmd_genbound(Context& ctx) {
  const auto& s = ctx.s;
  need(s.genbound.has_value(), "genbound", "genbound");
  need(!s.times.empty(), "time", "genbound");
  const auto& gc = *s.genbound;
  InteractionGraph G(gc.metric);
  for (const auto& [Z, nrm] : gc.terms) G.add_term(Z, nrm);
  const auto F = DecayFunction::power_law(gc.decay_exponent, gc.a);
  const auto k = decay_constants(G, F);
  const double phi = interaction_norm(G, F);
  const auto pb = phi_boundary_and_D(G, F, gc.X, gc.Y);
  const bool lrexp = gc.a > 0.0;

  Table t({"t", "bound_theorem", "bound_corollary"});
  if (lrexp) t.columns.push_back("bound_lrexp");
  for (double time : s.times) {
    std::vector<double> row{time,
                            theorem_phi_bound(G, F, gc.X, gc.Y, gc.norm_a, gc.norm_b, time, PhiForm::theorem),
                            theorem_phi_bound(G, F, gc.X, gc.Y, gc.norm_a, gc.norm_b, time, PhiForm::corollary)};
    if (lrexp) row.push_back(theorem_phi_bound(G, F, gc.X, gc.Y, gc.norm_a, gc.norm_b, time, PhiForm::lrexp, gc.nu));
    t.add(std::move(row));
  }
  emit_csv(t, ctx.path(ctx.csv_name("genbound")));
  Table kt({"norm_F", "C_a", "phi_norm", "D_a", "boundary_x", "boundary_y", "d_XY"});
  kt.add({k.norm_F, k.C_a, phi, pb.D_a, double(pb.boundary_x.size()), double(pb.boundary_y.size()),
          G.set_distance(gc.X, gc.Y)});
  emit_csv(kt, ctx.path("genbound_constants.csv"));
  ctx.log << "genbound: ||F_a|| = " << format_number(k.norm_F) << ", C_a = " << format_number(k.C_a)
          << ", ||Phi||_a = " << format_number(phi) << ", D_a = " << format_number(pb.D_a) << "\n";
  return ok;
}

inline int cmd_anharm(Context& ctx) {
  const auto& s = ctx.s;
  need(s.has_bound, "bound", "anharm");
  need(!s.times.empty(), "time", "anharm");
  need(!s.f.empty(), "observables", "anharm");
  const auto lat = s.lattice();
  std::optional<AnharmonicBoundParams> b;
  try {
    b.emplace(s.mu, s.epsilon, s.couplings());
  } catch (const domain_error& e) {
    throw config_error(e.what());
  }
  const auto kap = kappa_V(s.perturbation);
  const double Cnu = s.cnu == CnuMode::lattice ? cnu_lattice(lat) : cnu_infinite(lat.nu());
  const auto k = anharm_constants(*b, kap.value, Cnu);
  const auto f = s.weyl(s.f), g = s.weyl(s.g);
  const auto geo = support_geometry(f, g);
  Table t({"t", "r", "bound_theorem", "bound_corollary"});
  for (double time : s.times)
    t.add({time, double(geo.min_distance),
           anharm_bound_rhs(f.sup_norm(), g.sup_norm(), geo, time, *b, k, AnharmForm::theorem),
           anharm_bound_rhs(f.sup_norm(), g.sup_norm(), geo, time, *b, k, AnharmForm::corollary)});
  emit_csv(t, ctx.path(ctx.csv_name("anharm")));
  Table kt({"kappa", "kappa_error", "C", "sup_factor", "Cnu", "v_h", "v"});
  kt.add({k.kappa, kap.error, k.C, k.sup_factor, k.Cnu, k.v_h, k.v});
  emit_csv(kt, ctx.path("anharm_constants.csv"));
  ctx.log << "anharm: kappa_V = " << format_number(k.kappa) << ", C = " << format_number(k.C)
          << ", C_nu = " << format_number(k.Cnu) << ", v = " << format_number(k.v) << "\n";
  return ok;
}

/// C_nu for a chain or ring: 2^{nu+1} max_x sum_z (1 + d(x,z))^{-nu-1} with nu = 1.
inline double fock_cnu(int N, Topology top) {
  double best = 0.0;
  for (int x = 0; x < N; ++x) {
    std::vector<int> d;
    for (int z = 0; z < N; ++z) d.push_back(fock_distance(N, top, x, z));
    best = std::max(best, cnu_from_distances(1, d));
  }
  return best;
}

inline SupportGeometry fock_geometry(const FockConfig& fc) {
  const auto X = field_support(fc.f), Y = field_support(fc.g);
  return support_geometry(1, X, Y, [&](std::size_t x, std::size_t y) {
    return fock_distance(fc.sites, fc.topology, int(x), int(y));
  });
}

inline int cmd_focksim(Context& ctx) {
  const auto& s = ctx.s;
  need(s.focksim.has_value(), "focksim", "focksim");
  need(!s.times.empty(), "time", "focksim");
  need(s.has_bound, "bound", "focksim");
  const auto& fc = *s.focksim;
  FockSpec spec;
  spec.sites = fc.sites;
  spec.topology = fc.topology;
  spec.trunc = fc.trunc;
  spec.couplings = s.couplings();
  spec.perturbation = s.perturbation;
  FockFrontOptions fo;
  fo.min_states = fc.min_states;
  const auto res = converged_commutator_front(spec, fc.f, fc.g, s.times, fc.step, fc.tol, fo);

  Table sum({"converged", "max_change", "states", "short_time_C", "short_time_residual", "dimension"});
  std::size_t dim = 1;
  for (int i = 0; i < fc.sites; ++i) dim *= static_cast<std::size_t>(fc.trunc);
  sum.add({res.converged ? 1.0 : 0.0, res.max_change, double(res.front.states), res.front.short_time_C,
           res.front.short_time_residual, double(dim)});
  emit_csv(sum, ctx.path("focksim_summary.csv"));
  if (!res.converged)
    throw rejected_run("focksim: truncation check failed, norms moved by " + format_number(res.max_change) +
                       " >= " + format_number(fc.tol) + " between n = " + std::to_string(fc.trunc) +
                       " and n = " + std::to_string(fc.trunc + fc.step));

  std::optional<AnharmonicBoundParams> b;
  try {
    b.emplace(s.mu, s.epsilon, s.couplings());
  } catch (const domain_error& e) {
    throw config_error(e.what());
  }
  const auto k = anharm_constants(*b, kappa_V(s.perturbation).value, fock_cnu(fc.sites, fc.topology));
  const auto geo = fock_geometry(fc);
  Table t({"t", "r", "fock_norm", "bound_anharm"});
  std::size_t violations = 0;
  std::vector<double> bound;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double bd = anharm_bound_rhs(field_sup(fc.f), field_sup(fc.g), geo, s.times[i], *b, k, AnharmForm::theorem);
    bound.push_back(bd);
    if (res.front.norms[i] > bd) ++violations;
    t.add({s.times[i], double(geo.min_distance), res.front.norms[i], bd});
  }
  emit_csv(t, ctx.path(ctx.csv_name("focksim")));
  Plot plot{"truncated Fock commutator and anharmonic bound", "t", "norm", {}};
  plot.series.push_back({"focksim", s.times, res.front.norms, false});
  plot.series.push_back({"anharmonic bound", s.times, bound, true});
  emit_svg(plot, ctx.path(ctx.svg_name("focksim")));
  ctx.log << "focksim: dimension " << dim << ", truncation change " << format_number(res.max_change)
          << ", " << violations << " bound violations\n";
  return ok;
}

inline int cmd_clustering(Context& ctx) {
  const auto& s = ctx.s;
  need(s.clustering.has_value(), "clustering", "clustering");
  need(s.has_bound, "bound", "clustering");
  const auto cov = ground_covariance(s.lattice(), s.couplings());
  ClusteringFit fit;
  try {
    fit = clustering_fit(cov, s.mu, s.epsilon, s.clustering->max_distance, s.clustering->amplitude);
  } catch (const domain_error& e) {
    throw config_error(e.what());
  }
  Table t({"d", "correlation", "envelope"});
  for (std::size_t i = 0; i < fit.distances.size(); ++i)
    t.add({double(fit.distances[i]), fit.correlations[i], fit.C_fit * std::exp(-fit.distances[i] / fit.xi_theorem)});
  emit_csv(t, ctx.path(ctx.csv_name("clustering")));
  Table sum({"fitted_xi", "xi_theorem", "tightness", "C_fit", "dominated", "abs_fit", "fit_points", "gap"});
  sum.add({fit.fitted_xi, fit.xi_theorem, fit.tightness(), fit.C_fit, fit.dominated ? 1.0 : 0.0,
           fit.abs_fit ? 1.0 : 0.0, double(fit.fit_points), cov.gap});
  emit_csv(sum, ctx.path("clustering_summary.csv"));
  Plot plot{"ground-state Weyl correlations", "d", "|correlation|", {}};
  std::vector<double> d(fit.distances.begin(), fit.distances.end()), env;
  for (double x : d) env.push_back(fit.C_fit * std::exp(-x / fit.xi_theorem));
  plot.series.push_back({"|corr|", d, fit.correlations, false});
  plot.series.push_back({"C_fit exp(-d/xi)", d, env, true});
  emit_svg(plot, ctx.path(ctx.svg_name("clustering")));
  ctx.log << "clustering: fitted xi = " << format_number(fit.fitted_xi) << ", xi_theorem = "
          << format_number(fit.xi_theorem) << ", dominated = " << (fit.dominated ? "yes" : "no") << "\n";
  return ok;
}

struct CheckResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // worst ratio of observed to allowed (< 1 passes)
  bool passed() const { return violations == 0; }
};

/// Randomized invariant battery; every check is seeded from one generator.
inline std::vector<CheckResult> verify_battery(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  std::vector<CheckResult> out;

  auto random_couplings = [&](int nu) {
    std::vector<double> l(static_cast<std::size_t>(nu));
    for (auto& x : l) x = uni(0.1, 2.0);
    return Couplings(uni(0.2, 2.0), l);
  };
  auto random_field = [&](const TorusLattice& lat, int sites) {
    WeylFunction f(lat);
    for (int i = 0; i < sites; ++i)
      f.set(static_cast<std::size_t>(pick(int(lat.size()))), cplx{uni(-1, 1), uni(-1, 1)});
    return f;
  };

  {  // kernel envelopes
    CheckResult r{"kernel_envelope"};
    for (int i = 0; i < std::max(1, cases / 20); ++i) {
      const int nu = 1 + pick(2);
      const TorusLattice lat(nu, nu == 1 ? 16 : 4);
      const auto c = random_couplings(nu);
      const EnvelopeParams e(uni(0.5, 2.0), c);
      const double t = uni(0.0, 5.0);
      for (int m : {-1, 0, 1}) {
        const auto H = compute_H(lat, c, m, t);
        for (std::size_t x = 0; x < lat.size(); ++x) {
          const double ratio = std::abs(H[x].real()) / (envelope(e, m, t, lat.norm(x)) + 1e-12);
          r.worst = std::max(r.worst, ratio);
          if (ratio > 1.0) ++r.violations;
          ++r.cases;
        }
      }
    }
    out.push_back(r);
  }
  {  // direct and fast Fourier sums
    CheckResult r{"direct_vs_fast"};
    for (int i = 0; i < std::max(1, cases / 20); ++i) {
      const int nu = 1 + pick(2);
      const TorusLattice lat(nu, nu == 1 ? 8 + pick(9) : 2 + pick(3));
      const auto c = random_couplings(nu);
      const int m = pick(3) - 1;
      const double t = uni(0.0, 10.0);
      const auto a = compute_H(lat, c, m, t, SumPath::direct), b = compute_H(lat, c, m, t, SumPath::fast);
      double sup = 0.0, diff = 0.0;
      for (std::size_t x = 0; x < lat.size(); ++x) {
        sup = std::max(sup, std::abs(a[x]));
        diff = std::max(diff, std::abs(a[x] - b[x]));
      }
      const double ratio = diff / (1e-10 * std::max(sup, 1e-300));
      r.worst = std::max(r.worst, ratio);
      if (ratio > 1.0) ++r.violations;
      ++r.cases;
    }
    out.push_back(r);
  }
  {  // group law and symplectic conservation
    CheckResult g{"group_law"}, w{"symplectic_conservation"};
    for (int i = 0; i < std::max(1, cases / 4); ++i) {
      const TorusLattice lat(1, 8);
      const auto c = random_couplings(1);
      const auto f = random_field(lat, 3), h = random_field(lat, 3);
      const double s = uni(-3, 3), t = uni(-3, 3);
      const auto a = evolve(evolve(f, s, c), t, c), b = evolve(f, s + t, c);
      double diff = 0.0;
      for (std::size_t x = 0; x < lat.size(); ++x) diff = std::max(diff, std::abs(a[x] - b[x]));
      g.worst = std::max(g.worst, diff / 1e-9);
      if (diff > 1e-9) ++g.violations;
      ++g.cases;
      const double d2 = std::abs(symplectic_form(evolve(f, t, c), evolve(h, t, c)) - symplectic_form(f, h));
      w.worst = std::max(w.worst, d2 / 1e-9);
      if (d2 > 1e-9) ++w.violations;
      ++w.cases;
    }
    out.push_back(g);
    out.push_back(w);
  }
  {  // harmonic bound domination
    CheckResult r{"harmonic_domination"};
    for (int i = 0; i < cases; ++i) {
      const TorusLattice lat(1, 16);
      const auto c = random_couplings(1);
      WeylFunction f(lat), g(lat);
      const int x0 = pick(8);
      f.set(static_cast<std::size_t>(x0), cplx{uni(-1, 1), uni(-1, 1)});
      g.set(static_cast<std::size_t>(x0 + 1 + pick(20)), cplx{uni(-1, 1), uni(-1, 1)});
      const double t = uni(0.0, 4.0);
      const HarmonicBoundParams p(uni(0.3, 3.0), 0.5, c);
      const double ex = commutator_norm_exact(f, g, t, c);
      const double bd = harmonic_bound_rhs(f, g, t, p, HarmonicForm::theorem);
      r.worst = std::max(r.worst, ex / (bd + 1e-12));
      if (ex > bd + 1e-12) ++r.violations;
      ++r.cases;
    }
    out.push_back(r);
  }
  {  // mu_0
    CheckResult r{"mu_star"};
    const double mu = mu_star();
    const double resid = std::abs(2.0 / mu - std::exp(0.5 * mu + 1.0));
    r.cases = 1;
    r.worst = resid / 1e-12;
    if (!(mu > 0.5 && mu < 1.0) || resid > 1e-12) r.violations = 1;
    out.push_back(r);
  }
  {  // F_mu convolution bound
    CheckResult r{"fmu_convolution"};
    for (int nu : {1, 2}) {
      const TorusLattice lat(nu, nu == 1 ? 8 : 3);
      const double mu = uni(0.0, 2.0), Cnu = cnu_lattice(lat);
      for (std::size_t y = 0; y < lat.size(); ++y) {
        double s = 0.0;
        for (std::size_t z = 0; z < lat.size(); ++z)
          s += F_mu(mu, nu, lat.norm(z)) * F_mu(mu, nu, lat.distance(z, y));
        const double ratio = s / (Cnu * F_mu(mu, nu, lat.norm(y)));
        r.worst = std::max(r.worst, ratio);
        if (ratio > 1.0) ++r.violations;
        ++r.cases;
      }
    }
    out.push_back(r);
  }
  {  // kappa_V of a Gaussian
    CheckResult r{"kappa_gaussian"};
    const double alpha = uni(0.1, 2.0);
    const double err = std::abs(kappa_V(PerturbationSpec::gaussian(alpha)).value - alpha);
    r.cases = 1;
    r.worst = err / 1e-8;
    if (err > 1e-8) r.violations = 1;
    out.push_back(r);
  }
  {  // decay constants monotone in a
    CheckResult r{"decay_monotone"};
    const auto G = InteractionGraph::chain(static_cast<std::size_t>(5 + pick(10)));
    const auto F = DecayFunction::power_law(2.0);
    const auto k0 = decay_constants(G, F);
    for (double a : {0.5, 1.0, 2.0}) {
      const auto ka = decay_constants(G, F.with_weight(a));
      const double ratio = std::max(ka.C_a / k0.C_a, ka.norm_F / k0.norm_F);
      r.worst = std::max(r.worst, ratio);
      if (ratio > 1.0 + 1e-12) ++r.violations;
      ++r.cases;
    }
    out.push_back(r);
  }
  {  // clustering domination
    CheckResult r{"clustering_domination"};
    const auto cov = ground_covariance(TorusLattice(1, 32), Couplings(2.0, {1.0}));
    const auto fit = clustering_fit(cov, 1.0, 0.1, 32);
    r.cases = fit.distances.size();
    r.worst = fit.domination_margin > 0 ? 1.0 / fit.domination_margin : 0.0;
    if (!fit.dominated) r.violations = 1;
    out.push_back(r);
  }
  return out;
}

inline int cmd_verify(Context& ctx) {
  const int cases = ctx.s.verify ? ctx.s.verify->cases : 200;
  const auto checks = verify_battery(ctx.seed(), cases);
  Table t({"cases", "violations", "worst_ratio", "passed"}, "check");
  bool all = true;
  char line[160];
  std::snprintf(line, sizeof line, "%-26s %8s %10s %12s  %s\n", "check", "cases", "violations", "worst_ratio", "result");
  ctx.log << line;
  for (const auto& c : checks) {
    t.labels.push_back(c.name);
    t.add({double(c.cases), double(c.violations), c.worst, c.passed() ? 1.0 : 0.0});
    std::snprintf(line, sizeof line, "%-26s %8zu %10zu %12.4g  %s\n", c.name.c_str(), c.cases, c.violations,
                  c.worst, c.passed() ? "pass" : "FAIL");
    ctx.log << line;
    all = all && c.passed();
  }
  emit_csv(t, ctx.path(ctx.csv_name("verify")));
  return all ? ok : invalid;
}

}  // namespace detail

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"kernels", "evolve", "commutator", "lightcone", "genbound",
                                          "anharm", "focksim", "clustering", "verify"};
  return c;
}

/// Runs one subcommand; returns the process exit status and never throws.
inline int run_command(const RunOptions& opt, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  try {
    Context ctx{load_scenario(opt.config), opt, log};
    std::filesystem::create_directories(opt.out);
    const auto& c = opt.command;
    if (c == "kernels") return detail::cmd_kernels(ctx);
    if (c == "evolve") return detail::cmd_evolve(ctx);
    if (c == "commutator") return detail::cmd_commutator(ctx);
    if (c == "lightcone") return detail::cmd_lightcone(ctx);
    if (c == "genbound") return detail::cmd_genbound(ctx);
    if (c == "anharm") return detail::cmd_anharm(ctx);
    if (c == "focksim") return detail::cmd_focksim(ctx);
    if (c == "clustering") return detail::cmd_clustering(ctx);
    if (c == "verify") return detail::cmd_verify(ctx);
    throw config_error("unknown command '" + c + "'");
  } catch (const rejected_run& e) {
    err << "error: " << e.what() << "\n";
    return unconverged;
  } catch (const convergence_error& e) {
    err << "error: " << e.what() << "\n";
    return unconverged;
  } catch (const divergence_error& e) {
    err << "error: " << e.what() << " (partial value " << format_number(e.partial_value()) << ")\n";
    return unconverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return invalid;
  }
}

/// Command-line entry point.
inline int main(int argc, const char* const* argv) {
  CLI::App app{"Lieb-Robinson bounds for harmonic and anharmonic lattice systems"};
  app.require_subcommand(1);
  RunOptions opt;
  std::uint64_t seed = 0;
  for (const auto& name : commands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " pipeline");
    sub->add_option("--config", opt.config, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", seed, "seed for randomized suites (overrides the scenario)");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&opt, name] { opt.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : invalid;
  }
  for (auto* sub : app.get_subcommands())
    if (sub->count("--seed")) opt.seed = seed;
  return run_command(opt);
}

}  // namespace lrb::cli
