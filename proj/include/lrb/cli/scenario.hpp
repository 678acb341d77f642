#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrb/anharmonic.hpp"
#include "lrb/focksim.hpp"
#include "lrb/torus.hpp"
#include "lrb/weyl.hpp"

namespace lrb::cli {

using json = nlohmann::json;

/// Bad or inconsistent scenario input (exit status 1).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int schema_version = 1;

/// Strict view of one JSON object: every key must be read, or finish() fails.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw config_error(path_ + ": expected an object");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  template <class T>
  T req(const std::string& k) {
    if (!has(k)) throw config_error(path_ + ": missing required key '" + k + "'");
    return get<T>(k);
  }

  template <class T>
  T opt(const std::string& k, T def) {
    return has(k) ? get<T>(k) : def;
  }

  const json& raw(const std::string& k) {
    if (!has(k)) throw config_error(path_ + ": missing required key '" + k + "'");
    seen_.insert(k);
    return j_.at(k);
  }

  Reader sub(const std::string& k) { return Reader(raw(k), path_ + "." + k); }

  std::string path() const { return path_; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw config_error(path_ + ": unknown key '" + it.key() + "'");
  }

 private:
  template <class T>
  T get(const std::string& k) {
    seen_.insert(k);
    try {
      return j_.at(k).get<T>();
    } catch (const json::exception&) {
      throw config_error(path_ + "." + k + ": wrong type");
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

struct SiteAmp {
  std::vector<int> site;
  cplx amp;
};

struct LightconeConfig {
  std::vector<double> thresholds{1e-2, 1e-3, 1e-4};
  int r_min = 1;
  int r_max = 8;
  int fit_min_r = 3;
  int plot_times = 4;
};

struct FockConfig {
  int sites = 2;
  Topology topology = Topology::ring;
  int trunc = 12;
  int step = 4;
  double tol = 1e-4;
  std::vector<cplx> f, g;
  std::size_t min_states = 1;
};

struct GenboundConfig {
  std::vector<std::vector<double>> metric;
  std::vector<std::pair<std::vector<std::size_t>, double>> terms;
  double decay_exponent = 2.0;
  double a = 0.0;
  std::vector<std::size_t> X, Y;
  double norm_a = 1.0, norm_b = 1.0;
  int nu = 1;
};

struct ClusteringConfig {
  int max_distance = 8;
  cplx amplitude = 1.0;
};

struct VerifyConfig {
  int cases = 200;
};

struct Scenario {
  std::string name;
  std::string model;
  std::optional<std::uint64_t> seed;

  int nu = 1, L = 8;
  double omega = 1.0;
  std::vector<double> lambda{1.0};
  double mu = 1.0, epsilon = 0.1, a = 0.5;
  bool has_bound = false;
  std::vector<SiteAmp> f, g;
  std::vector<double> times;
  PerturbationSpec perturbation;
  CnuMode cnu = CnuMode::lattice;

  std::optional<LightconeConfig> lightcone;
  std::optional<FockConfig> focksim;
  std::optional<GenboundConfig> genbound;
  std::optional<ClusteringConfig> clustering;
  std::optional<VerifyConfig> verify;

  std::string csv, svg;  // output file names inside --out; empty means default / none

  TorusLattice lattice() const { return TorusLattice(nu, L); }
  Couplings couplings() const { return Couplings(omega, lambda); }

  WeylFunction weyl(const std::vector<SiteAmp>& s) const {
    WeylFunction w(lattice());
    const auto lat = lattice();
    for (const auto& e : s) w.set(lat.index(e.site), e.amp);
    return w;
  }
};

namespace detail {

inline cplx read_amp(Reader& r) { return {r.opt<double>("re", 0.0), r.opt<double>("im", 0.0)}; }

inline std::vector<SiteAmp> read_field(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw config_error(path + ": expected a nonempty list of sites");
  std::vector<SiteAmp> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Reader r(j[i], path + "[" + std::to_string(i) + "]");
    SiteAmp s{r.req<std::vector<int>>("site"), read_amp(r)};
    r.finish();
    out.push_back(std::move(s));
  }
  return out;
}

// Per-site values for a small chain or ring; "site" is a plain index.
inline std::vector<cplx> read_fock_field(const json& j, int sites, const std::string& path) {
  if (!j.is_array() || j.empty()) throw config_error(path + ": expected a nonempty list of sites");
  std::vector<cplx> out(static_cast<std::size_t>(sites));
  for (std::size_t i = 0; i < j.size(); ++i) {
    Reader r(j[i], path + "[" + std::to_string(i) + "]");
    const int s = r.req<int>("site");
    if (s < 0 || s >= sites) throw config_error(path + ": site " + std::to_string(s) + " outside 0.." + std::to_string(sites - 1));
    out[static_cast<std::size_t>(s)] = read_amp(r);
    r.finish();
  }
  return out;
}

inline std::vector<double> read_times(Reader r) {
  std::vector<double> t;
  if (r.has("values")) {
    t = r.req<std::vector<double>>("values");
  } else {
    const double a = r.req<double>("start"), b = r.req<double>("stop");
    const int steps = r.req<int>("steps");
    if (steps < 1) throw config_error(r.path() + ".steps: must be >= 1");
    for (int i = 0; i <= steps; ++i) t.push_back(a + (b - a) * i / steps);
  }
  r.finish();
  if (t.empty()) throw config_error(r.path() + ": empty time grid");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw config_error(r.path() + ": time grid must be strictly increasing");
  return t;
}

inline PerturbationTag read_tag(const std::string& s, const std::string& path) {
  if (s == "onsite_q") return PerturbationTag::onsite_q;
  if (s == "onsite_p") return PerturbationTag::onsite_p;
  if (s == "bond_q") return PerturbationTag::bond_q;
  if (s == "bond_p") return PerturbationTag::bond_p;
  throw config_error(path + ".tag: unknown tag '" + s + "'");
}

inline PerturbationSpec read_perturbation(Reader r) {
  const auto type = r.req<std::string>("type");
  const auto tag = read_tag(r.opt<std::string>("tag", "onsite_q"), r.path());
  PerturbationSpec p;
  if (type == "none") {
    p = PerturbationSpec::none();
  } else if (type == "gaussian") {
    p = PerturbationSpec::gaussian(r.req<double>("alpha"), tag);
  } else if (type == "cosine") {
    p = PerturbationSpec::cosine(r.req<double>("amplitude"), r.req<double>("beta"), tag);
  } else if (type == "tabulated") {
    p = PerturbationSpec::tabulated(r.req<std::vector<double>>("w"), r.req<std::vector<double>>("abs_vprime_hat"));
    p.tag = tag;
  } else {
    throw config_error(r.path() + ".type: unknown perturbation '" + type + "'");
  }
  r.finish();
  return p;
}

}  // namespace detail

/// Parses and validates a scenario document.
inline Scenario parse_scenario(const json& doc) {
  Reader r(doc, "scenario");
  const int ver = r.req<int>("schema_version");
  if (ver != schema_version)
    throw config_error("scenario.schema_version: expected " + std::to_string(schema_version) + ", got " + std::to_string(ver));
  Scenario s;
  s.name = r.opt<std::string>("name", "");
  s.model = r.req<std::string>("model");
  static const std::set<std::string> models{"harmonic", "anharmonic", "genbound", "focksim", "clustering", "verify"};
  if (!models.count(s.model)) throw config_error("scenario.model: unknown model '" + s.model + "'");
  if (r.has("seed")) s.seed = r.req<std::uint64_t>("seed");

  if (r.has("lattice")) {
    auto l = r.sub("lattice");
    s.nu = l.req<int>("nu");
    s.L = l.req<int>("L");
    const auto boundary = l.opt<std::string>("boundary", "periodic");
    if (boundary != "periodic") throw config_error("scenario.lattice.boundary: only 'periodic' is supported");
    l.finish();
  }
  if (r.has("couplings")) {
    auto c = r.sub("couplings");
    s.omega = c.req<double>("omega");
    s.lambda = c.req<std::vector<double>>("lambda");
    c.finish();
  }
  try {
    (void)s.couplings();
    if (r.has("lattice")) require_compatible(s.lattice(), s.couplings());
  } catch (const std::exception& e) {
    throw config_error(std::string("scenario: ") + e.what());
  }
  if (r.has("bound")) {
    auto b = r.sub("bound");
    s.mu = b.req<double>("mu");
    s.epsilon = b.opt<double>("epsilon", s.epsilon);
    s.a = b.opt<double>("a", s.a);
    b.finish();
    s.has_bound = true;
    if (!(s.mu > 0.0)) throw config_error("scenario.bound.mu: must be > 0");
  }
  if (s.model == "anharmonic" && !(s.mu >= 1.0))
    throw config_error("scenario.bound.mu = " + std::to_string(s.mu) +
                       ": the anharmonic bound holds only for mu >= 1 (theorem hypothesis)");

  if (r.has("observables")) {
    auto o = r.sub("observables");
    s.f = detail::read_field(o.raw("f"), "scenario.observables.f");
    s.g = detail::read_field(o.raw("g"), "scenario.observables.g");
    o.finish();
    const auto lat = s.lattice();
    for (const auto* fld : {&s.f, &s.g})
      for (const auto& e : *fld)
        if (!lat.contains(e.site)) throw config_error("scenario.observables: site outside the declared lattice");
  }
  if (r.has("time")) s.times = detail::read_times(r.sub("time"));
  if (r.has("perturbation")) s.perturbation = detail::read_perturbation(r.sub("perturbation"));
  if (r.has("cnu")) {
    const auto m = r.req<std::string>("cnu");
    if (m == "lattice") s.cnu = CnuMode::lattice;
    else if (m == "z_limit") s.cnu = CnuMode::z_limit;
    else throw config_error("scenario.cnu: expected 'lattice' or 'z_limit'");
  }

  if (r.has("lightcone")) {
    auto l = r.sub("lightcone");
    LightconeConfig c;
    c.thresholds = l.opt("thresholds", c.thresholds);
    c.r_min = l.opt("r_min", c.r_min);
    c.r_max = l.opt("r_max", c.r_max);
    c.fit_min_r = l.opt("fit_min_r", c.fit_min_r);
    c.plot_times = l.opt("plot_times", c.plot_times);
    l.finish();
    if (c.r_min < 0 || c.r_max < c.r_min || c.r_max > s.L)
      throw config_error("scenario.lightcone: need 0 <= r_min <= r_max <= L");
    for (double th : c.thresholds)
      if (!(th > 0.0 && th < 2.0)) throw config_error("scenario.lightcone.thresholds: each must lie in (0, 2)");
    s.lightcone = c;
  }
  if (r.has("focksim")) {
    auto fr = r.sub("focksim");
    FockConfig c;
    c.sites = fr.req<int>("sites");
    const auto top = fr.opt<std::string>("topology", "ring");
    if (top == "ring") c.topology = Topology::ring;
    else if (top == "chain") c.topology = Topology::chain;
    else throw config_error("scenario.focksim.topology: expected 'ring' or 'chain'");
    c.trunc = fr.req<int>("trunc");
    c.step = fr.opt("step", c.step);
    c.tol = fr.opt("tol", c.tol);
    c.min_states = fr.opt<std::size_t>("min_states", c.min_states);
    if (c.sites < 1 || c.sites > 4) throw config_error("scenario.focksim.sites: 1 to 4 supported");
    c.f = detail::read_fock_field(fr.raw("f"), c.sites, "scenario.focksim.f");
    c.g = detail::read_fock_field(fr.raw("g"), c.sites, "scenario.focksim.g");
    fr.finish();
    if (s.lambda.size() != 1) throw config_error("scenario.couplings: focksim needs exactly one lambda");
    s.focksim = c;
  }
  if (r.has("genbound")) {
    auto gr = r.sub("genbound");
    GenboundConfig c;
    auto graph = gr.sub("graph");
    const auto kind = graph.req<std::string>("kind");
    if (kind == "chain") {
      const auto n = graph.req<std::size_t>("sites");
      c.metric.assign(n, std::vector<double>(n));
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) c.metric[x][y] = std::abs(double(x) - double(y));
    } else if (kind == "torus") {
      const auto lat = s.lattice();
      c.metric.assign(lat.size(), std::vector<double>(lat.size()));
      for (std::size_t x = 0; x < lat.size(); ++x)
        for (std::size_t y = 0; y < lat.size(); ++y) c.metric[x][y] = lat.distance(x, y);
    } else if (kind == "metric") {
      c.metric = graph.req<std::vector<std::vector<double>>>("table");
    } else {
      throw config_error("scenario.genbound.graph.kind: expected chain, torus or metric");
    }
    graph.finish();
    if (gr.has("nearest_neighbour")) {
      const double J = gr.req<double>("nearest_neighbour");
      for (std::size_t x = 0; x < c.metric.size(); ++x)
        for (std::size_t y = x + 1; y < c.metric.size(); ++y)
          if (c.metric[x][y] == 1.0) c.terms.push_back({{x, y}, J});
    }
    if (gr.has("terms")) {
      const auto& t = gr.raw("terms");
      if (!t.is_array()) throw config_error("scenario.genbound.terms: expected a list");
      for (std::size_t i = 0; i < t.size(); ++i) {
        Reader tr(t[i], "scenario.genbound.terms[" + std::to_string(i) + "]");
        c.terms.push_back({tr.req<std::vector<std::size_t>>("sites"), tr.req<double>("norm")});
        tr.finish();
      }
    }
    c.decay_exponent = gr.opt("decay_exponent", c.decay_exponent);
    c.a = gr.opt("a", c.a);
    c.X = gr.req<std::vector<std::size_t>>("X");
    c.Y = gr.req<std::vector<std::size_t>>("Y");
    c.norm_a = gr.opt("norm_a", c.norm_a);
    c.norm_b = gr.opt("norm_b", c.norm_b);
    c.nu = gr.opt("nu", s.nu);
    gr.finish();
    s.genbound = c;
  }
  if (r.has("clustering")) {
    auto cr = r.sub("clustering");
    ClusteringConfig c;
    c.max_distance = cr.opt("max_distance", c.max_distance);
    if (cr.has("amplitude")) {
      auto a = cr.sub("amplitude");
      c.amplitude = detail::read_amp(a);
      a.finish();
    }
    cr.finish();
    s.clustering = c;
  }
  if (r.has("verify")) {
    auto vr = r.sub("verify");
    VerifyConfig c;
    c.cases = vr.opt("cases", c.cases);
    vr.finish();
    if (c.cases < 1) throw config_error("scenario.verify.cases: must be >= 1");
    s.verify = c;
  }
  if (r.has("output")) {
    auto o = r.sub("output");
    s.csv = o.opt<std::string>("csv", "");
    s.svg = o.opt<std::string>("svg", "");
    o.finish();
  }
  r.finish();
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open scenario file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(path + ": " + e.what());
  }
  return parse_scenario(doc);
}

}  // namespace lrb::cli
