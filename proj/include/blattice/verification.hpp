#pragma once

// Run configuration and the verification suite: one registered check per
// invariant, run concurrently and reported in registry order.

#include <functional>
#include <map>

#include "blattice/json_io.hpp"
#include "blattice/report.hpp"
#include "blattice/sampling.hpp"

namespace blattice::harness {

using io::json;
using io::num;
using sampling::Rng;

inline std::map<std::string, double> default_tolerances() {
  return {
      {"quasi_concavity", 1e-9}, {"conjugate", 1e-6},     {"dilation_grid", 1e-3}, {"equimeasurable", 1e-12},
      {"mass", 1e-12},           {"monotone", 1e-10},     {"permutation", 1e-12},  {"triangle", 1e-9},
      {"attainment", 1e-8},      {"exact", 1e-10},        {"functional", 1e-9},    {"index", 0.05},
      {"holder_slope", 0.05},    {"holder_unit", 1e-9},   {"fs_slack", 1.25},      {"kcurve", 1e-9},
      {"orbit", 1e-10},          {"majorization", 1e-12},
  };
}

struct RunConfig {
  std::uint64_t seed = 20240917;
  std::size_t n_cap = 8;
  int starts = 16;
  std::size_t max_parts = 3;
  std::size_t grid_points = 241;
  std::string output = "json";
  std::map<std::string, double> tolerances = default_tolerances();

  double tol(const std::string& key) const {
    auto it = tolerances.find(key);
    if (it == tolerances.end()) throw Error(ErrorKind::invalid_argument, "no tolerance named '" + key + "'");
    return it->second;
  }

  OptimalConfig optimal() const {
    OptimalConfig c;
    c.cap = n_cap;
    c.max_parts = max_parts;
    c.optimizer.starts = starts;
    c.optimizer.seed = seed;
    return c;
  }

  SamplerConfig sampler() const {
    SamplerConfig s;
    s.seed = seed;
    return s;
  }
};

inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw Error(ErrorKind::invalid_spec, "config must be a JSON object");
  try {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("caps")) {
      const auto& caps = j.at("caps");
      if (caps.contains("n_cap")) c.n_cap = caps.at("n_cap").get<std::size_t>();
      if (caps.contains("starts")) c.starts = caps.at("starts").get<int>();
      if (caps.contains("max_parts")) c.max_parts = caps.at("max_parts").get<std::size_t>();
      if (caps.contains("grid_points")) c.grid_points = caps.at("grid_points").get<std::size_t>();
    }
    if (j.contains("output")) {
      c.output = j.at("output").get<std::string>();
      if (c.output != "json" && c.output != "csv" && c.output != "svg") {
        throw Error(ErrorKind::invalid_spec, "output must be json, csv or svg");
      }
    }
    if (j.contains("tolerances")) {
      for (const auto& [k, v] : j.at("tolerances").items()) {
        if (!c.tolerances.count(k)) throw Error(ErrorKind::invalid_spec, "unknown tolerance '" + k + "'");
        c.tolerances[k] = io::get_num(v, "tolerance");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_spec, std::string("bad config field: ") + e.what());
  }
  return c;
}

inline json to_json(const RunConfig& c) {
  json tols = json::object();
  for (const auto& [k, v] : c.tolerances) tols[k] = num(v);
  return {{"seed", c.seed},
          {"caps", {{"n_cap", c.n_cap}, {"starts", c.starts}, {"max_parts", c.max_parts}, {"grid_points", c.grid_points}}},
          {"output", c.output},
          {"tolerances", tols}};
}

enum class Status { pass, fail, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct CheckOutcome {
  Status status = Status::pass;
  json measured = json::object();
};

struct CheckDef {
  std::string id;
  std::string invariant;
  std::string tolerance_key;
  std::function<CheckOutcome(const RunConfig&, Rng&)> run;
};

struct CheckResult {
  std::string id;
  std::string invariant;
  Status status = Status::pass;
  json measured;
  double tolerance = 0.0;
};

struct SuiteResult {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  std::size_t count(Status s) const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](const auto& c) { return c.status == s; }));
  }
  bool all_pass() const { return count(Status::fail) == 0; }
};

/// Ids every registry must provide, one per documented invariant.
inline const std::vector<std::string>& required_check_ids() {
  static const std::vector<std::string> ids = {
      "sf.quasi_concavity",        "sf.conjugate_duality",      "sf.dilation_submultiplicative",
      "re.equimeasurable_rearrangement", "re.mass_conservation", "nm.lattice_monotone",
      "nm.rearrangement_invariance", "nm.homogeneity_triangle", "nm.luxemburg_attainment",
      "os.embedding_chain",        "os.symmetry_monotone",      "os.truncation_contractive",
      "os.disjoint_blocks",        "os.idempotence",            "os.index_consistency",
      "dc.one_decomposable",       "dc.monotone_in_s",          "dc.holder_boundary",
      "dc.fs_sandwich",       "ip.kcurve_invariants",      "ip.k_subadditive",
      "ip.kmon1_implies_kmon2",    "ip.rs_inf_equals_majorization", "hs.determinism",
      "hs.registry_coverage",
  };
  return ids;
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline CheckOutcome verdict(bool ok, json measured) { return {ok ? Status::pass : Status::fail, std::move(measured)}; }

inline std::vector<LatticeSpec> sequence_hosts(Rng& rng) {
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::vector<double> weights(12);
  for (auto& x : weights) x = w(rng);
  return {LatticeSpec::lp(1.0),
          LatticeSpec::lp(2.0),
          LatticeSpec::lp(3.5),
          LatticeSpec::lp(kInf),
          LatticeSpec::c0(),
          LatticeSpec::weighted_lp(2.0, weights),
          LatticeSpec::orlicz_seq(OrliczFunction::power_log(2.0, 1.0)),
          LatticeSpec::orlicz_seq(OrliczFunction::power(3.0))};
}

inline std::vector<LatticeSpec> function_hosts() {
  return {LatticeSpec::orlicz_fn(OrliczFunction::power(1.5)), LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)),
          LatticeSpec::lorentz(2.0, 1.0), LatticeSpec::lorentz(3.0, 2.0), LatticeSpec::lorentz(2.0, 3.0)};
}

inline std::vector<LatticeSpec> closed_form_hosts() {
  return {LatticeSpec::lp(1.0), LatticeSpec::lp(1.5), LatticeSpec::lp(2.0), LatticeSpec::lp(3.0), LatticeSpec::c0()};
}

/// Convex tabulated function sampled from t^2 (1 + log(1 + t)).
inline OrliczFunction sample_tabulated() {
  std::vector<std::pair<double, double>> knots;
  for (double t : log_grid(1e-3, 1e4, 80)) knots.emplace_back(t, t * t * (1.0 + std::log1p(t)));
  return OrliczFunction::tabulated(std::move(knots));
}

inline double rel_gap(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline SeqVector seq_of(std::vector<double> v) { return SeqVector(std::move(v)); }

// ----- special functions ---------------------------------------------------

inline CheckOutcome quasi_concavity(const RunConfig& cfg, Rng&) {
  const double tol = cfg.tol("quasi_concavity");
  std::vector<LatticeSpec> hosts = {
      LatticeSpec::orlicz_fn(OrliczFunction::power(1.5)), LatticeSpec::orlicz_fn(OrliczFunction::power(3.0)),
      LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)),
      LatticeSpec::orlicz_fn(OrliczFunction::power_log(1.5, 2.0)), LatticeSpec::lorentz(2.0, 1.0),
      LatticeSpec::lorentz(3.0, 2.0)};
  double worst = 0.0;
  std::size_t points = 0;
  const auto grid = log_grid(1e-4, 1.0, 60);
  for (const auto& h : hosts) {
    double prev_t = 0.0, prev_phi = 0.0;
    for (double t : grid) {
      const double phi = fundamental_function(h, t);
      ++points;
      if (prev_t > 0.0) {
        worst = std::max(worst, (prev_phi - phi) / phi);
        worst = std::max(worst, (phi / t - prev_phi / prev_t) / (prev_phi / prev_t));
      }
      prev_t = t;
      prev_phi = phi;
    }
  }
  return verdict(worst <= tol, {{"worst_relative_violation", num(worst)}, {"points", points}});
}

inline CheckOutcome conjugate_duality(const RunConfig& cfg, Rng&) {
  const double tol = cfg.tol("conjugate");
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto M = OrliczFunction::power(p);
    auto conj = [&](double u) { return young_conjugate(M, u).value; };
    for (double t : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
      const double back = legendre_conjugate(conj, t).value;
      worst = std::max(worst, rel_gap(back, std::pow(t, p)));
    }
  }
  return verdict(worst <= tol, {{"max_relative_error", num(worst)}});
}

inline CheckOutcome dilation_submultiplicative(const RunConfig& cfg, Rng&) {
  const double eps = cfg.tol("dilation_grid");
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& M : {OrliczFunction::power(2.0), OrliczFunction::power_log(2.0, 1.0)}) {
    auto g = [&](double v) { return M.inverse(v); };
    const std::vector<double> us = {1.5, 2.0, 3.0, 5.0};
    constexpr double v_max = 1e6;
    for (std::size_t i = 0; i < us.size(); ++i) {
      for (std::size_t j = i; j < us.size(); ++j) {
        // g(v u1 u2)/g(v) splits at v u1, so the second factor needs v up to u1 v_max.
        const double joint = dilation_function(g, us[i] * us[j], v_max).value;
        const double first = dilation_function(g, us[i], v_max).value;
        const double second = dilation_function(g, us[j], v_max * us[i]).value;
        worst = std::max(worst, joint / (first * second) - 1.0);
        ++pairs;
      }
    }
  }
  return verdict(worst <= eps, {{"worst_excess", num(worst)}, {"pairs", pairs}});
}

// ----- rearrangement -------------------------------------------------------

inline CheckOutcome equimeasurable_rearrangement(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("equimeasurable");
  double worst = 0.0;
  bool all = true;
  for (int k = 0; k < 100; ++k) {
    const auto f = sampling::random_step(rng, 6);
    const auto r = decreasing_rearrangement(f);
    all = all && equimeasurable(f, r, tol);
    for (const auto& a : f.atoms()) {
      for (double tau : {std::abs(a.value) * 0.999, std::abs(a.value), std::abs(a.value) * 1.001}) {
        worst = std::max(worst, std::abs(distribution_function(f, tau) - distribution_function(r, tau)));
      }
    }
  }
  return verdict(all && worst <= tol, {{"max_distribution_gap", num(worst)}, {"samples", 100}});
}

inline CheckOutcome mass_conservation(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("mass");
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto f = sampling::random_step(rng, 6);
    const double mass = f.integral_abs();
    worst = std::max(worst, std::abs(rearrangement_integral(decreasing_rearrangement(f), 1.0) - mass) / std::max(1.0, mass));
  }
  return verdict(worst <= tol, {{"max_gap", num(worst)}, {"samples", 100}});
}

// ----- norms ---------------------------------------------------------------

inline StepFunction enlarge(const StepFunction& f, Rng& rng) {
  std::uniform_real_distribution<double> u(1.0, 2.0);
  std::vector<Atom> atoms(f.atoms().begin(), f.atoms().end());
  for (auto& a : atoms) a.value *= u(rng);
  return StepFunction(std::move(atoms));
}

inline CheckOutcome lattice_monotone(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("monotone");
  double worst = 0.0;
  std::size_t pairs = 0;
  std::uniform_real_distribution<double> u(1.0, 2.0);
  for (const auto& h : sequence_hosts(rng)) {
    for (int k = 0; k < 30; ++k) {
      auto a = sampling::random_vector(rng, sampling::random_size(rng, 1, 12));
      auto b = a;
      for (auto& x : b) x *= u(rng);
      worst = std::max(worst, seq_norm(a, h) / seq_norm(b, h) - 1.0);
      ++pairs;
    }
  }
  for (const auto& h : function_hosts()) {
    for (int k = 0; k < 30; ++k) {
      const auto f = sampling::random_step(rng);
      worst = std::max(worst, function_norm(f, h) / function_norm(enlarge(f, rng), h) - 1.0);
      ++pairs;
    }
  }
  return verdict(worst <= tol, {{"worst_excess", num(worst)}, {"pairs", pairs}});
}

inline CheckOutcome rearrangement_invariance(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("permutation");
  double worst = 0.0;
  for (const auto& h : sequence_hosts(rng)) {
    if (h.is<WeightedLpSpec>()) continue;
    for (int k = 0; k < 30; ++k) {
      auto a = sampling::random_vector(rng, sampling::random_size(rng, 1, 12));
      auto b = a;
      std::shuffle(b.begin(), b.end(), rng);
      worst = std::max(worst, rel_gap(seq_norm(a, h), seq_norm(b, h)));
    }
  }
  for (const auto& h : function_hosts()) {
    for (int k = 0; k < 30; ++k) {
      const auto f = sampling::random_step(rng, 6);
      std::vector<Atom> atoms(f.atoms().begin(), f.atoms().end());
      std::shuffle(atoms.begin(), atoms.end(), rng);
      worst = std::max(worst, rel_gap(function_norm(f, h), function_norm(StepFunction(atoms), h)));
    }
  }
  return verdict(worst <= tol, {{"max_relative_gap", num(worst)}});
}

inline CheckOutcome homogeneity_triangle(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("triangle");
  double worst_h = 0.0, worst_t = 0.0;
  std::uniform_real_distribution<double> lam(-4.0, 4.0);
  for (const auto& h : sequence_hosts(rng)) {
    for (int k = 0; k < 30; ++k) {
      const std::size_t n = sampling::random_size(rng, 1, 12);
      auto a = sampling::random_vector(rng, n), b = sampling::random_vector(rng, n), s = a, la = a;
      const double l = lam(rng);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = a[i] + b[i];
        la[i] = l * a[i];
      }
      worst_h = std::max(worst_h, rel_gap(seq_norm(la, h), std::abs(l) * seq_norm(a, h)));
      worst_t = std::max(worst_t, seq_norm(s, h) / (seq_norm(a, h) + seq_norm(b, h)) - 1.0);
    }
  }
  for (const auto& h : function_hosts()) {
    const double C = h.is<LorentzSpec>() ? lorentz_quasi_constant(h.as<LorentzSpec>().p, h.as<LorentzSpec>().q) : 1.0;
    for (int k = 0; k < 30; ++k) {
      const auto f = sampling::random_step(rng), g = sampling::random_step(rng);
      const std::vector<PlacedStep> both = {PlacedStep::place(f, 0.0), PlacedStep::place(g, 0.0)};
      const auto sum = PlacedStep::pointwise_sum(both).to_step();
      const double l = lam(rng);
      worst_h = std::max(worst_h, rel_gap(function_norm(f.scaled(l), h), std::abs(l) * function_norm(f, h)));
      worst_t = std::max(worst_t, function_norm(sum, h) / (C * (function_norm(f, h) + function_norm(g, h))) - 1.0);
    }
  }
  return verdict(worst_h <= tol && worst_t <= tol,
                 {{"max_homogeneity_gap", num(worst_h)}, {"worst_triangle_excess", num(worst_t)}});
}

inline CheckOutcome luxemburg_attainment(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("attainment");
  double worst = 0.0;
  for (const auto& M : {OrliczFunction::power(2.0), OrliczFunction::power(1.5), OrliczFunction::power_log(2.0, 1.0),
                        sample_tabulated()}) {
    for (int k = 0; k < 30; ++k) {
      const auto f = sampling::random_step(rng);
      const double lambda = luxemburg_norm(f, M);
      worst = std::max(worst, std::abs(luxemburg_modular(f, M, lambda) - 1.0));
    }
  }
  return verdict(worst <= tol, {{"max_modular_gap", num(worst)}});
}

// ----- optimal spaces ------------------------------------------------------

inline CheckOutcome embedding_chain(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("exact");
  const auto oc = cfg.optimal();
  double worst = 0.0;
  std::size_t vectors = 0;
  for (const auto& h : closed_form_hosts()) {
    for (int k = 0; k < 200; ++k) {
      const auto a = sampling::random_vector(rng, sampling::random_size(rng, 1, 16));
      const double inf = lp_norm(a, kInf), one = lp_norm(a, 1.0);
      const double xl = xl_norm(a, h, oc).value, xu = xu_norm(a, h, oc).value;
      worst = std::max({worst, inf - xl, xl - xu, xu - one});
      ++vectors;
    }
  }
  for (const auto& h : {LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)), LatticeSpec::lorentz(2.0, 3.0)}) {
    for (int k = 0; k < 3; ++k) {
      const auto a = sampling::random_vector(rng, 3);
      const double inf = lp_norm(a, kInf), one = lp_norm(a, 1.0);
      const auto xl = xl_norm(a, h, oc), xu = xu_norm(a, h, oc);
      worst = std::max({worst, (inf - xl.hi) / one, (xl.lo - xu.hi) / one, (xu.hi - one) / one});
      ++vectors;
    }
  }
  return verdict(worst <= tol, {{"worst_excess", num(worst)}, {"vectors", vectors}});
}

inline CheckOutcome symmetry_monotone(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("functional");
  const auto oc = cfg.optimal();
  double worst_perm = 0.0, worst_mono = 0.0;
  std::uniform_real_distribution<double> u(1.0, 2.0);
  for (const auto& h : closed_form_hosts()) {
    for (int k = 0; k < 30; ++k) {
      auto a = sampling::random_vector(rng, sampling::random_size(rng, 1, 10));
      auto p = a, b = a;
      std::shuffle(p.begin(), p.end(), rng);
      for (auto& x : b) x *= u(rng);
      const double vu = xu_norm(a, h, oc).value, vl = xl_norm(a, h, oc).value, vp = phi_n(a, h, oc).value;
      worst_perm = std::max({worst_perm, rel_gap(vu, xu_norm(p, h, oc).value), rel_gap(vl, xl_norm(p, h, oc).value),
                             rel_gap(vp, phi_n(p, h, oc).value)});
      worst_mono = std::max({worst_mono, vu / xu_norm(b, h, oc).value - 1.0, vl / xl_norm(b, h, oc).value - 1.0});
    }
  }
  // Sandwich overlap under permutation on an Orlicz host.
  const auto orl = LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0));
  double overlap_gap = 0.0;
  for (int k = 0; k < 2; ++k) {
    auto a = sampling::random_vector(rng, 3);
    auto p = a;
    std::reverse(p.begin(), p.end());
    const auto r1 = xu_norm(a, orl, oc), r2 = xu_norm(p, orl, oc);
    overlap_gap = std::max(overlap_gap, (std::max(r1.lo, r2.lo) - std::min(r1.hi, r2.hi)) / r1.hi);
  }
  return verdict(worst_perm <= tol && worst_mono <= tol && overlap_gap <= tol,
                 {{"max_permutation_gap", num(worst_perm)},
                  {"worst_monotone_excess", num(worst_mono)},
                  {"orlicz_overlap_gap", num(overlap_gap)}});
}

inline CheckOutcome truncation_contractive(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("exact");
  const auto oc = cfg.optimal();
  double worst = 0.0;
  for (const auto& h : closed_form_hosts()) {
    for (int k = 0; k < 50; ++k) {
      const auto a = sampling::random_vector(rng, sampling::random_size(rng, 2, 12));
      const std::span<const double> t(a.data(), a.size() - 1);
      worst = std::max({worst, xu_norm(t, h, oc).value - xu_norm(a, h, oc).value,
                        xl_norm(t, h, oc).value - xl_norm(a, h, oc).value,
                        phi_n(t, h, oc).value - phi_n(a, h, oc).value});
    }
  }
  const auto orl = LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0));
  for (int k = 0; k < 2; ++k) {
    const auto a = sampling::random_vector(rng, 3);
    const std::span<const double> t(a.data(), 2);
    const auto full = xu_norm(a, orl, oc), cut = xu_norm(t, orl, oc);
    worst = std::max(worst, (cut.lo - full.hi) / full.hi);
  }
  return verdict(worst <= tol, {{"worst_increase", num(worst)}});
}

inline CheckOutcome disjoint_blocks(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("exact");
  const auto oc = cfg.optimal();
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto h = LatticeSpec::lp(p);
    for (int k = 0; k < 40; ++k) {
      const std::size_t n = sampling::random_size(rng, 2, 12);
      const auto a = sampling::random_vector(rng, n);
      const std::size_t blocks = sampling::random_size(rng, 1, std::min<std::size_t>(n, 4));
      std::vector<double> u_norms, l_norms;
      for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = b * n / blocks, hi = (b + 1) * n / blocks;
        std::vector<double> block(n, 0.0);
        std::copy(a.begin() + static_cast<std::ptrdiff_t>(lo), a.begin() + static_cast<std::ptrdiff_t>(hi),
                  block.begin() + static_cast<std::ptrdiff_t>(lo));
        u_norms.push_back(xu_norm(block, h, oc).value);
        l_norms.push_back(xl_norm(block, h, oc).value);
      }
      const double su = xu_norm(a, h, oc).value, sl = xl_norm(a, h, oc).value;
      worst = std::max({worst, su / xu_norm(u_norms, h, oc).value - 1.0, xl_norm(l_norms, h, oc).value / sl - 1.0});
    }
  }
  return verdict(worst <= tol, {{"worst_excess", num(worst)}});
}

inline CheckOutcome idempotence(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("exact");
  const auto oc = cfg.optimal();
  double worst = 0.0;
  std::vector<LatticeSpec> hosts = closed_form_hosts();
  hosts.push_back(LatticeSpec::lorentz(2.0, 1.0));
  hosts.push_back(LatticeSpec::lorentz(3.0, 2.0));
  for (const auto& h : hosts) {
    const auto delta = grobler_dodds(h).delta;
    const auto out = std::isinf(delta) ? LatticeSpec::c0() : LatticeSpec::lp(delta);
    for (int k = 0; k < 10; ++k) {
      const auto a = sampling::random_vector(rng, sampling::random_size(rng, 1, 6));
      worst = std::max(worst, rel_gap(xu_norm(a, h, oc).value, xu_norm(a, out, oc).value));
    }
  }
  return verdict(worst <= tol, {{"max_relative_gap", num(worst)}});
}

inline CheckOutcome index_consistency(const RunConfig& cfg, Rng&) {
  const double tol = cfg.tol("index");
  const auto oc = cfg.optimal();
  json per_host = json::array();
  bool ok = true;
  for (const auto& h : {LatticeSpec::lp(1.5), LatticeSpec::lp(3.0), LatticeSpec::lorentz(2.0, 1.0),
                        LatticeSpec::lorentz(3.0, 2.0)}) {
    std::vector<double> ln, lv;
    for (std::size_t n : {2u, 4u, 8u}) {
      const std::vector<double> ones(n, 1.0);
      ln.push_back(std::log(static_cast<double>(n)));
      lv.push_back(std::log(xu_norm(ones, h, oc).value));
    }
    const double exponent = 1.0 / regression_slope(ln, lv);
    const double delta = grobler_dodds(h).delta;
    ok = ok && std::abs(exponent - delta) <= tol;
    per_host.push_back({{"host", h.name()}, {"empirical", num(exponent)}, {"delta", num(delta)}});
  }
  return verdict(ok, {{"hosts", per_host}});
}

// ----- decomposability -----------------------------------------------------

inline CheckOutcome one_decomposable(const RunConfig& cfg, Rng&) {
  const double tol = cfg.tol("exact");
  const auto sc = cfg.sampler();
  const std::vector<std::pair<LatticeSpec, LatticeSpec>> pairs = {
      {LatticeSpec::lp(2.0), LatticeSpec::lp(1.0)},
      {LatticeSpec::c0(), LatticeSpec::lp(1.0)},
      {LatticeSpec::lp(1.0), LatticeSpec::lp(3.0)},
      {LatticeSpec::lorentz(2.0, 1.0), LatticeSpec::lp(2.0)},
      {LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)), LatticeSpec::lorentz(3.0, 2.0)}};
  double worst = 0.0;
  json rows = json::array();
  for (const auto& [X, Y] : pairs) {
    const double d1 = ds_constant(X, Y, 1.0, 6, sc).empirical_Ds;
    const double bound = estimate_constant(Y, 1.0, Direction::upper, 6, sc).constant *
                         estimate_constant(X, kInf, Direction::lower, 6, sc).constant;
    worst = std::max(worst, d1 / bound - 1.0);
    rows.push_back({{"X", X.name()}, {"Y", Y.name()}, {"D1", num(d1)}, {"bound", num(bound)}});
  }
  return verdict(worst <= tol, {{"worst_excess", num(worst)}, {"pairs", rows}});
}

inline CheckOutcome monotone_in_s(const RunConfig& cfg, Rng&) {
  const double tol = cfg.tol("exact");
  const auto sc = cfg.sampler();
  double worst = 0.0;
  for (const auto& [X, Y] : std::vector<std::pair<LatticeSpec, LatticeSpec>>{
           {LatticeSpec::c0(), LatticeSpec::lp(1.0)},
           {LatticeSpec::lp(2.0), LatticeSpec::lp(1.0)},
           {LatticeSpec::lorentz(2.0, 1.0), LatticeSpec::lp(1.0)}}) {
    double prev = 0.0;
    for (double s : {1.0, 1.5, 2.0, 4.0, kInf}) {
      const double d = ds_constant(X, Y, s, 6, sc).empirical_Ds;
      if (prev > 0.0) worst = std::max(worst, prev / d - 1.0);
      prev = d;
    }
  }
  return verdict(worst <= tol, {{"worst_decrease", num(worst)}});
}

inline CheckOutcome holder_boundary(const RunConfig& cfg, Rng&) {
  const double slope_tol = cfg.tol("holder_slope");
  const double unit_tol = cfg.tol("holder_unit");
  const auto sc = cfg.sampler();
  struct Case {
    double q, p, s;
  };
  bool ok = true;
  json rows = json::array();
  for (const auto& c : {Case{kInf, 1.0, 2.0}, Case{2.0, 1.0, 2.0}, Case{2.0, 1.0, 4.0}, Case{3.0, 1.5, 2.0},
                        Case{kInf, 1.0, 1.0}, Case{kInf, 1.0, kInf}}) {
    const double e = std::max(0.0, reciprocal(c.p) - reciprocal(c.q) - reciprocal(c.s));
    const auto X = std::isinf(c.q) ? LatticeSpec::c0() : LatticeSpec::lp(c.q);
    const auto Y = LatticeSpec::lp(c.p);
    json row = {{"q", num(c.q)}, {"p", num(c.p)}, {"s", num(c.s)}, {"exponent", num(e)}};
    if (e == 0.0) {
      const double d = ds_constant(X, Y, c.s, 8, sc).empirical_Ds;
      ok = ok && std::abs(d - 1.0) <= unit_tol;
      row["Ds"] = num(d);
    } else {
      const auto r = ds_constant(X, Y, c.s, 32, sc);
      ok = ok && std::abs(r.slope - e) <= slope_tol;
      row["slope"] = num(r.slope);
    }
    rows.push_back(row);
  }
  return verdict(ok, {{"cases", rows}});
}

inline CheckOutcome fs_sandwich(const RunConfig& cfg, Rng&) {
  FsConfig fc;
  fc.slack = cfg.tol("fs_slack");
  fc.sampler = cfg.sampler();
  bool ok = true;
  json rows = json::array();
  for (double q : {2.0, 3.0}) {
    for (double p : {1.0, 1.5}) {
      const double s = 1.0 / (1.0 / p - 1.0 / q);
      const auto r = fs_infimum(LatticeSpec::lp(q), LatticeSpec::lp(p), s, fc);
      ok = ok && r.sandwich_lower && r.sandwich_upper;
      rows.push_back({{"q", num(q)}, {"p", num(p)}, {"s", num(s)}, {"Fs", num(r.value)}, {"Ds", num(r.ds)}});
    }
  }
  return verdict(ok, {{"cases", rows}});
}

// ----- interpolation -------------------------------------------------------

inline std::vector<CoupleSpec> sequence_couples(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> w(0.25, 4.0);
  std::vector<double> w0(n), w1(n);
  for (auto& x : w0) x = w(rng);
  for (auto& x : w1) x = w(rng);
  return {CoupleSpec::weighted(1.0, {}, kInf, {}), CoupleSpec::weighted(1.0, w0, 1.0, w1),
          CoupleSpec::weighted(2.0, {}, kInf, w1), CoupleSpec::weighted(kInf, w0, 1.0, {}),
          CoupleSpec::weighted(1.0, w0, 2.0, w1)};
}

inline CheckOutcome kcurve_invariants(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("kcurve");
  const auto grid = log_grid(1e-3, 1e3, 60);
  std::size_t curves = 0, bad = 0;
  for (int k = 0; k < 30; ++k) {
    const auto c = k_curve(sampling::random_step(rng), CoupleSpec::l1_linf(), grid);
    ++curves;
    if (!check_kcurve(c, tol).ok()) ++bad;
  }
  for (int k = 0; k < 6; ++k) {
    const std::size_t n = sampling::random_size(rng, 1, 5);
    const SeqVector x(sampling::random_vector(rng, n));
    for (const auto& couple : sequence_couples(rng, n)) {
      ++curves;
      if (!check_kcurve(k_curve(x, couple, grid), tol).ok()) ++bad;
    }
  }
  return verdict(bad == 0, {{"curves", curves}, {"failing", bad}});
}

inline CheckOutcome k_subadditive(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("kcurve");
  std::uniform_real_distribution<double> lt(-3.0, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 40; ++k) {
    const auto f = sampling::random_step(rng), g = sampling::random_step(rng);
    const std::vector<PlacedStep> both = {PlacedStep::place(f, 0.0), PlacedStep::place(g, 0.0)};
    const auto sum = PlacedStep::pointwise_sum(both).to_step();
    const double t = std::pow(10.0, lt(rng));
    const auto c = CoupleSpec::l1_linf();
    worst = std::max(worst, k_functional(t, sum, c) / (k_functional(t, f, c) + k_functional(t, g, c)) - 1.0);
  }
  for (int k = 0; k < 8; ++k) {
    const std::size_t n = sampling::random_size(rng, 1, 5);
    const auto a = sampling::random_vector(rng, n), b = sampling::random_vector(rng, n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = a[i] + b[i];
    for (const auto& couple : sequence_couples(rng, n)) {
      const double t = std::pow(10.0, lt(rng));
      const double lhs = k_functional(t, SeqVector(s), couple);
      const double rhs = k_functional(t, SeqVector(a), couple) + k_functional(t, SeqVector(b), couple);
      worst = std::max(worst, lhs / rhs - 1.0);
    }
  }
  return verdict(worst <= tol, {{"worst_excess", num(worst)}});
}

inline CheckOutcome kmon1_implies_kmon2(const RunConfig& cfg, Rng& rng) {
  const double tol = cfg.tol("orbit");
  const double mtol = cfg.tol("majorization");
  std::size_t maj_fail = 0, op_fail = 0;
  double worst_norm = 0.0, worst_res = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = sampling::random_size(rng, 2, 6);
    const auto T = sampling::random_substochastic(rng, n);
    const auto x = sampling::random_vector(rng, n);
    const SeqVector xs(x), ys(sampling::apply(T, x));
    if (!cm_majorization(xs, ys, 1.0, mtol).holds) {
      ++maj_fail;
      continue;
    }
    const auto chk = validate_operator(cm_orbit_operator(xs, ys), xs, ys, tol);
    worst_norm = std::max({worst_norm, chk.max_column_sum, chk.max_row_sum});
    worst_res = std::max(worst_res, chk.residual);
    if (!chk.ok) ++op_fail;
  }
  return verdict(maj_fail == 0 && op_fail == 0, {{"majorization_failures", maj_fail},
                                                 {"operator_failures", op_fail},
                                                 {"max_operator_norm", num(worst_norm)},
                                                 {"max_residual", num(worst_res)}});
}

inline CheckOutcome rs_inf_equals_majorization(const RunConfig& cfg, Rng& rng) {
  RsConfig rc;
  rc.points = cfg.grid_points;
  const double mtol = cfg.tol("majorization");
  std::uniform_real_distribution<double> cdist(0.5, 2.0);
  const auto couple = CoupleSpec::l1_linf();
  std::size_t agree = 0, pairs = 0;
  while (pairs < 50) {
    const std::size_t n = sampling::random_size(rng, 2, 5);
    const SeqVector x(sampling::random_vector(rng, n)), y(sampling::random_vector(rng, n));
    const double C = cdist(rng);
    // Skip near-critical constants where both sides are decided by rounding.
    double critical = 0.0, sx = 0.0, sy = 0.0;
    const auto xd = x.decreasing(), yd = y.decreasing();
    for (std::size_t i = 0; i < n; ++i) {
      sx += xd[i];
      sy += yd[i];
      critical = std::max(critical, sy / sx);
    }
    if (std::abs(C - critical) <= 1e-6 * critical) continue;
    ++pairs;
    const auto r = rs_relation_test(x, y, couple, couple, kInf, rc);
    const bool via_rs = r.sup_w <= C * (1.0 + mtol);
    if (via_rs == cm_majorization_check(x, y, C)) ++agree;
  }
  return verdict(agree == pairs, {{"pairs", pairs}, {"agreeing", agree}});
}

// ----- harness -------------------------------------------------------------

inline std::string determinism_probe(const RunConfig& cfg, bool parallel) {
  auto oc = cfg.optimal();
  oc.optimizer.parallel = parallel;
  auto sc = cfg.sampler();
  sc.parallel = parallel;
  Rng rng(cfg.seed);
  const auto a = sampling::random_vector(rng, 3);
  json j;
  j["xu"] = io::to_json(xu_norm(a, LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)), oc));
  j["xl"] = io::to_json(xl_norm(a, LatticeSpec::lorentz(2.0, 3.0), oc));
  j["ds"] = io::to_json(ds_constant(LatticeSpec::lorentz(2.0, 1.0), LatticeSpec::lp(1.0), 2.0, 4, sc));
  return io::dump(j);
}

inline CheckOutcome determinism(const RunConfig& cfg, Rng&) {
  const auto a = determinism_probe(cfg, true);
  const auto b = determinism_probe(cfg, true);
  const auto c = determinism_probe(cfg, false);
  return verdict(a == b && a == c, {{"bytes", a.size()}, {"repeat_identical", a == b}, {"serial_identical", a == c}});
}

}  // namespace detail

const std::vector<CheckDef>& registry();

namespace detail {

inline CheckOutcome registry_coverage(const RunConfig&, Rng&) {
  const auto& reg = registry();
  const auto& req = required_check_ids();
  std::vector<std::string> ids;
  for (const auto& c : reg) ids.push_back(c.id);
  std::vector<std::string> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  const bool unique = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  json missing = json::array();
  for (const auto& id : req) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) missing.push_back(id);
  }
  const bool ok = unique && missing.empty() && ids.size() == req.size();
  return verdict(ok, {{"registered", ids.size()}, {"required", req.size()}, {"unique", unique}, {"missing", missing}});
}

}  // namespace detail

inline const std::vector<CheckDef>& registry() {
  static const std::vector<CheckDef> checks = {
      {"sf.quasi_concavity", "fundamental function increases while phi(t)/t decreases", "quasi_concavity",
       detail::quasi_concavity},
      {"sf.conjugate_duality", "double Young conjugate of a power function recovers it", "conjugate",
       detail::conjugate_duality},
      {"sf.dilation_submultiplicative", "dilation function is submultiplicative", "dilation_grid",
       detail::dilation_submultiplicative},
      {"re.equimeasurable_rearrangement", "x and x* share the distribution function", "equimeasurable",
       detail::equimeasurable_rearrangement},
      {"re.mass_conservation", "integral of x* equals the L1 mass of x", "mass", detail::mass_conservation},
      {"nm.lattice_monotone", "|a| <= |b| implies norm(a) <= norm(b)", "monotone", detail::lattice_monotone},
      {"nm.rearrangement_invariance", "norms of non-weighted hosts ignore order", "permutation",
       detail::rearrangement_invariance},
      {"nm.homogeneity_triangle", "homogeneity and (quasi-)triangle inequality", "triangle",
       detail::homogeneity_triangle},
      {"nm.luxemburg_attainment", "Luxemburg modular equals one at the norm", "attainment",
       detail::luxemburg_attainment},
      {"os.embedding_chain", "l_inf <= X_L <= X_U <= l_1 with norm one", "exact", detail::embedding_chain},
      {"os.symmetry_monotone", "X_U, Phi_n and X_L are symmetric and lattice monotone", "functional",
       detail::symmetry_monotone},
      {"os.truncation_contractive", "dropping a coordinate never increases the functionals", "exact",
       detail::truncation_contractive},
      {"os.disjoint_blocks", "disjoint block inequalities for X_U and X_L", "exact", detail::disjoint_blocks},
      {"os.idempotence", "X_U of the output l_delta space is unchanged", "exact", detail::idempotence},
      {"os.index_consistency", "upper index of X_U matches the host", "index", detail::index_consistency},
      {"dc.one_decomposable", "D_1 is bounded by the (1, inf) estimate constants", "exact",
       detail::one_decomposable},
      {"dc.monotone_in_s", "empirical D_s is nondecreasing in s", "exact", detail::monotone_in_s},
      {"dc.holder_boundary", "D_s for l_q -> l_p follows the Holder exponent", "holder_slope",
       detail::holder_boundary},
      {"dc.fs_sandwich", "D_s <= F_s <= D_s^2 on l_p pairs", "fs_slack", detail::fs_sandwich},
      {"ip.kcurve_invariants", "K(t) is concave, nondecreasing, K(t)/t nonincreasing", "kcurve",
       detail::kcurve_invariants},
      {"ip.k_subadditive", "K(t, x + z) <= K(t, x) + K(t, z)", "kcurve", detail::k_subadditive},
      {"ip.kmon1_implies_kmon2", "y = Tx with substochastic T is majorized and reconstructible", "orbit",
       detail::kmon1_implies_kmon2},
      {"ip.rs_inf_equals_majorization", "R_inf with ||w|| <= C agrees with C-majorization", "majorization",
       detail::rs_inf_equals_majorization},
      {"hs.determinism", "same seed gives byte-identical JSON", "exact", detail::determinism},
      {"hs.registry_coverage", "every invariant has exactly one registered check", "exact",
       detail::registry_coverage},
  };
  return checks;
}

/// Selection entries are exact ids or prefixes ending in ".*"; an empty
/// selection runs the whole registry.
inline std::vector<const CheckDef*> select_checks(const std::vector<std::string>& selection) {
  const auto& reg = registry();
  std::vector<bool> take(reg.size(), selection.empty());
  for (const auto& sel : selection) {
    bool matched = false;
    const bool prefix = sel.size() > 2 && sel.ends_with(".*");
    const std::string stem = prefix ? sel.substr(0, sel.size() - 1) : sel;
    for (std::size_t i = 0; i < reg.size(); ++i) {
      if (prefix ? reg[i].id.starts_with(stem) : reg[i].id == sel) {
        take[i] = true;
        matched = true;
      }
    }
    if (!matched) throw Error(ErrorKind::unknown_check_id, "unknown check id '" + sel + "'");
  }
  std::vector<const CheckDef*> out;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (take[i]) out.push_back(&reg[i]);
  }
  return out;
}

inline CheckResult run_check(const CheckDef& def, const RunConfig& cfg) {
  CheckResult r{def.id, def.invariant, Status::pass, json::object(), cfg.tol(def.tolerance_key)};
  Rng rng(cfg.seed ^ detail::fnv1a(def.id));
  try {
    auto out = def.run(cfg, rng);
    r.status = out.status;
    r.measured = std::move(out.measured);
  } catch (const Error& e) {
    r.status = Status::fail;
    r.measured = {{"error", to_string(e.kind())}, {"message", e.what()}};
  }
  return r;
}

inline SuiteResult run_verification_suite(const RunConfig& cfg, const std::vector<std::string>& selection = {},
                                          bool parallel = true) {
  const auto chosen = select_checks(selection);
  SuiteResult s;
  s.seed = cfg.seed;
  s.checks.resize(chosen.size());
  if (parallel) {
    std::vector<std::future<CheckResult>> futs;
    for (const auto* c : chosen) futs.push_back(std::async(std::launch::async, run_check, std::cref(*c), std::cref(cfg)));
    for (std::size_t i = 0; i < futs.size(); ++i) s.checks[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < chosen.size(); ++i) s.checks[i] = run_check(*chosen[i], cfg);
  }
  return s;
}

inline json to_json(const SuiteResult& s) {
  json checks = json::array();
  for (const auto& c : s.checks) {
    checks.push_back({{"id", c.id},
                      {"invariant", c.invariant},
                      {"status", to_string(c.status)},
                      {"tolerance", num(c.tolerance)},
                      {"measured", c.measured}});
  }
  return {{"seed", s.seed},
          {"summary",
           {{"total", s.checks.size()},
            {"pass", s.count(Status::pass)},
            {"fail", s.count(Status::fail)},
            {"inconclusive", s.count(Status::inconclusive)}}},
          {"checks", checks}};
}

inline report::Table suite_table(const SuiteResult& s) {
  report::Table t{{"id", "status", "tolerance"}, {}};
  for (const auto& c : s.checks) t.rows.push_back({c.id, to_string(c.status), report::fmt12(c.tolerance)});
  return t;
}

}  // namespace blattice::harness
