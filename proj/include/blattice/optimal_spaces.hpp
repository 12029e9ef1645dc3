#pragma once

// Optimal upper and lower sequence functionals X_U(n), Phi_n, X_L(n), the
// disjoint-family reduction for Orlicz spaces, and the Musielak-Orlicz
// description of (L_M)_U.

#include <map>
#include <mutex>
#include <optional>

#include "blattice/norms.hpp"
#include "blattice/optimizer.hpp"
#include "blattice/special_functions.hpp"

namespace blattice {

enum class BoundKind { exact, lower_bound, upper_bound, sandwich };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::exact: return "exact";
    case BoundKind::lower_bound: return "lower_bound";
    case BoundKind::upper_bound: return "upper_bound";
    case BoundKind::sandwich: return "sandwich";
  }
  return "unknown";
}

struct OptimalConfig {
  std::size_t cap = 8;
  std::size_t closed_cap = 10000;
  std::size_t max_parts = 3;
  int part_starts = 4;
  double delta2_umax = 1e4;
  OptimizerConfig optimizer;
};

/// Disjoint family of unit-norm step functions m_k^{...} chi_{F_k} (measures
/// of consecutive sets F_k), unit vectors e_i, or a decomposition record.
struct Witness {
  std::string kind = "none";
  std::vector<double> measures;
  std::vector<std::vector<double>> parts;
};

struct OptimalNormResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  BoundKind bound_kind = BoundKind::exact;
  Witness witness;
  std::vector<std::pair<std::string, double>> constants;
  std::size_t iterations = 0;

  double constant(const std::string& name) const {
    for (const auto& [k, v] : constants) {
      if (k == name) return v;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

/// Family of pairwise disjoint elements of one host, each of norm one.
struct DisjointFamily {
  LatticeSpec host;
  std::vector<PlacedStep> functions;
  std::vector<SeqVector> sequences;

  /// Throws invalid_argument on overlapping supports or non-unit members.
  void validate(double tol = 1e-9) const {
    if (host.is_sequence_host()) {
      for (std::size_t i = 0; i < sequences.size(); ++i) {
        for (std::size_t j = i + 1; j < sequences.size(); ++j) {
          const std::size_t n = std::min(sequences[i].size(), sequences[j].size());
          for (std::size_t c = 0; c < n; ++c) {
            if (sequences[i][c] != 0.0 && sequences[j][c] != 0.0) {
              throw Error(ErrorKind::invalid_argument, "family members share a coordinate");
            }
          }
        }
        if (std::abs(seq_norm(sequences[i], host) - 1.0) > tol) {
          throw Error(ErrorKind::invalid_argument, "family member is not normalized");
        }
      }
    } else {
      for (std::size_t i = 0; i < functions.size(); ++i) {
        for (std::size_t j = i + 1; j < functions.size(); ++j) {
          if (!functions[i].disjoint_from(functions[j])) {
            throw Error(ErrorKind::invalid_argument, "family members have overlapping supports");
          }
        }
        if (std::abs(function_norm(functions[i].to_step(), host) - 1.0) > tol) {
          throw Error(ErrorKind::invalid_argument, "family member is not normalized");
        }
      }
    }
  }

  std::size_t size() const noexcept { return host.is_sequence_host() ? sequences.size() : functions.size(); }

  /// ||sum a_k x_k|| in the host.
  double combination_norm(std::span<const double> a) const {
    if (host.is_sequence_host()) {
      std::size_t len = 0;
      for (const auto& s : sequences) len = std::max(len, s.size());
      std::vector<double> sum(len, 0.0);
      for (std::size_t k = 0; k < sequences.size() && k < a.size(); ++k) {
        for (std::size_t c = 0; c < sequences[k].size(); ++c) sum[c] += a[k] * sequences[k][c];
      }
      return seq_norm(sum, host);
    }
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < functions.size() && k < a.size(); ++k) {
      if (a[k] == 0.0) continue;
      for (const auto& c : functions[k].cells()) {
        if (c.value != 0.0) atoms.push_back({a[k] * c.value, c.length()});
      }
    }
    return function_norm(StepFunction(std::move(atoms)), host);
  }
};

namespace detail {

/// |a| with zeros removed, sorted decreasingly. All three functionals are
/// symmetric and ignore zero coordinates.
inline std::vector<double> canonical_coefficients(std::span<const double> a) {
  std::vector<double> out;
  for (double v : a) {
    if (v != 0.0) out.push_back(std::abs(v));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Norm of sum b_k chi_{F_k} / phi(m(F_k)) for a function host.
inline double characteristic_objective(std::span<const double> b, std::span<const double> m,
                                       const LatticeSpec& host) {
  std::vector<Atom> atoms(b.size());
  if (auto* o = std::get_if<OrliczFnSpec>(&host.kind())) {
    for (std::size_t k = 0; k < b.size(); ++k) atoms[k] = {b[k] * o->M.inverse(1.0 / m[k]), m[k]};
    return luxemburg_norm(StepFunction(std::move(atoms)), o->M);
  }
  const auto& l = host.as<LorentzSpec>();
  for (std::size_t k = 0; k < b.size(); ++k) atoms[k] = {b[k] * std::pow(m[k], -1.0 / l.p), m[k]};
  return lorentz_norm(StepFunction(std::move(atoms)), l.p, l.q);
}

inline SimplexResult characteristic_search(std::span<const double> b, const LatticeSpec& host, bool maximize,
                                           const OptimizerConfig& cfg) {
  std::vector<double> coeffs(b.begin(), b.end());
  auto objective = [coeffs, &host](std::span<const double> m) { return characteristic_objective(coeffs, m, host); };
  return optimize_simplex(coeffs.size(), objective, maximize, cfg);
}

inline OptimalNormResult closed_form(double v, const char* witness_kind) {
  OptimalNormResult r;
  r.value = r.lo = r.hi = v;
  r.bound_kind = BoundKind::exact;
  r.witness.kind = witness_kind;
  return r;
}

inline std::optional<double> lp_like_exponent(const LatticeSpec& host) {
  if (auto* l = std::get_if<LpSpec>(&host.kind())) return l->p;
  if (auto* w = std::get_if<WeightedLpSpec>(&host.kind())) return w->p;
  if (host.is<C0Spec>()) return kInf;
  return std::nullopt;
}

inline void check_size(std::size_t n, const LatticeSpec& host, const OptimalConfig& cfg) {
  const bool optimized = host.is<OrliczFnSpec>();
  const std::size_t cap = optimized ? cfg.cap : cfg.closed_cap;
  if (n > cap) throw Error(ErrorKind::cap_exceeded, "vector length exceeds the configured cap");
  if (host.is<OrliczSeqSpec>()) throw Error(ErrorKind::unsupported_host, "orlicz_seq host has no optimal functionals");
}

inline double lorentz_upper_exponent(const LorentzSpec& l) { return std::min(l.p, l.q); }
inline double lorentz_lower_exponent(const LorentzSpec& l) { return std::max(l.p, l.q); }

/// Structured-starts-only optimizer for long Lorentz vectors.
inline OptimizerConfig lorentz_config(std::size_t n, const OptimalConfig& cfg) {
  OptimizerConfig c = cfg.optimizer;
  if (n > cfg.cap) {
    c.starts = std::min(c.starts, 4);
    c.max_sweeps = 0;
  }
  return c;
}

}  // namespace detail

/// ||a||_{X_U(n)}.
inline OptimalNormResult xu_norm(std::span<const double> a, const LatticeSpec& host, const OptimalConfig& cfg = {}) {
  detail::check_size(a.size(), host, cfg);
  if (auto p = detail::lp_like_exponent(host)) return detail::closed_form(lp_norm(a, *p), "unit_vectors");
  const auto b = detail::canonical_coefficients(a);
  if (b.empty()) return detail::closed_form(0.0, "unit_vectors");
  if (b.size() == 1) return detail::closed_form(b[0], "unit_vectors");
  OptimalNormResult r;
  r.bound_kind = BoundKind::sandwich;
  r.witness.kind = "char_family";
  if (auto* l = std::get_if<LorentzSpec>(&host.kind())) {
    const double e = detail::lorentz_upper_exponent(*l);
    const auto s = detail::characteristic_search(b, host, true, detail::lorentz_config(b.size(), cfg));
    r.value = lp_norm(b, e);
    r.hi = r.value;
    r.lo = std::min(s.value, r.hi);
    r.witness.measures = s.m;
    r.iterations = s.iterations;
    r.constants = {{"upper_exponent", e}, {"equivalence_lower", 1.0}, {"equivalence_upper", 1.0}};
    return r;
  }
  const auto& M = host.as<OrliczFnSpec>().M;
  const auto d2 = delta2_constant(M, cfg.delta2_umax);
  if (!d2.satisfied) throw Error(ErrorKind::delta2_violation, "Delta_2 constant exceeds cap");
  const auto s = detail::characteristic_search(b, host, true, cfg.optimizer);
  const double r_star = M.exponent_bounds().lower;
  r.lo = s.value;
  r.hi = std::max(r.lo, std::min((d2.constant_K + 1.0) * s.value, lp_norm(b, r_star)));
  r.value = r.lo;
  r.witness.measures = s.m;
  r.iterations = s.iterations;
  r.constants = {{"K", d2.constant_K}, {"reduction_lower", 0.25}, {"reduction_upper", d2.constant_K + 1.0},
                 {"upper_estimate_exponent", r_star}};
  return r;
}

inline OptimalNormResult xu_norm(const SeqVector& a, const LatticeSpec& host, const OptimalConfig& cfg = {}) {
  return xu_norm(a.entries(), host, cfg);
}

/// Phi_n(a): infimum of ||sum a_k x_k|| over disjoint unit families.
inline OptimalNormResult phi_n(std::span<const double> a, const LatticeSpec& host, const OptimalConfig& cfg = {}) {
  detail::check_size(a.size(), host, cfg);
  if (auto p = detail::lp_like_exponent(host)) return detail::closed_form(lp_norm(a, *p), "unit_vectors");
  const auto b = detail::canonical_coefficients(a);
  if (b.empty()) return detail::closed_form(0.0, "unit_vectors");
  if (b.size() == 1) return detail::closed_form(b[0], "unit_vectors");
  OptimalNormResult r;
  r.witness.kind = "char_family";
  if (auto* l = std::get_if<LorentzSpec>(&host.kind())) {
    const double e = detail::lorentz_lower_exponent(*l);
    const auto s = detail::characteristic_search(b, host, false, detail::lorentz_config(b.size(), cfg));
    r.bound_kind = BoundKind::sandwich;
    r.value = lp_norm(b, e);
    r.lo = r.value;
    r.hi = std::max(s.value, r.lo);
    r.witness.measures = s.m;
    r.iterations = s.iterations;
    r.constants = {{"lower_exponent", e}, {"equivalence_lower", 1.0}, {"equivalence_upper", 1.0}};
    return r;
  }
  const auto& M = host.as<OrliczFnSpec>().M;
  const auto s = detail::characteristic_search(b, host, false, cfg.optimizer);
  const double q_star = M.exponent_bounds().upper;
  r.bound_kind = BoundKind::upper_bound;
  r.hi = s.value;
  r.lo = std::min(r.hi, std::max(b.front(), lp_norm(b, q_star)));
  r.value = r.hi;
  r.witness.measures = s.m;
  r.iterations = s.iterations;
  r.constants = {{"lower_estimate_exponent", q_star}, {"lower_estimate_constant", 1.0}};
  return r;
}

inline OptimalNormResult phi_n(const SeqVector& a, const LatticeSpec& host, const OptimalConfig& cfg = {}) {
  return phi_n(a.entries(), host, cfg);
}

namespace detail {

/// Decompositions a = sum a^k of a sorted nonnegative vector: contiguous blocks
/// of the sorted order and layer (truncation) splits, up to `max_parts` parts.
inline std::vector<std::vector<std::vector<double>>> decomposition_candidates(const std::vector<double>& b,
                                                                              std::size_t max_parts) {
  std::vector<std::vector<std::vector<double>>> out;
  const std::size_t n = b.size();
  auto block = [&](std::size_t from, std::size_t to) { return std::vector<double>(b.begin() + from, b.begin() + to); };
  if (max_parts >= 2) {
    for (std::size_t c = 1; c < n; ++c) out.push_back({block(0, c), block(c, n)});
  }
  if (max_parts >= 3) {
    for (std::size_t c1 = 1; c1 < n; ++c1) {
      for (std::size_t c2 = c1 + 1; c2 < n; ++c2) out.push_back({block(0, c1), block(c1, c2), block(c2, n)});
    }
  }
  std::vector<double> levels(b.begin(), b.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::sort(levels.begin(), levels.end());
  levels.pop_back();  // the top level gives a trivial split
  auto layer = [&](double lo, double hi) {
    std::vector<double> part;
    for (double v : b) {
      const double piece = std::clamp(v, lo, hi) - lo;
      if (piece > 0.0) part.push_back(piece);
    }
    return part;
  };
  if (max_parts >= 2) {
    for (double c : levels) out.push_back({layer(0.0, c), layer(c, kInf)});
  }
  if (max_parts >= 3) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      for (std::size_t j = i + 1; j < levels.size(); ++j) {
        out.push_back({layer(0.0, levels[i]), layer(levels[i], levels[j]), layer(levels[j], kInf)});
      }
    }
  }
  return out;
}

}  // namespace detail

/// ||a||_{X_L(n)}: infimum of sum Phi_n(a^k) over decompositions.
inline OptimalNormResult xl_norm(std::span<const double> a, const LatticeSpec& host, const OptimalConfig& cfg = {}) {
  detail::check_size(a.size(), host, cfg);
  if (auto p = detail::lp_like_exponent(host)) return detail::closed_form(lp_norm(a, *p), "unit_vectors");
  const auto b = detail::canonical_coefficients(a);
  if (b.empty()) return detail::closed_form(0.0, "unit_vectors");
  if (b.size() == 1) return detail::closed_form(b[0], "unit_vectors");
  if (host.is<LorentzSpec>()) {
    auto r = phi_n(b, host, cfg);
    r.witness.parts = {b};
    r.constants.push_back({"max_parts", 1.0});
    return r;
  }
  const auto& M = host.as<OrliczFnSpec>().M;
  const double q_star = M.exponent_bounds().upper;
  std::map<std::vector<double>, double> cache;
  std::size_t iterations = 0;
  OptimalConfig part_cfg = cfg;
  part_cfg.optimizer.starts = std::min(cfg.optimizer.starts, cfg.part_starts);
  auto phi_hi = [&](std::vector<double> part, const OptimalConfig& c) {
    std::sort(part.begin(), part.end(), std::greater<>());
    if (auto it = cache.find(part); it != cache.end()) return it->second;
    const auto r = phi_n(part, host, c);
    iterations += r.iterations;
    cache.emplace(part, r.hi);
    return r.hi;
  };
  OptimalNormResult r;
  r.bound_kind = BoundKind::sandwich;
  r.witness.kind = "decomposition";
  r.hi = phi_hi(b, cfg);
  r.witness.parts = {b};
  for (const auto& parts : detail::decomposition_candidates(b, cfg.max_parts)) {
    double total = 0.0;
    for (const auto& part : parts) {
      if (!part.empty()) total += phi_hi(part, part_cfg);
      if (total >= r.hi) break;
    }
    if (total < r.hi) {
      r.hi = total;
      r.witness.parts = parts;
    }
  }
  r.lo = std::min(r.hi, std::max(b.front(), lp_norm(b, q_star)));
  r.value = r.hi;
  r.iterations = iterations;
  r.constants = {{"lower_estimate_exponent", q_star},
                 {"lower_estimate_constant", 1.0},
                 {"max_parts", static_cast<double>(cfg.max_parts)}};
  return r;
}

inline OptimalNormResult xl_norm(const SeqVector& a, const LatticeSpec& host, const OptimalConfig& cfg = {}) {
  return xl_norm(a.entries(), host, cfg);
}

// ---------------------------------------------------------------------------
// Disjoint-family reduction for Orlicz spaces.

struct ReductionMember {
  double norm_y = 0.0;
  double norm_u = 0.0;
  double norm_g = 0.0;
  double norm_h = 0.0;
  double c = 0.0;
  double r = 0.0;
  double d = 0.0;
  bool h_lower = true;      // ||h|| >= ||y|| / 4
  bool h_upper = true;      // ||h|| <= ||y||
  bool f_upper = true;      // ||h||, ||g|| <= 3/2 ||y||
  bool f_lower_half = true; // ||h||, ||g|| >= ||y|| / 2 (informational)
};

struct ReductionReport {
  double K = 1.0;
  double norm_sum_h = 0.0;
  double norm_sum_y = 0.0;
  double norm_sum_f = 0.0;
  bool sum_left = true;   // ||sum h|| <= ||sum y||
  bool sum_right = true;  // ||sum y|| <= (K+1) ||sum f||
  bool f_disjoint = true;
  std::vector<ReductionMember> members;
  std::size_t violations = 0;
};

struct ReductionResult {
  std::vector<PlacedStep> hs;
  std::vector<PlacedStep> fs;
  ReductionReport report;
};

namespace detail {

/// Cells of `src` restricted to a total measure `d`, preferring `first`.
inline std::vector<Cell> carve(const std::vector<Cell>& first, const std::vector<Cell>& rest, double d, double value) {
  std::vector<Cell> out;
  double left = d;
  for (const auto* pool : {&first, &rest}) {
    for (const auto& c : *pool) {
      if (left <= 0.0) break;
      const double take = std::min(left, c.length());
      if (c.lo + take > c.lo) out.push_back({c.lo, c.lo + take, value});
      left -= take;
    }
  }
  return out;
}

inline PlacedStep scaled(const PlacedStep& f, double factor) {
  std::vector<Cell> cells(f.cells().begin(), f.cells().end());
  for (auto& c : cells) c.value *= factor;
  return PlacedStep(std::move(cells));
}

/// The construction itself. Its modular comparisons only transfer to norms
/// when ||sum y_k|| = 1, so callers normalize first.
inline ReductionResult reduce_normalized(const std::vector<PlacedStep>& ys, const OrliczFunction& M, double u_max,
                                         double rel_tol) {
  const auto d2 = delta2_constant(M, u_max);
  if (!d2.satisfied) throw Error(ErrorKind::delta2_violation, "Delta_2 constant exceeds cap");
  ReductionResult out;
  auto& rep = out.report;
  rep.K = d2.constant_K;
  std::vector<PlacedStep> gs;
  std::vector<PlacedStep> abs_ys;
  for (const auto& y : ys) {
    std::vector<Cell> cells;
    for (const auto& c : y.support()) cells.push_back({c.lo, c.hi, std::abs(c.value)});
    abs_ys.emplace_back(std::move(cells));
  }
  for (const auto& y : abs_ys) {
    ReductionMember mem;
    const auto step = y.to_step();
    mem.norm_y = luxemburg_norm(step, M);
    if (mem.norm_y == 0.0) {
      out.hs.emplace_back();
      gs.emplace_back();
      rep.members.push_back(mem);
      continue;
    }
    const double supp = y.support_measure();
    const double phi_supp = 1.0 / M.inverse(1.0 / supp);
    mem.c = mem.norm_y / (2.0 * phi_supp);
    std::vector<Cell> u_cells, g_cells;
    for (const auto& c : y.cells()) {
      if (c.value >= mem.c) {
        u_cells.push_back(c);
      } else {
        u_cells.push_back({c.lo, c.hi, 0.0});
        g_cells.push_back({c.lo, c.hi, mem.c});
      }
    }
    const PlacedStep u(u_cells);
    const PlacedStep g(g_cells);
    mem.norm_u = luxemburg_norm(u.to_step(), M);
    mem.norm_g = luxemburg_norm(g.to_step(), M);
    // r solves M(r) = M(r / ||u||) * ∫ M(u), bracketed between atoms of u
    // where H = M(u) / M(u / ||u||) is smallest and largest.
    double integral = 0.0;
    double h_min = kInf, h_max = -kInf, r_at_min = 0.0, r_at_max = 0.0, u_top = 0.0;
    for (const auto& c : u.support()) {
      integral += M.evaluate(c.value) * c.length();
      const double H = M.evaluate(c.value) / M.evaluate(c.value / mem.norm_u);
      if (H < h_min) {
        h_min = H;
        r_at_min = c.value;
      }
      if (H > h_max) {
        h_max = H;
        r_at_max = c.value;
      }
      u_top = std::max(u_top, c.value);
    }
    auto G = [&](double r) { return M.evaluate(r) - M.evaluate(r / mem.norm_u) * integral; };
    if (h_max - h_min <= 1e-14 * h_max || r_at_min == r_at_max) {
      mem.r = u_top;
    } else {
      mem.r = solve_bracketed(G, std::min(r_at_min, r_at_max), std::max(r_at_min, r_at_max), 1e-13);
    }
    const double phi_r = mem.norm_u / mem.r;
    if (mem.norm_u <= mem.r * phi_supp) {
      mem.d = std::min(supp, fundamental_inverse(M, phi_r));
    } else {
      mem.d = supp;
    }
    std::vector<Cell> rest;
    for (const auto& c : y.support()) {
      if (c.value < mem.c) rest.push_back(c);
    }
    PlacedStep h(detail::carve(u.support(), rest, mem.d, mem.r));
    mem.norm_h = luxemburg_norm(h.to_step(), M);
    const double tol = rel_tol * mem.norm_y;
    mem.h_lower = mem.norm_h >= 0.25 * mem.norm_y - tol;
    mem.h_upper = mem.norm_h <= mem.norm_y + tol;
    mem.f_upper = mem.norm_h <= 1.5 * mem.norm_y + tol && mem.norm_g <= 1.5 * mem.norm_y + tol;
    mem.f_lower_half = mem.norm_h >= 0.5 * mem.norm_y - tol && mem.norm_g >= 0.5 * mem.norm_y - tol;
    rep.violations += !mem.h_lower + !mem.h_upper + !mem.f_upper;
    if (!h.disjoint_from(g)) rep.f_disjoint = false;
    out.hs.push_back(std::move(h));
    gs.push_back(g);
    rep.members.push_back(mem);
  }
  for (std::size_t k = 0; k < out.hs.size(); ++k) {
    out.fs.push_back(out.hs[k]);
    out.fs.push_back(gs[k]);
  }
  rep.norm_sum_y = luxemburg_norm(PlacedStep::pointwise_sum(abs_ys).to_step(), M);
  rep.norm_sum_h = luxemburg_norm(PlacedStep::pointwise_sum(out.hs).to_step(), M);
  rep.norm_sum_f = luxemburg_norm(PlacedStep::pointwise_sum(out.fs).to_step(), M);
  const double tol = rel_tol * std::max(rep.norm_sum_y, 1e-300);
  rep.sum_left = rep.norm_sum_h <= rep.norm_sum_y + tol;
  rep.sum_right = rep.norm_sum_y <= (rep.K + 1.0) * rep.norm_sum_f + tol;
  rep.violations += !rep.sum_left + !rep.sum_right;
  return out;
}

}  // namespace detail

/// Replaces pairwise disjoint y_k by multiples of characteristic functions
/// h_k and a family f of 2n such functions, following the Delta_2 argument.
inline ReductionResult orlicz_disjoint_reduction(const std::vector<PlacedStep>& ys, const OrliczFunction& M,
                                                 double u_max = 1e4, double rel_tol = 1e-9) {
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = i + 1; j < ys.size(); ++j) {
      if (!ys[i].disjoint_from(ys[j])) throw Error(ErrorKind::invalid_argument, "family is not disjoint");
    }
  }
  const double scale = luxemburg_norm(PlacedStep::pointwise_sum(ys).to_step(), M);
  if (scale == 0.0) return detail::reduce_normalized(ys, M, u_max, rel_tol);
  std::vector<PlacedStep> unit;
  for (const auto& y : ys) unit.push_back(detail::scaled(y, 1.0 / scale));
  auto out = detail::reduce_normalized(unit, M, u_max, rel_tol);
  for (auto& h : out.hs) h = detail::scaled(h, scale);
  for (auto& f : out.fs) f = detail::scaled(f, scale);
  auto& rep = out.report;
  rep.norm_sum_h *= scale;
  rep.norm_sum_y *= scale;
  rep.norm_sum_f *= scale;
  for (auto& m : rep.members) {
    for (double* v : {&m.norm_y, &m.norm_u, &m.norm_g, &m.norm_h, &m.c, &m.r}) *v *= scale;
  }
  return out;
}

/// Places step functions consecutively on [0,1] and reduces them.
inline ReductionResult orlicz_disjoint_reduction(const std::vector<StepFunction>& ys, const OrliczFunction& M,
                                                 double u_max = 1e4, double rel_tol = 1e-9) {
  double total = 0.0;
  for (const auto& y : ys) total += y.total_measure();
  if (total > 1.0 + kMeasureSlack) throw Error(ErrorKind::invalid_argument, "family does not fit in [0,1]");
  std::vector<PlacedStep> placed;
  double at = 0.0;
  for (const auto& y : ys) {
    placed.push_back(PlacedStep::place(y, at));
    at += y.total_measure();
  }
  return orlicz_disjoint_reduction(placed, M, u_max, rel_tol);
}

// ---------------------------------------------------------------------------
// Fundamental function of (L_M)_U and the Musielak-Orlicz description.

struct FundamentalSandwich {
  std::size_t n = 1;
  double lo = 1.0;
  double hi = 1.0;
  double dilation = 1.0;
  double dilation_lo = 1.0;
  double dilation_hi = 1.0;
  bool dilation_truncated = false;
  bool overlap = true;
};

/// Sandwich for ||e_1 + ... + e_n||_{(L_M)_U} next to [Phi_{M^-1}(n), 2 Phi_{M^-1}(n)].
inline FundamentalSandwich xu_fundamental(const OrliczFunction& M, std::size_t n, const OptimalConfig& cfg = {},
                                          double rel_tol = 1e-6) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "n must be positive");
  FundamentalSandwich s;
  s.n = n;
  if (n == 1) return s;
  OptimalConfig c = cfg;
  c.cap = std::max(c.cap, n);
  const std::vector<double> ones(n, 1.0);
  const auto xu = xu_norm(ones, LatticeSpec::orlicz_fn(M), c);
  s.lo = xu.lo;
  s.hi = xu.hi;
  DilationResult dil;
  if (M.is_power()) {
    dil = {std::pow(static_cast<double>(n), 1.0 / M.power_exponent()), 1.0, false};
  } else {
    dil = dilation_function([&](double v) { return M.inverse(v); }, static_cast<double>(n));
  }
  s.dilation = dil.value;
  s.dilation_truncated = dil.truncated;
  s.dilation_lo = dil.value;
  s.dilation_hi = 2.0 * dil.value;
  s.overlap = s.lo <= s.dilation_hi * (1.0 + rel_tol) && s.hi >= s.dilation_lo * (1.0 - rel_tol);
  return s;
}

struct MusielakResult {
  OptimalNormResult result;
  double phi_m_norm = 0.0;     // ||a|| in l_{Phi_M}
  double p_m = 1.0;
  double lp_m_norm = 0.0;      // ||a||_{p_M}
  double left_constant = 2.0;  // X_U <= left_constant * ||a||_{l_{Phi_M}}
  bool left_embedding = true;
  bool right_embedding = true; // ||a||_{p_M} <= X_U (upper end of the sandwich)
};

/// sup over admissible beta of the Musielak-Orlicz norm, with the embedding
/// chain l_{Phi_M} -> (L_M)_U -> l_{p_M}.
inline MusielakResult musielak_intersection_norm(std::span<const double> a, const OrliczFunction& M,
                                                 const OptimalConfig& cfg = {}, double rel_tol = 1e-6) {
  if (a.size() > cfg.cap) throw Error(ErrorKind::cap_exceeded, "vector length exceeds the configured cap");
  const auto d2 = delta2_constant(M, cfg.delta2_umax);
  if (!d2.satisfied) throw Error(ErrorKind::delta2_violation, "Delta_2 constant exceeds cap");
  MusielakResult out;
  const auto b = detail::canonical_coefficients(a);
  auto& r = out.result;
  r.bound_kind = BoundKind::lower_bound;
  r.witness.kind = "beta_sequence";
  if (b.empty()) {
    r.bound_kind = BoundKind::exact;
  } else if (b.size() == 1) {
    r.value = r.lo = r.hi = b[0];
    r.bound_kind = BoundKind::exact;
  } else {
    auto objective = [b, &M](std::span<const double> m) {
      std::vector<double> betas(m.size());
      for (std::size_t k = 0; k < m.size(); ++k) betas[k] = M.inverse(1.0 / m[k]);
      return musielak_norm_raw(b, betas, M);
    };
    const auto s = optimize_simplex(b.size(), objective, true, cfg.optimizer);
    r.value = r.lo = s.value;
    r.hi = std::max(r.lo, std::min((d2.constant_K + 1.0) * s.value, lp_norm(b, M.exponent_bounds().lower)));
    r.iterations = s.iterations;
    for (double m : s.m) r.witness.measures.push_back(M.inverse(1.0 / m));
  }
  r.constants = {{"K", d2.constant_K}};
  out.phi_m_norm = b.empty() ? 0.0 : orlicz_seq_norm(b, [&](double u) { return orlicz_dilation(M, u).value; });
  out.p_m = M.is_power() ? M.power_exponent() : power_index(M).p_M;
  out.lp_m_norm = lp_norm(b, out.p_m);
  out.left_constant = 2.0 * (d2.constant_K + 1.0);
  out.left_embedding = r.lo <= out.left_constant * out.phi_m_norm * (1.0 + rel_tol);
  out.right_embedding = out.lp_m_norm <= r.hi * (1.0 + rel_tol) + 1e-300;
  return out;
}

}  // namespace blattice
