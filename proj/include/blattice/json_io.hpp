#pragma once

// JSON readers and writers for specs, elements and results. Floats are
// rounded to 12 significant digits; infinities are written as "inf".

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "blattice/blattice.hpp"
#include "json.hpp"

namespace blattice::io {

using json = nlohmann::ordered_json;

inline double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

inline json num_array(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

/// Accepts plain numbers and the strings "inf", "+inf", "-inf", "infinity".
inline double get_num(const json& j, const char* what = "number") {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity" || s == "Infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
  }
  throw Error(ErrorKind::invalid_spec, std::string("expected a number for ") + what);
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::invalid_spec, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string get_string(const json& j, const char* what) {
  if (!j.is_string()) throw Error(ErrorKind::invalid_spec, std::string("expected a string for ") + what);
  return j.get<std::string>();
}

inline std::vector<double> get_vector(const json& j, const char* what = "vector") {
  if (!j.is_array()) throw Error(ErrorKind::invalid_spec, std::string("expected an array for ") + what);
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(get_num(e, what));
  return v;
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_spec, std::string("malformed JSON: ") + e.what());
  }
}

/// Reads `arg` as inline JSON, or as a file path when it is not JSON-looking.
inline json load(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return parse_text(arg);
  std::ifstream in(arg);
  if (!in) throw Error(ErrorKind::io_failure, "cannot read " + arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io_failure, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::io_failure, "write failed for " + path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Specs and elements.

inline OrliczFunction orlicz_from_json(const json& j) {
  const auto family = get_string(field(j, "family"), "family");
  if (family == "power") return OrliczFunction::power(get_num(field(j, "p"), "p"));
  if (family == "powerlog") return OrliczFunction::power_log(get_num(field(j, "p"), "p"), get_num(field(j, "a"), "a"));
  if (family == "tabulated") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : field(j, "knots")) {
      if (!k.is_array() || k.size() != 2) throw Error(ErrorKind::invalid_spec, "knots are [t, y] pairs");
      knots.emplace_back(get_num(k[0], "knot t"), get_num(k[1], "knot y"));
    }
    return OrliczFunction::tabulated(std::move(knots));
  }
  throw Error(ErrorKind::invalid_spec, "unknown Orlicz family '" + family + "'");
}

inline json to_json(const OrliczFunction& M) {
  return std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerFamily>) {
          return {{"family", "power"}, {"p", num(f.p)}};
        } else if constexpr (std::is_same_v<T, PowerLogFamily>) {
          return {{"family", "powerlog"}, {"p", num(f.p)}, {"a", num(f.a)}};
        } else {
          json k = json::array();
          for (const auto& [t, y] : f.knots) k.push_back({num(t), num(y)});
          return {{"family", "tabulated"}, {"knots", k}};
        }
      },
      M.family());
}

inline LatticeSpec lattice_from_json(const json& j) {
  const auto kind = get_string(field(j, "kind"), "kind");
  if (kind == "lp") return LatticeSpec::lp(get_num(field(j, "p"), "p"));
  if (kind == "c0") return LatticeSpec::c0();
  if (kind == "lorentz") return LatticeSpec::lorentz(get_num(field(j, "p"), "p"), get_num(field(j, "q"), "q"));
  if (kind == "orlicz_fn") return LatticeSpec::orlicz_fn(orlicz_from_json(field(j, "M")));
  if (kind == "orlicz_seq") return LatticeSpec::orlicz_seq(orlicz_from_json(field(j, "psi")));
  if (kind == "weighted_lp") {
    return LatticeSpec::weighted_lp(get_num(field(j, "p"), "p"), get_vector(field(j, "weights"), "weights"));
  }
  throw Error(ErrorKind::invalid_spec, "unknown lattice kind '" + kind + "'");
}

inline json to_json(const LatticeSpec& spec) {
  return std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LpSpec>) {
          return {{"kind", "lp"}, {"p", num(k.p)}};
        } else if constexpr (std::is_same_v<T, C0Spec>) {
          return {{"kind", "c0"}};
        } else if constexpr (std::is_same_v<T, LorentzSpec>) {
          return {{"kind", "lorentz"}, {"p", num(k.p)}, {"q", num(k.q)}};
        } else if constexpr (std::is_same_v<T, OrliczFnSpec>) {
          return {{"kind", "orlicz_fn"}, {"M", to_json(k.M)}};
        } else if constexpr (std::is_same_v<T, OrliczSeqSpec>) {
          return {{"kind", "orlicz_seq"}, {"psi", to_json(k.psi)}};
        } else {
          return {{"kind", "weighted_lp"}, {"p", num(k.p)}, {"weights", num_array(k.weights)}};
        }
      },
      spec.kind());
}

inline StepFunction step_from_json(const json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : field(j, "atoms")) {
    if (!a.is_array() || a.size() != 2) throw Error(ErrorKind::invalid_spec, "atoms are [value, measure] pairs");
    atoms.push_back({get_num(a[0], "atom value"), get_num(a[1], "atom measure")});
  }
  return StepFunction(std::move(atoms));
}

inline json to_json(const StepFunction& f) {
  json atoms = json::array();
  for (const auto& a : f.atoms()) atoms.push_back({num(a.value), num(a.measure)});
  return {{"atoms", atoms}};
}

/// A sequence is a bare array or {"entries": [...]}.
inline SeqVector seq_from_json(const json& j) {
  if (j.is_object()) return SeqVector(get_vector(field(j, "entries"), "entries"));
  return SeqVector(get_vector(j, "sequence"));
}

/// Step functions are objects with "atoms"; anything else is a sequence.
inline Element element_from_json(const json& j) {
  if (j.is_object() && j.contains("atoms")) return step_from_json(j);
  return seq_from_json(j);
}

namespace detail {

inline void couple_side(const json& j, double& p, std::vector<double>& w) {
  const auto spec = lattice_from_json(j);
  if (auto* l = std::get_if<LpSpec>(&spec.kind())) {
    p = l->p;
  } else if (spec.is<C0Spec>()) {
    p = kInf;
  } else if (auto* wl = std::get_if<WeightedLpSpec>(&spec.kind())) {
    p = wl->p;
    w = wl->weights;
  } else {
    throw Error(ErrorKind::unsupported_couple, "couple members must be lp, c0 or weighted_lp");
  }
}

}  // namespace detail

/// {"x0": LatticeSpec, "x1": LatticeSpec}; lp(1) with lp(inf) doubles as the
/// (L_1, L_inf) couple on [0,1] for step-function elements.
inline CoupleSpec couple_from_json(const json& j) {
  double p0 = 1.0, p1 = kInf;
  std::vector<double> w0, w1;
  detail::couple_side(field(j, "x0"), p0, w0);
  detail::couple_side(field(j, "x1"), p1, w1);
  return CoupleSpec::weighted(p0, std::move(w0), p1, std::move(w1));
}

inline json to_json(const CoupleSpec& c) {
  auto side = [](double p, const std::vector<double>& w) -> json {
    if (!w.empty()) return {{"kind", "weighted_lp"}, {"p", num(p)}, {"weights", num_array(w)}};
    return {{"kind", "lp"}, {"p", num(p)}};
  };
  return {{"x0", side(c.p0, c.w0)}, {"x1", side(c.p1, c.w1)}};
}

// ---------------------------------------------------------------------------
// Results.

inline json to_json(const OptimalNormResult& r) {
  json constants = json::object();
  for (const auto& [k, v] : r.constants) constants[k] = num(v);
  json parts = json::array();
  for (const auto& p : r.witness.parts) parts.push_back(num_array(p));
  return {{"value", num(r.value)},
          {"lo", num(r.lo)},
          {"hi", num(r.hi)},
          {"bound_kind", to_string(r.bound_kind)},
          {"witness", {{"kind", r.witness.kind}, {"measures", num_array(r.witness.measures)}, {"parts", parts}}},
          {"constants", constants},
          {"iterations", r.iterations}};
}

inline json curve_json(const std::vector<CurvePoint>& curve) {
  json a = json::array();
  for (const auto& c : curve) a.push_back({{"n", c.n}, {"value", num(c.value)}});
  return a;
}

inline json to_json(const EstimateReport& r) {
  return {{"p", num(r.p)},           {"direction", to_string(r.direction)}, {"constant", num(r.constant)},
          {"n_max", r.n_max},        {"slope", num(r.slope)},               {"growing", r.growing},
          {"source", r.source},      {"samples", r.samples},                {"curve", curve_json(r.curve)}};
}

inline json to_json(const DecompReport& r) {
  return {{"s", num(r.s)},
          {"empirical_Ds", num(r.empirical_Ds)},
          {"n_max", r.n_max},
          {"slope", num(r.slope)},
          {"growing", r.growing},
          {"holder_bound", opt_num(r.holder_bound)},
          {"samples", r.samples},
          {"witness",
           {{"a", num_array(r.witness.a)},
            {"b", num_array(r.witness.b)},
            {"x_family", r.witness.x_family},
            {"y_family", r.witness.y_family},
            {"ratio", num(r.witness.ratio)}}},
          {"curve", curve_json(r.curve)}};
}

inline json to_json(const IndexReport& r) {
  return {{"delta", num(r.delta)}, {"sigma", num(r.sigma)}, {"source", r.source}, {"flagged", r.flagged},
          {"p_M", opt_num(r.p_M)}};
}

inline json to_json(const FsReport& r) {
  json grid = json::array();
  for (const auto& g : r.grid) {
    grid.push_back({{"p", num(g.p)},
                    {"q", num(g.q)},
                    {"lower_constant", num(g.lower_constant)},
                    {"upper_constant", num(g.upper_constant)},
                    {"product", num(g.product)}});
  }
  return {{"value", num(r.value)},
          {"p", num(r.p)},
          {"q", num(r.q)},
          {"ds", num(r.ds)},
          {"sandwich_lower", r.sandwich_lower},
          {"sandwich_upper", r.sandwich_upper},
          {"hypothesis_violation", r.hypothesis_violation},
          {"s_max_infinite", r.s_max_infinite},
          {"grid", grid}};
}

inline json to_json(const MultiplicatorReport& r) {
  return {{"worst_ratio", num(r.worst_ratio)}, {"ds", num(r.ds)},
          {"samples", r.samples},              {"holds", r.holds},
          {"worst_a", num_array(r.worst_a)},   {"worst_b", num_array(r.worst_b)}};
}

inline json to_json(const KCurve& c) {
  return {{"t", num_array(c.t)}, {"values", num_array(c.values)}};
}

inline json to_json(const TailReport& t) {
  return {{"exponent", num(t.exponent)}, {"zero", t.zero}, {"verdict", to_string(t.verdict)}};
}

inline json to_json(const RsReport& r) {
  return {{"s", num(r.s)},
          {"verdict", to_string(r.verdict)},
          {"integral", num(r.integral)},
          {"sup_w", num(r.sup_w)},
          {"tail0", to_json(r.tail0)},
          {"tail_inf", to_json(r.tail_inf)},
          {"grid_size", r.grid_size}};
}

inline json matrix_json(const Matrix& T) {
  json rows = json::array();
  for (const auto& row : T) rows.push_back(num_array(row));
  return rows;
}

inline json to_json(const OperatorCheck& c) {
  return {{"l1_norm", num(c.max_column_sum)}, {"linf_norm", num(c.max_row_sum)}, {"residual", num(c.residual)},
          {"ok", c.ok}};
}

inline json to_json(const Delta2Report& r) {
  return {{"constant_K", num(r.constant_K)},
          {"range", {num(r.range_lo), num(r.range_hi)}},
          {"argmax", num(r.argmax)},
          {"satisfied", r.satisfied},
          {"cap", num(r.cap)}};
}

}  // namespace blattice::io
