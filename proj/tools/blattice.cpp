// Command-line front end: one subcommand per computation plus `verify` and
// `report`. Exit codes: 0 success, 1 a check or computation failed, 2 usage.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "blattice/verification.hpp"

namespace {

using namespace blattice;
using io::json;

constexpr const char* kConfigEnv = "BLATTICE_CONFIG";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_real(const std::string& s, const char* what) {
  if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("cannot parse ") + what + " '" + s + "'");
}

struct Output {
  std::string format;  // json | csv | svg
  std::string path;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
    } else {
      io::write_file(path, text);
    }
  }

  void emit(const json& j, const report::Table* table = nullptr, const std::string* svg = nullptr) const {
    if (format == "json") return write(io::dump(j));
    if (format == "csv" && table) return write(report::to_csv(*table));
    if (format == "svg" && svg) return write(*svg);
    throw UsageError("output format '" + format + "' is not available for this command");
  }
};

harness::RunConfig load_config(const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  if (path.empty()) return {};
  return harness::config_from_json(io::load(path));
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::invalid_spec:
    case ErrorKind::invalid_argument:
    case ErrorKind::unknown_check_id:
      return 2;
    default:
      return 1;
  }
}

json with_header(json head, const json& body) {
  for (const auto& [k, v] : body.items()) head[k] = v;
  return head;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, optimal sequence spaces, decomposability constants and K-functionals for concrete Banach lattices"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, output_format = "", out_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, std::string("JSON run config (overrides $") + kConfigEnv + ")");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--output", output_format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_option("--out", out_path, "write to this file instead of stdout");

  std::string spec_arg, elem_arg, x_arg, y_arg, couple_arg, couple_y_arg, s_arg = "1", p_arg = "1", dir_arg;
  std::string direction = "upper";
  std::optional<std::size_t> cap, max_parts, points;
  std::optional<int> starts;
  std::size_t n_max = 8, samples = 50, mult_n = 4, fs_grid = 9, fs_n = 16;
  double t_lo = 1e-3, t_hi = 1e3;
  std::vector<std::string> select;
  bool sequential = false;

  auto* norm = app.add_subcommand("norm", "norm of a sequence or step function in a host lattice");
  norm->add_option("--spec", spec_arg, "LatticeSpec JSON or file")->required();
  norm->add_option("--element", elem_arg, "sequence array or {\"atoms\": ...}")->required();

  std::map<std::string, CLI::App*> functionals;
  for (const char* name : {"xu", "xl", "phin"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "xu"   ? "norm in the optimal upper sequence space"
                                         : std::string(name) == "xl" ? "norm in the optimal lower sequence space"
                                                                     : "infimum over disjoint unit families");
    sub->add_option("--spec", spec_arg, "LatticeSpec JSON or file")->required();
    sub->add_option("--vector", elem_arg, "coefficient vector")->required();
    sub->add_option("--cap", cap, "largest vector length for optimizer hosts");
    sub->add_option("--starts", starts, "optimizer starts");
    sub->add_option("--max-parts", max_parts, "decomposition parts for xl");
    functionals[name] = sub;
  }

  auto* ds = app.add_subcommand("ds", "empirical relative s-decomposability constant");
  ds->add_option("--x", x_arg, "LatticeSpec X")->required();
  ds->add_option("--y", y_arg, "LatticeSpec Y")->required();
  ds->add_option("--s", s_arg, "s in [1, inf]")->required();
  ds->add_option("--n-max", n_max, "largest family size");

  auto* estimate = app.add_subcommand("estimate", "best upper or lower p-estimate constant");
  estimate->add_option("--spec", spec_arg)->required();
  estimate->add_option("--p", p_arg)->required();
  estimate->add_option("--direction", direction)->check(CLI::IsMember({"upper", "lower"}));
  estimate->add_option("--n-max", n_max);

  auto* indices = app.add_subcommand("indices", "Grobler-Dodds indices");
  indices->add_option("--spec", spec_arg)->required();

  auto* fs = app.add_subcommand("fs", "infimum of estimate-constant products on the s line");
  fs->add_option("--x", x_arg)->required();
  fs->add_option("--y", y_arg)->required();
  fs->add_option("--s", s_arg)->required();
  fs->add_option("--grid-points", fs_grid);
  fs->add_option("--n-max", fs_n);

  auto* mult = app.add_subcommand("mult", "sampled multiplicator inequality");
  mult->add_option("--x", x_arg)->required();
  mult->add_option("--y", y_arg)->required();
  mult->add_option("--s", s_arg)->required();
  mult->add_option("--samples", samples);
  mult->add_option("--n", mult_n);

  auto* kfun = app.add_subcommand("kfun", "K-functional curve (CSV by default)");
  kfun->add_option("--couple", couple_arg, "{\"x0\": spec, \"x1\": spec}; default (L1, Linf)");
  kfun->add_option("--element", elem_arg)->required();
  kfun->add_option("--t-lo", t_lo);
  kfun->add_option("--t-hi", t_hi);
  kfun->add_option("--points", points);

  auto* rs = app.add_subcommand("rs-test", "test the R_s relation between two elements");
  rs->add_option("--x", x_arg, "element x")->required();
  rs->add_option("--y", y_arg, "element y")->required();
  rs->add_option("--couple", couple_arg, "couple for x (and y unless --couple-y)");
  rs->add_option("--couple-y", couple_y_arg);
  rs->add_option("--s", s_arg)->required();
  rs->add_option("--points", points);

  auto* orbit = app.add_subcommand("orbit", "operator T with Tx = y on (l1^n, linf^n)");
  orbit->add_option("--x", x_arg)->required();
  orbit->add_option("--y", y_arg)->required();

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--select", select, "check ids or prefixes like os.*");
  verify->add_flag("--sequential", sequential, "run checks one at a time");

  auto* rep = app.add_subcommand("report", "write standard tables and plots into a directory");
  rep->add_option("--dir", dir_arg)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (cap) cfg.n_cap = *cap;
    if (starts) cfg.starts = *starts;
    if (max_parts) cfg.max_parts = *max_parts;
    if (points) cfg.grid_points = *points;
    Output out{output_format.empty() ? cfg.output : output_format, out_path};

    if (norm->parsed()) {
      const auto spec = io::lattice_from_json(io::load(spec_arg));
      const auto elem = io::element_from_json(io::load(elem_arg));
      double v;
      if (auto* f = std::get_if<StepFunction>(&elem)) {
        v = function_norm(*f, spec);
      } else {
        v = seq_norm(std::get<SeqVector>(elem), spec);
      }
      out.emit({{"host", io::to_json(spec)}, {"norm", io::num(v)}});
      return 0;
    }
    for (const auto& [name, sub] : functionals) {
      if (!sub->parsed()) continue;
      const auto spec = io::lattice_from_json(io::load(spec_arg));
      const auto a = io::seq_from_json(io::load(elem_arg));
      const auto oc = cfg.optimal();
      const auto r = name == "xu" ? xu_norm(a, spec, oc) : name == "xl" ? xl_norm(a, spec, oc) : phi_n(a, spec, oc);
      out.emit(with_header({{"functional", name}, {"host", io::to_json(spec)}, {"n", a.size()}}, io::to_json(r)));
      return 0;
    }
    if (ds->parsed()) {
      const auto X = io::lattice_from_json(io::load(x_arg));
      const auto Y = io::lattice_from_json(io::load(y_arg));
      const auto r = ds_constant(X, Y, parse_real(s_arg, "s"), n_max, cfg.sampler());
      const auto table = report::growth_table(r.curve, r.slope);
      const auto svg = report::growth_svg(r.curve, "D_s: " + X.name() + " -> " + Y.name());
      out.emit(with_header({{"X", io::to_json(X)}, {"Y", io::to_json(Y)}}, io::to_json(r)), &table, &svg);
      return 0;
    }
    if (estimate->parsed()) {
      const auto spec = io::lattice_from_json(io::load(spec_arg));
      const auto r = estimate_constant(spec, parse_real(p_arg, "p"),
                                       direction == "upper" ? Direction::upper : Direction::lower, n_max, cfg.sampler());
      const auto table = report::growth_table(r.curve, r.slope);
      const auto svg = report::growth_svg(r.curve, direction + " estimate: " + spec.name());
      out.emit(with_header({{"host", io::to_json(spec)}}, io::to_json(r)), &table, &svg);
      return 0;
    }
    if (indices->parsed()) {
      const auto spec = io::lattice_from_json(io::load(spec_arg));
      out.emit(with_header({{"host", io::to_json(spec)}}, io::to_json(grobler_dodds(spec))));
      return 0;
    }
    if (fs->parsed()) {
      FsConfig fc;
      fc.grid_points = fs_grid;
      fc.n_max = fs_n;
      fc.slack = cfg.tol("fs_slack");
      fc.sampler = cfg.sampler();
      const auto X = io::lattice_from_json(io::load(x_arg));
      const auto Y = io::lattice_from_json(io::load(y_arg));
      out.emit(with_header({{"X", io::to_json(X)}, {"Y", io::to_json(Y)}},
                           io::to_json(fs_infimum(X, Y, parse_real(s_arg, "s"), fc))));
      return 0;
    }
    if (mult->parsed()) {
      const auto X = io::lattice_from_json(io::load(x_arg));
      const auto Y = io::lattice_from_json(io::load(y_arg));
      const auto r = multiplicator_check(X, Y, parse_real(s_arg, "s"), samples, mult_n, cfg.sampler(), cfg.optimal());
      out.emit(with_header({{"X", io::to_json(X)}, {"Y", io::to_json(Y)}}, io::to_json(r)));
      return r.holds ? 0 : 1;
    }
    if (kfun->parsed()) {
      const auto couple = couple_arg.empty() ? CoupleSpec::l1_linf() : io::couple_from_json(io::load(couple_arg));
      const auto elem = io::element_from_json(io::load(elem_arg));
      const auto grid = log_grid(t_lo, t_hi, points ? *points : 61);
      const auto c = k_curve(elem, couple, grid);
      const auto chk = check_kcurve(c, cfg.tol("kcurve"));
      const auto table = report::kcurve_table(c);
      const auto svg = report::kcurve_svg(c, "K-functional");
      if (output_format.empty()) out.format = "csv";
      out.emit(with_header({{"couple", io::to_json(couple)}, {"invariants_ok", chk.ok()}}, io::to_json(c)), &table, &svg);
      return 0;
    }
    if (rs->parsed()) {
      const auto cx = couple_arg.empty() ? CoupleSpec::l1_linf() : io::couple_from_json(io::load(couple_arg));
      const auto cy = couple_y_arg.empty() ? cx : io::couple_from_json(io::load(couple_y_arg));
      RsConfig rc;
      rc.points = cfg.grid_points;
      const auto r = rs_relation_test(io::element_from_json(io::load(x_arg)), io::element_from_json(io::load(y_arg)), cx,
                                      cy, parse_real(s_arg, "s"), rc);
      report::Table table{{"t", "w"}, {}};
      for (std::size_t i = 0; i < r.t.size(); ++i) table.add({r.t[i], r.w[i]});
      const auto svg = report::svg_plot({{"w(t)", r.t, r.w}}, {"K(t, y) / K(t, x)", "t", "w"});
      out.emit(io::to_json(r), &table, &svg);
      return r.verdict == Verdict::fails ? 1 : 0;
    }
    if (orbit->parsed()) {
      const auto x = io::seq_from_json(io::load(x_arg));
      const auto y = io::seq_from_json(io::load(y_arg));
      const auto T = cm_orbit_operator(x, y);
      const auto chk = validate_operator(T, x, y, cfg.tol("orbit"));
      out.emit({{"matrix", io::matrix_json(T)}, {"validation", io::to_json(chk)}});
      return chk.ok ? 0 : 1;
    }
    if (verify->parsed()) {
      const auto suite = harness::run_verification_suite(cfg, select, !sequential);
      const auto table = harness::suite_table(suite);
      out.emit(harness::to_json(suite), &table);
      return suite.all_pass() ? 0 : 1;
    }
    if (rep->parsed()) {
      namespace fsys = std::filesystem;
      fsys::create_directories(dir_arg);
      auto path = [&](const char* name) { return (fsys::path(dir_arg) / name).string(); };
      const auto grid = log_grid(1e-3, 1e3, 61);
      const auto chi = k_curve(StepFunction({Atom{1.0, 1.0}}), CoupleSpec::l1_linf(), grid);
      io::write_file(path("kcurve_chi.csv"), report::to_csv(report::kcurve_table(chi)));
      io::write_file(path("kcurve_chi.svg"), report::kcurve_svg(chi, "K(t, chi_[0,1]; L1, Linf)"));
      const auto growth = ds_constant(LatticeSpec::c0(), LatticeSpec::lp(1.0), 2.0, 32, cfg.sampler());
      io::write_file(path("growth_c0_l1_s2.csv"), report::to_csv(report::growth_table(growth.curve, growth.slope)));
      io::write_file(path("growth_c0_l1_s2.svg"), report::growth_svg(growth.curve, "D_2(c0, l1)"));
      const auto suite = harness::run_verification_suite(cfg, {}, !sequential);
      io::write_file(path("verify.json"), io::dump(harness::to_json(suite)));
      io::write_file(path("verify.csv"), report::to_csv(harness::suite_table(suite)));
      json files = json::array({"kcurve_chi.csv", "kcurve_chi.svg", "growth_c0_l1_s2.csv", "growth_c0_l1_s2.svg",
                                "verify.json", "verify.csv"});
      Output{"json", out_path}.emit({{"dir", dir_arg}, {"files", files}, {"all_pass", suite.all_pass()}});
      return suite.all_pass() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << json({{"error", "usage"}, {"message", e.what()}}).dump() << "\n";
    return 2;
  } catch (const io::json::exception& e) {
    std::cerr << json({{"error", "invalid-spec"}, {"message", e.what()}}).dump() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << json({{"error", to_string(e.kind())}, {"message", e.what()}}).dump() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << json({{"error", "internal"}, {"message", e.what()}}).dump() << "\n";
    return 1;
  }
  return 2;
}
