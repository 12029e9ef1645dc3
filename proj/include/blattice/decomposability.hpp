#pragma once

// Upper/lower p-estimate constants, relative s-decomposability constants,
// Grobler-Dodds indices, the F_s infimum and the multiplicator inclusion.

#include <random>

#include "blattice/optimal_spaces.hpp"

namespace blattice {

enum class Direction { upper, lower };

inline const char* to_string(Direction d) { return d == Direction::upper ? "upper" : "lower"; }

struct SamplerConfig {
  std::uint64_t seed = 20240917;
  std::size_t random_families = 48;
  double growth_slope = 0.02;
  bool parallel = true;
};

struct CurvePoint {
  std::size_t n = 0;
  double value = 0.0;
};

struct EstimateReport {
  double p = 1.0;
  double constant = 1.0;
  std::size_t n_max = 1;
  Direction direction = Direction::upper;
  std::vector<CurvePoint> curve;
  double slope = 0.0;
  bool growing = false;
  std::string source = "sampled";
  std::size_t samples = 0;
};

struct DecompWitness {
  std::vector<double> a;
  std::vector<double> b;
  std::string x_family;
  std::string y_family;
  double ratio = 0.0;
};

struct DecompReport {
  double s = 1.0;
  double empirical_Ds = 1.0;
  std::size_t n_max = 1;
  DecompWitness witness;
  std::vector<CurvePoint> curve;
  double slope = 0.0;
  bool growing = false;
  std::optional<double> holder_bound;
  std::size_t samples = 0;
};

struct IndexReport {
  double delta = 1.0;
  double sigma = 1.0;
  std::string source = "analytic_table";
  bool flagged = false;
  std::optional<double> p_M;
};

namespace detail {

/// Family sizes 1, 2, 4, ... up to n_max (n_max itself always included).
inline std::vector<std::size_t> curve_sizes(std::size_t n_max) {
  std::vector<std::size_t> out;
  for (std::size_t n = 2; n < n_max; n *= 2) out.push_back(n);
  out.push_back(std::max<std::size_t>(n_max, 1));
  return out;
}

inline void fit_growth(const std::vector<CurvePoint>& curve, double threshold, double& slope, bool& growing) {
  std::vector<double> x, y;
  for (const auto& c : curve) {
    if (c.n < 2) continue;
    x.push_back(std::log(static_cast<double>(c.n)));
    y.push_back(std::log(c.value));
  }
  slope = regression_slope(x, y);
  growing = slope > threshold;
}

/// Disjoint family of n elements of `host`, optionally normalized.
/// Sequence hosts use coordinate blocks; function hosts use consecutive
/// intervals. `shape` selects the structured pattern; shape < 0 is random.
inline DisjointFamily make_family(const LatticeSpec& host, std::size_t n, int shape, std::mt19937_64& rng,
                                  bool normalize) {
  DisjointFamily fam;
  fam.host = host;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (host.is_sequence_host()) {
    // Block lengths 1 (structured) or 1-3 (random); values in (0,1].
    std::size_t at = 0;
    std::vector<std::vector<double>> blocks;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t len = shape >= 0 ? 1 : 1 + static_cast<std::size_t>(unit(rng) * 3.0) % 3;
      std::vector<double> vals;
      for (std::size_t j = 0; j < len; ++j) vals.push_back(shape >= 0 ? 1.0 : 0.05 + unit(rng));
      blocks.push_back(std::move(vals));
    }
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.size();
    if (auto* w = std::get_if<WeightedLpSpec>(&host.kind())) {
      if (w->weights.size() < total) throw Error(ErrorKind::invalid_argument, "not enough weights for the family");
    }
    for (auto& b : blocks) {
      std::vector<double> v(total, 0.0);
      for (std::size_t j = 0; j < b.size(); ++j) v[at + j] = b[j];
      at += b.size();
      SeqVector sv(std::move(v));
      if (normalize) {
        const double nv = seq_norm(sv, host);
        for (auto& e : sv.mutable_entries()) e /= nv;
      } else if (shape < 0) {
        const double scale = std::exp(4.0 * unit(rng) - 2.0);
        for (auto& e : sv.mutable_entries()) e *= scale;
      }
      fam.sequences.push_back(std::move(sv));
    }
    return fam;
  }
  std::vector<double> lengths(n);
  double total = 1.0;
  switch (shape) {
    case 0:  // equal split
      std::fill(lengths.begin(), lengths.end(), 1.0 / static_cast<double>(n));
      break;
    case 1:  // geometric split; the ratio grows for large n so members stay resolvable
    case 3: {  // widely separated scales
      const double base = shape == 1 ? 0.5 : 0.05;
      const double r = std::max(base, std::pow(1e-12, 1.0 / static_cast<double>(n)));
      const double lead = shape == 1 ? 1.0 : 0.5;
      for (std::size_t k = 0; k < n; ++k) lengths[k] = lead * (1.0 - r) * std::pow(r, static_cast<double>(k));
      break;
    }
    case 2:  // single spike plus equal remainder
      lengths[0] = 1.0 / (4.0 * static_cast<double>(n));
      for (std::size_t k = 1; k < n; ++k) lengths[k] = (1.0 - lengths[0]) / static_cast<double>(n - 1);
      break;
    default: {
      double s = 0.0;
      for (auto& l : lengths) {
        l = std::exp(6.0 * unit(rng) - 6.0);
        s += l;
      }
      total = 0.2 + 0.8 * unit(rng);
      for (auto& l : lengths) l *= total / s;
    }
  }
  double at = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Cell> cells;
    const double len = lengths[k];
    if (shape < 0 && unit(rng) < 0.5) {
      const double split = 0.2 + 0.6 * unit(rng);
      cells.push_back({at, at + split * len, 0.1 + unit(rng) * 3.0});
      cells.push_back({at + split * len, at + len, 0.1 + unit(rng) * 3.0});
    } else {
      double v = shape == 2 && k == 0 ? 10.0 : 1.0;
      if (shape < 0) v = 0.1 + unit(rng) * 3.0;
      cells.push_back({at, at + len, v});
    }
    at += len;
    PlacedStep f(std::move(cells));
    double scale = 1.0;
    if (normalize) {
      scale = 1.0 / function_norm(f.to_step(), host);
    } else if (shape < 0) {
      scale = std::exp(4.0 * unit(rng) - 2.0);
    }
    if (scale != 1.0) {
      std::vector<Cell> scaled(f.cells().begin(), f.cells().end());
      for (auto& c : scaled) c.value *= scale;
      f = PlacedStep(std::move(scaled));
    }
    fam.functions.push_back(std::move(f));
  }
  return fam;
}

inline std::vector<double> member_norms(const DisjointFamily& fam) {
  std::vector<double> out;
  if (fam.host.is_sequence_host()) {
    for (const auto& s : fam.sequences) out.push_back(seq_norm(s, fam.host));
  } else {
    for (const auto& f : fam.functions) out.push_back(function_norm(f.to_step(), fam.host));
  }
  return out;
}

inline double family_sum_norm(const DisjointFamily& fam) {
  const std::vector<double> ones(fam.size(), 1.0);
  return fam.combination_norm(ones);
}

inline std::string family_label(int shape) {
  switch (shape) {
    case 0: return "equal_split";
    case 1: return "geometric_split";
    case 2: return "single_spike";
    case 3: return "separated_scales";
    default: return "random";
  }
}

}  // namespace detail

/// Best constant in the upper (resp. lower) p-estimate of a host, closed form
/// for l_p-like hosts and sampled over disjoint families otherwise.
inline EstimateReport estimate_constant(const LatticeSpec& host, double p, Direction direction, std::size_t n_max,
                                        const SamplerConfig& cfg = {}) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "estimate exponent must be >= 1");
  if (n_max == 0) throw Error(ErrorKind::invalid_argument, "n_max must be positive");
  EstimateReport r;
  r.p = p;
  r.n_max = n_max;
  r.direction = direction;
  const auto sizes = detail::curve_sizes(n_max);
  if (auto hp = detail::lp_like_exponent(host)) {
    r.source = "closed_form";
    const double rp = reciprocal(p);
    const double rh = reciprocal(*hp);
    const double e = direction == Direction::upper ? std::max(0.0, rh - rp) : std::max(0.0, rp - rh);
    for (std::size_t n : sizes) r.curve.push_back({n, std::pow(static_cast<double>(n), e)});
    r.constant = r.curve.back().value;
    r.slope = e;
    r.growing = e > cfg.growth_slope;
    return r;
  }
  // Sampled: running max over structured and random families of each size.
  auto ratio_of = [&](const DisjointFamily& fam) {
    const auto norms = detail::member_norms(fam);
    const double s = detail::family_sum_norm(fam);
    const double lp = lp_norm(norms, p);
    if (s == 0.0 || lp == 0.0) return 1.0;
    return direction == Direction::upper ? s / lp : lp / s;
  };
  std::vector<double> per_size(sizes.size(), 1.0);
  std::vector<std::size_t> counts(sizes.size(), 0);
  auto work = [&](std::size_t idx) {
    const std::size_t n = sizes[idx];
    std::mt19937_64 rng(cfg.seed ^ (0x5851f42d4c957f2dULL * (n + 1)));
    double best = 1.0;
    std::size_t cnt = 0;
    for (int shape = 0; shape < 4; ++shape) {
      for (bool normalize : {false, true}) {
        best = std::max(best, ratio_of(detail::make_family(host, n, shape, rng, normalize)));
        ++cnt;
      }
    }
    for (std::size_t i = 0; i < cfg.random_families; ++i) {
      best = std::max(best, ratio_of(detail::make_family(host, n, -1, rng, i % 2 == 1)));
      ++cnt;
    }
    per_size[idx] = best;
    counts[idx] = cnt;
  };
  if (cfg.parallel) {
    std::vector<std::future<void>> futs;
    for (std::size_t i = 0; i < sizes.size(); ++i) futs.push_back(std::async(std::launch::async, work, i));
    for (auto& f : futs) f.get();
  } else {
    for (std::size_t i = 0; i < sizes.size(); ++i) work(i);
  }
  double running = 1.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    running = std::max(running, per_size[i]);
    r.curve.push_back({sizes[i], running});
    r.samples += counts[i];
  }
  r.constant = running;
  detail::fit_growth(r.curve, cfg.growth_slope, r.slope, r.growing);
  return r;
}

namespace detail {

struct CoefficientPair {
  std::vector<double> a;
  std::vector<double> b;
};

inline std::vector<CoefficientPair> coefficient_candidates(std::size_t n, std::mt19937_64& rng, std::size_t randoms) {
  std::vector<CoefficientPair> out;
  const std::vector<double> ones(n, 1.0);
  std::vector<double> e1(n, 0.0);
  e1[0] = 1.0;
  out.push_back({ones, ones});
  out.push_back({e1, e1});
  out.push_back({ones, e1});
  out.push_back({e1, ones});
  std::vector<double> harmonic(n);
  for (std::size_t i = 0; i < n; ++i) harmonic[i] = 1.0 / static_cast<double>(i + 1);
  out.push_back({harmonic, ones});
  out.push_back({ones, harmonic});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t r = 0; r < randoms; ++r) {
    CoefficientPair c{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      c.a[i] = std::exp(4.0 * unit(rng) - 4.0);
      c.b[i] = std::exp(4.0 * unit(rng) - 4.0);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

/// Empirical relative s-decomposability constant
/// sup ||sum a_i b_i y_i||_Y / (||b||_s ||sum a_i x_i||_X) over unit disjoint
/// families x in X, y in Y. Candidate sets do not depend on s.
inline DecompReport ds_constant(const LatticeSpec& X, const LatticeSpec& Y, double s, std::size_t n_max,
                                const SamplerConfig& cfg = {}) {
  if (!(s >= 1.0)) throw Error(ErrorKind::invalid_argument, "s must be >= 1");
  if (n_max == 0) throw Error(ErrorKind::invalid_argument, "n_max must be positive");
  if (X.is<OrliczSeqSpec>() || Y.is<OrliczSeqSpec>()) {
    throw Error(ErrorKind::unsupported_host, "orlicz_seq hosts are not supported by ds");
  }
  DecompReport r;
  r.s = s;
  r.n_max = n_max;
  const auto xp = detail::lp_like_exponent(X);
  const auto yp = detail::lp_like_exponent(Y);
  if (xp && yp) {
    r.holder_bound = std::pow(static_cast<double>(n_max),
                              std::max(0.0, reciprocal(*yp) - reciprocal(*xp) - reciprocal(s)));
  }
  const auto sizes = detail::curve_sizes(n_max);
  std::vector<DecompWitness> best(sizes.size());
  std::vector<std::size_t> counts(sizes.size(), 0);
  auto work = [&](std::size_t idx) {
    const std::size_t n = sizes[idx];
    std::mt19937_64 rng(cfg.seed ^ (0x2545f4914f6cdd1dULL * (n + 7)));
    const auto coeffs = detail::coefficient_candidates(n, rng, cfg.random_families);
    DecompWitness w;
    w.ratio = 0.0;
    std::size_t cnt = 0;
    auto consider = [&](const DisjointFamily& fx, const DisjointFamily& fy, const std::string& lx,
                        const std::string& ly) {
      for (const auto& c : coeffs) {
        std::vector<double> ab(n);
        for (std::size_t i = 0; i < n; ++i) ab[i] = c.a[i] * c.b[i];
        const double den = lp_norm(c.b, s) * fx.combination_norm(c.a);
        ++cnt;
        if (!(den > 0.0)) continue;
        const double ratio = fy.combination_norm(ab) / den;
        if (ratio > w.ratio) w = {c.a, c.b, lx, ly, ratio};
      }
    };
    if (xp && yp) {
      // Any unit disjoint family of an l_p-like host combines as l_p.
      DisjointFamily fx{LatticeSpec::lp(*xp), {}, {}};
      DisjointFamily fy{LatticeSpec::lp(*yp), {}, {}};
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        fx.sequences.emplace_back(e);
        fy.sequences.emplace_back(e);
      }
      consider(fx, fy, "unit_vectors", "unit_vectors");
    } else {
      std::vector<std::pair<DisjointFamily, std::string>> xs, ys;
      for (int shape = 0; shape < 4; ++shape) {
        xs.push_back({detail::make_family(X, n, shape, rng, true), detail::family_label(shape)});
        ys.push_back({detail::make_family(Y, n, shape, rng, true), detail::family_label(shape)});
      }
      const std::size_t randoms = std::max<std::size_t>(2, cfg.random_families / 8);
      for (std::size_t i = 0; i < randoms; ++i) {
        xs.push_back({detail::make_family(X, n, -1, rng, true), "random"});
        ys.push_back({detail::make_family(Y, n, -1, rng, true), "random"});
      }
      for (const auto& [fx, lx] : xs) {
        for (const auto& [fy, ly] : ys) consider(fx, fy, lx, ly);
      }
    }
    best[idx] = std::move(w);
    counts[idx] = cnt;
  };
  if (cfg.parallel) {
    std::vector<std::future<void>> futs;
    for (std::size_t i = 0; i < sizes.size(); ++i) futs.push_back(std::async(std::launch::async, work, i));
    for (auto& f : futs) f.get();
  } else {
    for (std::size_t i = 0; i < sizes.size(); ++i) work(i);
  }
  double running = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (best[i].ratio > running) {
      running = best[i].ratio;
      r.witness = best[i];
    }
    r.curve.push_back({sizes[i], running});
    r.samples += counts[i];
  }
  r.empirical_Ds = running;
  detail::fit_growth(r.curve, cfg.growth_slope, r.slope, r.growing);
  return r;
}

/// Grobler-Dodds indices delta(X) <= sigma(X).
inline IndexReport grobler_dodds(const LatticeSpec& host) {
  IndexReport r;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LpSpec> || std::is_same_v<T, WeightedLpSpec>) {
          r.delta = r.sigma = k.p;
        } else if constexpr (std::is_same_v<T, C0Spec>) {
          r.delta = r.sigma = kInf;
          r.flagged = true;
        } else if constexpr (std::is_same_v<T, LorentzSpec>) {
          r.delta = std::min(k.p, k.q);
          r.sigma = std::max(k.p, k.q);
        } else {
          const OrliczFunction& M = [&]() -> const OrliczFunction& {
            if constexpr (std::is_same_v<T, OrliczFnSpec>) {
              return k.M;
            } else {
              return k.psi;
            }
          }();
          r.source = "empirical_slope";
          if (M.is_power()) {
            r.delta = r.sigma = M.power_exponent();
            r.p_M = M.power_exponent();
            return;
          }
          // Growth exponents of inf_v and sup_v of M(uv)/M(v), v in [1, V].
          std::vector<double> lu, lo, hi;
          const double V = std::min(1e6, M.domain_max() / 32.0);
          for (double u = 2.0; u <= 32.0; u *= 2.0) {
            double mn = kInf, mx = 0.0;
            for (double v : log_grid(1.0, std::max(V, 1.0), 400)) {
              const double ratio = M.evaluate(u * v) / M.evaluate(v);
              mn = std::min(mn, ratio);
              mx = std::max(mx, ratio);
            }
            lu.push_back(std::log(u));
            lo.push_back(std::log(mn));
            hi.push_back(std::log(mx));
          }
          r.delta = std::max(1.0, regression_slope(lu, lo));
          r.sigma = std::max(r.delta, regression_slope(lu, hi));
          r.p_M = power_index(M).p_M;
        }
      },
      host.kind());
  return r;
}

struct FsGridPoint {
  double p = 1.0;
  double q = 1.0;
  double lower_constant = 1.0;  // M_[q](X)
  double upper_constant = 1.0;  // M^[p](Y)
  double product = 1.0;
};

struct FsReport {
  double value = kInf;
  double p = 1.0;
  double q = kInf;
  std::vector<FsGridPoint> grid;
  double ds = 1.0;
  bool sandwich_lower = true;  // D_s <= F_s
  bool sandwich_upper = true;  // F_s <= 1.25 D_s^2
  bool hypothesis_violation = false;
  bool s_max_infinite = false;
};

struct FsConfig {
  std::size_t grid_points = 9;
  std::size_t n_max = 16;
  double slack = 1.25;
  SamplerConfig sampler;
};

/// F_s(X, Y) = inf M_[q](X) M^[p](Y) over 1/p = 1/q + 1/s, q >= sigma(X).
inline FsReport fs_infimum(const LatticeSpec& X, const LatticeSpec& Y, double s, const FsConfig& cfg = {}) {
  if (!(s >= 1.0)) throw Error(ErrorKind::invalid_argument, "s must be >= 1");
  FsReport r;
  const auto ix = grobler_dodds(X);
  const auto iy = grobler_dodds(Y);
  r.hypothesis_violation = ix.sigma < iy.delta;
  r.s_max_infinite = ix.sigma <= iy.delta;
  const double t_hi = reciprocal(ix.sigma);
  const std::size_t pts = std::max<std::size_t>(cfg.grid_points, 2);
  for (std::size_t i = 0; i < pts; ++i) {
    const double t = t_hi == 0.0 ? 0.0 : t_hi * static_cast<double>(i) / static_cast<double>(pts - 1);
    const double inv_p = t + reciprocal(s);
    if (inv_p > 1.0 + 1e-12) continue;
    FsGridPoint g;
    g.q = from_reciprocal(t);
    g.p = from_reciprocal(std::min(inv_p, 1.0));
    const auto lower = estimate_constant(X, g.q, Direction::lower, cfg.n_max, cfg.sampler);
    const auto upper = estimate_constant(Y, g.p, Direction::upper, cfg.n_max, cfg.sampler);
    g.lower_constant = lower.growing ? kInf : lower.constant;
    g.upper_constant = upper.growing ? kInf : upper.constant;
    g.product = g.lower_constant * g.upper_constant;
    if (g.product < r.value) {
      r.value = g.product;
      r.p = g.p;
      r.q = g.q;
    }
    r.grid.push_back(g);
    if (t_hi == 0.0) break;
  }
  r.ds = ds_constant(X, Y, s, std::min<std::size_t>(cfg.n_max, 6), cfg.sampler).empirical_Ds;
  r.sandwich_lower = r.ds <= r.value * (1.0 + 1e-6);
  r.sandwich_upper = r.value <= cfg.slack * r.ds * r.ds;
  return r;
}

struct MultiplicatorReport {
  double worst_ratio = 0.0;  // ||ab||_{Y_U} / (||b||_s ||a||_{X_L})
  double ds = 1.0;
  std::size_t samples = 0;
  bool holds = true;
  std::vector<double> worst_a;
  std::vector<double> worst_b;
};

/// Samples (a, b) and checks ||ab||_{Y_U} <= D_s ||b||_s ||a||_{X_L}.
inline MultiplicatorReport multiplicator_check(const LatticeSpec& X, const LatticeSpec& Y, double s,
                                               std::size_t samples, std::size_t n = 4,
                                               const SamplerConfig& scfg = {}, const OptimalConfig& ocfg = {},
                                               double slack = 1e-9) {
  MultiplicatorReport r;
  r.ds = ds_constant(X, Y, s, n, scfg).empirical_Ds;
  std::mt19937_64 rng(scfg.seed ^ 0x94d049bb133111ebULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t i = 0; i < samples; ++i) {
    std::vector<double> a(n), b(n), ab(n);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = unit(rng);
      b[k] = unit(rng);
      ab[k] = a[k] * b[k];
    }
    const double lhs = xu_norm(ab, Y, ocfg).hi;
    const double den = lp_norm(b, s) * xl_norm(a, X, ocfg).lo;
    if (!(den > 0.0)) continue;
    ++r.samples;
    const double ratio = lhs / den;
    if (ratio > r.worst_ratio) {
      r.worst_ratio = ratio;
      r.worst_a = a;
      r.worst_b = b;
    }
  }
  r.holds = r.worst_ratio <= r.ds * (1.0 + slack);
  return r;
}

}  // namespace blattice
