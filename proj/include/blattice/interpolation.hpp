#pragma once

// K-functionals for (L_1, L_inf) on [0,1] and weighted l_p couples, the R_s
// relation test, and Calderon-Mityagin orbit operators for (l_1^n, l_inf^n).

#include <numeric>

#include "blattice/norms.hpp"

namespace blattice {

/// Pair (X0, X1) with X_i = l_{p_i}(w_i) on sequences; an empty weight list
/// means unit weights. On step functions only (L_1, L_inf) is supported.
struct CoupleSpec {
  double p0 = 1.0;
  double p1 = kInf;
  std::vector<double> w0;
  std::vector<double> w1;

  static CoupleSpec l1_linf() { return {}; }

  static CoupleSpec weighted(double p0, std::vector<double> w0, double p1, std::vector<double> w1) {
    if (!(p0 >= 1.0) || !(p1 >= 1.0)) throw Error(ErrorKind::unsupported_couple, "exponents must be >= 1");
    for (const auto* w : {&w0, &w1}) {
      for (double v : *w) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::unsupported_couple, "weights must be positive");
      }
    }
    return {p0, p1, std::move(w0), std::move(w1)};
  }

  bool is_l1_linf() const noexcept { return p0 == 1.0 && std::isinf(p1) && w0.empty() && w1.empty(); }

  double weight0(std::size_t i) const { return weight(w0, i); }
  double weight1(std::size_t i) const { return weight(w1, i); }

 private:
  static double weight(const std::vector<double>& w, std::size_t i) {
    if (w.empty()) return 1.0;
    if (i >= w.size()) throw Error(ErrorKind::invalid_argument, "element longer than the weight sequence");
    return w[i];
  }
};

using Element = std::variant<StepFunction, SeqVector>;

namespace detail {

/// K(t, f; L_1, L_inf) by minimizing the piecewise linear convex map
/// c -> ∫(|f| - c)_+ + t c over its breakpoints {0, |v_j|}.
inline double k_l1_linf(double t, const StepFunction& f) {
  std::vector<double> levels{0.0};
  for (const auto& a : f.atoms()) levels.push_back(std::abs(a.value));
  double best = kInf;
  for (double c : levels) {
    double excess = 0.0;
    for (const auto& a : f.atoms()) excess += std::max(std::abs(a.value) - c, 0.0) * a.measure;
    best = std::min(best, excess + t * c);
  }
  return best;
}

/// Convex 1-D minimization of F(c) on [0, hi] with exact checks at `breaks`.
template <class F>
double minimize_convex_level(F&& f, double hi, const std::vector<double>& breaks, bool piecewise_linear) {
  double best = f(0.0);
  for (double c : breaks) best = std::min(best, f(c));
  if (piecewise_linear || !(hi > 0.0)) return best;
  const double v = minimize_scalar(f, 0.0, hi, 36, 400).second;
  return std::min(best, v);
}

inline double k_weighted(double t, std::span<const double> x, const CoupleSpec& c) {
  const std::size_t n = x.size();
  std::vector<double> ax(n), w0(n), w1(n);
  for (std::size_t i = 0; i < n; ++i) {
    ax[i] = std::abs(x[i]);
    w0[i] = c.weight0(i);
    w1[i] = c.weight1(i);
  }
  if (c.p0 == 1.0 && c.p1 == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += ax[i] * std::min(w0[i], t * w1[i]);
    return s;
  }
  if (std::isinf(c.p1) || std::isinf(c.p0)) {
    // Truncation in the sup-normed space: ||x_inf w||_inf <= c forces
    // |x_inf,i| <= c / w_i and the remainder goes to the other space.
    const bool one_inf = std::isinf(c.p1);
    const auto& ws = one_inf ? w1 : w0;
    const auto& wo = one_inf ? w0 : w1;
    const double po = one_inf ? c.p0 : c.p1;
    const double to = one_inf ? 1.0 : t;  // factor of the other norm
    const double ts = one_inf ? t : 1.0;  // factor of the sup norm
    std::vector<double> rest(n);
    auto F = [&](double lvl) {
      for (std::size_t i = 0; i < n; ++i) rest[i] = std::max(ax[i] - lvl / ws[i], 0.0) * wo[i];
      return to * lp_norm(rest, po) + ts * lvl;
    };
    std::vector<double> breaks;
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      breaks.push_back(ax[i] * ws[i]);
      hi = std::max(hi, ax[i] * ws[i]);
    }
    return minimize_convex_level(F, hi, breaks, po == 1.0);
  }
  // General exponents via ||u||_p = min_eta ||u||_p^p / (p eta^(p-1)) + (p-1) eta / p.
  // For fixed (eta0, eta1) the split separates coordinatewise; the partial
  // minimum is convex in each eta, so nested 1-D searches finish the job.
  double scale = 0.0;
  // eta_j tracks ||x_j w_j||_{p_j}, bounded by the l_1 sum below.
  for (std::size_t i = 0; i < n; ++i) scale += ax[i] * std::max(w0[i], w1[i]);
  if (scale == 0.0) return 0.0;
  auto split = [&](double e0, double e1) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (ax[i] == 0.0) continue;
      const double A = c.p0 == 1.0 ? w0[i] : std::pow(w0[i], c.p0) / (c.p0 * std::pow(e0, c.p0 - 1.0));
      const double B = c.p1 == 1.0 ? t * w1[i] : t * std::pow(w1[i], c.p1) / (c.p1 * std::pow(e1, c.p1 - 1.0));
      auto h = [&](double z) { return A * std::pow(ax[i] - z, c.p0) + B * std::pow(z, c.p1); };
      double z;
      if (c.p0 == 1.0) {
        z = std::min(ax[i], std::pow(A / (c.p1 * B), 1.0 / (c.p1 - 1.0)));
      } else if (c.p1 == 1.0) {
        z = std::max(0.0, ax[i] - std::pow(B / (c.p0 * A), 1.0 / (c.p0 - 1.0)));
      } else {
        auto dh = [&](double v) { return -c.p0 * A * std::pow(ax[i] - v, c.p0 - 1.0) + c.p1 * B * std::pow(v, c.p1 - 1.0); };
        z = solve_bracketed(dh, 0.0, ax[i], 1e-15);
      }
      total += std::min({h(z), h(0.0), h(ax[i])});
    }
    if (c.p0 != 1.0) total += (c.p0 - 1.0) * e0 / c.p0;
    if (c.p1 != 1.0) total += t * (c.p1 - 1.0) * e1 / c.p1;
    return total;
  };
  const double lo = std::log(scale * 1e-15), hi = std::log(scale);
  auto over_e1 = [&](double e0) {
    if (c.p1 == 1.0) return split(e0, 1.0);
    return minimize_scalar([&](double l1) { return split(e0, std::exp(l1)); }, lo, hi, 48, 400).second;
  };
  if (c.p0 == 1.0) return over_e1(1.0);
  return minimize_scalar([&](double l0) { return over_e1(std::exp(l0)); }, lo, hi, 48, 400).second;
}

}  // namespace detail

inline double k_functional(double t, const Element& x, const CoupleSpec& couple) {
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "t must be positive");
  if (const auto* f = std::get_if<StepFunction>(&x)) {
    if (!couple.is_l1_linf()) throw Error(ErrorKind::unsupported_couple, "step functions need the (L1, Linf) couple");
    return detail::k_l1_linf(t, *f);
  }
  return detail::k_weighted(t, std::get<SeqVector>(x).entries(), couple);
}

/// ∫_0^t f*(s) ds, the closed-form K-functional of (L_1, L_inf).
inline double k_l1_linf_closed(double t, const StepFunction& f) {
  return rearrangement_integral(decreasing_rearrangement(f), t);
}

struct KCurve {
  std::vector<double> t;
  std::vector<double> values;
};

inline KCurve k_curve(const Element& x, const CoupleSpec& couple, std::span<const double> grid) {
  KCurve c;
  c.t.assign(grid.begin(), grid.end());
  c.values.reserve(grid.size());
  for (double t : grid) c.values.push_back(k_functional(t, x, couple));
  return c;
}

struct KCurveCheck {
  bool nonnegative = true;
  bool nondecreasing = true;
  bool concave = true;
  bool ratio_nonincreasing = true;

  bool ok() const noexcept { return nonnegative && nondecreasing && concave && ratio_nonincreasing; }
};

/// Concavity is checked through secant slopes of consecutive grid intervals.
inline KCurveCheck check_kcurve(const KCurve& c, double tol = 1e-9) {
  KCurveCheck r;
  const std::size_t n = c.t.size();
  double scale = 0.0;
  for (double v : c.values) scale = std::max(scale, std::abs(v));
  const double abs_tol = tol * std::max(scale, 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.values[i] < -abs_tol) r.nonnegative = false;
    if (i == 0) continue;
    if (c.values[i] < c.values[i - 1] - tol * std::abs(c.values[i - 1])) r.nondecreasing = false;
    if (c.values[i] / c.t[i] > (c.values[i - 1] / c.t[i - 1]) * (1.0 + tol)) r.ratio_nonincreasing = false;
    if (i + 1 < n) {
      const double s1 = (c.values[i] - c.values[i - 1]) / (c.t[i] - c.t[i - 1]);
      const double s2 = (c.values[i + 1] - c.values[i]) / (c.t[i + 1] - c.t[i]);
      if (s2 > s1 + tol * std::max({std::abs(s1), std::abs(s2), scale / c.t[i + 1]})) r.concave = false;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// R_s relation.

enum class Verdict { holds, fails, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct RsConfig {
  double t_lo = 1e-6;
  double t_hi = 1e6;
  std::size_t points = 241;
  double criticality = 0.02;
};

struct TailReport {
  double exponent = 0.0;
  bool zero = false;
  Verdict verdict = Verdict::holds;
};

struct RsReport {
  double s = 1.0;
  double integral = 0.0;
  double sup_w = 0.0;
  TailReport tail0;
  TailReport tail_inf;
  Verdict verdict = Verdict::holds;
  std::size_t grid_size = 0;
  std::vector<double> t;
  std::vector<double> w;
};

namespace detail {

inline void couple_breakpoints(const Element& x, const CoupleSpec& c, std::vector<double>& out) {
  if (auto* f = std::get_if<StepFunction>(&x)) {
    double at = 0.0;
    for (const auto& a : decreasing_rearrangement(*f).atoms()) {
      at += a.measure;
      out.push_back(at);
    }
    return;
  }
  const auto& v = std::get<SeqVector>(x);
  if (c.p0 == 1.0 && std::isinf(c.p1)) {
    // K is linear between the cumulative counts of the rearranged weighted vector.
    for (std::size_t k = 1; k <= v.size(); ++k) out.push_back(static_cast<double>(k));
  }
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(c.weight0(i) / c.weight1(i));
}

inline TailReport classify_tail(std::span<const double> t, std::span<const double> w, bool at_zero, double s,
                                double crit) {
  TailReport r;
  std::vector<double> lx, ly;
  bool all_zero = true;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (w[i] > 0.0) {
      all_zero = false;
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(w[i]));
    }
  }
  if (all_zero) {
    r.zero = true;
    r.verdict = Verdict::holds;
    return r;
  }
  r.exponent = lx.size() >= 2 ? regression_slope(lx, ly) : 0.0;
  // Integrability of w^s dt/t needs w -> 0 polynomially: exponent > 0 at 0,
  // exponent < 0 at inf. For s = inf only boundedness matters.
  const double e = at_zero ? r.exponent : -r.exponent;
  if (std::isinf(s)) {
    if (e >= -1e-9) {
      r.verdict = Verdict::holds;
    } else if (e < -crit) {
      r.verdict = Verdict::fails;
    } else {
      r.verdict = Verdict::inconclusive;
    }
    return r;
  }
  if (e > crit) {
    r.verdict = Verdict::holds;
  } else if (e < -crit || std::abs(e) <= 1e-9) {
    r.verdict = Verdict::fails;
  } else {
    r.verdict = Verdict::inconclusive;
  }
  return r;
}

}  // namespace detail

/// Tests K(t, y; Y) <= w(t) K(t, x; X) with ∫ w^s dt/t < inf, for the pointwise
/// ratio w = K(t, y) / K(t, x) on a log grid.
inline RsReport rs_relation_test(const Element& x, const Element& y, const CoupleSpec& cx, const CoupleSpec& cy,
                                 double s, const RsConfig& cfg = {}) {
  if (!(s >= 1.0)) throw Error(ErrorKind::invalid_argument, "s must be >= 1");
  const bool x_zero = std::visit([](const auto& e) { return e.is_zero(); }, x);
  if (x_zero) throw Error(ErrorKind::zero_denominator, "x = 0 gives K(t, x) = 0");
  RsReport r;
  r.s = s;
  std::vector<double> grid = log_grid(cfg.t_lo, cfg.t_hi, cfg.points);
  std::vector<double> extra;
  detail::couple_breakpoints(x, cx, extra);
  detail::couple_breakpoints(y, cy, extra);
  for (double b : extra) {
    if (b > cfg.t_lo && b < cfg.t_hi) grid.push_back(b);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  r.t = grid;
  r.w.reserve(grid.size());
  for (double t : grid) {
    const double kx = k_functional(t, x, cx);
    if (!(kx > 0.0)) throw Error(ErrorKind::zero_denominator, "K(t, x) vanished");
    r.w.push_back(k_functional(t, y, cy) / kx);
  }
  r.grid_size = grid.size();
  for (double v : r.w) r.sup_w = std::max(r.sup_w, v);
  if (!std::isinf(s)) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double dl = std::log(grid[i] / grid[i - 1]);
      r.integral += 0.5 * (std::pow(r.w[i], s) + std::pow(r.w[i - 1], s)) * dl;
    }
  } else {
    r.integral = r.sup_w;
  }
  // Tails: first and last decade of the grid.
  const double lo_end = cfg.t_lo * 10.0;
  const double hi_start = cfg.t_hi / 10.0;
  std::vector<double> t0, w0, ti, wi;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= lo_end) {
      t0.push_back(grid[i]);
      w0.push_back(r.w[i]);
    }
    if (grid[i] >= hi_start) {
      ti.push_back(grid[i]);
      wi.push_back(r.w[i]);
    }
  }
  r.tail0 = detail::classify_tail(t0, w0, true, s, cfg.criticality);
  r.tail_inf = detail::classify_tail(ti, wi, false, s, cfg.criticality);
  if (r.tail0.verdict == Verdict::fails || r.tail_inf.verdict == Verdict::fails) {
    r.verdict = Verdict::fails;
  } else if (r.tail0.verdict == Verdict::inconclusive || r.tail_inf.verdict == Verdict::inconclusive) {
    r.verdict = Verdict::inconclusive;
  } else {
    r.verdict = Verdict::holds;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Calderon-Mityagin on (l_1^n, l_inf^n).

struct MajorizationResult {
  bool holds = true;
  std::size_t violating_k = 0;  // 1-based; 0 when the check passes
};

inline MajorizationResult cm_majorization(const SeqVector& x, const SeqVector& y, double C, double tol = 0.0) {
  const std::size_t n = std::max(x.size(), y.size());
  auto xs = x.truncated(n).decreasing();
  auto ys = y.truncated(n).decreasing();
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sx += xs[k];
    sy += ys[k];
    if (sy > C * sx + tol * std::max(sy, 1.0)) return {false, k + 1};
  }
  return {true, 0};
}

/// True iff sum_{i<=k} y*_i <= C sum_{i<=k} x*_i for every k.
inline bool cm_majorization_check(const SeqVector& x, const SeqVector& y, double C) {
  return cm_majorization(x, y, C).holds;
}

using Matrix = std::vector<std::vector<double>>;

struct OperatorCheck {
  double max_column_sum = 0.0;  // ||T||_{l1 -> l1}
  double max_row_sum = 0.0;     // ||T||_{linf -> linf}
  double residual = 0.0;        // ||Tx - y||_inf
  bool ok = true;
};

inline OperatorCheck validate_operator(const Matrix& T, const SeqVector& x, const SeqVector& y, double tol = 1e-10) {
  OperatorCheck r;
  const std::size_t n = T.size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0, tx = 0.0;
    for (std::size_t j = 0; j < T[i].size(); ++j) {
      row += std::abs(T[i][j]);
      tx += T[i][j] * x[j];
    }
    r.max_row_sum = std::max(r.max_row_sum, row);
    r.residual = std::max(r.residual, std::abs(tx - y[i]));
  }
  for (std::size_t j = 0; j < (n ? T[0].size() : 0); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(T[i][j]);
    r.max_column_sum = std::max(r.max_column_sum, col);
  }
  r.ok = r.max_column_sum <= 1.0 + tol && r.max_row_sum <= 1.0 + tol && r.residual <= tol;
  return r;
}

namespace detail {

/// Decreasing order of |v| (stable on ties).
inline std::vector<std::size_t> decreasing_order(const SeqVector& v, std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(v[a]) > std::abs(v[b]); });
  return idx;
}

/// Raises the smallest entries of a decreasing vector to a common level so the
/// total reaches `target`; the result stays decreasing.
inline std::vector<double> water_fill(std::vector<double> y, double target) {
  const double deficit = target - std::accumulate(y.begin(), y.end(), 0.0);
  if (!(deficit > 0.0) || y.empty()) return y;
  const std::size_t n = y.size();
  // Find j such that the level L lies in [y_j, y_{j-1}] when filling y_j..y_{n-1}.
  double tail = 0.0;
  double level = 0.0;
  for (std::size_t cnt = 1; cnt <= n; ++cnt) {
    const std::size_t j = n - cnt;
    tail += y[j];
    level = (tail + deficit) / static_cast<double>(cnt);
    if (j == 0 || level <= y[j - 1]) {
      for (std::size_t i = j; i < n; ++i) y[i] = level;
      break;
    }
  }
  return y;
}

}  // namespace detail

/// Builds T with ||T||_{l1->l1} <= 1, ||T||_{linf->linf} <= 1 and Tx = y
/// whenever y is weakly submajorized by x.
inline Matrix cm_orbit_operator(const SeqVector& x, const SeqVector& y) {
  const std::size_t n = std::max(x.size(), y.size());
  if (x.is_zero()) throw Error(ErrorKind::invalid_argument, "x must be nonzero");
  const auto maj = cm_majorization(x, y, 1.0, 1e-13);
  if (!maj.holds) {
    throw Error(ErrorKind::majorization_failure,
                "partial sums of y* exceed those of x* at k = " + std::to_string(maj.violating_k));
  }
  const auto px = detail::decreasing_order(x, n);
  const auto py = detail::decreasing_order(y, n);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::abs(x[px[i]]);
    ys[i] = std::abs(y[py[i]]);
  }
  const auto u = detail::water_fill(ys, std::accumulate(xs.begin(), xs.end(), 0.0));
  // u majorized by xs: chain of T-transforms P with u = P xs.
  Matrix P(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) P[i][i] = 1.0;
  std::vector<double> cur = xs;
  const double scale = std::max(xs.empty() ? 0.0 : xs[0], 1e-300);
  for (std::size_t step = 0; step < 4 * n + 4; ++step) {
    std::size_t j = n;
    for (std::size_t i = n; i-- > 0;) {
      if (cur[i] > u[i] + 1e-15 * scale) {
        j = i;
        break;
      }
    }
    if (j == n) break;
    std::size_t k = n;
    for (std::size_t i = j + 1; i < n; ++i) {
      if (cur[i] < u[i] - 1e-15 * scale) {
        k = i;
        break;
      }
    }
    if (k == n) break;
    const double delta = std::min(cur[j] - u[j], u[k] - cur[k]);
    const double mix = delta / (cur[j] - cur[k]);
    // Rows j and k of P become convex combinations of each other.
    for (std::size_t c = 0; c < n; ++c) {
      const double a = P[j][c], b = P[k][c];
      P[j][c] = (1.0 - mix) * a + mix * b;
      P[k][c] = mix * a + (1.0 - mix) * b;
    }
    const double cj = cur[j], ck = cur[k];
    cur[j] = (1.0 - mix) * cj + mix * ck;
    cur[k] = mix * cj + (1.0 - mix) * ck;
  }
  Matrix T(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = u[i] > 0.0 ? std::min(1.0, ys[i] / u[i]) : 0.0;
    const double ysign = y[py[i]] < 0.0 ? -1.0 : 1.0;
    for (std::size_t l = 0; l < n; ++l) {
      const double xv = x[px[l]];
      if (xv == 0.0) continue;
      const double xsign = xv < 0.0 ? -1.0 : 1.0;
      T[py[i]][px[l]] = ysign * ratio * P[i][l] * xsign;
    }
  }
  return T;
}

}  // namespace blattice
