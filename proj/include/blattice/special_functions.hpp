#pragma once

// Young conjugates, Delta_2 constants, dilation functions and fundamental
// functions.

#include "blattice/lattice_spec.hpp"
#include "blattice/rearrangement.hpp"

namespace blattice {

struct ConjugateValue {
  double value = 0.0;
  double argmax = 0.0;
  bool diverged = false;
};

/// sup_{t >= 0} (u t - f(t)) for a convex f with f(0) = 0. The maximizer is
/// bracketed by doubling; if it runs past `t_cap` the supremum is reported as
/// divergent.
template <class F>
ConjugateValue legendre_conjugate(F&& f, double u, double t_cap = 1e12, double domain_max = kInf) {
  if (!(u >= 0.0)) throw Error(ErrorKind::invalid_argument, "conjugate needs u >= 0");
  if (u == 0.0) return {0.0, 0.0, false};
  auto g = [&](double t) { return u * t - f(t); };
  double hi = std::min(1.0, domain_max);
  double ghi = g(hi);
  while (hi < domain_max) {
    const double next = std::min(2.0 * hi, domain_max);
    const double gnext = g(next);
    if (!(gnext > ghi)) break;
    hi = next;
    ghi = gnext;
    if (hi > t_cap) return {kInf, hi, true};
  }
  const double upper = std::min(2.0 * hi, domain_max);
  auto [t, negv] = minimize_scalar([&](double x) { return -g(x); }, 0.0, upper, 30, 300);
  double best = -negv;
  double arg = t;
  for (double cand : {0.0, hi, upper}) {
    const double v = g(cand);
    if (v > best) {
      best = v;
      arg = cand;
    }
  }
  return {std::max(best, 0.0), arg, false};
}

/// Young conjugate of an Orlicz function.
inline ConjugateValue young_conjugate(const OrliczFunction& M, double u, double t_cap = 1e12) {
  if (!(u >= 0.0)) throw Error(ErrorKind::invalid_argument, "conjugate needs u >= 0");
  if (auto* pw = std::get_if<PowerFamily>(&M.family())) {
    const double p = pw->p;
    if (p == 1.0) {
      if (u <= 1.0) return {0.0, 0.0, false};
      return {kInf, kInf, true};
    }
    const double t = std::pow(u / p, 1.0 / (p - 1.0));
    return {(p - 1.0) * std::pow(u / p, p / (p - 1.0)), t, false};
  }
  return legendre_conjugate([&](double t) { return M.evaluate_or_inf(t); }, u, t_cap, M.domain_max());
}

struct Delta2Report {
  double constant_K = 1.0;
  double range_lo = 1.0;
  double range_hi = 1.0;
  double argmax = 1.0;
  bool satisfied = true;
  double cap = 1e6;
};

/// Empirical sup of M(2u)/M(u) over a log grid on [1, u_max].
inline Delta2Report delta2_constant(const OrliczFunction& M, double u_max, std::size_t points = 10000,
                                    double cap = 1e6) {
  if (!(u_max >= 1.0)) throw Error(ErrorKind::invalid_argument, "u_max must be >= 1");
  Delta2Report r;
  r.cap = cap;
  r.range_hi = std::min(u_max, M.domain_max() / 2.0);
  if (r.range_hi < 1.0) throw Error(ErrorKind::domain_overflow, "tabulated range too short for M(2u)");
  r.constant_K = 0.0;
  for (double u : log_grid(1.0, r.range_hi, points)) {
    const double ratio = M.evaluate(2.0 * u) / M.evaluate(u);
    if (ratio > r.constant_K) {
      r.constant_K = ratio;
      r.argmax = u;
    }
  }
  r.satisfied = std::isfinite(r.constant_K) && r.constant_K < cap;
  return r;
}

struct DilationResult {
  double value = 1.0;
  double argmax = 1.0;
  bool truncated = false;
};

/// Phi_g(u) = sup_{v >= max(1, 1/u)} g(vu) / g(v), truncated at v_max.
template <class G>
DilationResult dilation_function(G&& g, double u, double v_max = 1e6, std::size_t points = 2000) {
  if (!(u > 0.0)) throw Error(ErrorKind::invalid_argument, "dilation needs u > 0");
  if (u == 1.0) return {1.0, 1.0, false};
  const double v_min = std::max(1.0, 1.0 / u);
  if (v_max <= v_min) v_max = v_min * 10.0;
  const auto grid = log_grid(v_min, v_max, points);
  std::vector<double> vals(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = g(grid[i] * u) / g(grid[i]);
    if (vals[i] > vals[best]) best = i;
  }
  DilationResult r{vals[best], grid[best], false};
  if (best + 1 == grid.size()) {
    r.truncated = vals[best] > vals[best - 1] * (1.0 + 1e-12);
    return r;
  }
  const std::size_t lo = best == 0 ? 0 : best - 1;
  const std::size_t hi = best + 1;
  auto neg = [&](double s) {
    const double v = std::exp(s);
    return -g(v * u) / g(v);
  };
  auto [s, nv] = minimize_scalar(neg, std::log(grid[lo]), std::log(grid[hi]), 40, 200);
  if (-nv > r.value) {
    r.value = -nv;
    r.argmax = std::exp(s);
  }
  return r;
}

/// phi_X(t): norm of a characteristic function of measure t (function hosts)
/// or of the sum of t unit vectors (sequence hosts, t a positive integer).
inline double fundamental_function(const LatticeSpec& spec, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "fundamental function needs t > 0");
  auto need_unit = [&] {
    if (t > 1.0 + kMeasureSlack) throw Error(ErrorKind::invalid_argument, "measure must lie in (0,1]");
  };
  auto need_integer = [&] {
    if (std::abs(t - std::round(t)) > 1e-12) {
      throw Error(ErrorKind::invalid_argument, "sequence hosts need an integer count");
    }
  };
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, OrliczFnSpec>) {
          need_unit();
          return 1.0 / k.M.inverse(1.0 / std::min(t, 1.0));
        } else if constexpr (std::is_same_v<T, LorentzSpec>) {
          need_unit();
          // (q/p) ∫_0^t s^{q/p-1} ds = t^{q/p}.
          return std::pow(std::pow(std::min(t, 1.0), k.q / k.p), 1.0 / k.q);
        } else if constexpr (std::is_same_v<T, LpSpec>) {
          need_integer();
          return std::isinf(k.p) ? 1.0 : std::pow(std::round(t), 1.0 / k.p);
        } else if constexpr (std::is_same_v<T, C0Spec>) {
          need_integer();
          return 1.0;
        } else if constexpr (std::is_same_v<T, OrliczSeqSpec>) {
          need_integer();
          return 1.0 / k.psi.inverse(1.0 / std::round(t));
        } else {
          throw Error(ErrorKind::invalid_spec, "weighted lp has no fundamental function");
        }
      },
      spec.kind());
}

/// phi_{L_M}^{-1}(v) = 1 / M(1/v).
inline double fundamental_inverse(const OrliczFunction& M, double v) {
  if (!(v > 0.0)) throw Error(ErrorKind::invalid_argument, "fundamental inverse needs v > 0");
  return 1.0 / M.evaluate(1.0 / v);
}

/// Phi_M(u) = sup_{v >= max(1, 1/u)} M(uv) / M(v), the dilation function of M.
inline DilationResult orlicz_dilation(const OrliczFunction& M, double u, double v_max = 1e6,
                                      std::size_t points = 400) {
  if (M.is_power()) return {std::pow(u, M.power_exponent()), 1.0, false};
  const double top = std::min(v_max, M.domain_max() / std::max(u, 1.0));
  return dilation_function([&](double v) { return M.evaluate(v); }, u, top, points);
}

struct PowerIndexReport {
  double p_M = 1.0;
  double constant_at_p = 1.0;
  double range = 1e3;
  double constant_cap = 1e3;
};

namespace detail {

/// sup of M(w) / (u^p M(w/u)) over u in [1/R, 1], w in [1, R].
inline double power_index_constant(const OrliczFunction& M, double p, double R, std::size_t pts = 48) {
  double best = 0.0;
  const auto us = log_grid(1.0 / R, 1.0, pts);
  const auto ws = log_grid(1.0, R, pts);
  for (double u : us) {
    for (double w : ws) {
      const double denom = std::pow(u, p) * M.evaluate_or_inf(w / u);
      if (!(denom > 0.0) || !std::isfinite(denom)) continue;
      best = std::max(best, M.evaluate_or_inf(w) / denom);
    }
  }
  return best;
}

}  // namespace detail

/// Largest p with M(uv) <= C u^p M(v) for 0 < u <= 1, uv >= 1. Feasibility
/// needs C <= cap on the window R and no growth of C from window R to R^2;
/// p is bisected to `tol`.
inline PowerIndexReport power_index(const OrliczFunction& M, double R = 1e3, double cap = 1e3,
                                    double tol = 1e-3) {
  R = std::min(R, std::sqrt(M.domain_max()));
  auto feasible = [&](double p) {
    const double c1 = detail::power_index_constant(M, p, R);
    const double c2 = detail::power_index_constant(M, p, R * R);
    return c1 <= cap && c2 <= cap && c2 <= c1 * 1.05;
  };
  PowerIndexReport r;
  r.range = R;
  r.constant_cap = cap;
  double lo = 1.0;
  if (!feasible(lo)) return r;
  double hi = M.exponent_bounds().upper + 1.0;
  while (feasible(hi) && hi < 64.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.p_M = lo;
  r.constant_at_p = detail::power_index_constant(M, lo, R);
  return r;
}

}  // namespace blattice
