#pragma once

// Multi-start coordinate search over measure vectors m with m_k > 0 and
// sum m_k <= 1, parametrized by log m_k.

#include <future>
#include <random>

#include "blattice/core.hpp"

namespace blattice {

struct OptimizerConfig {
  int starts = 16;
  std::uint64_t seed = 20240917;
  double m_min = 1e-12;
  double rel_improvement = 1e-6;
  int max_sweeps = 60;
  int scan_points = 10;
  int brent_bits = 30;
  bool parallel = true;
};

struct SimplexResult {
  double value = 0.0;
  std::vector<double> m;
  std::size_t iterations = 0;
  int best_start = 0;
};

namespace detail {

inline std::vector<double> simplex_start(std::size_t n, int index, std::uint64_t seed, double m_min) {
  std::vector<double> m(n);
  const double dn = static_cast<double>(n);
  switch (index) {
    case 0:
      std::fill(m.begin(), m.end(), 1.0 / dn);
      break;
    case 1:
      for (std::size_t k = 0; k < n; ++k) m[k] = std::ldexp(1.0, -static_cast<int>(k) - 1);
      break;
    case 2:
      for (std::size_t k = 0; k < n; ++k) m[k] = std::ldexp(1.0, -static_cast<int>(n - k));
      break;
    case 3:
      for (std::size_t k = 0; k < n; ++k) m[k] = 0.9 * std::pow(1e-2, static_cast<double>(k));
      break;
    default: {
      std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index));
      std::uniform_real_distribution<double> logscale(-10.0, 0.0);
      std::uniform_real_distribution<double> total(0.3, 1.0);
      double s = 0.0;
      for (auto& v : m) {
        v = std::exp(logscale(rng));
        s += v;
      }
      const double t = total(rng);
      for (auto& v : m) v *= t / s;
    }
  }
  double s = 0.0;
  for (auto& v : m) {
    v = std::max(v, m_min);
    s += v;
  }
  if (s > 1.0) {
    for (auto& v : m) v /= s;
  }
  return m;
}

template <class F>
SimplexResult coordinate_search(std::size_t n, F& objective, bool maximize, std::vector<double> m,
                                const OptimizerConfig& cfg) {
  const double sign = maximize ? -1.0 : 1.0;
  std::size_t evals = 0;
  auto loss = [&](const std::vector<double>& x) {
    ++evals;
    return sign * objective(std::span<const double>(x));
  };
  double current = loss(m);
  std::vector<double> trial = m;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const double before = current;
    for (std::size_t k = 0; k < n; ++k) {
      double others = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) others += m[j];
      }
      const double lo = std::log(cfg.m_min);
      const double hi = std::log(std::max(1.0 - others, cfg.m_min));
      if (!(hi > lo)) continue;
      trial = m;
      auto along = [&](double s) {
        trial[k] = std::exp(s);
        return loss(trial);
      };
      // Coarse scan, then Brent between the neighbours of the best point.
      const int pts = std::max(cfg.scan_points, 3);
      double best_s = std::log(m[k]);
      double best_v = current;
      int best_i = -1;
      std::vector<double> ss(pts);
      for (int i = 0; i < pts; ++i) {
        ss[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(pts - 1);
        const double v = along(ss[i]);
        if (v < best_v) {
          best_v = v;
          best_s = ss[i];
          best_i = i;
        }
      }
      double a = lo, b = hi;
      if (best_i >= 0) {
        a = ss[std::max(best_i - 1, 0)];
        b = ss[std::min(best_i + 1, pts - 1)];
      } else {
        const double step = (hi - lo) / static_cast<double>(pts - 1);
        a = std::max(lo, best_s - step);
        b = std::min(hi, best_s + step);
      }
      if (b > a) {
        std::uintmax_t iters = 100;
        auto r = boost::math::tools::brent_find_minima(along, a, b, cfg.brent_bits, iters);
        if (r.second < best_v) {
          best_v = r.second;
          best_s = r.first;
        }
      }
      if (best_v < current) {
        m[k] = std::exp(best_s);
        current = best_v;
      }
    }
    const double gain = before - current;
    if (!(gain > cfg.rel_improvement * std::max(std::abs(current), 1e-300))) break;
  }
  return {sign * current, std::move(m), evals, 0};
}

}  // namespace detail

/// Maximizes (or minimizes) objective(m) over the measure simplex. Starts are
/// independent; the reduction runs in start order, so the result is the same
/// whether or not starts run concurrently.
template <class F>
SimplexResult optimize_simplex(std::size_t n, F objective, bool maximize, const OptimizerConfig& cfg) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "empty measure vector");
  const int starts = std::max(cfg.starts, 1);
  std::vector<SimplexResult> results(static_cast<std::size_t>(starts));
  auto run = [&, objective](int s) mutable {
    auto m0 = detail::simplex_start(n, s, cfg.seed, cfg.m_min);
    return detail::coordinate_search(n, objective, maximize, std::move(m0), cfg);
  };
  if (cfg.parallel && starts > 1) {
    std::vector<std::future<SimplexResult>> futs;
    futs.reserve(results.size());
    for (int s = 0; s < starts; ++s) futs.push_back(std::async(std::launch::async, run, s));
    for (int s = 0; s < starts; ++s) results[static_cast<std::size_t>(s)] = futs[static_cast<std::size_t>(s)].get();
  } else {
    for (int s = 0; s < starts; ++s) results[static_cast<std::size_t>(s)] = run(s);
  }
  SimplexResult best = results.front();
  std::size_t total = results.front().iterations;
  for (int s = 1; s < starts; ++s) {
    const auto& r = results[static_cast<std::size_t>(s)];
    total += r.iterations;
    if (maximize ? r.value > best.value : r.value < best.value) {
      best = r;
      best.best_start = s;
    }
  }
  best.iterations = total;
  return best;
}

}  // namespace blattice
