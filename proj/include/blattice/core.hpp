#pragma once

// Shared error type, exponent arithmetic and scalar solvers used by every
// module of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace blattice {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorKind {
  domain_overflow,
  range_overflow,
  invalid_spec,
  unsupported_host,
  unsupported_couple,
  cap_exceeded,
  delta2_violation,
  majorization_failure,
  zero_denominator,
  invalid_family,
  unknown_check_id,
  io_failure,
  invalid_argument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain_overflow: return "domain-overflow";
    case ErrorKind::range_overflow: return "range-overflow";
    case ErrorKind::invalid_spec: return "invalid-spec";
    case ErrorKind::unsupported_host: return "unsupported-host";
    case ErrorKind::unsupported_couple: return "unsupported-couple";
    case ErrorKind::cap_exceeded: return "cap-exceeded";
    case ErrorKind::delta2_violation: return "delta2-violation";
    case ErrorKind::majorization_failure: return "majorization-failure";
    case ErrorKind::zero_denominator: return "zero-denominator";
    case ErrorKind::invalid_family: return "invalid-family";
    case ErrorKind::unknown_check_id: return "unknown-check-id";
    case ErrorKind::io_failure: return "io-failure";
    case ErrorKind::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// 1/p with the convention 1/inf = 0.
inline double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

/// Inverse of `reciprocal`: 1/r with 1/0 = inf.
inline double from_reciprocal(double r) { return r <= 0.0 ? kInf : 1.0 / r; }

/// Numerical tolerances shared across modules. All of them are overridable
/// from a run configuration.
struct Tolerances {
  double root_rel = 1e-12;
  double optimize_rel = 1e-8;
  double luxemburg_rel = 1e-10;
};

/// Finite ℓ_p norm of a span, p in [1, inf]. Scaled by the max entry to avoid
/// overflow for large p.
inline double lp_norm(std::span<const double> a, double p) {
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  if (std::isinf(p)) return peak;
  double acc = 0.0;
  for (double v : a) acc += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(acc, 1.0 / p);
}

namespace detail {

/// Bit budget for Boost's TOMS748 stopping rule given a relative tolerance.
inline int bits_for(double rel) {
  int bits = static_cast<int>(std::ceil(-std::log2(std::max(rel, 1e-16)))) + 2;
  return std::clamp(bits, 8, std::numeric_limits<double>::digits);
}

}  // namespace detail

/// Root of a monotone function on [lo, hi] where f(lo), f(hi) have opposite
/// signs (or one of them is zero).
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double rel_tol, std::uintmax_t max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw Error(ErrorKind::range_overflow, "root is not bracketed");
  }
  boost::math::tools::eps_tolerance<double> tol(detail::bits_for(rel_tol));
  std::uintmax_t iters = max_iter;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (a + b);
}

/// Value of the decreasing-in-lambda modular crossing: the smallest lambda > 0
/// with modular(lambda) <= 1. `modular` must be nonincreasing in lambda and may
/// return +inf. `guess_lo`, `guess_hi` are initial bracket guesses that get
/// expanded geometrically.
template <class Modular>
double luxemburg_solve(Modular&& modular, double guess_lo, double guess_hi, double rel_tol) {
  double lo = guess_lo > 0.0 && std::isfinite(guess_lo) ? guess_lo : 1.0;
  double hi = guess_hi > 0.0 && std::isfinite(guess_hi) ? guess_hi : 1.0;
  if (lo > hi) std::swap(lo, hi);
  // Work in log-lambda; cap infinities so the bracketing solver sees finite values.
  auto g = [&](double s) {
    double v = modular(std::exp(s));
    if (!std::isfinite(v)) v = 1e300;
    return v - 1.0;
  };
  double s_lo = std::log(lo), s_hi = std::log(hi);
  for (int i = 0; i < 2000 && !(g(s_lo) > 0.0); ++i) s_lo -= std::log(2.0);
  for (int i = 0; i < 2000 && g(s_hi) > 0.0; ++i) s_hi += std::log(2.0);
  if (!(g(s_lo) > 0.0) || g(s_hi) > 0.0) {
    throw Error(ErrorKind::range_overflow, "could not bracket Luxemburg level");
  }
  double s = solve_bracketed(g, s_lo, s_hi, rel_tol * 1e-2);
  double lambda = std::exp(s);
  // Return the admissible side of the crossing.
  if (modular(lambda) > 1.0 + 1e-14) {
    double step = lambda * rel_tol * 1e-2;
    for (int i = 0; i < 60 && modular(lambda) > 1.0 + 1e-14; ++i) {
      lambda += step;
      step *= 2.0;
    }
  }
  return lambda;
}

/// Minimum of a unimodal function on [lo, hi]; returns {argmin, value}.
template <class F>
std::pair<double, double> minimize_scalar(F&& f, double lo, double hi, int bits = 40,
                                          std::uintmax_t max_iter = 200) {
  std::uintmax_t iters = max_iter;
  auto r = boost::math::tools::brent_find_minima(f, lo, hi, bits, iters);
  return {r.first, r.second};
}

/// Least-squares slope of y against x.
inline double regression_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

/// Log-spaced grid of `count` points on [lo, hi] (both > 0).
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1 || lo == hi) return {lo};
  out.reserve(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(std::exp(t));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// Relative comparison with an absolute floor.
inline bool approx_le(double a, double b, double rel, double abs_floor = 0.0) {
  return a <= b + rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace blattice
