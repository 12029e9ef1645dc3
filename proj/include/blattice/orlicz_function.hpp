#pragma once

// Orlicz functions: convex increasing M on [0, inf) with M(0) = 0 and M(1) = 1.

#include <cstdio>
#include <string>
#include <variant>

#include "blattice/core.hpp"

namespace blattice {

/// M(t) = t^p.
struct PowerFamily {
  double p = 2.0;
};

/// M(t) = t^p (1 + log max(t, 1))^a. Pure power below t = 1, so M(1) = 1
/// without rescaling.
struct PowerLogFamily {
  double p = 2.0;
  double a = 1.0;
};

/// Piecewise linear interpolation of convex knots. The knot list always
/// starts at (0, 0) and is rescaled so that M(1) = 1.
struct TabulatedFamily {
  std::vector<std::pair<double, double>> knots;
};

using OrliczFamily = std::variant<PowerFamily, PowerLogFamily, TabulatedFamily>;

/// Range of exponents bracketing the growth of M: M(t)/t^lower is
/// nondecreasing and M(t)/t^upper is nonincreasing on the represented range.
struct ExponentBounds {
  double lower = 1.0;
  double upper = 1.0;
};

class OrliczFunction {
 public:
  OrliczFunction() : family_(PowerFamily{2.0}) {}

  static OrliczFunction power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::invalid_spec, "power Orlicz function needs finite p >= 1");
    }
    return OrliczFunction(PowerFamily{p});
  }

  static OrliczFunction power_log(double p, double a) {
    if (!(p >= 1.0) || !std::isfinite(p) || !(a >= 0.0) || !std::isfinite(a)) {
      throw Error(ErrorKind::invalid_spec, "powerlog Orlicz function needs p >= 1, a >= 0");
    }
    return OrliczFunction(PowerLogFamily{p, a});
  }

  static OrliczFunction tabulated(std::vector<std::pair<double, double>> knots) {
    return OrliczFunction(TabulatedFamily{normalize_knots(std::move(knots))});
  }

  const OrliczFamily& family() const noexcept { return family_; }

  bool is_power() const noexcept { return std::holds_alternative<PowerFamily>(family_); }

  double power_exponent() const { return std::get<PowerFamily>(family_).p; }

  std::string name() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, PowerFamily>) {
            return "power(" + fmt(f.p) + ")";
          } else if constexpr (std::is_same_v<T, PowerLogFamily>) {
            return "powerlog(" + fmt(f.p) + "," + fmt(f.a) + ")";
          } else {
            return "tabulated(" + std::to_string(f.knots.size()) + " knots)";
          }
        },
        family_);
  }

  /// Largest argument at which M is defined (inf for closed-form families).
  double domain_max() const noexcept {
    if (auto* tab = std::get_if<TabulatedFamily>(&family_)) return tab->knots.back().first;
    return kInf;
  }

  double operator()(double t) const { return evaluate(t); }

  double evaluate(double t) const {
    if (!(t >= 0.0)) throw Error(ErrorKind::invalid_argument, "Orlicz argument must be >= 0");
    if (t > domain_max()) {
      throw Error(ErrorKind::domain_overflow, "argument beyond tabulated range");
    }
    return evaluate_unchecked(t);
  }

  /// M(t), with +inf past the tabulated range. Used inside modulars, where an
  /// undefined value behaves like an infinite one.
  double evaluate_or_inf(double t) const noexcept {
    if (t > domain_max()) return kInf;
    return evaluate_unchecked(t);
  }

  /// M^{-1}(y) for y >= 0.
  double inverse(double y, double rel_tol = 1e-12) const {
    if (!(y >= 0.0)) throw Error(ErrorKind::invalid_argument, "inverse needs y >= 0");
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 1.0;
    if (!std::isfinite(y)) throw Error(ErrorKind::range_overflow, "inverse of inf");
    return std::visit(
        [&](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, PowerFamily>) {
            return std::pow(y, 1.0 / f.p);
          } else if constexpr (std::is_same_v<T, PowerLogFamily>) {
            if (y < 1.0) return std::pow(y, 1.0 / f.p);
            // M(t) >= t^p for t >= 1, so the root is below y^{1/p}.
            double hi = std::max(1.0, std::pow(y, 1.0 / f.p));
            auto g = [&](double t) { return evaluate_unchecked(t) - y; };
            return solve_bracketed(g, 1.0, hi, rel_tol);
          } else {
            const auto& k = f.knots;
            if (y > k.back().second) {
              throw Error(ErrorKind::range_overflow, "inverse beyond tabulated range");
            }
            for (std::size_t i = 1; i < k.size(); ++i) {
              if (y <= k[i].second) {
                const auto [t0, y0] = k[i - 1];
                const auto [t1, y1] = k[i];
                if (y1 == y0) return t0;
                return t0 + (y - y0) * (t1 - t0) / (y1 - y0);
              }
            }
            return k.back().first;
          }
        },
        family_);
  }

  ExponentBounds exponent_bounds() const {
    return std::visit(
        [](const auto& f) -> ExponentBounds {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, PowerFamily>) {
            return {f.p, f.p};
          } else if constexpr (std::is_same_v<T, PowerLogFamily>) {
            return {f.p, f.p + f.a};
          } else {
            // Elasticity t M'(t) / M(t) is monotone on each linear piece, so it
            // suffices to look at both ends of every segment.
            ExponentBounds b{kInf, 0.0};
            const auto& k = f.knots;
            for (std::size_t i = 1; i < k.size(); ++i) {
              const auto [t0, y0] = k[i - 1];
              const auto [t1, y1] = k[i];
              const double slope = (y1 - y0) / (t1 - t0);
              for (auto [t, y] : {std::pair{t0, y0}, std::pair{t1, y1}}) {
                double e = 1.0;
                if (y > 0.0) {
                  e = t * slope / y;
                } else if (t > 0.0 || slope == 0.0) {
                  continue;
                }
                b.lower = std::min(b.lower, e);
                b.upper = std::max(b.upper, e);
              }
            }
            b.lower = std::max(1.0, b.lower);
            b.upper = std::max(b.upper, b.lower);
            return b;
          }
        },
        family_);
  }

 private:
  explicit OrliczFunction(OrliczFamily f) : family_(std::move(f)) {}

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

  double evaluate_unchecked(double t) const noexcept {
    if (t == 0.0) return 0.0;
    return std::visit(
        [t](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, PowerFamily>) {
            return std::pow(t, f.p);
          } else if constexpr (std::is_same_v<T, PowerLogFamily>) {
            const double base = std::pow(t, f.p);
            if (t <= 1.0 || f.a == 0.0) return base;
            return base * std::pow(1.0 + std::log(t), f.a);
          } else {
            const auto& k = f.knots;
            auto it = std::lower_bound(k.begin(), k.end(), t,
                                       [](const auto& knot, double v) { return knot.first < v; });
            if (it == k.end()) return kInf;
            if (it->first == t) return it->second;
            const auto [t1, y1] = *it;
            const auto [t0, y0] = *(it - 1);
            return y0 + (t - t0) * (y1 - y0) / (t1 - t0);
          }
        },
        family_);
  }

  static std::vector<std::pair<double, double>> normalize_knots(
      std::vector<std::pair<double, double>> knots) {
    std::sort(knots.begin(), knots.end());
    if (knots.empty() || knots.front().first != 0.0) knots.insert(knots.begin(), {0.0, 0.0});
    if (knots.front().second != 0.0) {
      throw Error(ErrorKind::invalid_spec, "tabulated Orlicz function must vanish at 0");
    }
    for (std::size_t i = 1; i < knots.size(); ++i) {
      if (!(knots[i].first > knots[i - 1].first) || !std::isfinite(knots[i].second)) {
        throw Error(ErrorKind::invalid_spec, "tabulated knots need distinct finite abscissae");
      }
    }
    if (knots.back().first < 1.0) {
      throw Error(ErrorKind::invalid_spec, "tabulated range must reach t = 1");
    }
    // Interpolated M(1), then rescale.
    double m1 = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
      if (knots[i].first >= 1.0) {
        const auto [t0, y0] = knots[i - 1];
        const auto [t1, y1] = knots[i];
        m1 = y0 + (1.0 - t0) * (y1 - y0) / (t1 - t0);
        break;
      }
    }
    if (!(m1 > 0.0)) throw Error(ErrorKind::invalid_spec, "tabulated M(1) must be positive");
    for (auto& k : knots) k.second /= m1;
    double prev_slope = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
      const double slope =
          (knots[i].second - knots[i - 1].second) / (knots[i].first - knots[i - 1].first);
      if (slope < -1e-10 || slope < prev_slope - 1e-10 * std::max(1.0, std::abs(prev_slope))) {
        throw Error(ErrorKind::invalid_spec, "tabulated knots are not convex nondecreasing");
      }
      prev_slope = slope;
    }
    return knots;
  }

  OrliczFamily family_;
};

}  // namespace blattice
