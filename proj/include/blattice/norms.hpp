#pragma once

// Norm evaluators for the concrete host lattices.

#include "blattice/lattice_spec.hpp"
#include "blattice/rearrangement.hpp"

namespace blattice {

inline double weighted_lp_norm(std::span<const double> a, double p, std::span<const double> w) {
  if (w.size() < a.size()) throw Error(ErrorKind::invalid_argument, "fewer weights than coordinates");
  std::vector<double> scaled(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(w[i] > 0.0)) throw Error(ErrorKind::invalid_argument, "weights must be positive");
    scaled[i] = a[i] * w[i];
  }
  return lp_norm(scaled, p);
}

/// inf{lambda > 0 : sum psi(|a_k| / lambda) <= 1} for any Orlicz-type callable
/// psi with psi(1) = 1 (so that ||e_k|| = 1).
template <class Psi>
double orlicz_seq_norm(std::span<const double> a, Psi&& psi, double rel_tol = 1e-10) {
  double sup = 0.0, l1 = 0.0;
  for (double v : a) {
    sup = std::max(sup, std::abs(v));
    l1 += std::abs(v);
  }
  if (sup == 0.0) return 0.0;
  auto modular = [&](double lambda) {
    double s = 0.0;
    for (double v : a) {
      if (v != 0.0) s += psi(std::abs(v) / lambda);
    }
    return s;
  };
  return luxemburg_solve(modular, sup, l1, rel_tol);
}

/// Luxemburg norm of a step function on [0,1]. Atoms are put in canonical
/// order first so that the result does not depend on their listing.
inline double luxemburg_norm(const StepFunction& g, const OrliczFunction& M, double rel_tol = 1e-10) {
  const StepFunction f = g.abs().canonical();
  double sup = 0.0, l1 = 0.0;
  for (const auto& a : f.atoms()) {
    sup = std::max(sup, std::abs(a.value));
    l1 += std::abs(a.value) * a.measure;
  }
  if (sup == 0.0) return 0.0;
  if (M.is_power()) {
    const double p = M.power_exponent();
    double acc = 0.0;
    for (const auto& a : f.atoms()) acc += std::pow(std::abs(a.value) / sup, p) * a.measure;
    return sup * std::pow(acc, 1.0 / p);
  }
  auto modular = [&](double lambda) {
    double s = 0.0;
    for (const auto& a : f.atoms()) {
      if (a.value != 0.0) s += M.evaluate_or_inf(std::abs(a.value) / lambda) * a.measure;
    }
    return s;
  };
  return luxemburg_solve(modular, l1, sup, rel_tol);
}

/// Luxemburg modular sum M(|v|/lambda) m.
inline double luxemburg_modular(const StepFunction& f, const OrliczFunction& M, double lambda) {
  double s = 0.0;
  for (const auto& a : f.atoms()) {
    if (a.value != 0.0) s += M.evaluate_or_inf(std::abs(a.value) / lambda) * a.measure;
  }
  return s;
}

/// Lorentz functional (q/p ∫ (t^{1/p} f*(t))^q dt/t)^{1/q}, evaluated exactly
/// over the step rearrangement.
inline double lorentz_norm(const StepFunction& f, double p, double q) {
  if (!(p > 1.0) || !std::isfinite(p) || !(q >= 1.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::invalid_spec, "lorentz needs 1 < p < inf, 1 <= q < inf");
  }
  const auto r = decreasing_rearrangement(f);
  if (r.atoms().empty()) return 0.0;
  const double peak = r.atoms().front().value;
  const double e = q / p;
  double acc = 0.0;
  double prev = 0.0;
  double at = 0.0;
  for (const auto& a : r.atoms()) {
    at += a.measure;
    const double cur = std::pow(at, e);
    acc += std::pow(a.value / peak, q) * (cur - prev);
    prev = cur;
  }
  return peak * std::pow(acc, 1.0 / q);
}

/// Constant C in ||f + g|| <= C (||f|| + ||g||) for the Lorentz functional.
inline double lorentz_quasi_constant(double p, double q) { return q <= p ? 1.0 : p / (p - 1.0); }

/// Musielak-Orlicz norm inf{lambda : sum M(|a_k| beta_k / lambda) / M(beta_k) <= 1}.
inline double musielak_norm_raw(std::span<const double> a, std::span<const double> betas, const OrliczFunction& M,
                                double rel_tol = 1e-10) {
  if (a.size() > betas.size()) throw Error(ErrorKind::invalid_argument, "more coordinates than betas");
  double sup = 0.0, l1 = 0.0;
  for (double v : a) {
    sup = std::max(sup, std::abs(v));
    l1 += std::abs(v);
  }
  if (sup == 0.0) return 0.0;
  std::vector<double> mb(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) mb[k] = M.evaluate(betas[k]);
  auto modular = [&](double lambda) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] != 0.0) s += M.evaluate_or_inf(std::abs(a[k]) * betas[k] / lambda) / mb[k];
    }
    return s;
  };
  return luxemburg_solve(modular, sup, l1, rel_tol);
}

inline double musielak_norm(const SeqVector& a, const BetaSequence& beta, const OrliczFunction& M,
                            double rel_tol = 1e-10) {
  return musielak_norm_raw(a.entries(), beta.betas(), M, rel_tol);
}

/// Norm of a finite sequence in a sequence host.
inline double seq_norm(std::span<const double> a, const LatticeSpec& spec) {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LpSpec>) {
          return lp_norm(a, k.p);
        } else if constexpr (std::is_same_v<T, C0Spec>) {
          return lp_norm(a, kInf);
        } else if constexpr (std::is_same_v<T, WeightedLpSpec>) {
          return weighted_lp_norm(a, k.p, k.weights);
        } else if constexpr (std::is_same_v<T, OrliczSeqSpec>) {
          if (k.psi.is_power()) return lp_norm(a, k.psi.power_exponent());
          std::vector<double> sorted(a.begin(), a.end());
          for (auto& v : sorted) v = std::abs(v);
          std::sort(sorted.begin(), sorted.end(), std::greater<>());
          return orlicz_seq_norm(sorted, [&](double t) { return k.psi.evaluate_or_inf(t); });
        } else {
          throw Error(ErrorKind::invalid_spec, "function-space host given a sequence");
        }
      },
      spec.kind());
}

inline double seq_norm(const SeqVector& a, const LatticeSpec& spec) { return seq_norm(a.entries(), spec); }

/// Norm of a step function in a function host on [0,1].
inline double function_norm(const StepFunction& f, const LatticeSpec& spec) {
  if (auto* o = std::get_if<OrliczFnSpec>(&spec.kind())) return luxemburg_norm(f, o->M);
  if (auto* l = std::get_if<LorentzSpec>(&spec.kind())) return lorentz_norm(f, l->p, l->q);
  throw Error(ErrorKind::invalid_spec, "sequence host given a step function");
}

}  // namespace blattice
