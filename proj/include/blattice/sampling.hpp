#pragma once

// Seeded random inputs shared by the verification suite, the acceptance
// runner and the tests.

#include <random>

#include "blattice/blattice.hpp"

namespace blattice::sampling {

using Rng = std::mt19937_64;

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 3.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = u(rng);
    if (x == 0.0) x = 1.0;
  }
  return v;
}

inline std::size_t random_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Step function with 1..max_atoms atoms and total measure in [0.2, total].
inline StepFunction random_step(Rng& rng, std::size_t max_atoms = 5, double total = 1.0) {
  const std::size_t k = random_size(rng, 1, max_atoms);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<double> ws(k);
  double s = 0.0;
  for (auto& x : ws) s += (x = w(rng));
  const double mass = total * std::uniform_real_distribution<double>(0.2, 1.0)(rng);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < k; ++i) {
    double v = val(rng);
    if (v == 0.0) v = 1.0;
    atoms.push_back({v, ws[i] / s * mass * (1.0 - 1e-12)});
  }
  return StepFunction(std::move(atoms));
}

/// `count` step functions laid out on disjoint subintervals of [0,1].
inline std::vector<PlacedStep> random_disjoint_steps(Rng& rng, std::size_t count, std::size_t max_atoms = 4) {
  std::vector<PlacedStep> out;
  const double slot = 1.0 / static_cast<double>(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(PlacedStep::place(random_step(rng, max_atoms, slot * 0.999), slot * static_cast<double>(k)));
  }
  return out;
}

/// n x n matrix with every row and column absolute sum <= 1.
inline Matrix random_substochastic(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution flip(0.3);
  Matrix T(n, std::vector<double>(n));
  for (auto& row : T) {
    for (auto& x : row) x = u(rng) * (flip(rng) ? -1.0 : 1.0);
  }
  // Rows first, then columns; dividing a column never raises a row sum.
  for (auto& row : T) {
    double s = 0.0;
    for (double x : row) s += std::abs(x);
    if (s > 1.0) {
      for (auto& x : row) x /= s;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(T[i][j]);
    if (s > 1.0) {
      for (std::size_t i = 0; i < n; ++i) T[i][j] /= s;
    }
  }
  const double shrink = 0.5 + 0.5 * u(rng);
  for (auto& row : T) {
    for (auto& x : row) x *= shrink;
  }
  return T;
}

inline std::vector<double> apply(const Matrix& T, std::span<const double> x) {
  std::vector<double> y(T.size(), 0.0);
  for (std::size_t i = 0; i < T.size(); ++i) {
    for (std::size_t j = 0; j < x.size() && j < T[i].size(); ++j) y[i] += T[i][j] * x[j];
  }
  return y;
}

}  // namespace blattice::sampling
