#pragma once

// Step functions on [0,1], finite sequences, distribution functions and
// non-increasing rearrangements.

#include <map>

#include "blattice/core.hpp"

namespace blattice {

inline constexpr double kMeasureSlack = 1e-12;

/// A finite real sequence. Entries past `size()` are zero.
class SeqVector {
 public:
  SeqVector() = default;
  SeqVector(std::initializer_list<double> v) : entries_(v) { validate(); }
  explicit SeqVector(std::vector<double> v) : entries_(std::move(v)) { validate(); }

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return i < entries_.size() ? entries_[i] : 0.0; }
  std::span<const double> entries() const noexcept { return entries_; }
  std::vector<double>& mutable_entries() noexcept { return entries_; }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i] != 0.0) out.push_back(i);
    }
    return out;
  }

  bool is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == 0.0; });
  }

  /// |a| sorted non-increasingly.
  std::vector<double> decreasing() const {
    std::vector<double> out(entries_.size());
    std::transform(entries_.begin(), entries_.end(), out.begin(), [](double v) { return std::abs(v); });
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }

  /// First n coordinates (zero padded).
  SeqVector truncated(std::size_t n) const {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < std::min(n, entries_.size()); ++i) out[i] = entries_[i];
    return SeqVector(std::move(out));
  }

  friend bool operator==(const SeqVector&, const SeqVector&) = default;

 private:
  void validate() const {
    for (double v : entries_) {
      if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "sequence entries must be finite");
    }
  }

  std::vector<double> entries_;
};

struct Atom {
  double value = 0.0;
  double measure = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely-valued function on [0,1] described by its (value, measure) atoms.
/// Location is irrelevant for every rearrangement-invariant quantity; see
/// `PlacedStep` when disjointness has to be tracked.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::initializer_list<Atom> atoms) : atoms_(atoms) { validate(); }
  explicit StepFunction(std::vector<Atom> atoms) : atoms_(std::move(atoms)) { validate(); }

  std::span<const Atom> atoms() const noexcept { return atoms_; }

  double support_measure() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) {
      if (a.value != 0.0) m += a.measure;
    }
    return m;
  }

  double total_measure() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.measure;
    return m;
  }

  double max_abs() const noexcept {
    double v = 0.0;
    for (const auto& a : atoms_) v = std::max(v, std::abs(a.value));
    return v;
  }

  bool is_zero() const noexcept { return max_abs() == 0.0; }

  /// Sorted by decreasing |value|, zero atoms dropped, equal values merged.
  StepFunction canonical() const {
    std::vector<Atom> out;
    for (const auto& a : atoms_) {
      if (a.value != 0.0) out.push_back(a);
    }
    std::stable_sort(out.begin(), out.end(), [](const Atom& x, const Atom& y) {
      if (std::abs(x.value) != std::abs(y.value)) return std::abs(x.value) > std::abs(y.value);
      return x.value > y.value;
    });
    std::vector<Atom> merged;
    for (const auto& a : out) {
      if (!merged.empty() && merged.back().value == a.value) {
        merged.back().measure += a.measure;
      } else {
        merged.push_back(a);
      }
    }
    return StepFunction(std::move(merged));
  }

  StepFunction scaled(double c) const {
    std::vector<Atom> out(atoms_.begin(), atoms_.end());
    for (auto& a : out) a.value *= c;
    return StepFunction(std::move(out));
  }

  StepFunction abs() const {
    std::vector<Atom> out(atoms_.begin(), atoms_.end());
    for (auto& a : out) a.value = std::abs(a.value);
    return StepFunction(std::move(out));
  }

  /// Disjoint union: atoms of both functions, total measure must stay <= 1.
  StepFunction disjoint_sum(const StepFunction& other) const {
    std::vector<Atom> out(atoms_.begin(), atoms_.end());
    out.insert(out.end(), other.atoms_.begin(), other.atoms_.end());
    return StepFunction(std::move(out));
  }

  double integral_abs() const noexcept {
    double s = 0.0;
    for (const auto& a : atoms_) s += std::abs(a.value) * a.measure;
    return s;
  }

 private:
  void validate() const {
    double total = 0.0;
    for (const auto& a : atoms_) {
      if (!std::isfinite(a.value)) throw Error(ErrorKind::invalid_argument, "atom value must be finite");
      if (!(a.measure > 0.0) || !std::isfinite(a.measure)) {
        throw Error(ErrorKind::invalid_argument, "atom measures must be positive");
      }
      total += a.measure;
    }
    if (total > 1.0 + kMeasureSlack) {
      throw Error(ErrorKind::invalid_argument, "step function exceeds the unit interval");
    }
  }

  std::vector<Atom> atoms_;
};

/// Constant piece of a placed step function: value on [lo, hi).
struct Cell {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;

  double length() const noexcept { return hi - lo; }
};

/// Step function with explicit location on [0,1], so that supports of
/// different functions can be compared.
class PlacedStep {
 public:
  PlacedStep() = default;
  explicit PlacedStep(std::vector<Cell> cells) : cells_(std::move(cells)) {
    for (const auto& c : cells_) {
      if (!(c.lo >= -kMeasureSlack) || !(c.hi <= 1.0 + kMeasureSlack) || !(c.hi > c.lo) ||
          !std::isfinite(c.value)) {
        throw Error(ErrorKind::invalid_argument, "cell outside [0,1] or empty");
      }
    }
    std::sort(cells_.begin(), cells_.end(), [](const Cell& a, const Cell& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < cells_.size(); ++i) {
      if (cells_[i].lo < cells_[i - 1].hi - kMeasureSlack) {
        throw Error(ErrorKind::invalid_argument, "cells of one function overlap");
      }
    }
  }

  /// Places the atoms of `f` consecutively starting at `start`.
  static PlacedStep place(const StepFunction& f, double start) {
    std::vector<Cell> cells;
    double at = start;
    for (const auto& a : f.atoms()) {
      cells.push_back({at, at + a.measure, a.value});
      at += a.measure;
    }
    return PlacedStep(std::move(cells));
  }

  std::span<const Cell> cells() const noexcept { return cells_; }

  StepFunction to_step() const {
    std::vector<Atom> atoms;
    for (const auto& c : cells_) atoms.push_back({c.value, c.length()});
    return StepFunction(std::move(atoms));
  }

  /// Cells carrying nonzero values.
  std::vector<Cell> support() const {
    std::vector<Cell> out;
    for (const auto& c : cells_) {
      if (c.value != 0.0) out.push_back(c);
    }
    return out;
  }

  double support_measure() const noexcept {
    double m = 0.0;
    for (const auto& c : cells_) {
      if (c.value != 0.0) m += c.length();
    }
    return m;
  }

  bool disjoint_from(const PlacedStep& other) const noexcept {
    for (const auto& a : cells_) {
      if (a.value == 0.0) continue;
      for (const auto& b : other.cells_) {
        if (b.value == 0.0) continue;
        if (std::min(a.hi, b.hi) - std::max(a.lo, b.lo) > kMeasureSlack) return false;
      }
    }
    return true;
  }

  /// Pointwise sum of placed functions (supports may overlap).
  static PlacedStep pointwise_sum(std::span<const PlacedStep> fs) {
    std::vector<double> cuts;
    for (const auto& f : fs) {
      for (const auto& c : f.cells_) {
        cuts.push_back(c.lo);
        cuts.push_back(c.hi);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Cell> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i];
      const double hi = cuts[i + 1];
      if (!(hi > lo)) continue;
      const double mid = 0.5 * (lo + hi);
      double v = 0.0;
      for (const auto& f : fs) v += f.value_at(mid);
      if (v != 0.0) out.push_back({lo, hi, v});
    }
    return PlacedStep(std::move(out));
  }

  double value_at(double t) const noexcept {
    for (const auto& c : cells_) {
      if (t >= c.lo && t < c.hi) return c.value;
    }
    return 0.0;
  }

 private:
  std::vector<Cell> cells_;
};

/// n_f(tau) = measure of {|f| > tau}.
inline double distribution_function(const StepFunction& f, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorKind::invalid_argument, "tau must be >= 0");
  double m = 0.0;
  for (const auto& a : f.atoms()) {
    if (std::abs(a.value) > tau) m += a.measure;
  }
  return m;
}

/// f*: atoms of |f| in decreasing order of value, ties merged, zeros dropped.
inline StepFunction decreasing_rearrangement(const StepFunction& f) {
  std::map<double, double, std::greater<>> levels;
  for (const auto& a : f.atoms()) {
    if (a.value != 0.0) levels[std::abs(a.value)] += a.measure;
  }
  std::vector<Atom> out;
  out.reserve(levels.size());
  for (const auto& [v, m] : levels) out.push_back({v, m});
  return StepFunction(std::move(out));
}

/// f*(t) evaluated pointwise (left-continuous).
inline double rearrangement_at(const StepFunction& rearranged, double t) {
  double at = 0.0;
  for (const auto& a : rearranged.atoms()) {
    at += a.measure;
    if (t <= at) return a.value;
  }
  return 0.0;
}

/// ∫_0^t f*(s) ds for a rearranged step function.
inline double rearrangement_integral(const StepFunction& rearranged, double t) {
  double acc = 0.0;
  double at = 0.0;
  for (const auto& a : rearranged.atoms()) {
    const double take = std::clamp(t - at, 0.0, a.measure);
    acc += a.value * take;
    at += a.measure;
    if (at >= t) break;
  }
  return acc;
}

inline bool equimeasurable(const StepFunction& f, const StepFunction& g, double tol = 1e-12) {
  const auto fs = decreasing_rearrangement(f);
  const auto gs = decreasing_rearrangement(g);
  if (fs.atoms().size() != gs.atoms().size()) return false;
  for (std::size_t i = 0; i < fs.atoms().size(); ++i) {
    const auto& a = fs.atoms()[i];
    const auto& b = gs.atoms()[i];
    if (std::abs(a.value - b.value) > tol * std::max(1.0, std::abs(a.value)) ||
        std::abs(a.measure - b.measure) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace blattice
