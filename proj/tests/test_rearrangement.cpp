#include <gtest/gtest.h>

#include <random>

#include "blattice/blattice.hpp"

using namespace blattice;

namespace {

StepFunction random_step(std::mt19937_64& rng, std::size_t atoms) {
  std::uniform_real_distribution<double> v(-4.0, 4.0), w(0.1, 1.0);
  std::vector<double> ws(atoms);
  double s = 0.0;
  for (auto& x : ws) s += (x = w(rng));
  std::vector<Atom> out;
  for (double x : ws) out.push_back({v(rng), x / s * 0.999});
  return StepFunction(std::move(out));
}

// Value of a step function with atoms laid out left to right, at point t.
double value_at(const StepFunction& f, double t) {
  double at = 0.0;
  for (const auto& a : f.atoms()) {
    if (t < at + a.measure) return a.value;
    at += a.measure;
  }
  return 0.0;
}

}  // namespace

TEST(Distribution, Examples) {
  EXPECT_DOUBLE_EQ(distribution_function(StepFunction({{3.0, 0.25}}), 2.0), 0.25);
  EXPECT_DOUBLE_EQ(distribution_function(StepFunction({{3.0, 0.25}, {1.0, 0.5}}), 0.5), 0.75);
  EXPECT_EQ(distribution_function(StepFunction({{3.0, 0.25}, {-1.0, 0.5}}), 3.0), 0.0);
}

TEST(Distribution, RightContinuousAndNonincreasing) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto f = random_step(rng, 6);
    double prev = kInf;
    for (double tau = 0.0; tau <= 4.5; tau += 0.05) {
      const double d = distribution_function(f, tau);
      EXPECT_LE(d, prev);
      prev = d;
    }
  }
}

TEST(Rearrangement, SortsByAbsoluteValue) {
  const auto r = decreasing_rearrangement(StepFunction({{1.0, 0.5}, {-3.0, 0.25}}));
  ASSERT_EQ(r.atoms().size(), 2u);
  EXPECT_EQ(r.atoms()[0].value, 3.0);
  EXPECT_EQ(r.atoms()[0].measure, 0.25);
  EXPECT_EQ(r.atoms()[1].value, 1.0);
  EXPECT_EQ(r.atoms()[1].measure, 0.5);
}

TEST(Rearrangement, Idempotent) {
  const StepFunction f({{3.0, 0.25}, {1.0, 0.5}});
  const auto r = decreasing_rearrangement(f);
  EXPECT_TRUE(equimeasurable(r, f));
  const auto rr = decreasing_rearrangement(r);
  ASSERT_EQ(rr.atoms().size(), r.atoms().size());
  for (std::size_t i = 0; i < r.atoms().size(); ++i) {
    EXPECT_EQ(rr.atoms()[i].value, r.atoms()[i].value);
    EXPECT_EQ(rr.atoms()[i].measure, r.atoms()[i].measure);
  }
}

TEST(Rearrangement, MatchesGridSamplingOracle) {
  std::mt19937_64 rng(5);
  constexpr int kGrid = 200000;
  for (int k = 0; k < 5; ++k) {
    const auto f = random_step(rng, 6);
    std::vector<double> samples(kGrid);
    for (int i = 0; i < kGrid; ++i) samples[i] = std::abs(value_at(f, (i + 0.5) / kGrid));
    std::sort(samples.begin(), samples.end(), std::greater<>());
    const auto r = decreasing_rearrangement(f);
    for (int i = 0; i < kGrid; i += 997) {
      const double t = (i + 0.5) / kGrid;
      // Grid cells straddling a jump can disagree; compare away from jumps.
      const double left = rearrangement_at(r, std::max(0.0, t - 2.0 / kGrid));
      const double right = rearrangement_at(r, std::min(1.0, t + 2.0 / kGrid));
      if (left != right) continue;
      EXPECT_DOUBLE_EQ(rearrangement_at(r, t), samples[i]);
    }
  }
}

TEST(Rearrangement, MassConservation) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 50; ++k) {
    const auto f = random_step(rng, 5);
    const auto r = decreasing_rearrangement(f);
    EXPECT_NEAR(r.integral_abs(), f.integral_abs(), 1e-12);
    EXPECT_NEAR(rearrangement_integral(r, 1.0), f.integral_abs(), 1e-12);
  }
}

TEST(Equimeasurable, Examples) {
  const StepFunction f({{2.0, 0.25}, {-1.0, 0.5}, {0.5, 0.1}});
  EXPECT_TRUE(equimeasurable(f, StepFunction({{0.5, 0.1}, {2.0, 0.25}, {-1.0, 0.5}})));
  EXPECT_TRUE(equimeasurable(f, f.abs()));
  EXPECT_FALSE(equimeasurable(StepFunction({{2.0, 0.5}}), StepFunction({{2.0, 0.25}})));
}

TEST(StepFunction, ValidatesMeasures) {
  EXPECT_THROW(StepFunction({{1.0, 0.7}, {1.0, 0.5}}), Error);
  EXPECT_THROW(StepFunction({{1.0, -0.1}}), Error);
  EXPECT_THROW(StepFunction({{std::nan(""), 0.1}}), Error);
}

TEST(PlacedStep, DisjointnessAndSum) {
  const auto a = PlacedStep::place(StepFunction({{1.0, 0.2}, {2.0, 0.1}}), 0.0);
  const auto b = PlacedStep::place(StepFunction({{3.0, 0.3}}), 0.3);
  const auto c = PlacedStep::place(StepFunction({{3.0, 0.3}}), 0.25);
  EXPECT_TRUE(a.disjoint_from(b));
  EXPECT_FALSE(a.disjoint_from(c));
  const std::vector<PlacedStep> both = {a, b};
  const auto s = PlacedStep::pointwise_sum(both);
  EXPECT_DOUBLE_EQ(s.value_at(0.1), 1.0);
  EXPECT_DOUBLE_EQ(s.value_at(0.25), 2.0);
  EXPECT_DOUBLE_EQ(s.value_at(0.5), 3.0);
  EXPECT_DOUBLE_EQ(s.value_at(0.9), 0.0);
}

TEST(SeqVector, DecreasingAndTruncation) {
  const SeqVector v({1.0, -4.0, 0.0, 2.0});
  EXPECT_EQ(v.decreasing(), (std::vector<double>{4.0, 2.0, 1.0, 0.0}));
  EXPECT_EQ(v.truncated(2).size(), 2u);
  EXPECT_EQ(v.support(), (std::vector<std::size_t>{0, 1, 3}));
  EXPECT_THROW(SeqVector({1.0, kInf}), Error);
}
