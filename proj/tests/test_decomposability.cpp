#include <gtest/gtest.h>

#include "blattice/blattice.hpp"

using namespace blattice;

TEST(Estimate, LpAtItsOwnExponentIsOne) {
  for (double p : {1.0, 2.0, 3.0}) {
    const auto r = estimate_constant(LatticeSpec::lp(p), p, Direction::upper, 16);
    EXPECT_NEAR(r.constant, 1.0, 1e-12);
    EXPECT_FALSE(r.growing);
    const auto l = estimate_constant(LatticeSpec::lp(p), p, Direction::lower, 16);
    EXPECT_NEAR(l.constant, 1.0, 1e-12);
  }
}

TEST(Estimate, EveryLatticeHasUpperOneEstimate) {
  const auto r = estimate_constant(LatticeSpec::lp(2.0), 1.0, Direction::upper, 16);
  EXPECT_NEAR(r.constant, 1.0, 1e-12);
}

TEST(Estimate, L2AtExponentThreeGrows) {
  const auto r = estimate_constant(LatticeSpec::lp(2.0), 3.0, Direction::upper, 32);
  EXPECT_TRUE(r.growing);
  EXPECT_NEAR(r.slope, 0.5 - 1.0 / 3.0, 0.02);
  // Equal split: n unit vectors with coefficients 1 give n^{1/2} / n^{1/3}.
  EXPECT_NEAR(r.constant, std::pow(32.0, 0.5 - 1.0 / 3.0), 1e-9);
}

TEST(Estimate, LorentzUpperAtMinExponentIsBounded) {
  double prev = 0.0;
  std::vector<double> values;
  for (std::size_t n : {4, 8, 16}) {
    const auto r = estimate_constant(LatticeSpec::lorentz(2.0, 1.0), 1.0, Direction::upper, n);
    values.push_back(r.constant);
    EXPECT_GE(r.constant, prev * (1 - 1e-12));
    prev = r.constant;
  }
  EXPECT_LE(values.back(), 1.0 + 1e-9);
}

TEST(Estimate, RejectsBadArguments) {
  EXPECT_THROW(estimate_constant(LatticeSpec::lp(2.0), 0.5, Direction::upper, 4), Error);
  EXPECT_THROW(estimate_constant(LatticeSpec::lp(2.0), 2.0, Direction::upper, 0), Error);
}

TEST(Ds, HolderBoundaryIsOne) {
  EXPECT_NEAR(ds_constant(LatticeSpec::lp(2.0), LatticeSpec::lp(1.0), 2.0, 6).empirical_Ds, 1.0, 1e-9);
  for (double p : {1.0, 2.0, 3.0}) {
    EXPECT_NEAR(ds_constant(LatticeSpec::lp(p), LatticeSpec::lp(p), kInf, 8).empirical_Ds, 1.0, 1e-9);
  }
}

TEST(Ds, SupToL1GrowsLikeSquareRoot) {
  const auto r = ds_constant(LatticeSpec::c0(), LatticeSpec::lp(1.0), 2.0, 16);
  EXPECT_GE(r.empirical_Ds, 4.0 * (1 - 1e-9));
  EXPECT_TRUE(r.growing);
  EXPECT_NEAR(r.slope, 0.5, 0.05);
  // The witness must reproduce the reported value: ||ab||_1 / (||b||_2 ||a||_inf).
  const auto& w = r.witness;
  ASSERT_FALSE(w.a.empty());
  std::vector<double> ab(w.a.size());
  for (std::size_t i = 0; i < ab.size(); ++i) ab[i] = w.a[i] * w.b[i];
  EXPECT_NEAR(lp_norm(ab, 1.0) / (lp_norm(w.b, 2.0) * lp_norm(w.a, kInf)), w.ratio, 1e-9 * w.ratio);
}

TEST(Ds, GrowthExponentOffTheBoundary) {
  struct Case {
    double q, p, s;
  };
  for (const auto& c : {Case{2.0, 1.0, 4.0}, Case{3.0, 1.5, 6.0}}) {
    const auto r = ds_constant(LatticeSpec::lp(c.q), LatticeSpec::lp(c.p), c.s, 32);
    EXPECT_NEAR(r.slope, 1.0 / c.p - 1.0 / c.q - 1.0 / c.s, 0.05);
  }
}

TEST(Ds, NondecreasingInS) {
  double prev = 0.0;
  for (double s : {1.0, 2.0, 4.0, kInf}) {
    const double d = ds_constant(LatticeSpec::c0(), LatticeSpec::lp(1.0), s, 8).empirical_Ds;
    EXPECT_GE(d, prev * (1 - 1e-9)) << s;
    prev = d;
  }
}

TEST(Ds, OneDecomposableHostsAtSEqualsOne) {
  for (double p : {1.0, 2.0}) {
    EXPECT_NEAR(ds_constant(LatticeSpec::lp(p), LatticeSpec::lp(p), 1.0, 8).empirical_Ds, 1.0, 1e-9);
  }
  EXPECT_THROW(ds_constant(LatticeSpec::lp(2.0), LatticeSpec::lp(1.0), 0.5, 4), Error);
}

TEST(Indices, TableAndEmpirical) {
  auto r = grobler_dodds(LatticeSpec::lorentz(2.0, 3.0));
  EXPECT_EQ(r.delta, 2.0);
  EXPECT_EQ(r.sigma, 3.0);
  r = grobler_dodds(LatticeSpec::lp(4.0));
  EXPECT_EQ(r.delta, 4.0);
  EXPECT_EQ(r.sigma, 4.0);
  for (double p : {1.5, 2.0, 3.0}) {
    r = grobler_dodds(LatticeSpec::orlicz_fn(OrliczFunction::power(p)));
    EXPECT_NEAR(r.delta, p, 0.05);
    EXPECT_NEAR(r.sigma, p, 0.05);
  }
  r = grobler_dodds(LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)));
  EXPECT_LE(r.delta, r.sigma);
  // Finite-range slopes carry a log bias above the true index 2.
  EXPECT_GE(r.delta, 2.0);
  EXPECT_LE(r.delta, 2.1);
  EXPECT_LE(r.sigma, 2.5);
  EXPECT_EQ(r.source, "empirical_slope");
  EXPECT_TRUE(grobler_dodds(LatticeSpec::c0()).flagged);
}

TEST(Fs, HolderPairs) {
  auto r = fs_infimum(LatticeSpec::lp(2.0), LatticeSpec::lp(1.0), 2.0);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  EXPECT_NEAR(r.p, 1.0, 1e-9);
  EXPECT_NEAR(r.q, 2.0, 1e-9);
  r = fs_infimum(LatticeSpec::lp(3.0), LatticeSpec::lp(3.0), kInf);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  EXPECT_NEAR(r.p, 3.0, 1e-9);
}

TEST(Fs, LorentzSandwich) {
  const auto X = LatticeSpec::lorentz(3.0, 3.0), Y = LatticeSpec::lorentz(2.0, 2.0);
  FsConfig cfg;
  cfg.n_max = 6;
  const auto r = fs_infimum(X, Y, 6.0, cfg);
  EXPECT_LE(r.ds, r.value * (1 + 1e-6));
  EXPECT_LE(r.value, r.ds * r.ds * 1.25);
  EXPECT_TRUE(r.sandwich_lower);
  EXPECT_TRUE(r.sandwich_upper);
}

TEST(Multiplicator, LorentzPairHolds) {
  const auto r = multiplicator_check(LatticeSpec::lorentz(3.0, 3.0), LatticeSpec::lorentz(2.0, 2.0), 6.0, 20, 4);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.samples, 20u);
  EXPECT_LE(r.worst_ratio, r.ds * (1 + 1e-6));
}

TEST(Family, StructuredMembersAreDisjointUnitVectors) {
  std::mt19937_64 rng(1);
  for (const auto& h : {LatticeSpec::lp(2.0), LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)),
                        LatticeSpec::lorentz(2.0, 3.0)}) {
    for (int shape : {-1, 0, 1, 2, 3}) {
      for (std::size_t n : {5, 16, 64}) {
        const auto fam = detail::make_family(h, n, shape, rng, true);
        EXPECT_EQ(fam.size(), n);
        EXPECT_NO_THROW(fam.validate(1e-8));
      }
    }
  }
}
