#include <gtest/gtest.h>

#include <random>

#include "blattice/blattice.hpp"

using namespace blattice;

TEST(OrliczFunction, PowerValues) {
  const auto M = OrliczFunction::power(2.0);
  EXPECT_DOUBLE_EQ(M(3.0), 9.0);
  EXPECT_EQ(M(0.0), 0.0);
  EXPECT_EQ(OrliczFunction::power_log(2.0, 1.0)(0.0), 0.0);
}

TEST(OrliczFunction, PowerLogMatchesDirectFormula) {
  const auto M = OrliczFunction::power_log(2.0, 1.0);
  for (double t : {0.3, 1.0, 2.0, 7.5, 1e3}) {
    const double direct = t * t * (t > 1.0 ? 1.0 + std::log(t) : 1.0);
    EXPECT_NEAR(M(t), direct, 1e-12 * direct) << t;
  }
  EXPECT_DOUBLE_EQ(M(1.0), 1.0);
}

TEST(OrliczFunction, TabulatedInterpolatesAndRejectsOutOfRange) {
  const auto M = OrliczFunction::tabulated({{0.5, 0.25}, {1.0, 1.0}, {2.0, 4.0}});
  EXPECT_DOUBLE_EQ(M(1.5), 2.5);
  EXPECT_DOUBLE_EQ(M(1.0), 1.0);
  EXPECT_THROW(M.evaluate(3.0), Error);
}

TEST(OrliczFunction, InvalidParametersAreRejected) {
  EXPECT_THROW(OrliczFunction::power(0.5), Error);
  EXPECT_THROW(OrliczFunction::power_log(2.0, -1.0), Error);
  EXPECT_THROW(OrliczFunction::tabulated({{1.0, 1.0}, {2.0, 0.5}}), Error);
}

TEST(OrliczFunction, Inverse) {
  EXPECT_NEAR(OrliczFunction::power(2.0).inverse(9.0), 3.0, 1e-12);
  for (double p : {1.5, 2.0, 3.0}) {
    for (double n : {2.0, 5.0, 16.0}) {
      EXPECT_NEAR(OrliczFunction::power(p).inverse(1.0 / n), std::pow(n, -1.0 / p), 1e-12);
    }
    EXPECT_NEAR(OrliczFunction::power(p).inverse(1.0), 1.0, 1e-12);
  }
  const auto M = OrliczFunction::power_log(2.0, 1.0);
  for (double y : {0.01, 1.0, 30.0, 1e5}) EXPECT_NEAR(M(M.inverse(y)), y, 1e-9 * y);
}

TEST(YoungConjugate, PowerTwoMatchesQuarterSquare) {
  const auto M = OrliczFunction::power(2.0);
  EXPECT_NEAR(young_conjugate(M, 2.0).value, 1.0, 1e-9);
  EXPECT_NEAR(young_conjugate(M, 4.0).value, 4.0, 1e-9);
  EXPECT_EQ(young_conjugate(M, 0.0).value, 0.0);
}

TEST(YoungConjugate, YoungInequalityOnRandomPairs) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 20.0);
  for (const auto& M : {OrliczFunction::power(1.5), OrliczFunction::power_log(2.0, 1.0)}) {
    for (int k = 0; k < 50; ++k) {
      const double s = u(rng), t = u(rng);
      const auto c = young_conjugate(M, s);
      ASSERT_FALSE(c.diverged);
      EXPECT_LE(s * t, M(t) + c.value + 1e-9 * (s * t));
    }
  }
}

TEST(YoungConjugate, LinearFunctionDivergesAboveSlope) {
  EXPECT_TRUE(young_conjugate(OrliczFunction::power(1.0), 2.0).diverged);
}

TEST(Delta2, PowerRatioIsConstant) {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    EXPECT_NEAR(delta2_constant(OrliczFunction::power(p), 1e3).constant_K, std::pow(2.0, p), 1e-9);
  }
}

TEST(Delta2, PowerLogAgainstGridOracle) {
  const auto M = OrliczFunction::power_log(2.0, 1.0);
  const auto r = delta2_constant(M, 1e3);
  double oracle = 0.0;
  for (int i = 0; i <= 3000; ++i) {
    const double u = std::pow(10.0, 3.0 * i / 3000.0);
    const double direct = [](double t) { return t * t * (t > 1.0 ? 1.0 + std::log(t) : 1.0); }(2.0 * u) /
                          (u * u * (u > 1.0 ? 1.0 + std::log(u) : 1.0));
    oracle = std::max(oracle, direct);
  }
  EXPECT_TRUE(r.satisfied);
  EXPECT_LE(r.constant_K, 8.0);
  EXPECT_NEAR(r.constant_K, oracle, 1e-3 * oracle);
}

TEST(Dilation, PowerRootIsExact) {
  auto g = [](double v) { return std::sqrt(v); };
  EXPECT_NEAR(dilation_function(g, 4.0).value, 2.0, 1e-12);
  EXPECT_EQ(dilation_function(g, 1.0).value, 1.0);
  const auto M = OrliczFunction::power(2.0);
  for (double n : {2.0, 8.0, 16.0}) {
    EXPECT_NEAR(dilation_function([&](double v) { return M.inverse(v); }, n).value, std::sqrt(n), 1e-9);
  }
}

TEST(Dilation, SubmultiplicativeOnPowerLog) {
  const auto M = OrliczFunction::power_log(2.0, 1.0);
  auto g = [&](double v) { return M.inverse(v); };
  for (auto [u1, u2] : {std::pair{2.0, 3.0}, std::pair{4.0, 4.0}, std::pair{1.5, 10.0}}) {
    const double lhs = dilation_function(g, u1 * u2, 1e6).value;
    const double rhs = dilation_function(g, u1, 1e6).value * dilation_function(g, u2, u1 * 1e6).value;
    EXPECT_LE(lhs, rhs * (1.0 + 1e-3));
  }
}

TEST(FundamentalFunction, ClosedForms) {
  EXPECT_NEAR(fundamental_function(LatticeSpec::orlicz_fn(OrliczFunction::power(2.0)), 0.25), 0.5, 1e-12);
  EXPECT_NEAR(fundamental_function(LatticeSpec::lorentz(3.0, 1.0), 0.125), 0.5, 1e-12);
  EXPECT_NEAR(fundamental_function(LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)), 1.0), 1.0, 1e-12);
  EXPECT_NEAR(fundamental_function(LatticeSpec::lp(2.0), 9.0), 3.0, 1e-12);
  EXPECT_EQ(fundamental_function(LatticeSpec::c0(), 7.0), 1.0);
}

TEST(FundamentalFunction, QuasiConcave) {
  const std::vector<LatticeSpec> hosts = {LatticeSpec::orlicz_fn(OrliczFunction::power(1.5)),
                                          LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)),
                                          LatticeSpec::lorentz(2.0, 3.0)};
  for (const auto& h : hosts) {
    double prev = 0.0, prev_ratio = kInf;
    for (double t : log_grid(1e-4, 1.0, 60)) {
      const double phi = fundamental_function(h, t);
      EXPECT_GE(phi, prev * (1 - 1e-12));
      EXPECT_LE(phi / t, prev_ratio * (1 + 1e-12));
      prev = phi;
      prev_ratio = phi / t;
    }
  }
}

TEST(FundamentalFunction, DomainErrors) {
  EXPECT_THROW(fundamental_function(LatticeSpec::lp(2.0), 0.0), Error);
  EXPECT_THROW(fundamental_function(LatticeSpec::lp(2.0), 1.5), Error);
  EXPECT_THROW(fundamental_function(LatticeSpec::lorentz(2.0, 2.0), 2.0), Error);
}
