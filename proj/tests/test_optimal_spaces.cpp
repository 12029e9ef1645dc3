#include <gtest/gtest.h>

#include <random>

#include "blattice/blattice.hpp"

using namespace blattice;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

OptimalConfig fast_config() {
  OptimalConfig c;
  c.optimizer.starts = 8;
  return c;
}

// ||b1 chi_F1 / phi(m1) + b2 chi_F2 / phi(m2)|| in L_M by bisection, scanned
// over a grid of (m1, m2) with m1 + m2 <= 1.
std::pair<double, double> two_member_grid(double b1, double b2, const OrliczFunction& M) {
  auto norm = [&](double m1, double m2) {
    const double v1 = b1 * M.inverse(1.0 / m1), v2 = b2 * M.inverse(1.0 / m2);
    auto modular = [&](double l) { return M(v1 / l) * m1 + M(v2 / l) * m2; };
    double lo = 1e-9, hi = 1.0;
    while (modular(hi) > 1.0) hi *= 2.0;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      (modular(mid) > 1.0 ? lo : hi) = mid;
    }
    return hi;
  };
  double mx = 0.0, mn = kInf;
  for (double m1 : log_grid(1e-6, 0.999, 120)) {
    for (double frac : log_grid(1e-6, 1.0, 120)) {
      const double m2 = (1.0 - m1) * frac;
      const double v = norm(m1, m2);
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
  }
  return {mn, mx};
}

}  // namespace

TEST(XU, ClosedFormHosts) {
  EXPECT_DOUBLE_EQ(xu_norm(std::vector<double>{1, 1, 1}, LatticeSpec::c0()).value, 1.0);
  EXPECT_DOUBLE_EQ(xu_norm(std::vector<double>{3, 4}, LatticeSpec::lp(2.0)).value, 5.0);
  const auto r = xu_norm(std::vector<double>{3, 4}, LatticeSpec::lp(2.0));
  EXPECT_EQ(r.bound_kind, BoundKind::exact);
  EXPECT_EQ(r.lo, r.hi);
}

TEST(XU, OrliczPowerTwoIsL2) {
  const auto host = LatticeSpec::orlicz_fn(OrliczFunction::power(2.0));
  EXPECT_NEAR(xu_norm(std::vector<double>{1, 1}, host).value, std::sqrt(2.0), 0.02 * std::sqrt(2.0));
}

TEST(XU, OrliczPowerLogAgainstGrid) {
  const auto M = OrliczFunction::power_log(2.0, 1.0);
  const auto host = LatticeSpec::orlicz_fn(M);
  for (auto [b1, b2] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{3.0, 1.5}}) {
    const auto [mn, mx] = two_member_grid(b1, b2, M);
    const auto u = xu_norm(std::vector<double>{b1, b2}, host, fast_config());
    EXPECT_GE(u.lo, mx * (1 - 1e-3)) << b1 << "," << b2;
    EXPECT_LE(u.lo, mx * (1 + 1e-2));
    EXPECT_LE(u.lo, u.hi);
    const auto ph = phi_n(std::vector<double>{b1, b2}, host, fast_config());
    EXPECT_LE(ph.hi, mn * (1 + 1e-3));
    EXPECT_GE(ph.hi, mn * (1 - 1e-2));
  }
}

TEST(PhiN, Examples) {
  std::mt19937_64 rng(1);
  const auto a = random_vector(rng, 5);
  for (double p : {1.0, 2.0, 3.5}) EXPECT_DOUBLE_EQ(phi_n(a, LatticeSpec::lp(p)).value, lp_norm(a, p));
  EXPECT_DOUBLE_EQ(phi_n(std::vector<double>(7, 1.0), LatticeSpec::c0()).value, 1.0);
  const auto host = LatticeSpec::orlicz_fn(OrliczFunction::power(2.0));
  EXPECT_NEAR(phi_n(std::vector<double>{1, 1}, host).value, std::sqrt(2.0), 0.02 * std::sqrt(2.0));
}

TEST(XL, Examples) {
  EXPECT_DOUBLE_EQ(xl_norm(std::vector<double>{1, 1, 1}, LatticeSpec::c0()).value, 1.0);
  const auto r = xl_norm(std::vector<double>{3, 4}, LatticeSpec::lorentz(2.0, 3.0));
  const double l3 = std::cbrt(27.0 + 64.0);
  EXPECT_LE(r.lo, l3 * (1 + 1e-12));
  EXPECT_GE(r.hi, l3 * (1 - 1e-12));
  EXPECT_LE(r.constant("equivalence_upper"), 10.0);
}

TEST(XL, UnitVectorIsOneEverywhere) {
  const std::vector<LatticeSpec> hosts = {LatticeSpec::lp(1.5), LatticeSpec::c0(),
                                          LatticeSpec::weighted_lp(2.0, {2.0, 3.0}),
                                          LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)),
                                          LatticeSpec::lorentz(2.0, 1.0)};
  const std::vector<double> e1 = {1.0, 0.0, 0.0};
  for (const auto& h : hosts) {
    EXPECT_DOUBLE_EQ(xu_norm(e1, h).value, 1.0) << h.name();
    EXPECT_DOUBLE_EQ(xl_norm(e1, h).value, 1.0) << h.name();
    EXPECT_DOUBLE_EQ(phi_n(e1, h).value, 1.0) << h.name();
  }
}

TEST(Lorentz, SandwichesContainIdentifiedSpaces) {
  std::mt19937_64 rng(2);
  for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{2.0, 3.0}, std::pair{3.0, 2.0}}) {
    const auto host = LatticeSpec::lorentz(p, q);
    const auto a = random_vector(rng, 3);
    const auto u = xu_norm(a, host, fast_config());
    const auto l = xl_norm(a, host, fast_config());
    const double eu = lp_norm(a, std::min(p, q)), el = lp_norm(a, std::max(p, q));
    EXPECT_LE(u.lo, eu * (1 + 1e-9));
    EXPECT_GE(u.hi, eu * (1 - 1e-9));
    EXPECT_LE(l.lo, el * (1 + 1e-9));
    EXPECT_GE(l.hi, el * (1 - 1e-9));
  }
}

TEST(Functionals, EmbeddingChainOnOptimizerHosts) {
  std::mt19937_64 rng(3);
  for (const auto& h : {LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)),
                        LatticeSpec::orlicz_fn(OrliczFunction::power(1.5))}) {
    for (int k = 0; k < 3; ++k) {
      const auto a = random_vector(rng, 3);
      const auto u = xu_norm(a, h, fast_config());
      const auto l = xl_norm(a, h, fast_config());
      const double tol = 1e-9 * lp_norm(a, 1.0);
      EXPECT_LE(lp_norm(a, kInf), l.hi + tol);
      EXPECT_LE(l.lo, u.hi + tol);
      EXPECT_LE(u.lo, lp_norm(a, 1.0) + tol);
      EXPECT_LE(l.value, phi_n(a, h, fast_config()).hi + tol);
    }
  }
}

TEST(Functionals, SymmetricAndTruncationContractive) {
  const auto host = LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0));
  std::mt19937_64 rng(4);
  const auto a = random_vector(rng, 4);
  std::vector<double> b(a.rbegin(), a.rend());
  for (auto& x : b) x = -x;
  const auto cfg = fast_config();
  EXPECT_NEAR(xu_norm(a, host, cfg).value, xu_norm(b, host, cfg).value, 1e-12);
  const std::vector<double> head(a.begin(), a.begin() + 2);
  EXPECT_LE(xu_norm(head, host, cfg).value, xu_norm(a, host, cfg).value * (1 + 1e-6));
}

TEST(Functionals, ErrorsAndCaps) {
  OptimalConfig cfg;
  cfg.cap = 3;
  const auto host = LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0));
  EXPECT_THROW(xu_norm(std::vector<double>(4, 1.0), host, cfg), Error);
  EXPECT_THROW(xu_norm(std::vector<double>{1.0}, LatticeSpec::orlicz_seq(OrliczFunction::power(2.0))), Error);
  EXPECT_NO_THROW(xu_norm(std::vector<double>(50, 1.0), LatticeSpec::lp(2.0), cfg));
}

TEST(Reduction, RandomFamiliesHaveNoViolations) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(-3.0, 3.0), w(0.02, 0.16);
  for (const auto& M : {OrliczFunction::power(2.0), OrliczFunction::power_log(2.0, 1.0)}) {
    for (int k = 0; k < 30; ++k) {
      std::vector<StepFunction> ys;
      for (int j = 0; j < 3; ++j) ys.push_back(StepFunction({{v(rng), w(rng)}, {v(rng), w(rng)}}));
      const auto r = orlicz_disjoint_reduction(ys, M);
      EXPECT_EQ(r.report.violations, 0u);
      EXPECT_TRUE(r.report.f_disjoint);
      EXPECT_EQ(r.hs.size(), 3u);
      EXPECT_EQ(r.fs.size(), 6u);
      const double K = delta2_constant(M, 1e4).constant_K;
      EXPECT_LE(r.report.norm_sum_h, r.report.norm_sum_y * (1 + 1e-9));
      EXPECT_LE(r.report.norm_sum_y, (K + 1.0) * r.report.norm_sum_f * (1 + 1e-9));
      for (const auto& m : r.report.members) {
        EXPECT_GE(m.norm_h, 0.25 * m.norm_y * (1 - 1e-9));
        EXPECT_LE(m.norm_h, m.norm_y * (1 + 1e-9));
      }
    }
  }
}

TEST(Reduction, CharacteristicMembersAndSingleMember) {
  const auto M = OrliczFunction::power(2.0);
  const auto r = orlicz_disjoint_reduction(std::vector<StepFunction>{StepFunction({{2.0, 0.2}}),
                                                                     StepFunction({{0.5, 0.3}})},
                                           M);
  EXPECT_EQ(r.report.violations, 0u);
  for (const auto& m : r.report.members) EXPECT_NEAR(m.norm_h, m.norm_y, 1e-9 * m.norm_y);
  const auto one = orlicz_disjoint_reduction(std::vector<StepFunction>{StepFunction({{1.0, 0.1}, {3.0, 0.2}})}, M);
  EXPECT_EQ(one.report.violations, 0u);
}

TEST(Reduction, OversizedFamilyIsRejected) {
  const std::vector<StepFunction> ys = {StepFunction({{1.0, 0.6}}), StepFunction({{1.0, 0.6}})};
  EXPECT_THROW(orlicz_disjoint_reduction(ys, OrliczFunction::power(2.0)), Error);
}

TEST(Reduction, OverlappingFamilyIsRejected) {
  const auto a = PlacedStep::place(StepFunction({{1.0, 0.3}}), 0.0);
  const auto b = PlacedStep::place(StepFunction({{1.0, 0.3}}), 0.2);
  EXPECT_THROW(orlicz_disjoint_reduction(std::vector<PlacedStep>{a, b}, OrliczFunction::power(2.0)), Error);
}

TEST(Fundamental, PowerCaseAndOverlap) {
  for (double p : {1.5, 2.0, 3.0}) {
    for (std::size_t n : {2, 4, 8}) {
      const auto s = xu_fundamental(OrliczFunction::power(p), n, fast_config());
      const double want = std::pow(static_cast<double>(n), 1.0 / p);
      EXPECT_NEAR(s.lo, want, 0.02 * want);
      EXPECT_NEAR(s.dilation, want, 1e-12 * want);
    }
  }
  const auto one = xu_fundamental(OrliczFunction::power_log(2.0, 1.0), 1);
  EXPECT_EQ(one.lo, 1.0);
  EXPECT_EQ(one.hi, 1.0);
  OptimalConfig cfg = fast_config();
  cfg.optimizer.starts = 4;
  EXPECT_TRUE(xu_fundamental(OrliczFunction::power_log(2.0, 1.0), 16, cfg).overlap);
}

TEST(Musielak, ExamplesAndAgreement) {
  const auto M = OrliczFunction::power(2.0);
  EXPECT_NEAR(musielak_intersection_norm(std::vector<double>{-1.7}, M).result.value, 1.7, 1e-12);
  EXPECT_NEAR(musielak_intersection_norm(std::vector<double>{1.0, 1.0}, M).result.value, std::sqrt(2.0),
              0.02 * std::sqrt(2.0));
  std::mt19937_64 rng(6);
  const auto host = LatticeSpec::orlicz_fn(M);
  for (int k = 0; k < 5; ++k) {
    const auto a = random_vector(rng, 4);
    const auto m = musielak_intersection_norm(a, M, fast_config());
    EXPECT_NEAR(m.result.value, xu_norm(a, host, fast_config()).value, 0.03 * lp_norm(a, 2.0));
    EXPECT_TRUE(m.left_embedding);
    EXPECT_TRUE(m.right_embedding);
  }
}

TEST(DisjointFamily, ValidatorRejectsOverlap) {
  DisjointFamily fam;
  fam.host = LatticeSpec::orlicz_fn(OrliczFunction::power(2.0));
  fam.functions = {PlacedStep::place(StepFunction({{2.0, 0.25}}), 0.0),
                   PlacedStep::place(StepFunction({{2.0, 0.25}}), 0.1)};
  EXPECT_THROW(fam.validate(), Error);
  fam.functions[1] = PlacedStep::place(StepFunction({{2.0, 0.25}}), 0.5);
  EXPECT_NO_THROW(fam.validate());
  DisjointFamily seq;
  seq.host = LatticeSpec::lp(2.0);
  seq.sequences = {SeqVector({1.0, 0.0}), SeqVector({0.0, 0.5})};
  EXPECT_THROW(seq.validate(), Error);
}
