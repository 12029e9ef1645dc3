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

StepFunction random_step(std::mt19937_64& rng, std::size_t atoms, double total = 0.9) {
  std::uniform_real_distribution<double> v(-3.0, 3.0), w(0.1, 1.0);
  std::vector<double> ws(atoms);
  double s = 0.0;
  for (auto& x : ws) s += (x = w(rng));
  std::vector<Atom> out;
  for (double x : ws) out.push_back({v(rng), x / s * total});
  return StepFunction(std::move(out));
}

// Luxemburg norm by plain bisection on the modular, no shared solver.
double luxemburg_oracle(const StepFunction& f, const std::function<double(double)>& M) {
  auto modular = [&](double lambda) {
    double s = 0.0;
    for (const auto& a : f.atoms()) s += M(std::abs(a.value) / lambda) * a.measure;
    return s;
  };
  double lo = 1e-12, hi = 1.0;
  while (modular(hi) > 1.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (modular(mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

// Lorentz functional by midpoint quadrature of (q/p) ∫ (t^{1/p} f*(t))^q dt/t.
double lorentz_oracle(const StepFunction& f, double p, double q) {
  std::vector<std::pair<double, double>> atoms;
  for (const auto& a : f.atoms()) atoms.emplace_back(std::abs(a.value), a.measure);
  std::sort(atoms.begin(), atoms.end(), [](auto& l, auto& r) { return l.first > r.first; });
  auto fstar = [&](double t) {
    double at = 0.0;
    for (const auto& [v, m] : atoms) {
      at += m;
      if (t < at) return v;
    }
    return 0.0;
  };
  // Substitute t = e^x so the weight dt/t becomes dx.
  const int n = 400000;
  const double x0 = std::log(1e-14), x1 = 0.0, h = (x1 - x0) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = std::exp(x0 + (i + 0.5) * h);
    acc += std::pow(std::pow(t, 1.0 / p) * fstar(t), q) * h;
  }
  return std::pow(q / p * acc, 1.0 / q);
}

}  // namespace

TEST(SeqNorm, Examples) {
  EXPECT_DOUBLE_EQ(seq_norm(std::vector<double>{3.0, 4.0}, LatticeSpec::lp(2.0)), 5.0);
  EXPECT_DOUBLE_EQ(seq_norm(std::vector<double>{1.0, 1.0, 1.0}, LatticeSpec::lp(kInf)), 1.0);
  EXPECT_NEAR(seq_norm(std::vector<double>{1.0, 1.0}, LatticeSpec::orlicz_seq(OrliczFunction::power(2.0))),
              std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(seq_norm(std::vector<double>{-2.0, 1.0}, LatticeSpec::c0()), 2.0);
}

TEST(SeqNorm, OrliczSequenceWithTabulatedSquareMatchesL2) {
  std::vector<std::pair<double, double>> knots;
  for (double t : log_grid(1e-4, 1e3, 4000)) knots.emplace_back(t, t * t);
  const auto host = LatticeSpec::orlicz_seq(OrliczFunction::tabulated(knots));
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_vector(rng, 5);
    EXPECT_NEAR(seq_norm(a, host), lp_norm(a, 2.0), 1e-4 * lp_norm(a, 2.0));
  }
}

TEST(WeightedLp, Examples) {
  EXPECT_DOUBLE_EQ(weighted_lp_norm(std::vector<double>{1.0, 1.0}, 1.0, std::vector<double>{1.0, 2.0}), 3.0);
  EXPECT_DOUBLE_EQ(weighted_lp_norm(std::vector<double>{1.0, 1.0}, 2.0, std::vector<double>{3.0, 4.0}), 5.0);
  std::mt19937_64 rng(4);
  const auto a = random_vector(rng, 6);
  EXPECT_DOUBLE_EQ(weighted_lp_norm(a, 3.0, std::vector<double>(6, 1.0)), lp_norm(a, 3.0));
  EXPECT_THROW(weighted_lp_norm(a, 2.0, std::vector<double>(3, 1.0)), Error);
}

TEST(LuxemburgNorm, ClosedForms) {
  const auto M = OrliczFunction::power(2.0);
  EXPECT_NEAR(luxemburg_norm(StepFunction({{3.0, 0.25}}), M), 1.5, 1e-10);
  EXPECT_EQ(luxemburg_norm(StepFunction(), M), 0.0);
  for (const auto& N : {M, OrliczFunction::power_log(2.0, 1.0), OrliczFunction::power(1.5)}) {
    for (double t : {0.01, 0.3, 1.0}) {
      EXPECT_NEAR(luxemburg_norm(StepFunction({{1.0, t}}), N), 1.0 / N.inverse(1.0 / t), 1e-9);
    }
  }
}

TEST(LuxemburgNorm, MatchesBisectionOracle) {
  std::mt19937_64 rng(8);
  const auto M = OrliczFunction::power_log(2.0, 1.0);
  auto direct = [](double t) { return t * t * (t > 1.0 ? 1.0 + std::log(t) : 1.0); };
  for (int k = 0; k < 30; ++k) {
    const auto f = random_step(rng, 4);
    const double want = luxemburg_oracle(f, direct);
    EXPECT_NEAR(luxemburg_norm(f, M), want, 1e-9 * want);
  }
}

TEST(LuxemburgNorm, ModularAttainsOneAtTheNorm) {
  std::mt19937_64 rng(9);
  for (const auto& M : {OrliczFunction::power(3.0), OrliczFunction::power_log(1.5, 2.0)}) {
    for (int k = 0; k < 20; ++k) {
      const auto f = random_step(rng, 5);
      EXPECT_NEAR(luxemburg_modular(f, M, luxemburg_norm(f, M)), 1.0, 1e-8);
    }
  }
}

TEST(LorentzNorm, FundamentalAndQuadrature) {
  EXPECT_EQ(lorentz_norm(StepFunction(), 2.0, 1.0), 0.0);
  for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{3.0, 2.0}, std::pair{2.0, 3.0}}) {
    for (double t : {0.05, 0.5, 1.0}) {
      EXPECT_NEAR(lorentz_norm(StepFunction({{1.0, t}}), p, q), std::pow(t, 1.0 / p), 1e-12);
    }
  }
  std::mt19937_64 rng(10);
  for (int k = 0; k < 5; ++k) {
    const auto f = random_step(rng, 4);
    for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{2.0, 3.0}}) {
      const double want = lorentz_oracle(f, p, q);
      EXPECT_NEAR(lorentz_norm(f, p, q), want, 1e-4 * want);
    }
  }
  EXPECT_THROW(lorentz_norm(StepFunction({{1.0, 0.5}}), 1.0, 2.0), Error);
}

TEST(MusielakNorm, SingleCoordinateAndZero) {
  const auto M = OrliczFunction::power_log(2.0, 1.0);
  const BetaSequence beta({M.inverse(1.0 / 0.3)}, M);
  EXPECT_NEAR(musielak_norm(SeqVector({-2.5}), beta, M), 2.5, 1e-9);
  EXPECT_EQ(musielak_norm(SeqVector({0.0}), beta, M), 0.0);
  EXPECT_THROW(BetaSequence({0.5, 0.5}, OrliczFunction::power(2.0)), Error);
}

TEST(MusielakNorm, PowerCaseIsLp) {
  const auto M = OrliczFunction::power(2.0);
  const auto beta = BetaSequence::from_measures(std::vector<double>{0.2, 0.5, 0.3}, M);
  std::mt19937_64 rng(12);
  for (int k = 0; k < 10; ++k) {
    const auto a = random_vector(rng, 3);
    EXPECT_NEAR(musielak_norm(SeqVector(a), beta, M), lp_norm(a, 2.0), 1e-9);
  }
}

class HostProperties : public ::testing::TestWithParam<int> {};

TEST_P(HostProperties, LatticeRearrangementHomogeneityTriangle) {
  const std::vector<LatticeSpec> hosts = {LatticeSpec::orlicz_fn(OrliczFunction::power(1.5)),
                                          LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0)),
                                          LatticeSpec::lorentz(3.0, 2.0), LatticeSpec::lorentz(2.0, 1.0)};
  const auto& host = hosts[GetParam()];
  std::mt19937_64 rng(100 + GetParam());
  std::uniform_real_distribution<double> shrink(0.0, 1.0);
  for (int k = 0; k < 25; ++k) {
    const auto f = random_step(rng, 4, 0.45);
    const double nf = function_norm(f, host);
    // |g| <= |f| pointwise
    std::vector<Atom> smaller;
    for (const auto& a : f.atoms()) smaller.push_back({a.value * shrink(rng), a.measure});
    EXPECT_LE(function_norm(StepFunction(smaller), host), nf * (1 + 1e-10));
    // permuted atoms
    std::vector<Atom> perm(f.atoms().begin(), f.atoms().end());
    std::reverse(perm.begin(), perm.end());
    EXPECT_NEAR(function_norm(StepFunction(perm), host), nf, 1e-12 * nf);
    // homogeneity
    EXPECT_NEAR(function_norm(f.scaled(-2.5), host), 2.5 * nf, 1e-9 * nf);
    // triangle on disjoint supports (these norms are convex, Lorentz q <= p)
    const auto g = random_step(rng, 3, 0.45);
    EXPECT_LE(function_norm(f.disjoint_sum(g), host), (nf + function_norm(g, host)) * (1 + 1e-9));
  }
}

INSTANTIATE_TEST_SUITE_P(Hosts, HostProperties, ::testing::Range(0, 4));

TEST(FunctionNorm, HostMismatchIsRejected) {
  EXPECT_THROW(function_norm(StepFunction({{1.0, 0.5}}), LatticeSpec::lp(2.0)), Error);
  EXPECT_THROW(seq_norm(std::vector<double>{1.0}, LatticeSpec::lorentz(2.0, 2.0)), Error);
}
