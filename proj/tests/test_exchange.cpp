#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "dickeqfi/errors.hpp"
#include "dickeqfi/exchange.hpp"
#include "dickeqfi/oracle.hpp"
#include "dickeqfi/sweep.hpp"

using namespace dickeqfi;

namespace {

double twin_value(const DecayLadder& l) {
  return exchange_integral(TwinConfiguration::twin(l)).value;
}

DecayLadder random_ladder(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> rate(0.05, 20.0);
  std::uniform_real_distribution<double> freq(-50.0, 50.0);
  std::vector<double> g(m), w(m);
  for (int k = 0; k < m; ++k) {
    g[k] = rate(rng);
    w[k] = freq(rng);
  }
  return DecayLadder(g, w);
}

}  // namespace

TEST(Exchange, SinglePhotonPerArmIsSingleMode) {
  EXPECT_DOUBLE_EQ(twin_value(build_dicke(1, 1.0)), 1.0);
  EXPECT_DOUBLE_EQ(twin_value(build_anharmonic(1, 1.0, 100.0)), 1.0);
}

// Exact rationals below come from the GMP oracle on the same ladders.
TEST(Exchange, FrozenOracleValues) {
  EXPECT_NEAR(twin_value(build_dicke(2, 1.0)), 11.0 / 12.0, 1e-15);
  EXPECT_NEAR(twin_value(build_dicke(3, 1.0)), 68183.0 / 77175.0, 1e-15);
  EXPECT_NEAR(twin_value(build_dicke(4, 1.0)), 0.86580718502276954, 1e-14);
  EXPECT_NEAR(twin_value(build_anharmonic(2, 1.0, 1.0)), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(twin_value(build_anharmonic(2, 1.0, 10.0)), 103.0 / 303.0, 1e-15);
  EXPECT_NEAR(twin_value(build_anharmonic(3, 1.0, 10.0)), 3569153.0 / 19013553.0, 1e-15);
}

TEST(Exchange, ScaleInvariantInReferenceRate) {
  EXPECT_NEAR(twin_value(build_dicke(5, 3.7)), twin_value(build_dicke(5, 1.0)), 1e-14);
}

TEST(Exchange, HarmonicIsSingleMode) {
  for (int m = 1; m <= 60; ++m) EXPECT_NEAR(twin_value(build_harmonic(m, 1.0)), 1.0, 1e-9) << m;
}

TEST(Exchange, DickePlateauNearPointEightTwo) {
  for (int n : {100, 200, 500}) {
    const double v = twin_value(build_dicke(n / 2, 1.0));
    EXPECT_GE(v, 0.80) << n;
    EXPECT_LE(v, 0.84) << n;
  }
}

TEST(Exchange, MetadataAndTables) {
  const auto r = exchange_integral(TwinConfiguration::twin(build_dicke(3, 1.0)));
  EXPECT_EQ(r.total_photons, 6);
  EXPECT_EQ(r.method, IntegralMethod::recurrence);
  EXPECT_EQ(r.exchanged_count, 1);
  EXPECT_EQ(r.imag, 0.0);
  EXPECT_GT(r.error_estimate, 0.0);
  EXPECT_LT(r.error_estimate, 1e-12);

  const auto d = build_dicke(250, 1.0);
  std::vector<double> g(d.rates().begin(), d.rates().end());
  RecurrenceState state(g, g, std::vector<double>(g.size(), 0.0));
  EXPECT_EQ(state.f0(0, 0), 1.0);
  EXPECT_TRUE(std::isfinite(state.max_magnitude()));
  EXPECT_LT(state.max_magnitude(), 1e6);
  EXPECT_EQ(state.c0(0, 0), 2.0 * d.rate(250));
  EXPECT_EQ(state.c2(0, 0), 2.0 * d.rate(249));
  EXPECT_THROW(state.f2(250, 0), std::out_of_range);
}

TEST(Exchange, RejectsUnsupportedConfigurations) {
  const auto a = build_dicke(2, 1.0);
  EXPECT_THROW(exchange_integral({a, build_dicke(3, 1.0), 0.0}), UsageError);
  EXPECT_THROW(exchange_integral({a, a, 0.1}), UsageError);
  EXPECT_THROW(exchange_integral({a, build_dicke(2, 2.0), 0.0}), UsageError);
  EXPECT_THROW(exchange_integral_mixed_rates(2, 0.0), UsageError);
  EXPECT_THROW(exchange_integral_mixed_rates(2, -1.0), UsageError);
  EXPECT_THROW(RecurrenceState({1.0}, {0.0}, {0.0}), InvalidLadder);
}

TEST(Exchange, MixedRatesIdentityRatio) {
  for (int m = 1; m <= 20; ++m) {
    EXPECT_NEAR(exchange_integral_mixed_rates(m, 1.0).value, twin_value(build_dicke(m, 1.0)),
                1e-15);
  }
}

TEST(Exchange, MixedRatesClosedFormFactor) {
  EXPECT_NEAR(mixed_rate_factor(1.2, 10), 0.95935, 5e-5);
  const double ratio = exchange_integral_mixed_rates(5, 1.2).value / twin_value(build_dicke(5, 1.0));
  EXPECT_NEAR(ratio, std::pow(2.0 * std::sqrt(1.2) / 2.2, 10), 1e-14);
}

TEST(ExchangeProperty, MixedRatesFactorOverRandomInputs) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> m_dist(1, 80);
  std::uniform_real_distribution<double> log_r(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = m_dist(rng);
    const double r = std::exp(log_r(rng));
    const double twin = twin_value(build_dicke(m, 1.0));
    const double mixed = exchange_integral_mixed_rates(m, r).value;
    ASSERT_NEAR(mixed, mixed_rate_factor(r, 2 * m) * twin, 1e-13 * std::abs(twin)) << m << " " << r;
  }
}

// The per-step substitution undershoots the exact cross-ladder integral.
TEST(Exchange, MixedRatesBelowExactCrossIntegral) {
  for (double r : {1.2, 0.5}) {
    for (int m : {2, 3}) {
      const auto a = build_dicke(m, 1.0);
      const auto b = build_dicke(m, r);
      const double exact = oracle_integral(a, b, 1).value;
      const double substituted = exchange_integral_mixed_rates(m, r).value;
      EXPECT_LT(substituted, exact) << r << " " << m;
    }
  }
  EXPECT_NEAR(oracle_integral(build_dicke(2, 1.0), build_dicke(2, 1.2), 1).value, 0.90685102672993245,
              1e-14);
}

TEST(ExchangeProperty, BoundednessOverRandomLadders) {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> m_dist(1, 30);
  for (int trial = 0; trial < 300; ++trial) {
    const auto l = random_ladder(rng, m_dist(rng));
    const double v = twin_value(l);
    ASSERT_LE(std::abs(v), 1.0 + 1e-12);
  }
  for (int m = 1; m <= 200; m += 7) {
    const double d = twin_value(build_dicke(m, 1.0));
    ASSERT_GT(d, 0.0);
    ASSERT_LE(d, 1.0 + 1e-12);
  }
}

TEST(Sweep, RowsAndReferenceColumns) {
  const auto rows = qfi_vs_n_sweep({LadderFamily::harmonic, 0.0}, {2, 4, 10});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.ok);
    const double n = r.n;
    EXPECT_NEAR(r.i_n, 1.0, 1e-12);
    EXPECT_NEAR(r.f_q, n * (n + 2) / 2, 1e-9);
    EXPECT_DOUBLE_EQ(r.dphi2_snl, 1.0 / n);
    EXPECT_DOUBLE_EQ(r.dphi2_hl, 1.0 / (n * n));
    EXPECT_NEAR(r.dphi2, r.dphi2_fock, 1e-15);
  }
  EXPECT_THROW(qfi_vs_n_sweep({LadderFamily::dicke, 0.0}, {4, 5}), UsageError);
  EXPECT_EQ(default_sweep_range().front(), 4);
  EXPECT_EQ(default_sweep_range().back(), 500);
}

TEST(Sweep, BitIdenticalAcrossThreadCounts) {
  std::vector<int> ns;
  for (int n = 2; n <= 120; n += 2) ns.push_back(n);
  const FamilySpec fam{LadderFamily::anharmonic, 10.0};
  const auto one = qfi_vs_n_sweep(fam, ns, 1);
  const auto many = qfi_vs_n_sweep(fam, ns, 4);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    EXPECT_EQ(one[k].n, many[k].n);
    EXPECT_EQ(std::memcmp(&one[k].i_n, &many[k].i_n, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&one[k].f_q, &many[k].f_q, sizeof(double)), 0);
  }
}

TEST(Sweep, DickeSnlHlBracketing) {
  const auto rows = qfi_vs_n_sweep({LadderFamily::dicke, 0.0}, default_sweep_range(), 2);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.ok);
    ASSERT_LE(r.dphi2, r.dphi2_snl);
    ASSERT_GE(r.dphi2, r.dphi2_hl);
  }
}
