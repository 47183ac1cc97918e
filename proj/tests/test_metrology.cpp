#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dickeqfi/errors.hpp"
#include "dickeqfi/exchange.hpp"
#include "dickeqfi/metrology.hpp"
#include "dickeqfi/oracle.hpp"

using namespace dickeqfi;

namespace {

ExchangeIntegral value(double v, int n_total = 4) { return make_closed_form_integral(v, n_total); }

const double x4 = 11.0 / 12.0;

}  // namespace

TEST(Qfi, General) {
  EXPECT_DOUBLE_EQ(qfi_general(1, 1, value(1.0)).qfi, 4.0);
  EXPECT_DOUBLE_EQ(qfi_general(5, 0, value(0.3)).qfi, 5.0);
  EXPECT_DOUBLE_EQ(qfi_general(2, 2, value(x4)).qfi, 8.0 * x4 + 4.0);
  EXPECT_EQ(qfi_general(2, 2, value(x4)).input_kind, InputKind::general);
  EXPECT_THROW(qfi_general(2, 2, make_closed_form_integral(1.0, 4, 2)), UsageError);
  EXPECT_THROW(qfi_general(-1, 2, value(1.0)), UsageError);
}

TEST(Qfi, Twin) {
  EXPECT_DOUBLE_EQ(qfi_twin(4, value(1.0)).qfi, 12.0);
  EXPECT_DOUBLE_EQ(qfi_twin(10, value(0.0)).qfi, 10.0);
  const auto r = qfi_twin(100, value(0.82, 100));
  EXPECT_NEAR(r.qfi, 4200.0, 1e-9);
  EXPECT_NEAR(r.snl_ratio, 42.0, 1e-12);
  EXPECT_NEAR(r.hl_ratio, 0.42, 1e-12);
  EXPECT_NEAR(r.phase_variance * r.qfi * r.repetitions, 1.0, 1e-15);
  EXPECT_THROW(qfi_twin(5, value(1.0)), UsageError);
  EXPECT_THROW(qfi_twin(0, value(1.0)), UsageError);
  const auto rep = qfi_twin(4, value(1.0), 10);
  EXPECT_NEAR(rep.phase_variance, 1.0 / 120.0, 1e-15);
}

TEST(QfiProperty, GeneralSymmetricAndTwinMonotone) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> n_dist(0, 300);
  std::uniform_real_distribution<double> i_dist(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = n_dist(rng);
    const int n = n_dist(rng);
    const double i = i_dist(rng);
    ASSERT_EQ(qfi_general(m, n, value(i)).qfi, qfi_general(n, m, value(i)).qfi);
    const int total = 2 * (1 + m);
    const double i2 = i_dist(rng);
    const auto lo = qfi_twin(total, value(std::min(i, i2)));
    const auto hi = qfi_twin(total, value(std::max(i, i2)));
    ASSERT_LE(lo.qfi, hi.qfi);
    ASSERT_LE(hi.qfi, total * (total + 2.0) / 2.0 + 1e-9);
    ASSERT_GE(lo.qfi, 0.0);
  }
}

TEST(Qfi, MixedNumber) {
  EXPECT_DOUBLE_EQ(qfi_mixed_number(3, {{1.0, 0, 0.0}}).qfi, 3.0);
  EXPECT_DOUBLE_EQ(qfi_mixed_number(3, {{1.0, 2, 0.7}}).qfi, qfi_general(3, 2, value(0.7)).qfi);
  EXPECT_DOUBLE_EQ(qfi_mixed_number(2, {{0.5, 0, 0.0}, {0.5, 2, 1.0}}).qfi, 7.0);
  EXPECT_THROW(qfi_mixed_number(2, {{0.5, 0, 0.0}, {0.4, 2, 1.0}}), UsageError);
  EXPECT_THROW(qfi_mixed_number(2, {{-0.5, 0, 0.0}, {1.5, 2, 1.0}}), UsageError);
  EXPECT_THROW(qfi_mixed_number(2, {}), UsageError);
}

TEST(Qfi, LossyLowerBound) {
  const auto pure = qfi_twin(100, value(0.82, 100));
  EXPECT_EQ(qfi_lossy_lower_bound(1.0, pure).qfi, pure.qfi);
  EXPECT_EQ(qfi_lossy_lower_bound(0.0, pure).qfi, 0.0);
  const auto b = qfi_lossy_lower_bound(0.9, pure);
  EXPECT_NEAR(b.qfi, 0.81 * pure.qfi, 1e-9);
  EXPECT_EQ(b.input_kind, InputKind::lossy_lower_bound);
  EXPECT_THROW(qfi_lossy_lower_bound(1.1, pure), UsageError);
  EXPECT_THROW(qfi_lossy_lower_bound(-0.1, pure), UsageError);
}

TEST(Parity, SingleModeIsLegendre) {
  for (int m = 1; m <= 6; ++m) {
    const auto ones = single_mode_integrals(m);
    for (double phi = 0.0; phi < 1.6; phi += 0.05) {
      ASSERT_NEAR(parity_expectation(m, ones, phi),
                  std::legendre(static_cast<unsigned>(m), std::cos(2.0 * phi)), 1e-12)
          << m << " " << phi;
    }
  }
}

TEST(Parity, ValueAtZeroAndFlatness) {
  const auto d2 = build_dicke(2, 1.0);
  std::vector<double> ints;
  for (int l = 0; l <= 2; ++l) ints.push_back(oracle_integral(d2, d2, l).value);
  EXPECT_NEAR(parity_expectation(2, ints, 0.0), 1.0, 1e-15);
  EXPECT_LE(std::abs(parity_numerical_slope(2, ints)), 1e-8);
  const double curvature = parity_numerical_curvature(2, ints);
  EXPECT_NEAR(curvature, 2.0 * 2.0 * (2.0 * x4 + 1.0), 1e-6 * curvature);
  const auto curve = parity_curve(2, ints, {0.0, 0.3, 0.7});
  EXPECT_DOUBLE_EQ(curve.curvature, 4.0 * (2.0 * ints[1] + ints[0]));
  for (double o : curve.expectation) {
    EXPECT_LE(o, 1.0 + 1e-12);
    EXPECT_GE(o, -1.0 - 1e-12);
  }
  EXPECT_THROW(parity_expectation(2, {1.0, 1.0}, 0.1), UsageError);
}

TEST(Parity, PhaseVariance) {
  EXPECT_DOUBLE_EQ(parity_phase_variance(1, value(1.0, 2)), 0.25);
  for (int m = 1; m <= 10; ++m) {
    const double n = 2.0 * m;
    EXPECT_NEAR(parity_phase_variance(m, value(1.0, 2 * m)), 2.0 / (n * (n + 2.0)), 1e-15);
    // Legendre slope at 1 from the curvature: -d2/dphi2 P_m(cos 2 phi) = 4 P'_m(1).
    EXPECT_NEAR(parity_numerical_curvature(m, single_mode_integrals(m)) / 4.0, m * (m + 1) / 2.0,
                1e-6 * m * m);
  }
  EXPECT_NEAR(parity_phase_variance(2, value(x4)), 1.0 / (8.0 * x4 + 4.0), 1e-15);
}

TEST(ParityProperty, SaturationIdentity) {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> m_dist(1, 250);
  std::uniform_real_distribution<double> i_dist(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = m_dist(rng);
    const auto i = value(i_dist(rng), 2 * m);
    ASSERT_NEAR(parity_phase_variance(m, i) * qfi_twin(2 * m, i).qfi, 1.0, 1e-12);
  }
}

TEST(Metrology, ReportJson) {
  const nlohmann::json j = qfi_twin(4, value(1.0));
  EXPECT_EQ(j.at("qfi"), 12.0);
  EXPECT_EQ(j.at("input_kind"), "twin");
  EXPECT_EQ(j.at("n_total"), 4);
}
