#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dickeqfi/ladder.hpp"

namespace dickeqfi {

enum class IntegralMethod { recurrence, oracle, oracle_exact, closed_form };

std::string to_string(IntegralMethod method);

/// Value of an exchange integral with l exchanged photon pairs, plus where it
/// came from. For twin inputs the imaginary part vanishes; it is kept so the
/// cross-ladder and delayed oracle results can be inspected.
struct ExchangeIntegral {
  double value = 0.0;
  double imag = 0.0;
  int total_photons = 0;
  IntegralMethod method = IntegralMethod::recurrence;
  int exchanged_count = 1;
  // Rough absolute rounding-error bound on value.
  double error_estimate = 0.0;
  // Number of elementary terms that were summed (orderings, table entries).
  std::uint64_t term_count = 0;
};

/// Factorial-rescaled tables of the backward recurrence over the
/// excitation subspaces. Table index (i, j) counts the photons already
/// integrated out of the two regular chains; both run over 0..m-1.
///
/// Numerator and denominator rates are separate so that the mixed-coupling
/// substitution (geometric mean on top, arithmetic mean below) uses the same
/// code path as the twin case, where both equal the ladder rates.
class RecurrenceState {
 public:
  RecurrenceState(std::vector<double> numerator_rates, std::vector<double> denominator_rates,
                  std::vector<double> frequencies);

  int levels() const { return m_; }

  double f0(int i, int j) const { return f0_[index(i, j)]; }
  std::complex<double> f1(int i, int j) const { return f1_[index(i, j)]; }
  double f2(int i, int j) const { return f2_[index(i, j)]; }

  double c0(int i, int j) const;
  std::complex<double> c1(int i, int j) const;
  double c2(int i, int j) const;

  // F2(m-1, m-1) / m^2
  double integral() const;
  // Largest magnitude stored in any table.
  double max_magnitude() const { return max_magnitude_; }

 private:
  std::size_t index(int i, int j) const;
  double num(int level) const;
  double den(int level) const;
  std::complex<double> kappa(int level) const;
  void run();

  int m_;
  std::vector<double> num_;
  std::vector<double> den_;
  std::vector<double> freq_;
  std::vector<double> f0_;
  std::vector<std::complex<double>> f1_;
  std::vector<double> f2_;
  double max_magnitude_ = 0.0;
};

/// I_N for an identical, undelayed twin pair, in O(m^2) operations.
ExchangeIntegral exchange_integral(const TwinConfiguration& config);

/// Twins whose couplings differ by the ratio r = gamma'/gamma, using the
/// per-step mean substitution. Equals ((2 sqrt r)/(1+r))^N times the twin
/// value; the exact cross-ladder integral is available from the oracle.
ExchangeIntegral exchange_integral_mixed_rates(const DecayLadder& ladder, double gamma_ratio);
ExchangeIntegral exchange_integral_mixed_rates(int m, double gamma_ratio);

/// ((2 sqrt r)/(1+r))^n_total
double mixed_rate_factor(double gamma_ratio, int n_total);

/// Wraps an externally known value, such as I = 1 for a single-mode ladder.
ExchangeIntegral make_closed_form_integral(double value, int total_photons,
                                           int exchanged_count = 1);

}  // namespace dickeqfi
