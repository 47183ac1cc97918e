#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dickeqfi/exchange.hpp"
#include "dickeqfi/ladder.hpp"

namespace dickeqfi {

struct OracleOptions {
  // Largest m + n accepted; the cost is (m + n)! orderings.
  int max_total_photons = 8;
  // When set, a seeded random choice of which t and s variables are the
  // exchanged ones replaces the default "first l of each group".
  std::optional<std::uint64_t> relabel_seed;
  int jobs = 1;
};

/// The time-domain integrand of one correlation term: m variables t for arm
/// A and n variables s for arm B, of which l of each are exchanged. Four
/// amplitude chains run over these variables:
///   C1 = A*(t)  C2 = B*(s)  C3 = A(exchanged s, regular t)  C4 = B(exchanged t, regular s)
/// Integrating out the latest remaining time of an ordering contributes
/// 1/Lambda, where Lambda collects the current level exponent of each chain.
class OrderingIntegrand {
 public:
  OrderingIntegrand(const DecayLadder& a, const DecayLadder& b, int exchanged,
                    std::optional<std::uint64_t> relabel_seed = std::nullopt);

  int variable_count() const { return m_ + n_; }
  int exchanged() const { return l_; }

  // Variables 0..m-1 are t, m..m+n-1 are s.
  bool is_exchanged(int variable) const { return exchanged_[variable]; }
  // Exchanged t and all s sit on the B chains and so are shifted by a delay.
  bool is_delayed(int variable) const;

  // Sum of the four chain exponents once the variables in `emitted` are gone.
  std::complex<double> exponent(std::uint32_t emitted) const;
  // Rate for times before arm B starts: only the A chains are running.
  std::complex<double> early_exponent(std::uint32_t emitted) const;

  // Product of 1/Lambda along one ordering (earliest time first), without the
  // ladder-rate prefactor.
  std::complex<double> term(std::span<const int> order) const;

  // prod(gamma_A) prod(gamma_B) / (m! n!)
  double prefactor() const { return prefactor_; }

  // Chain levels (C1..C4) once `emitted` are gone.
  std::array<int, 4> chain_levels(std::uint32_t emitted) const;

 private:
  DecayLadder a_;
  DecayLadder b_;
  int m_;
  int n_;
  int l_;
  std::vector<bool> exchanged_;
  std::vector<std::uint8_t> chains_;  // bitmask of C1..C4 per variable
  double prefactor_ = 1.0;
};

/// I^(l) between the wavepackets of ladders a and b by exhaustive enumeration
/// of time orderings; delay > 0 shifts arm B later by that amount.
ExchangeIntegral oracle_integral(const DecayLadder& a, const DecayLadder& b, int exchanged,
                                 double delay = 0.0, const OracleOptions& options = {});

struct ExactOracleResult {
  ExchangeIntegral integral;
  std::string real_fraction;
  std::string imag_fraction;
};

/// Same enumeration in exact rational arithmetic on the given double inputs.
/// Undelayed only, m + n <= 6.
ExactOracleResult oracle_integral_exact(const DecayLadder& a, const DecayLadder& b, int exchanged);

inline constexpr int exact_oracle_limit = 6;

struct DelayCheck {
  double exact = 0.0;  // delayed integral from the oracle
  double bound = 0.0;  // exp(-2 gamma_top tau) times the undelayed value
  double ideal = 0.0;  // undelayed value
  bool holds() const { return exact >= bound; }
};

DelayCheck oracle_delay_check(const DecayLadder& ladder, double tau,
                              const OracleOptions& options = {});

/// Integral over 0 < x_1 < ... < x_p < tau of
///   exp(-r_0 x_1 - r_1 (x_2 - x_1) - ... - r_p (tau - x_p)),
/// for p + 1 = rates.size(); handles repeated rates.
std::complex<double> hypoexponential_convolution(std::span<const std::complex<double>> rates,
                                                 double tau);

}  // namespace dickeqfi
