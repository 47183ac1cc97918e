#include "dickeqfi/exchange.hpp"

#include <cmath>
#include <limits>

#include "dickeqfi/errors.hpp"

namespace dickeqfi {

std::string to_string(IntegralMethod method) {
  switch (method) {
    case IntegralMethod::recurrence: return "recurrence";
    case IntegralMethod::oracle: return "oracle";
    case IntegralMethod::oracle_exact: return "oracle_exact";
    case IntegralMethod::closed_form: return "closed_form";
  }
  return "unknown";
}

RecurrenceState::RecurrenceState(std::vector<double> numerator_rates,
                                 std::vector<double> denominator_rates,
                                 std::vector<double> frequencies)
    : m_(static_cast<int>(numerator_rates.size())),
      num_(std::move(numerator_rates)),
      den_(std::move(denominator_rates)),
      freq_(std::move(frequencies)) {
  if (m_ < 1) throw UsageError("recurrence needs at least one level");
  if (den_.size() != num_.size() || freq_.size() != num_.size()) {
    throw UsageError("recurrence rate and frequency tables differ in length");
  }
  for (int j = 0; j < m_; ++j) {
    if (!(num_[j] > 0.0) || !(den_[j] > 0.0) || !std::isfinite(num_[j]) ||
        !std::isfinite(den_[j])) {
      throw InvalidLadder("recurrence rates must be positive and finite");
    }
  }
  const auto cells = static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_);
  f0_.assign(cells, 0.0);
  f1_.assign(cells, 0.0);
  f2_.assign(cells, 0.0);
  run();
}

std::size_t RecurrenceState::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= m_ || j >= m_) {
    throw std::out_of_range("recurrence table index out of range");
  }
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
         static_cast<std::size_t>(j);
}

double RecurrenceState::num(int level) const { return level == 0 ? 0.0 : num_[level - 1]; }
double RecurrenceState::den(int level) const { return level == 0 ? 0.0 : den_[level - 1]; }

std::complex<double> RecurrenceState::kappa(int level) const {
  if (level == 0) return 0.0;
  return {0.5 * den_[level - 1], freq_[level - 1]};
}

// c2: both regular chains one step below the exchanged ones.
double RecurrenceState::c2(int i, int j) const { return den(m_ - 1 - i) + den(m_ - 1 - j); }

// c0: no exchanged photon left.
double RecurrenceState::c0(int i, int j) const { return den(m_ - i) + den(m_ - j); }

// c1: one exchanged photon left, chains mismatched by one level.
std::complex<double> RecurrenceState::c1(int i, int j) const {
  return std::conj(kappa(m_ - 1 - i)) + kappa(m_ - i) + std::conj(kappa(m_ - j)) +
         kappa(m_ - 1 - j);
}

void RecurrenceState::run() {
  const int m = m_;
  auto check = [](double re) {
    if (!(re > 0.0)) {
      throw InvalidLadder("recurrence exponent with nonpositive real part; integral diverges");
    }
  };
  double peak = 0.0;
  auto track = [&peak](double v) {
    if (!std::isfinite(v)) throw NumericFailure("recurrence produced a non-finite value");
    peak = std::max(peak, std::abs(v));
  };

  // Subspace k holds F0 at i+j = k, F1 at i+j = k-1 and F2 at i+j = k-2, so
  // every entry only reads entries of subspace k-1 or ones finished earlier in k.
  for (int k = 0; k <= 2 * m; ++k) {
    for (int i = 0; i < m; ++i) {
      int j = k - i;
      if (j >= 0 && j < m) {
        double v = 0.0;
        if (i == 0 && j == 0) {
          v = 1.0;
        } else {
          if (i > 0) {
            check(c0(i - 1, j));
            v += num(m - i + 1) / c0(i - 1, j) * f0_[index(i - 1, j)];
          }
          if (j > 0) {
            check(c0(i, j - 1));
            v += num(m - j + 1) / c0(i, j - 1) * f0_[index(i, j - 1)];
          }
        }
        track(v);
        f0_[index(i, j)] = v;
      }

      j = k - 1 - i;
      if (j >= 0 && j < m) {
        check(c0(i, j));
        std::complex<double> v = std::sqrt(num(m - i) * num(m - j)) / c0(i, j) * f0_[index(i, j)];
        if (i > 0) {
          check(c1(i - 1, j).real());
          v += std::sqrt(num(m - i) * num(m - i + 1)) / c1(i - 1, j) * f1_[index(i - 1, j)];
        }
        if (j > 0) {
          check(c1(i, j - 1).real());
          v += std::sqrt(num(m - j) * num(m - j + 1)) / c1(i, j - 1) * f1_[index(i, j - 1)];
        }
        track(std::abs(v));
        f1_[index(i, j)] = v;
      }

      j = k - 2 - i;
      if (j >= 0 && j < m) {
        check(c1(i, j).real());
        // The two orderings of the last exchanged pair are complex conjugates.
        double v = 2.0 * std::sqrt(num(m - i) * num(m - j)) * (f1_[index(i, j)] / c1(i, j)).real();
        if (i > 0) {
          check(c2(i - 1, j));
          v += num(m - i) / c2(i - 1, j) * f2_[index(i - 1, j)];
        }
        if (j > 0) {
          check(c2(i, j - 1));
          v += num(m - j) / c2(i, j - 1) * f2_[index(i, j - 1)];
        }
        track(v);
        f2_[index(i, j)] = v;
      }
    }
  }
  max_magnitude_ = peak;
}

double RecurrenceState::integral() const {
  return f2(m_ - 1, m_ - 1) / (static_cast<double>(m_) * static_cast<double>(m_));
}

namespace {

ExchangeIntegral from_state(const RecurrenceState& state) {
  const int m = state.levels();
  ExchangeIntegral out;
  out.value = state.integral();
  out.total_photons = 2 * m;
  out.method = IntegralMethod::recurrence;
  out.exchanged_count = 1;
  out.term_count = 3ULL * static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m);
  // Each entry is a short sum of products; rounding grows with the number
  // of subspaces it passes through.
  out.error_estimate = 8.0 * (2.0 * m + 1.0) * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, state.max_magnitude()) / (static_cast<double>(m) * m);
  return out;
}

}  // namespace

ExchangeIntegral exchange_integral(const TwinConfiguration& config) {
  if (config.ladder_a.levels() != config.ladder_b.levels()) {
    throw UsageError("exchange recurrence needs equal photon numbers in both arms (got " +
                     std::to_string(config.ladder_a.levels()) + " and " +
                     std::to_string(config.ladder_b.levels()) + ")");
  }
  if (config.delay != 0.0) {
    throw UsageError("exchange recurrence does not handle a delay; use the oracle");
  }
  if (!(config.ladder_a == config.ladder_b)) {
    throw UsageError(
        "exchange recurrence needs identical ladders; use the mixed-rate variant or the oracle");
  }
  const auto& ladder = config.ladder_a;
  std::vector<double> rates(ladder.rates().begin(), ladder.rates().end());
  std::vector<double> freqs(ladder.frequencies().begin(), ladder.frequencies().end());
  RecurrenceState state(rates, rates, std::move(freqs));
  return from_state(state);
}

ExchangeIntegral exchange_integral_mixed_rates(const DecayLadder& ladder, double gamma_ratio) {
  if (!(gamma_ratio > 0.0) || !std::isfinite(gamma_ratio)) {
    throw UsageError("coupling ratio must be positive and finite");
  }
  const auto rates = ladder.rates();
  std::vector<double> num(rates.size());
  std::vector<double> den(rates.size());
  for (std::size_t j = 0; j < rates.size(); ++j) {
    const double other = gamma_ratio * rates[j];
    num[j] = std::sqrt(rates[j] * other);
    den[j] = 0.5 * (rates[j] + other);
  }
  RecurrenceState state(std::move(num), std::move(den),
                        std::vector<double>(ladder.frequencies().begin(),
                                            ladder.frequencies().end()));
  return from_state(state);
}

ExchangeIntegral exchange_integral_mixed_rates(int m, double gamma_ratio) {
  return exchange_integral_mixed_rates(build_dicke(m, 1.0), gamma_ratio);
}

double mixed_rate_factor(double gamma_ratio, int n_total) {
  if (!(gamma_ratio > 0.0) || !std::isfinite(gamma_ratio)) {
    throw UsageError("coupling ratio must be positive and finite");
  }
  return std::pow(2.0 * std::sqrt(gamma_ratio) / (1.0 + gamma_ratio), n_total);
}

ExchangeIntegral make_closed_form_integral(double value, int total_photons, int exchanged_count) {
  ExchangeIntegral out;
  out.value = value;
  out.total_photons = total_photons;
  out.method = IntegralMethod::closed_form;
  out.exchanged_count = exchanged_count;
  return out;
}

}  // namespace dickeqfi
