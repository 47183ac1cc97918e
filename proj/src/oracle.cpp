#include "dickeqfi/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "dickeqfi/compensated_sum.hpp"
#include "dickeqfi/errors.hpp"
#include "dickeqfi/parallel.hpp"

namespace dickeqfi {

namespace {

constexpr std::uint8_t c1_bit = 1;
constexpr std::uint8_t c2_bit = 2;
constexpr std::uint8_t c3_bit = 4;
constexpr std::uint8_t c4_bit = 8;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void check_exchanged(int l, int m, int n) {
  if (l < 0 || l > std::min(m, n)) {
    throw UsageError("exchanged pair count " + std::to_string(l) + " outside 0.." +
                     std::to_string(std::min(m, n)));
  }
}

}  // namespace

OrderingIntegrand::OrderingIntegrand(const DecayLadder& a, const DecayLadder& b, int exchanged,
                                     std::optional<std::uint64_t> relabel_seed)
    : a_(a), b_(b), m_(a.levels()), n_(b.levels()), l_(exchanged) {
  check_exchanged(l_, m_, n_);
  if (m_ + n_ > 31) throw OracleTooLarge(m_ + n_, 31);

  std::vector<int> t_idx(static_cast<std::size_t>(m_));
  std::vector<int> s_idx(static_cast<std::size_t>(n_));
  std::iota(t_idx.begin(), t_idx.end(), 0);
  std::iota(s_idx.begin(), s_idx.end(), m_);
  if (relabel_seed) {
    std::mt19937_64 rng(*relabel_seed);
    std::shuffle(t_idx.begin(), t_idx.end(), rng);
    std::shuffle(s_idx.begin(), s_idx.end(), rng);
  }
  exchanged_.assign(static_cast<std::size_t>(m_ + n_), false);
  for (int k = 0; k < l_; ++k) {
    exchanged_[t_idx[k]] = true;
    exchanged_[s_idx[k]] = true;
  }

  chains_.resize(static_cast<std::size_t>(m_ + n_));
  for (int v = 0; v < m_ + n_; ++v) {
    const bool is_t = v < m_;
    if (is_t) {
      chains_[v] = c1_bit | (exchanged_[v] ? c4_bit : c3_bit);
    } else {
      chains_[v] = c2_bit | (exchanged_[v] ? c3_bit : c4_bit);
    }
  }

  for (double g : a_.rates()) prefactor_ *= g;
  for (double g : b_.rates()) prefactor_ *= g;
  prefactor_ /= factorial(m_) * factorial(n_);
}

bool OrderingIntegrand::is_delayed(int variable) const {
  return (chains_[variable] & (c2_bit | c4_bit)) != 0;
}

std::array<int, 4> OrderingIntegrand::chain_levels(std::uint32_t emitted) const {
  std::array<int, 4> level{m_, n_, m_, n_};
  for (int v = 0; v < m_ + n_; ++v) {
    if ((emitted >> v & 1U) == 0) continue;
    for (int c = 0; c < 4; ++c) {
      if (chains_[v] >> c & 1U) --level[c];
    }
  }
  return level;
}

std::complex<double> OrderingIntegrand::exponent(std::uint32_t emitted) const {
  const auto lv = chain_levels(emitted);
  return std::conj(a_.amplitude_exponent(lv[0])) + std::conj(b_.amplitude_exponent(lv[1])) +
         a_.amplitude_exponent(lv[2]) + b_.amplitude_exponent(lv[3]);
}

std::complex<double> OrderingIntegrand::early_exponent(std::uint32_t emitted) const {
  const auto lv = chain_levels(emitted);
  return std::conj(a_.amplitude_exponent(lv[0])) + a_.amplitude_exponent(lv[2]);
}

std::complex<double> OrderingIntegrand::term(std::span<const int> order) const {
  if (static_cast<int>(order.size()) != m_ + n_) {
    throw UsageError("ordering must list every variable once");
  }
  std::uint32_t emitted = 0;
  std::complex<double> value = 1.0;
  for (int v : order) {
    if (v < 0 || v >= m_ + n_ || (emitted >> v & 1U)) {
      throw UsageError("ordering must list every variable once");
    }
    value /= exponent(emitted);
    emitted |= 1U << v;
  }
  return value;
}

std::complex<double> hypoexponential_convolution(std::span<const std::complex<double>> rates,
                                                 double tau) {
  const auto n = static_cast<Eigen::Index>(rates.size());
  if (n == 0) throw UsageError("convolution needs at least one rate");
  if (n == 1) return std::exp(-rates[0] * tau);
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    gen(k, k) = -rates[static_cast<std::size_t>(k)];
    if (k > 0) gen(k, k - 1) = 1.0;
  }
  const Eigen::MatrixXcd prop = (tau * gen).exp();
  return prop(n - 1, 0);
}

namespace {

// Depth-first walk over all orderings that start with a fixed variable.
class OrderingWalker {
 public:
  OrderingWalker(const OrderingIntegrand& integrand, double delay)
      : in_(integrand), count_(integrand.variable_count()), delay_(delay) {
    full_ = count_ == 32 ? ~0U : (1U << count_) - 1U;
  }

  std::complex<double> sum_from(int first) {
    sum_ = {};
    early_.clear();
    if (delay_ > 0.0) {
      early_.push_back(in_.early_exponent(0));
      const std::complex<double> cut0 = std::exp(-early_.back() * delay_);
      descend(0, first, cut0, true);
    } else {
      descend(0, first, 1.0, false);
    }
    return sum_.value();
  }

  double magnitude() const { return sum_.magnitude(); }

 private:
  // `acc` sums, over every admissible split of the prefix into "before arm B
  // starts" and "after", the value accumulated so far.
  void descend(std::uint32_t emitted, int v, std::complex<double> acc, bool early_open) {
    acc /= in_.exponent(emitted);
    const std::uint32_t next = emitted | (1U << v);
    bool still_early = early_open && !in_.is_delayed(v);
    if (still_early) {
      early_.push_back(in_.early_exponent(next));
      acc += hypoexponential_convolution(early_, delay_);
    }
    if (next == full_) {
      sum_ += acc;
    } else {
      for (int w = 0; w < count_; ++w) {
        if (!(next >> w & 1U)) descend(next, w, acc, still_early);
      }
    }
    if (still_early) early_.pop_back();
  }

  const OrderingIntegrand& in_;
  int count_;
  double delay_;
  std::uint32_t full_;
  std::vector<std::complex<double>> early_;
  CompensatedComplexSum sum_;
};

}  // namespace

ExchangeIntegral oracle_integral(const DecayLadder& a, const DecayLadder& b, int exchanged,
                                 double delay, const OracleOptions& options) {
  const int total = a.levels() + b.levels();
  if (total > options.max_total_photons) throw OracleTooLarge(total, options.max_total_photons);
  check_exchanged(exchanged, a.levels(), b.levels());
  if (!(delay >= 0.0) || !std::isfinite(delay)) {
    throw UsageError("delay must be nonnegative and finite");
  }

  const OrderingIntegrand integrand(a, b, exchanged, options.relabel_seed);
  struct Chunk {
    std::complex<double> sum;
    double magnitude = 0.0;
  };
  const auto chunks =
      parallel_map<Chunk>(static_cast<std::size_t>(total), options.jobs, [&](std::size_t first) {
        OrderingWalker walker(integrand, delay);
        Chunk c;
        c.sum = walker.sum_from(static_cast<int>(first));
        c.magnitude = walker.magnitude();
        return c;
      });

  CompensatedComplexSum total_sum;
  double magnitude = 0.0;
  for (const auto& c : chunks) {
    total_sum += c.sum;
    magnitude += c.magnitude;
  }

  const std::complex<double> value = total_sum.value() * integrand.prefactor();
  ExchangeIntegral out;
  out.value = value.real();
  out.imag = value.imag();
  out.total_photons = total;
  out.method = IntegralMethod::oracle;
  out.exchanged_count = exchanged;
  out.term_count = static_cast<std::uint64_t>(factorial(total));
  out.error_estimate = 4.0 * total * std::numeric_limits<double>::epsilon() * magnitude *
                       integrand.prefactor();
  return out;
}

DelayCheck oracle_delay_check(const DecayLadder& ladder, double tau,
                              const OracleOptions& options) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw UsageError("delay must be nonnegative");
  DelayCheck check;
  check.ideal = oracle_integral(ladder, ladder, 1, 0.0, options).value;
  check.exact = tau == 0.0 ? check.ideal : oracle_integral(ladder, ladder, 1, tau, options).value;
  check.bound = std::exp(-2.0 * ladder.rate(ladder.levels()) * tau) * check.ideal;
  return check;
}

}  // namespace dickeqfi
