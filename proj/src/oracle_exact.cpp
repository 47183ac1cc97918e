#include <gmpxx.h>

#include "dickeqfi/errors.hpp"
#include "dickeqfi/oracle.hpp"

namespace dickeqfi {

namespace {

struct Rational2 {
  mpq_class re;
  mpq_class im;
};

Rational2 operator+(const Rational2& x, const Rational2& y) { return {x.re + y.re, x.im + y.im}; }

Rational2 operator*(const Rational2& x, const Rational2& y) {
  return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

Rational2 inverse(const Rational2& z) {
  const mpq_class norm = z.re * z.re + z.im * z.im;
  if (norm == 0) throw NumericFailure("exact oracle hit a zero exponent");
  return {z.re / norm, -z.im / norm};
}

// Every finite double is a dyadic rational; mpq_class converts it exactly.
mpq_class exact(double x) { return mpq_class(x); }

class ExactWalker {
 public:
  ExactWalker(const DecayLadder& a, const DecayLadder& b, const OrderingIntegrand& in)
      : a_(a), b_(b), in_(in), count_(in.variable_count()) {
    full_ = (1U << count_) - 1U;
  }

  Rational2 run() {
    descend(0, Rational2{1, 0});
    return sum_;
  }

 private:
  Rational2 kappa(const DecayLadder& d, int level, bool conj) const {
    if (level == 0) return {0, 0};
    Rational2 k{exact(d.rate(level)) / 2, exact(d.frequency(level))};
    if (conj) k.im = -k.im;
    return k;
  }

  Rational2 exponent(std::uint32_t emitted) const {
    const auto lv = in_.chain_levels(emitted);
    return kappa(a_, lv[0], true) + kappa(b_, lv[1], true) + kappa(a_, lv[2], false) +
           kappa(b_, lv[3], false);
  }

  void descend(std::uint32_t emitted, Rational2 acc) {
    if (emitted == full_) {
      sum_ = sum_ + acc;
      return;
    }
    const Rational2 step = acc * inverse(exponent(emitted));
    for (int w = 0; w < count_; ++w) {
      if (!(emitted >> w & 1U)) descend(emitted | (1U << w), step);
    }
  }

  const DecayLadder& a_;
  const DecayLadder& b_;
  const OrderingIntegrand& in_;
  int count_;
  std::uint32_t full_;
  Rational2 sum_{0, 0};
};

}  // namespace

ExactOracleResult oracle_integral_exact(const DecayLadder& a, const DecayLadder& b,
                                        int exchanged) {
  const int total = a.levels() + b.levels();
  if (total > exact_oracle_limit) throw OracleTooLarge(total, exact_oracle_limit);
  const OrderingIntegrand integrand(a, b, exchanged);

  Rational2 sum = ExactWalker(a, b, integrand).run();
  mpq_class pre = 1;
  for (double g : a.rates()) pre *= exact(g);
  for (double g : b.rates()) pre *= exact(g);
  mpz_class fact = 1;
  for (int k = 2; k <= a.levels(); ++k) fact *= k;
  for (int k = 2; k <= b.levels(); ++k) fact *= k;
  pre /= mpq_class(fact);
  sum.re *= pre;
  sum.im *= pre;
  sum.re.canonicalize();
  sum.im.canonicalize();

  ExactOracleResult out;
  out.integral.value = sum.re.get_d();
  out.integral.imag = sum.im.get_d();
  out.integral.total_photons = total;
  out.integral.method = IntegralMethod::oracle_exact;
  out.integral.exchanged_count = exchanged;
  mpz_class orderings = 1;
  for (int k = 2; k <= total; ++k) orderings *= k;
  out.integral.term_count = orderings.get_ui();
  out.real_fraction = sum.re.get_str();
  out.imag_fraction = sum.im.get_str();
  return out;
}

}  // namespace dickeqfi
