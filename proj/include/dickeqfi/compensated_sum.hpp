#pragma once

#include <cmath>
#include <complex>

namespace dickeqfi {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    abs_sum_ += std::abs(x);
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double value() const { return sum_ + comp_; }
  // Sum of magnitudes of everything added; scales the rounding-error bound.
  double magnitude() const { return abs_sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_sum_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }

  CompensatedComplexSum& operator+=(std::complex<double> z) {
    add(z);
    return *this;
  }

  std::complex<double> value() const { return {re_.value(), im_.value()}; }
  double magnitude() const { return re_.magnitude() + im_.magnitude(); }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace dickeqfi
