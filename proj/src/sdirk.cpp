#include "dickeqfi/sdirk.hpp"

#include <algorithm>
#include <cmath>

#include "dickeqfi/errors.hpp"

namespace dickeqfi {

const Sdirk4Tableau& sdirk4_tableau() {
  static const Sdirk4Tableau t{
      {1.0 / 4.0, 3.0 / 4.0, 11.0 / 20.0, 1.0 / 2.0, 1.0},
      {{{1.0 / 4.0, 0.0, 0.0, 0.0, 0.0},
        {1.0 / 2.0, 1.0 / 4.0, 0.0, 0.0, 0.0},
        {17.0 / 50.0, -1.0 / 25.0, 1.0 / 4.0, 0.0, 0.0},
        {371.0 / 1360.0, -137.0 / 2720.0, 15.0 / 544.0, 1.0 / 4.0, 0.0},
        {25.0 / 24.0, -49.0 / 48.0, 125.0 / 16.0, -85.0 / 12.0, 1.0 / 4.0}}},
      {25.0 / 24.0, -49.0 / 48.0, 125.0 / 16.0, -85.0 / 12.0, 1.0 / 4.0},
      {59.0 / 48.0, -17.0 / 96.0, 225.0 / 32.0, -85.0 / 12.0, 0.0}};
  return t;
}

void BidiagonalSystem::apply(const std::vector<double>& y, std::vector<double>& out) const {
  out.resize(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    out[k] = -decay[k] * y[k] + (k > 0 ? feed[k] * y[k - 1] : 0.0);
  }
}

void BidiagonalSystem::solve_shifted(double scale, std::vector<double>& r) const {
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double rhs = r[k] + (k > 0 ? scale * feed[k] * r[k - 1] : 0.0);
    r[k] = rhs / (1.0 + scale * decay[k]);
  }
}

SdirkIntegrator::SdirkIntegrator(BidiagonalSystem system, std::vector<double> y0,
                                 StepControl control)
    : sys_(std::move(system)), control_(control), y_(std::move(y0)) {
  if (sys_.decay.size() != y_.size() || sys_.feed.size() != y_.size()) {
    throw UsageError("integrator state and system sizes differ");
  }
  for (double d : sys_.decay) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw UsageError("decay rates must be nonnegative");
  }
  q_.assign(y_.size(), 0.0);
  for (auto& k : k_) k.assign(y_.size(), 0.0);
  double fastest = 0.0;
  for (double d : sys_.decay) fastest = std::max(fastest, d);
  h_ = control_.initial_step > 0.0 ? control_.initial_step
                                   : (fastest > 0.0 ? 1e-3 / fastest : 1e-3);
}

double SdirkIntegrator::attempt(double h) {
  const auto& tab = sdirk4_tableau();
  const std::size_t n = y_.size();
  const double shift = h * Sdirk4Tableau::gamma;
  std::vector<double> stage(n);
  dq_.assign(n, 0.0);

  for (int i = 0; i < Sdirk4Tableau::stages; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      double acc = y_[c];
      for (int j = 0; j < i; ++j) acc += h * tab.a[i][j] * k_[j][c];
      stage[c] = acc;
    }
    sys_.solve_shifted(shift, stage);
    for (std::size_t c = 0; c < n; ++c) dq_[c] += h * tab.b[i] * stage[c];
    sys_.apply(stage, k_[i]);
  }
  // Stiffly accurate: the last stage value is the new state.
  y_new_ = stage;

  work_.assign(n, 0.0);
  for (int i = 0; i < Sdirk4Tableau::stages; ++i) {
    const double w = h * (tab.b[i] - tab.b_hat[i]);
    for (std::size_t c = 0; c < n; ++c) work_[c] += w * k_[i][c];
  }
  sys_.solve_shifted(shift, work_);

  double err = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const double scale =
        control_.abs_tol + control_.rel_tol * std::max(std::abs(y_[c]), std::abs(y_new_[c]));
    err = std::max(err, std::abs(work_[c]) / scale);
  }
  if (!std::isfinite(err)) throw NumericFailure("integrator error estimate is not finite");
  return err;
}

void SdirkIntegrator::advance_to(double t_end) {
  if (t_end < t_) throw UsageError("integrator cannot step backwards in time");
  while (t_ < t_end) {
    if (accepted_ + rejected_ >= control_.max_steps) {
      throw NumericFailure("integrator exceeded its step budget");
    }
    const double remaining = t_end - t_;
    const bool last = h_ >= remaining;
    const double h = last ? remaining : h_;
    const double err = attempt(h);
    const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-12), -0.25), 0.2, 4.0);
    if (err <= 1.0) {
      y_.swap(y_new_);
      for (std::size_t c = 0; c < q_.size(); ++c) q_[c] += dq_[c];
      t_ = last ? t_end : t_ + h;
      ++accepted_;
      if (!last) h_ = h * factor;
    } else {
      ++rejected_;
      h_ = h * factor;
      if (h_ < 1e-300) throw NumericFailure("integrator step size underflow");
    }
  }
}

}  // namespace dickeqfi
