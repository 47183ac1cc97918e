#include "dickeqfi/dickesim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dickeqfi/errors.hpp"

namespace dickeqfi {

double LossModel::purcell() const {
  return gamma_star == 0.0 ? std::numeric_limits<double>::infinity() : gamma_1d / gamma_star;
}

void LossModel::validate() const {
  if (!(gamma_1d > 0.0) || !std::isfinite(gamma_1d)) {
    throw UsageError("gamma_1d must be positive and finite");
  }
  if (!(gamma_star >= 0.0) || !std::isfinite(gamma_star)) {
    throw UsageError("gamma_star must be nonnegative and finite");
  }
}

LossModel LossModel::from_purcell(double purcell, double gamma_1d) {
  if (!(purcell > 0.0)) throw UsageError("Purcell factor must be positive");
  LossModel loss;
  loss.gamma_1d = gamma_1d;
  loss.gamma_star = std::isinf(purcell) ? 0.0 : gamma_1d / purcell;
  loss.validate();
  return loss;
}

double dicke_rate(int n_emitters, int m, double gamma_1d) {
  return m * (n_emitters - m + 1.0) * gamma_1d;
}

namespace {

void check_emitters(int n) {
  if (n < 1) throw UsageError("need at least one emitter, got " + std::to_string(n));
}

// Component k holds P_{N-k}, so the chain runs downward from the fully
// excited state and the Jacobian is lower bidiagonal.
BidiagonalSystem ladder_system(int n, const LossModel& loss) {
  BidiagonalSystem sys;
  sys.decay.resize(static_cast<std::size_t>(n) + 1);
  sys.feed.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const int m = n - k;
    sys.decay[k] = dicke_rate(n, m, loss.gamma_1d) + m * loss.gamma_star;
    sys.feed[k] = k == 0 ? 0.0 : dicke_rate(n, m + 1, loss.gamma_1d);
  }
  return sys;
}

double excited(const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < y.size(); ++k) s += y[k];
  return s;
}

}  // namespace

PopulationTrace dicke_populations(int n_emitters, const LossModel& loss,
                                  const std::vector<double>& t_grid,
                                  const IntegratorOptions& options) {
  check_emitters(n_emitters);
  loss.validate();
  if (t_grid.empty() || t_grid.front() != 0.0) throw UsageError("time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1]) || !std::isfinite(t_grid[i])) {
      throw UsageError("time grid must be strictly ascending and finite");
    }
  }

  const int n = n_emitters;
  std::vector<double> y0(static_cast<std::size_t>(n) + 1, 0.0);
  y0[0] = 1.0;
  SdirkIntegrator integrator(ladder_system(n, loss), std::move(y0), options.step);

  PopulationTrace trace;
  trace.n_emitters = n;
  auto record = [&](double t) {
    const auto& y = integrator.state();
    std::vector<double> p(y.size());
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      p[n - k] = y[k];
      sum += y[k];
    }
    trace.time.push_back(t);
    trace.populations.push_back(std::move(p));
    trace.sum_deficit.push_back(1.0 - sum);
  };

  for (double t : t_grid) {
    integrator.advance_to(t);
    record(t);
  }

  double horizon = std::max(
      t_grid.back(), options.horizon_factor * superradiance_timescale(n, loss.gamma_1d).exact);
  integrator.advance_to(horizon);
  int extensions = 0;
  while (excited(integrator.state()) > options.residual_tol) {
    if (++extensions > options.max_extensions) {
      throw NumericFailure("excited population did not decay below tolerance by t = " +
                           std::to_string(horizon));
    }
    horizon *= 2.0;
    integrator.advance_to(horizon);
    trace.horizon_extended = true;
  }

  trace.horizon = horizon;
  trace.residual = excited(integrator.state());
  trace.collection_probability = integrator.state().back();
  trace.residence.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k < n; ++k) trace.residence[n - k] = integrator.integral()[k];
  trace.steps = integrator.accepted_steps();
  trace.rejected_steps = integrator.rejected_steps();
  return trace;
}

std::vector<double> dicke_residence_times(int n_emitters, const LossModel& loss) {
  check_emitters(n_emitters);
  loss.validate();
  const int n = n_emitters;
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  auto out_rate = [&](int m) { return dicke_rate(n, m, loss.gamma_1d) + m * loss.gamma_star; };
  out[n] = 1.0 / out_rate(n);
  for (int m = n - 1; m >= 1; --m) {
    out[m] = dicke_rate(n, m + 1, loss.gamma_1d) * out[m + 1] / out_rate(m);
  }
  return out;
}

CollectionProbability dicke_collection_probability(int n_emitters, const LossModel& loss,
                                                   const IntegratorOptions& options) {
  check_emitters(n_emitters);
  loss.validate();
  CollectionProbability out;
  const auto trace = dicke_populations(n_emitters, loss, {0.0}, options);
  out.exact = trace.collection_probability;
  out.horizon_extended = trace.horizon_extended;
  double product = 1.0;
  for (int m = 1; m <= n_emitters; ++m) {
    const double g = dicke_rate(n_emitters, m, loss.gamma_1d);
    product *= g / (g + m * loss.gamma_star);
  }
  out.product = product;
  out.log_estimate = 1.0 - std::log(static_cast<double>(n_emitters)) * loss.gamma_star /
                               loss.gamma_1d;
  return out;
}

SuperradianceTimescale superradiance_timescale(int n_emitters, double gamma_1d) {
  check_emitters(n_emitters);
  if (!(gamma_1d > 0.0)) throw UsageError("gamma_1d must be positive");
  SuperradianceTimescale out;
  for (int j = 1; j <= n_emitters; ++j) out.exact += 1.0 / dicke_rate(n_emitters, j, gamma_1d);
  out.asymptotic = std::log(static_cast<double>(n_emitters)) / (n_emitters * gamma_1d);
  return out;
}

}  // namespace dickeqfi
