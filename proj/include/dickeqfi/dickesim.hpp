#pragma once

#include <cstddef>
#include <vector>

#include "dickeqfi/sdirk.hpp"

namespace dickeqfi {

/// Collective waveguide decay gamma_1d and independent free-space loss
/// gamma_star per excited emitter.
struct LossModel {
  double gamma_1d = 1.0;
  double gamma_star = 0.0;

  // gamma_1d / gamma_star, infinite without loss.
  double purcell() const;
  void validate() const;

  // An infinite factor means no loss.
  static LossModel from_purcell(double purcell, double gamma_1d = 1.0);
};

struct IntegratorOptions {
  StepControl step;
  // The first horizon is horizon_factor * tau_SR; it doubles until the
  // excited population left is below residual_tol.
  double horizon_factor = 20.0;
  double residual_tol = 1e-10;
  int max_extensions = 60;
};

/// Populations of the symmetric ladder. populations[t][m] holds P_m at
/// time[t] for m = 0..N. residence[m] is the time integral of P_m for
/// m = 1..N (residence[0] is not tracked and stays 0).
struct PopulationTrace {
  int n_emitters = 0;
  std::vector<double> time;
  std::vector<std::vector<double>> populations;
  std::vector<double> sum_deficit;  // 1 - sum_m P_m(t)
  std::vector<double> residence;
  double collection_probability = 0.0;
  double horizon = 0.0;
  double residual = 0.0;  // excited population left at the horizon
  bool horizon_extended = false;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
};

/// Collective decay rate of level m: m(N - m + 1) gamma_1d.
double dicke_rate(int n_emitters, int m, double gamma_1d);

/// Integrates the rate equations from P_N(0) = 1. The grid must start at 0
/// and ascend; integration continues past its end to the horizon.
PopulationTrace dicke_populations(int n_emitters, const LossModel& loss,
                                  const std::vector<double>& t_grid,
                                  const IntegratorOptions& options = {});

/// Residence times from the chain recursion (no integration); index as in
/// PopulationTrace::residence.
std::vector<double> dicke_residence_times(int n_emitters, const LossModel& loss);

struct CollectionProbability {
  double exact = 1.0;         // P_0 at the horizon, from the rate equations
  double product = 1.0;       // prod_m gamma_m / (gamma_m + m gamma_star)
  double log_estimate = 1.0;  // 1 - ln(N) gamma_star / gamma_1d
  bool horizon_extended = false;
};

CollectionProbability dicke_collection_probability(int n_emitters, const LossModel& loss,
                                                   const IntegratorOptions& options = {});

struct SuperradianceTimescale {
  double exact = 0.0;       // sum_j 1 / (gamma_1d j (N - j + 1))
  double asymptotic = 0.0;  // ln(N) / (N gamma_1d)
};

SuperradianceTimescale superradiance_timescale(int n_emitters, double gamma_1d);

}  // namespace dickeqfi
