#pragma once

#include <string>
#include <vector>

#include "dickeqfi/exchange.hpp"
#include "json.hpp"

namespace dickeqfi {

enum class InputKind { twin, general, mixed_number, lossy_lower_bound };

std::string to_string(InputKind kind);

struct QfiReport {
  double qfi = 0.0;
  double phase_variance = 0.0;  // 1 / (repetitions * qfi)
  int n_total = 0;
  double snl_ratio = 0.0;  // qfi / N
  double hl_ratio = 0.0;   // qfi / N^2
  InputKind input_kind = InputKind::twin;
  int repetitions = 1;
};

void to_json(nlohmann::json& j, const QfiReport& report);

/// F = 2 m n I + m + n for m photons in arm A and n in arm B.
QfiReport qfi_general(int m, int n, const ExchangeIntegral& i_ab, int repetitions = 1);

/// F = N (I N + 2) / 2 for twin inputs of N/2 photons each.
QfiReport qfi_twin(int n_total, const ExchangeIntegral& i_n, int repetitions = 1);

/// One component of a superposition of photon numbers in arm B.
struct NumberComponent {
  double weight = 0.0;  // |c_n|^2
  int n = 0;
  double exchange = 0.0;  // I^(1, n); ignored for n = 0
};

/// Fixed m photons in arm A, a pure superposition of photon numbers in arm B.
QfiReport qfi_mixed_number(int m, const std::vector<NumberComponent>& components,
                           int repetitions = 1);

/// p^2 F_pure, a lower bound on the QFI after losing photons with
/// probability 1 - p per arm.
QfiReport qfi_lossy_lower_bound(double p, const QfiReport& pure);

/// Parity expectation for m photons per arm at phase phi, given the full set
/// I^(0..m) of exchanged integrals.
double parity_expectation(int m, const std::vector<double>& integrals, double phi);

struct ParityCurve {
  std::vector<double> phi;
  std::vector<double> expectation;
  std::vector<double> integrals;
  // -d^2<O>/dphi^2 at 0, analytic: 2m(m I^(1) + I^(0)).
  double curvature = 0.0;
};

ParityCurve parity_curve(int m, const std::vector<double>& integrals,
                         const std::vector<double>& phi_grid);

/// Central second difference of the parity signal at phi = 0, sign flipped.
double parity_numerical_curvature(int m, const std::vector<double>& integrals,
                                  double step = 1e-4);

/// Central first difference at phi = 0.
double parity_numerical_slope(int m, const std::vector<double>& integrals, double step = 1e-4);

/// 1 / (2m (m I^(1) + 1)), the phase variance of parity detection at phi -> 0.
double parity_phase_variance(int m, const ExchangeIntegral& i_1);

/// I^(l) = 1 for all l: a single-mode Fock input.
std::vector<double> single_mode_integrals(int m);

}  // namespace dickeqfi
