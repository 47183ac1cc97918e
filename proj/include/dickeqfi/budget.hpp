#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace dickeqfi {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double default_margin_factor = 10.0;

/// Physical parameters of a candidate experiment, SI units.
struct PlatformParams {
  double quality_factor = 1e6;
  double group_index = 10.0;
  double wavelength = 300e-9;          // m
  double gamma_1d = 2.0 * 3.14159265358979323846 * 6e6;  // rad/s
  double gamma_star = 0.0;             // rad/s
  int n_photons = 100;
  double pulse_error = 0.0;            // spread of the pulse area
  double delta_gamma = 0.0;            // (gamma'_1d - gamma_1d) / gamma_1d
  double delay = 0.0;                  // s
  double interferometer_loss = 0.0;    // eta
  double margin_factor = default_margin_factor;

  void validate() const;
  bool operator==(const PlatformParams&) const = default;
};

void to_json(nlohmann::json& j, const PlatformParams& p);
void from_json(const nlohmann::json& j, PlatformParams& p);

/// Silicon-nitride waveguide with Q = 1e6, n_g = 10, 300 nm, 2 pi x 6 MHz.
PlatformParams sin_platform();
/// Purcell factor 60 at gamma_1d = 1e9 /s.
PlatformParams headline_platform();
PlatformParams platform_preset(const std::string& name);
std::vector<std::string> platform_preset_names();

struct PropagationCheck {
  double l_prop_over_lambda = 0.0;  // Q / (2 n_g)
  bool feasible = false;
  double margin = 0.0;  // (L_prop / lambda) / N
};

PropagationCheck propagation_length_check(double quality_factor, double group_index,
                                          int n_photons,
                                          double margin_factor = default_margin_factor);

struct RetardationCheck {
  double n_cubed_bound = 0.0;  // 4 c / (n_g lambda gamma_1d)
  int n_max = 0;               // floor(cbrt(bound / margin))
  bool feasible = false;
};

RetardationCheck retardation_check(double group_index, double wavelength, double gamma_1d,
                                   int n_photons, double margin_factor = default_margin_factor);

struct PulseErrorEstimate {
  double infidelity = 0.0;  // pulse_error^2 N
  bool in_regime = true;    // pulse_error sqrt(N) < 1
};

PulseErrorEstimate pulse_error(double delta_omega_t, int n_photons);

struct MixedRateCorrection {
  double exact = 1.0;      // ((2 sqrt r)/(1 + r))^N
  double expansion = 1.0;  // 1 - (N/8)(r - 1)^2
  double gap = 0.0;        // exact - expansion
};

MixedRateCorrection mixed_rate_correction(double gamma_ratio, int n_photons);

struct DelayCorrection {
  double factor = 1.0;       // exp(-N gamma_1d tau)
  double first_order = 1.0;  // 1 - N gamma_1d tau
  double single_mode = 1.0;  // exp(-(N/2) gamma_1d tau)
};

DelayCorrection delay_correction(int n_photons, double gamma_1d, double tau);

struct LossCorrection {
  double corrected_qfi = 0.0;
  double delta_qfi = 0.0;      // N^2 eta I / 4
  double p0 = 1.0;             // 1 - N eta / 2
  double eta_threshold = 0.0;  // 4 / (I N^2)
  bool heisenberg_ok = true;   // margin * eta <= threshold
  bool out_of_regime = false;  // eta > 0.1
};

LossCorrection interferometer_loss_correction(double qfi, int n_photons, double i_n, double eta,
                                              double margin_factor = default_margin_factor);

enum class ChannelKind { multiplicative, additive, infidelity, feasibility, collection };

struct BudgetEntry {
  std::string channel;
  ChannelKind kind = ChannelKind::multiplicative;
  double correction = 1.0;
  bool feasible = true;
  double margin = 0.0;
  std::string note;
};

struct ErrorBudget {
  PlatformParams params;
  double i_n = 0.0;
  double i_eff = 0.0;
  double collection_probability = 1.0;
  double ideal_qfi = 0.0;
  // p^2 N (I_eff N + 2)/2 - N^2 eta I_eff / 4: a first-order composition of
  // independently derived channels, not a rigorous bound.
  double combined_qfi = 0.0;
  std::vector<BudgetEntry> entries;
};

void to_json(nlohmann::json& j, const ErrorBudget& b);

ErrorBudget full_budget(const PlatformParams& params, double i_n, double collection_probability);

struct FidelityCeiling {
  double target = 0.9;
  double purcell = 0.0;
  long long n_max = 0;        // largest N with no-loss product >= target
  double log_estimate = 0.0;  // exp((1 - target) P_1d)
};

FidelityCeiling fidelity_ceiling(double purcell, double target = 0.9);

/// No-loss product prod_m (N-m+1) P / ((N-m+1) P + 1) for the given Purcell factor.
double no_loss_product(long long n_emitters, double purcell);

}  // namespace dickeqfi
