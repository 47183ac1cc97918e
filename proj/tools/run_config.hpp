#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dickeqfi/budget.hpp"
#include "dickeqfi/ladder.hpp"
#include "dickeqfi/sweep.hpp"
#include "json.hpp"

namespace dickeqfi::cli {

enum class OutputFormat { csv, json, text };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

struct ExchangeParams {
  FamilySpec family;
  std::vector<int> n_values = default_sweep_range();
  bool verify_oracle = false;
  bool operator==(const ExchangeParams&) const = default;
};

std::vector<double> default_purcell_grid();

struct LossParams {
  std::vector<int> n_values{10, 100, 1000};
  // A value of +inf means no free-space loss.
  std::vector<double> purcell = default_purcell_grid();
  bool trace = false;
  double trace_t_max = 0.0;  // 0 picks 4 tau_SR
  int trace_points = 201;
  bool operator==(const LossParams&) const = default;
};

struct ParityParams {
  bool single_mode = false;
  FamilySpec family;
  int m = 2;
  int points = 91;  // phi grid over [0, pi/2]
  bool check_derivative = false;
  bool operator==(const ParityParams&) const = default;
};

/// Every platform field is optional so that a preset, a config file and
/// flags can be layered; resolve() applies them over the preset.
struct ReportParams {
  std::optional<std::string> preset;
  std::optional<double> quality_factor;
  std::optional<double> group_index;
  std::optional<double> wavelength;
  std::optional<double> gamma_1d;
  std::optional<double> gamma_star;
  std::optional<int> n_photons;
  std::optional<double> pulse_error;
  std::optional<double> delta_gamma;
  std::optional<double> delay;
  std::optional<double> interferometer_loss;
  std::optional<double> margin_factor;
  double target_fidelity = 0.9;
  std::vector<int> fidelity_n{10, 20, 50, 100, 200, 300, 500};

  PlatformParams resolve() const;
  bool operator==(const ReportParams&) const = default;
};

struct VerifyParams {
  int max_m = 4;
  std::vector<FamilySpec> families{{LadderFamily::dicke, 0.0},
                                   {LadderFamily::harmonic, 0.0},
                                   {LadderFamily::anharmonic, 1.0},
                                   {LadderFamily::anharmonic, 10.0},
                                   {LadderFamily::anharmonic, 1000.0}};
  double tolerance = 1e-9;
  bool operator==(const VerifyParams&) const = default;
};

using CommandParams = std::variant<ExchangeParams, LossParams, ParityParams, ReportParams,
                                   VerifyParams>;

struct RunConfig {
  CommandParams params;
  std::string output = "-";
  std::optional<OutputFormat> format;  // unset: command default
  int jobs = 0;                        // 0: DICKEQFI_JOBS, then all cores
  int oracle_limit = 8;
  bool no_header = false;

  std::string command() const;
  OutputFormat effective_format() const;
  bool operator==(const RunConfig&) const = default;
};

/// Default parameters for a subcommand name.
CommandParams default_params(const std::string& command);
std::vector<std::string> command_names();

nlohmann::json to_json(const RunConfig& config);
/// Rejects unknown keys and wrong types with a UsageError naming the key.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// "4..500" (with step), "10,100,1000" or a mix such as "4,8..12".
std::vector<int> parse_int_list(const std::string& text, int step = 1);
/// "10..1e5" expands to a log grid with the given points per decade; "inf"
/// is accepted as a value.
std::vector<double> parse_purcell_list(const std::string& text, int per_decade = 4);

/// Worker count with DICKEQFI_JOBS as fallback for 0.
int effective_jobs(int requested);

}  // namespace dickeqfi::cli
