#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "dickeqfi/errors.hpp"
#include "dickeqfi/format.hpp"

using namespace dickeqfi;
using namespace dickeqfi::cli;

namespace {

// Flag values are parsed into these holders, then copied onto the config
// only when the flag was given, so they override config-file values.
struct FlagValues {
  std::string config_path;
  std::string output;
  std::string format;
  int jobs = 0;
  int oracle_limit = 8;
  bool no_header = false;
  bool dump_config = false;

  std::string family;
  double u_over_gamma = 0.0;
  std::string n_list;
  int step = 1;
  bool verify_oracle = false;

  std::string purcell;
  int per_decade = 4;
  bool trace = false;
  double t_max = 0.0;
  int points = 0;

  bool single_mode = false;
  int m = 2;
  bool check_derivative = false;

  std::string preset;
  double q = 0, group_index = 0, wavelength = 0, gamma_1d = 0, gamma_star = 0;
  double report_purcell = 0, pulse_error = 0, delta_gamma = 0, delay = 0, eta = 0, margin = 0;
  int n_photons = 0;
  double target_fidelity = 0.9;
  std::string fidelity_n;

  int max_m = 4;
  double tolerance = 1e-9;
};

bool given(const CLI::App* app, const std::string& name) {
  return app != nullptr && app->count(name) > 0;
}

void apply_family(const CLI::App* sub, const FlagValues& f, FamilySpec& spec) {
  if (given(sub, "--family")) spec.family = ladder_family_from_string(f.family);
  if (given(sub, "--u-over-gamma")) spec.u_over_gamma = f.u_over_gamma;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher information of twin multimode photon wavepackets from "
               "collectively decaying emitter ladders"};
  app.set_version_flag("--version", version());
  app.require_subcommand(0, 1);
  app.fallthrough();

  FlagValues f;
  app.add_option("--config", f.config_path, "JSON run configuration; flags override it");
  app.add_option("-o,--output", f.output, "Output file ('-' for stdout)");
  app.add_option("--format", f.format, "csv, json or text");
  app.add_option("--jobs", f.jobs, "Worker threads (0: $DICKEQFI_JOBS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--oracle-limit", f.oracle_limit, "Largest photon total for the brute-force oracle")
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-header", f.no_header, "Omit the provenance line");
  app.add_flag("--dump-config", f.dump_config, "Print the resolved configuration as JSON and exit");

  auto* ex = app.add_subcommand("exchange", "Exchange integral and QFI versus photon number");
  ex->add_option("--family", f.family, "dicke, harmonic or anharmonic");
  ex->add_option("--u-over-gamma", f.u_over_gamma, "Anharmonicity U/gamma_1");
  ex->add_option("--n", f.n_list, "Total photon numbers, e.g. 4..500 or 4,8,16");
  ex->add_option("--step", f.step, "Step for ranges in --n")->check(CLI::PositiveNumber);
  ex->add_flag("--verify-oracle", f.verify_oracle, "Add brute-force oracle values");

  auto* lo = app.add_subcommand("loss", "Collection probability under free-space loss");
  lo->add_option("--n", f.n_list, "Emitter numbers, e.g. 10,100,1000");
  lo->add_option("--purcell", f.purcell, "Purcell factors, e.g. 10..1e5 or inf");
  lo->add_option("--per-decade", f.per_decade, "Grid density for Purcell ranges")
      ->check(CLI::PositiveNumber);
  lo->add_flag("--trace", f.trace, "Emit populations P_m(t) instead");
  lo->add_option("--t-max", f.t_max, "Trace end time in 1/gamma_1d (default 4 tau_SR)");
  lo->add_option("--points", f.points, "Trace grid points");

  auto* pa = app.add_subcommand("parity", "Parity signal and its curvature at zero phase");
  pa->add_flag("--single-mode", f.single_mode, "Single-mode Fock input");
  pa->add_option("--family", f.family, "dicke, harmonic or anharmonic (oracle-backed)");
  pa->add_option("--u-over-gamma", f.u_over_gamma, "Anharmonicity U/gamma_1");
  pa->add_option("--m", f.m, "Photons per arm");
  pa->add_option("--points", f.points, "Phase grid points over [0, pi/2]");
  pa->add_flag("--check-derivative", f.check_derivative, "Report the Legendre slope at 1");

  auto* re = app.add_subcommand("report", "Error budget of a candidate platform");
  re->add_option("--preset", f.preset, "sin, headline or ideal");
  re->add_option("--q", f.q, "Quality factor");
  re->add_option("--group-index", f.group_index, "Group index n_g");
  re->add_option("--wavelength", f.wavelength, "Wavelength in m");
  re->add_option("--gamma-1d", f.gamma_1d, "Waveguide decay rate in 1/s");
  re->add_option("--gamma-star", f.gamma_star, "Free-space decay rate in 1/s");
  re->add_option("--purcell", f.report_purcell, "Sets gamma_star = gamma_1d / purcell");
  re->add_option("--n", f.n_photons, "Total photon number (even)");
  re->add_option("--pulse-error", f.pulse_error, "Spread of the excitation pulse area");
  re->add_option("--delta-gamma", f.delta_gamma, "Relative coupling mismatch between arms");
  re->add_option("--delay", f.delay, "Arrival delay in s");
  re->add_option("--eta", f.eta, "Interferometer loss");
  re->add_option("--margin", f.margin, "Factor used for every 'much larger than' check");
  re->add_option("--target-fidelity", f.target_fidelity, "Collection probability target");
  re->add_option("--fidelity-n", f.fidelity_n, "Photon numbers for the fidelity table");

  auto* ve = app.add_subcommand("verify", "Recurrence against the brute-force oracle");
  ve->add_option("--max-m", f.max_m, "Largest photon number per arm");
  ve->add_option("--tolerance", f.tolerance, "Allowed absolute difference");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  RunConfig config;
  try {
    CLI::App* sub = nullptr;
    for (auto* s : {ex, lo, pa, re, ve}) {
      if (s->parsed()) sub = s;
    }
    if (!f.config_path.empty()) {
      config = load_run_config(f.config_path);
      if (sub != nullptr && config.command() != sub->get_name()) {
        throw UsageError("command: config file is for '" + config.command() + "' but '" +
                         sub->get_name() + "' was requested");
      }
    } else if (sub == nullptr) {
      std::cerr << app.help();
      return exit_usage;
    } else {
      config.params = default_params(sub->get_name());
    }

    if (given(&app, "--output")) config.output = f.output;
    if (given(&app, "--format")) config.format = output_format_from_string(f.format);
    if (given(&app, "--jobs")) config.jobs = f.jobs;
    if (given(&app, "--oracle-limit")) config.oracle_limit = f.oracle_limit;
    if (f.no_header) config.no_header = true;

    std::visit(
        [&](auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ExchangeParams>) {
            apply_family(sub, f, p.family);
            if (given(sub, "--n")) p.n_values = parse_int_list(f.n_list, f.step);
            if (f.verify_oracle) p.verify_oracle = true;
          } else if constexpr (std::is_same_v<T, LossParams>) {
            if (given(sub, "--n")) p.n_values = parse_int_list(f.n_list);
            if (given(sub, "--purcell")) p.purcell = parse_purcell_list(f.purcell, f.per_decade);
            if (f.trace) p.trace = true;
            if (given(sub, "--t-max")) p.trace_t_max = f.t_max;
            if (given(sub, "--points")) p.trace_points = f.points;
          } else if constexpr (std::is_same_v<T, ParityParams>) {
            apply_family(sub, f, p.family);
            if (f.single_mode) p.single_mode = true;
            if (given(sub, "--m")) p.m = f.m;
            if (given(sub, "--points")) p.points = f.points;
            if (f.check_derivative) p.check_derivative = true;
          } else if constexpr (std::is_same_v<T, ReportParams>) {
            if (given(sub, "--preset")) p.preset = f.preset;
            if (given(sub, "--q")) p.quality_factor = f.q;
            if (given(sub, "--group-index")) p.group_index = f.group_index;
            if (given(sub, "--wavelength")) p.wavelength = f.wavelength;
            if (given(sub, "--gamma-1d")) p.gamma_1d = f.gamma_1d;
            if (given(sub, "--gamma-star")) p.gamma_star = f.gamma_star;
            if (given(sub, "--purcell")) {
              if (!(f.report_purcell > 0.0)) throw UsageError("purcell: must be positive");
              const double g = p.gamma_1d ? *p.gamma_1d
                                          : (p.preset ? platform_preset(*p.preset).gamma_1d
                                                      : PlatformParams{}.gamma_1d);
              p.gamma_star = std::isinf(f.report_purcell) ? 0.0 : g / f.report_purcell;
            }
            if (given(sub, "--n")) p.n_photons = f.n_photons;
            if (given(sub, "--pulse-error")) p.pulse_error = f.pulse_error;
            if (given(sub, "--delta-gamma")) p.delta_gamma = f.delta_gamma;
            if (given(sub, "--delay")) p.delay = f.delay;
            if (given(sub, "--eta")) p.interferometer_loss = f.eta;
            if (given(sub, "--margin")) p.margin_factor = f.margin;
            if (given(sub, "--target-fidelity")) p.target_fidelity = f.target_fidelity;
            if (given(sub, "--fidelity-n")) p.fidelity_n = parse_int_list(f.fidelity_n, 2);
          } else {
            if (given(sub, "--max-m")) p.max_m = f.max_m;
            if (given(sub, "--tolerance")) p.tolerance = f.tolerance;
          }
        },
        config.params);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }

  if (f.dump_config) {
    std::cout << to_json(config).dump(2) << '\n';
    return exit_ok;
  }

  if (config.output == "-") return run(config, std::cout, std::cerr);
  std::ofstream file(config.output, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open output file '" << config.output << "'\n";
    return exit_numeric;
  }
  const int code = run(config, file, std::cerr);
  file.close();
  if (!file) {
    std::cerr << "error: writing '" << config.output << "' failed\n";
    return exit_numeric;
  }
  return code;
}
