#include "dickeqfi/budget.hpp"

#include <cmath>
#include <limits>

#include "dickeqfi/errors.hpp"
#include "dickeqfi/exchange.hpp"

namespace dickeqfi {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw UsageError(std::string(name) + " must be nonnegative and finite");
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw UsageError(std::string(name) + " must be positive and finite");
  }
}

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::multiplicative: return "multiplicative";
    case ChannelKind::additive: return "additive";
    case ChannelKind::infidelity: return "infidelity";
    case ChannelKind::feasibility: return "feasibility";
    case ChannelKind::collection: return "collection";
  }
  return "unknown";
}

}  // namespace

void PlatformParams::validate() const {
  require_positive(quality_factor, "quality_factor");
  require_positive(group_index, "group_index");
  require_positive(wavelength, "wavelength");
  require_positive(gamma_1d, "gamma_1d");
  require_nonnegative(gamma_star, "gamma_star");
  if (n_photons < 2 || n_photons % 2 != 0) {
    throw UsageError("n_photons must be even and >= 2");
  }
  require_nonnegative(pulse_error, "pulse_error");
  if (!(delta_gamma > -1.0) || !std::isfinite(delta_gamma)) {
    throw UsageError("delta_gamma must be finite and greater than -1");
  }
  require_nonnegative(delay, "delay");
  if (!(interferometer_loss >= 0.0 && interferometer_loss <= 1.0)) {
    throw UsageError("interferometer_loss must lie in [0, 1]");
  }
  require_positive(margin_factor, "margin_factor");
}

void to_json(nlohmann::json& j, const PlatformParams& p) {
  j = nlohmann::json{{"quality_factor", p.quality_factor},
                     {"group_index", p.group_index},
                     {"wavelength", p.wavelength},
                     {"gamma_1d", p.gamma_1d},
                     {"gamma_star", p.gamma_star},
                     {"n_photons", p.n_photons},
                     {"pulse_error", p.pulse_error},
                     {"delta_gamma", p.delta_gamma},
                     {"delay", p.delay},
                     {"interferometer_loss", p.interferometer_loss},
                     {"margin_factor", p.margin_factor}};
}

void from_json(const nlohmann::json& j, PlatformParams& p) {
  if (!j.is_object()) throw UsageError("platform parameters must be a JSON object");
  static const char* known[] = {"quality_factor", "group_index", "wavelength", "gamma_1d",
                                "gamma_star", "n_photons", "pulse_error", "delta_gamma",
                                "delay", "interferometer_loss", "margin_factor"};
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw UsageError("unknown platform parameter '" + key + "'");
    if (key == "n_photons" ? !value.is_number_integer() : !value.is_number()) {
      throw UsageError("platform parameter '" + key + "' has the wrong type");
    }
  }
  auto read = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  read("quality_factor", p.quality_factor);
  read("group_index", p.group_index);
  read("wavelength", p.wavelength);
  read("gamma_1d", p.gamma_1d);
  read("gamma_star", p.gamma_star);
  read("n_photons", p.n_photons);
  read("pulse_error", p.pulse_error);
  read("delta_gamma", p.delta_gamma);
  read("delay", p.delay);
  read("interferometer_loss", p.interferometer_loss);
  read("margin_factor", p.margin_factor);
}

PlatformParams sin_platform() {
  PlatformParams p;
  p.quality_factor = 1e6;
  p.group_index = 10.0;
  p.wavelength = 300e-9;
  p.gamma_1d = 2.0 * M_PI * 6e6;
  p.gamma_star = 0.0;
  p.n_photons = 100;
  return p;
}

PlatformParams headline_platform() {
  PlatformParams p = sin_platform();
  p.gamma_1d = 1e9;
  p.gamma_star = 1e9 / 60.0;
  p.n_photons = 200;
  return p;
}

PlatformParams platform_preset(const std::string& name) {
  if (name == "sin") return sin_platform();
  if (name == "headline") return headline_platform();
  if (name == "ideal") {
    PlatformParams p = sin_platform();
    p.gamma_star = 0.0;
    return p;
  }
  throw UsageError("unknown platform preset '" + name + "' (expected sin, headline or ideal)");
}

std::vector<std::string> platform_preset_names() { return {"sin", "headline", "ideal"}; }

PropagationCheck propagation_length_check(double quality_factor, double group_index,
                                          int n_photons, double margin_factor) {
  require_positive(quality_factor, "quality_factor");
  require_positive(group_index, "group_index");
  if (n_photons < 1) throw UsageError("n_photons must be positive");
  PropagationCheck out;
  out.l_prop_over_lambda = quality_factor / (2.0 * group_index);
  out.margin = out.l_prop_over_lambda / n_photons;
  out.feasible = out.l_prop_over_lambda >= margin_factor * n_photons;
  return out;
}

RetardationCheck retardation_check(double group_index, double wavelength, double gamma_1d,
                                   int n_photons, double margin_factor) {
  require_positive(group_index, "group_index");
  require_positive(wavelength, "wavelength");
  require_positive(gamma_1d, "gamma_1d");
  if (n_photons < 1) throw UsageError("n_photons must be positive");
  RetardationCheck out;
  out.n_cubed_bound = 4.0 * speed_of_light / (group_index * wavelength * gamma_1d);
  out.n_max = static_cast<int>(std::floor(std::cbrt(out.n_cubed_bound / margin_factor)));
  out.feasible = n_photons <= out.n_max;
  return out;
}

PulseErrorEstimate pulse_error(double delta_omega_t, int n_photons) {
  require_nonnegative(delta_omega_t, "pulse_error");
  if (n_photons < 0) throw UsageError("n_photons must be nonnegative");
  PulseErrorEstimate out;
  out.infidelity = delta_omega_t * delta_omega_t * n_photons;
  out.in_regime = delta_omega_t * std::sqrt(static_cast<double>(n_photons)) < 1.0;
  return out;
}

MixedRateCorrection mixed_rate_correction(double gamma_ratio, int n_photons) {
  MixedRateCorrection out;
  out.exact = mixed_rate_factor(gamma_ratio, n_photons);
  const double d = gamma_ratio - 1.0;
  out.expansion = 1.0 - n_photons / 8.0 * d * d;
  out.gap = out.exact - out.expansion;
  return out;
}

DelayCorrection delay_correction(int n_photons, double gamma_1d, double tau) {
  require_positive(gamma_1d, "gamma_1d");
  require_nonnegative(tau, "delay");
  const double x = n_photons * gamma_1d * tau;
  DelayCorrection out;
  out.factor = std::exp(-x);
  out.first_order = 1.0 - x;
  out.single_mode = std::exp(-0.5 * x);
  return out;
}

LossCorrection interferometer_loss_correction(double qfi, int n_photons, double i_n, double eta,
                                              double margin_factor) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("interferometer loss must lie in [0, 1]");
  const double n = n_photons;
  LossCorrection out;
  out.delta_qfi = n * n * eta * i_n / 4.0;
  out.corrected_qfi = qfi - out.delta_qfi;
  out.p0 = 1.0 - n * eta / 2.0;
  out.eta_threshold =
      i_n > 0.0 ? 4.0 / (i_n * n * n) : std::numeric_limits<double>::infinity();
  out.heisenberg_ok = margin_factor * eta <= out.eta_threshold;
  out.out_of_regime = eta > 0.1;
  return out;
}

void to_json(nlohmann::json& j, const ErrorBudget& b) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : b.entries) {
    entries.push_back({{"channel", e.channel},
                       {"kind", to_string(e.kind)},
                       {"correction", e.correction},
                       {"feasible", e.feasible},
                       {"margin", e.margin},
                       {"note", e.note}});
  }
  j = nlohmann::json{{"params", b.params},
                     {"i_n", b.i_n},
                     {"i_eff", b.i_eff},
                     {"collection_probability", b.collection_probability},
                     {"ideal_qfi", b.ideal_qfi},
                     {"combined_qfi", b.combined_qfi},
                     {"combined_is_heuristic", true},
                     {"entries", entries}};
}

ErrorBudget full_budget(const PlatformParams& params, double i_n, double collection_probability) {
  params.validate();
  if (!(collection_probability >= 0.0 && collection_probability <= 1.0)) {
    throw UsageError("collection probability must lie in [0, 1]");
  }
  if (!(i_n >= -1.0 && i_n <= 1.0)) throw UsageError("exchange integral must lie in [-1, 1]");
  const int n_photons = params.n_photons;
  const double n = n_photons;
  const double margin = params.margin_factor;

  ErrorBudget b;
  b.params = params;
  b.i_n = i_n;
  b.collection_probability = collection_probability;
  b.ideal_qfi = n * (i_n * n + 2.0) / 2.0;

  const auto prop =
      propagation_length_check(params.quality_factor, params.group_index, n_photons, margin);
  b.entries.push_back({"propagation_length", ChannelKind::feasibility, prop.l_prop_over_lambda,
                       prop.feasible, prop.margin, "L_prop/lambda = Q/(2 n_g) against N"});

  const auto ret =
      retardation_check(params.group_index, params.wavelength, params.gamma_1d, n_photons, margin);
  b.entries.push_back({"retardation", ChannelKind::feasibility, ret.n_cubed_bound, ret.feasible,
                       static_cast<double>(ret.n_max) / n,
                       "N^3 bound 4c/(n_g lambda gamma_1d); margin is n_max/N"});

  const auto pulse = pulse_error(params.pulse_error, n_photons);
  b.entries.push_back({"pulse_area", ChannelKind::infidelity, pulse.infidelity, pulse.in_regime,
                       0.0, pulse.in_regime ? "infidelity ~ pulse_error^2 N"
                                            : "out of regime: pulse_error sqrt(N) >= 1"});

  const auto mixed = mixed_rate_correction(1.0 + params.delta_gamma, n_photons);
  const double mixed_req = n * params.delta_gamma * params.delta_gamma;
  b.entries.push_back({"coupling_mismatch", ChannelKind::multiplicative, mixed.exact,
                       margin * mixed_req <= 1.0, mixed_req,
                       "((2 sqrt r)/(1+r))^N; margin is N (dGamma/Gamma)^2"});

  const auto delay = delay_correction(n_photons, params.gamma_1d, params.delay);
  const double delay_x = n * params.gamma_1d * params.delay;
  b.entries.push_back({"arrival_delay", ChannelKind::multiplicative, delay.factor,
                       margin * delay_x <= 1.0, delay_x,
                       "lower bound exp(-N gamma_1d tau); margin is N gamma_1d tau"});

  b.i_eff = i_n * mixed.exact * delay.factor;

  const double p2 = collection_probability * collection_probability;
  b.entries.push_back({"collection", ChannelKind::collection, p2, true, collection_probability,
                       "p^2 multiplies the QFI; margin is p"});

  const auto loss = interferometer_loss_correction(0.0, n_photons, b.i_eff,
                                                   params.interferometer_loss, margin);
  b.entries.push_back({"interferometer_loss", ChannelKind::additive, 0.0 - loss.delta_qfi,
                       loss.heisenberg_ok && !loss.out_of_regime, loss.eta_threshold,
                       loss.out_of_regime ? "first order only; eta > 0.1"
                                          : "dF = N^2 eta I / 4; margin is eta threshold"});

  b.combined_qfi = p2 * n * (b.i_eff * n + 2.0) / 2.0 - loss.delta_qfi;
  return b;
}

double no_loss_product(long long n_emitters, double purcell) {
  if (n_emitters < 1) throw UsageError("need at least one emitter");
  if (!(purcell > 0.0)) throw UsageError("Purcell factor must be positive");
  if (std::isinf(purcell)) return 1.0;
  double log_p = 0.0;
  for (long long j = 1; j <= n_emitters; ++j) log_p -= std::log1p(1.0 / (j * purcell));
  return std::exp(log_p);
}

FidelityCeiling fidelity_ceiling(double purcell, double target) {
  if (!(purcell > 0.0) || std::isinf(purcell)) {
    throw UsageError("Purcell factor must be positive and finite");
  }
  if (!(target > 0.0 && target < 1.0)) throw UsageError("target fidelity must lie in (0, 1)");
  FidelityCeiling out;
  out.target = target;
  out.purcell = purcell;
  out.log_estimate = std::exp((1.0 - target) * purcell);

  const double log_target = std::log(target);
  constexpr long long limit = 100'000'000;
  double log_p = 0.0;
  long long n = 0;
  while (n < limit) {
    const double next = log_p - std::log1p(1.0 / ((n + 1) * purcell));
    if (next < log_target) break;
    log_p = next;
    ++n;
  }
  if (n == limit) throw NumericFailure("fidelity ceiling exceeds the search limit");
  out.n_max = n;
  return out;
}

}  // namespace dickeqfi
