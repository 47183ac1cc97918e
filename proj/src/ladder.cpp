#include "dickeqfi/ladder.hpp"

#include <cmath>

#include "dickeqfi/errors.hpp"

namespace dickeqfi {

DecayLadder::DecayLadder(std::vector<double> rates, std::vector<double> frequencies)
    : rates_(std::move(rates)), frequencies_(std::move(frequencies)) {
  if (rates_.empty()) {
    throw InvalidLadder("ladder must have at least one level");
  }
  if (rates_.size() != frequencies_.size()) {
    throw InvalidLadder("ladder has " + std::to_string(rates_.size()) + " rates but " +
                        std::to_string(frequencies_.size()) + " frequencies");
  }
  for (std::size_t j = 0; j < rates_.size(); ++j) {
    if (!std::isfinite(rates_[j]) || rates_[j] <= 0.0) {
      throw InvalidLadder("decay rate of level " + std::to_string(j + 1) +
                          " must be positive and finite");
    }
    if (!std::isfinite(frequencies_[j])) {
      throw InvalidLadder("frequency of level " + std::to_string(j + 1) + " must be finite");
    }
  }
}

double DecayLadder::rate(int level) const {
  if (level == 0) return 0.0;
  return rates_.at(static_cast<std::size_t>(level - 1));
}

double DecayLadder::frequency(int level) const {
  if (level == 0) return 0.0;
  return frequencies_.at(static_cast<std::size_t>(level - 1));
}

std::complex<double> DecayLadder::amplitude_exponent(int level) const {
  return {0.5 * rate(level), frequency(level)};
}

DecayLadder build_dicke(int n_emitters, double gamma_1d) {
  if (n_emitters < 1) throw UsageError("Dicke ladder needs at least one emitter");
  if (!(gamma_1d > 0.0) || !std::isfinite(gamma_1d)) {
    throw UsageError("Dicke coupling rate must be positive");
  }
  const auto n = static_cast<double>(n_emitters);
  std::vector<double> rates(static_cast<std::size_t>(n_emitters));
  for (int j = 1; j <= n_emitters; ++j) {
    rates[static_cast<std::size_t>(j - 1)] = j * (n - j + 1.0) * gamma_1d;
  }
  return DecayLadder(std::move(rates), std::vector<double>(rates.size(), 0.0));
}

DecayLadder build_anharmonic(int n_photons, double gamma_1, double u) {
  if (n_photons < 1) throw UsageError("cavity ladder needs at least one photon");
  if (!(gamma_1 > 0.0) || !std::isfinite(gamma_1)) {
    throw UsageError("cavity decay rate must be positive");
  }
  if (!std::isfinite(u)) throw UsageError("anharmonicity must be finite");
  std::vector<double> rates(static_cast<std::size_t>(n_photons));
  std::vector<double> freqs(rates.size());
  for (int n = 1; n <= n_photons; ++n) {
    rates[static_cast<std::size_t>(n - 1)] = n * gamma_1;
    freqs[static_cast<std::size_t>(n - 1)] = n * (n - 1.0) * u;
  }
  return DecayLadder(std::move(rates), std::move(freqs));
}

DecayLadder build_harmonic(int n_photons, double gamma_1) {
  return build_anharmonic(n_photons, gamma_1, 0.0);
}

std::string to_string(LadderFamily family) {
  switch (family) {
    case LadderFamily::dicke: return "dicke";
    case LadderFamily::harmonic: return "harmonic";
    case LadderFamily::anharmonic: return "anharmonic";
  }
  return "unknown";
}

LadderFamily ladder_family_from_string(const std::string& name) {
  if (name == "dicke") return LadderFamily::dicke;
  if (name == "harmonic") return LadderFamily::harmonic;
  if (name == "anharmonic") return LadderFamily::anharmonic;
  throw UsageError("unknown ladder family '" + name + "' (expected dicke, harmonic or anharmonic)");
}

DecayLadder FamilySpec::arm_ladder(int n_total) const {
  if (n_total < 2 || n_total % 2 != 0) {
    throw UsageError("twin configurations need an even total photon number >= 2, got " +
                     std::to_string(n_total));
  }
  const int per_arm = n_total / 2;
  switch (family) {
    case LadderFamily::dicke: return build_dicke(per_arm, 1.0);
    case LadderFamily::harmonic: return build_harmonic(per_arm, 1.0);
    case LadderFamily::anharmonic: return build_anharmonic(per_arm, 1.0, u_over_gamma);
  }
  throw UsageError("unknown ladder family");
}

std::string FamilySpec::label() const {
  if (family == LadderFamily::anharmonic) {
    // Shortest round-tripping form keeps labels stable across runs.
    std::string u = nlohmann::json(u_over_gamma).dump();
    return "anharmonic(U/gamma=" + u + ")";
  }
  return to_string(family);
}

void to_json(nlohmann::json& j, const DecayLadder& ladder) {
  j = nlohmann::json{{"levels", ladder.levels()},
                     {"rates", std::vector<double>(ladder.rates().begin(), ladder.rates().end())},
                     {"frequencies", std::vector<double>(ladder.frequencies().begin(),
                                                         ladder.frequencies().end())}};
}

DecayLadder ladder_from_json(const nlohmann::json& j) {
  try {
    auto rates = j.at("rates").get<std::vector<double>>();
    auto freqs = j.contains("frequencies") ? j.at("frequencies").get<std::vector<double>>()
                                           : std::vector<double>(rates.size(), 0.0);
    if (j.contains("levels") && j.at("levels").get<int>() != static_cast<int>(rates.size())) {
      throw InvalidLadder("ladder 'levels' does not match the number of rates");
    }
    return DecayLadder(std::move(rates), std::move(freqs));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidLadder(std::string("malformed ladder document: ") + e.what());
  }
}

}  // namespace dickeqfi
