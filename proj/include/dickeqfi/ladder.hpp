#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace dickeqfi {

/// Spectral description of an emission cascade: level j (1..levels) decays to
/// level j-1 with rate rates[j-1] and has energy frequencies[j-1]. Level 0 is
/// the ground state with zero energy. Rates and frequencies share one unit,
/// the reference rate of the ladder family.
///
/// The emitted multimode wavepacket is never stored explicitly; everything
/// downstream works from the ladder.
class DecayLadder {
 public:
  DecayLadder(std::vector<double> rates, std::vector<double> frequencies);

  int levels() const { return static_cast<int>(rates_.size()); }
  std::span<const double> rates() const { return rates_; }
  std::span<const double> frequencies() const { return frequencies_; }

  // Level-indexed accessors; level 0 yields 0.
  double rate(int level) const;
  double frequency(int level) const;

  // Complex amplitude decay constant of a level, gamma/2 + i*omega.
  std::complex<double> amplitude_exponent(int level) const;

  bool operator==(const DecayLadder&) const = default;

 private:
  std::vector<double> rates_;
  std::vector<double> frequencies_;
};

/// Symmetric Dicke ladder of n emitters: rates j(N-j+1)*gamma_1d, on resonance.
DecayLadder build_dicke(int n_emitters, double gamma_1d);

/// Kerr-type cavity: rates n*gamma_1, energies n(n-1)*u (rotating frame).
DecayLadder build_anharmonic(int n_photons, double gamma_1, double u);

/// Linear ladder; its wavepacket is a single-mode Fock state.
DecayLadder build_harmonic(int n_photons, double gamma_1);

enum class LadderFamily { dicke, harmonic, anharmonic };

std::string to_string(LadderFamily family);
LadderFamily ladder_family_from_string(const std::string& name);

/// A ladder family with its parameters, used to build the per-arm ladder of a
/// twin configuration with N total photons (N/2 per arm). Rates are in units
/// of the family's reference rate, so u_over_gamma is only read by the
/// anharmonic family.
struct FamilySpec {
  LadderFamily family = LadderFamily::dicke;
  double u_over_gamma = 0.0;

  DecayLadder arm_ladder(int n_total) const;
  std::string label() const;

  bool operator==(const FamilySpec&) const = default;
};

/// Two input-arm wavepackets and the relative arrival delay of arm B.
struct TwinConfiguration {
  DecayLadder ladder_a;
  DecayLadder ladder_b;
  double delay = 0.0;

  static TwinConfiguration twin(const DecayLadder& ladder) { return {ladder, ladder, 0.0}; }

  int total_photons() const { return ladder_a.levels() + ladder_b.levels(); }
  bool is_identical_twin() const { return ladder_a == ladder_b && delay == 0.0; }
};

void to_json(nlohmann::json& j, const DecayLadder& ladder);
DecayLadder ladder_from_json(const nlohmann::json& j);

}  // namespace dickeqfi
