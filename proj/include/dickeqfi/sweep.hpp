#pragma once

#include <string>
#include <vector>

#include "dickeqfi/ladder.hpp"

namespace dickeqfi {

/// One point of a QFI-versus-N sweep with the reference phase variances of
/// shot-noise (1/N), Heisenberg (1/N^2) and twin-Fock (2/(N(N+2))) inputs.
struct SweepRow {
  int n = 0;
  double i_n = 0.0;
  double f_q = 0.0;
  double dphi2 = 0.0;
  double dphi2_snl = 0.0;
  double dphi2_hl = 0.0;
  double dphi2_fock = 0.0;
  bool ok = true;
  std::string error;
};

/// Evaluates every N independently; rows come back in input order and a
/// failed point is flagged instead of aborting the sweep.
std::vector<SweepRow> qfi_vs_n_sweep(const FamilySpec& family, const std::vector<int>& n_values,
                                     int jobs = 1);

/// 4..500 in steps of 2.
std::vector<int> default_sweep_range();

}  // namespace dickeqfi
