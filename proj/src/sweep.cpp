#include "dickeqfi/sweep.hpp"

#include "dickeqfi/errors.hpp"
#include "dickeqfi/exchange.hpp"
#include "dickeqfi/metrology.hpp"
#include "dickeqfi/parallel.hpp"

namespace dickeqfi {

std::vector<SweepRow> qfi_vs_n_sweep(const FamilySpec& family, const std::vector<int>& n_values,
                                     int jobs) {
  for (int n : n_values) {
    if (n < 2 || n % 2 != 0) {
      throw UsageError("sweep photon numbers must be even and >= 2, got " + std::to_string(n));
    }
  }
  return parallel_map<SweepRow>(n_values.size(), jobs, [&](std::size_t k) {
    SweepRow row;
    row.n = n_values[k];
    const double n = row.n;
    row.dphi2_snl = 1.0 / n;
    row.dphi2_hl = 1.0 / (n * n);
    row.dphi2_fock = 2.0 / (n * (n + 2.0));
    try {
      const auto integral = exchange_integral(TwinConfiguration::twin(family.arm_ladder(row.n)));
      const auto report = qfi_twin(row.n, integral);
      row.i_n = integral.value;
      row.f_q = report.qfi;
      row.dphi2 = report.phase_variance;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    return row;
  });
}

std::vector<int> default_sweep_range() {
  std::vector<int> out;
  for (int n = 4; n <= 500; n += 2) out.push_back(n);
  return out;
}

}  // namespace dickeqfi
