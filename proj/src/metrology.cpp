#include "dickeqfi/metrology.hpp"

#include <cmath>

#include "dickeqfi/errors.hpp"

namespace dickeqfi {

std::string to_string(InputKind kind) {
  switch (kind) {
    case InputKind::twin: return "twin";
    case InputKind::general: return "general";
    case InputKind::mixed_number: return "mixed_number";
    case InputKind::lossy_lower_bound: return "lossy_lower_bound";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const QfiReport& r) {
  j = nlohmann::json{{"qfi", r.qfi},
                     {"phase_variance", r.phase_variance},
                     {"n_total", r.n_total},
                     {"snl_ratio", r.snl_ratio},
                     {"hl_ratio", r.hl_ratio},
                     {"input_kind", to_string(r.input_kind)},
                     {"repetitions", r.repetitions}};
}

namespace {

QfiReport make_report(double qfi, int n_total, InputKind kind, int repetitions) {
  if (repetitions < 1) throw UsageError("repetitions must be at least 1");
  QfiReport r;
  r.qfi = qfi;
  r.n_total = n_total;
  r.input_kind = kind;
  r.repetitions = repetitions;
  r.phase_variance = qfi > 0.0 ? 1.0 / (repetitions * qfi) : INFINITY;
  if (n_total > 0) {
    const double n = n_total;
    r.snl_ratio = qfi / n;
    r.hl_ratio = qfi / (n * n);
  }
  return r;
}

void require_single_exchange(const ExchangeIntegral& i) {
  if (i.exchanged_count != 1) {
    throw UsageError("QFI needs the one-pair exchange integral, got " +
                     std::to_string(i.exchanged_count) + " exchanged pairs");
  }
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

QfiReport qfi_general(int m, int n, const ExchangeIntegral& i_ab, int repetitions) {
  if (m < 0 || n < 0) throw UsageError("photon numbers must be nonnegative");
  require_single_exchange(i_ab);
  const double f = 2.0 * m * n * i_ab.value + m + n;
  return make_report(f, m + n, InputKind::general, repetitions);
}

QfiReport qfi_twin(int n_total, const ExchangeIntegral& i_n, int repetitions) {
  if (n_total < 2 || n_total % 2 != 0) {
    throw UsageError("twin QFI needs an even photon number >= 2, got " + std::to_string(n_total));
  }
  require_single_exchange(i_n);
  const double n = n_total;
  return make_report(n * (i_n.value * n + 2.0) / 2.0, n_total, InputKind::twin, repetitions);
}

QfiReport qfi_mixed_number(int m, const std::vector<NumberComponent>& components,
                           int repetitions) {
  if (m < 0) throw UsageError("photon number must be nonnegative");
  if (components.empty()) throw UsageError("superposition needs at least one component");
  double total_weight = 0.0;
  double mean_n = 0.0;
  double exchange_term = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0) || c.n < 0) {
      throw UsageError("component weights and photon numbers must be nonnegative");
    }
    total_weight += c.weight;
    mean_n += c.weight * c.n;
    if (c.n > 0) exchange_term += c.weight * c.n * c.exchange;
  }
  if (std::abs(total_weight - 1.0) > 1e-12) {
    throw UsageError("component weights must sum to 1");
  }
  const double f = 2.0 * m * exchange_term + m + mean_n;
  return make_report(f, m + static_cast<int>(std::lround(mean_n)), InputKind::mixed_number,
                     repetitions);
}

QfiReport qfi_lossy_lower_bound(double p, const QfiReport& pure) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("collection probability must lie in [0, 1]");
  return make_report(p * p * pure.qfi, pure.n_total, InputKind::lossy_lower_bound,
                     pure.repetitions);
}

double parity_expectation(int m, const std::vector<double>& integrals, double phi) {
  if (m < 0) throw UsageError("photon number must be nonnegative");
  if (static_cast<int>(integrals.size()) != m + 1) {
    throw UsageError("parity needs the exchanged integrals for l = 0.." + std::to_string(m));
  }
  const double s2 = std::sin(phi) * std::sin(phi);
  const double c2 = std::cos(phi) * std::cos(phi);
  double out = 0.0;
  for (int l = 0; l <= m; ++l) {
    const double b = binomial(m, l);
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    out += sign * std::pow(s2, l) * std::pow(c2, m - l) * b * b * integrals[l];
  }
  return out;
}

ParityCurve parity_curve(int m, const std::vector<double>& integrals,
                         const std::vector<double>& phi_grid) {
  ParityCurve curve;
  curve.phi = phi_grid;
  curve.integrals = integrals;
  curve.expectation.reserve(phi_grid.size());
  for (double phi : phi_grid) curve.expectation.push_back(parity_expectation(m, integrals, phi));
  curve.curvature = m == 0 ? 0.0 : 2.0 * m * (m * integrals.at(1) + integrals.at(0));
  return curve;
}

double parity_numerical_curvature(int m, const std::vector<double>& integrals, double step) {
  const double plus = parity_expectation(m, integrals, step);
  const double zero = parity_expectation(m, integrals, 0.0);
  const double minus = parity_expectation(m, integrals, -step);
  return -(plus - 2.0 * zero + minus) / (step * step);
}

double parity_numerical_slope(int m, const std::vector<double>& integrals, double step) {
  return (parity_expectation(m, integrals, step) - parity_expectation(m, integrals, -step)) /
         (2.0 * step);
}

double parity_phase_variance(int m, const ExchangeIntegral& i_1) {
  if (m < 1) throw UsageError("parity variance needs at least one photon per arm");
  require_single_exchange(i_1);
  // Same expression and evaluation order as the twin QFI, so the product is 1.
  return 1.0 / qfi_twin(2 * m, i_1).qfi;
}

std::vector<double> single_mode_integrals(int m) {
  if (m < 0) throw UsageError("photon number must be nonnegative");
  return std::vector<double>(static_cast<std::size_t>(m) + 1, 1.0);
}

}  // namespace dickeqfi
