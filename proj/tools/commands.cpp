#include "commands.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "dickeqfi/budget.hpp"
#include "dickeqfi/dickesim.hpp"
#include "dickeqfi/errors.hpp"
#include "dickeqfi/exchange.hpp"
#include "dickeqfi/format.hpp"
#include "dickeqfi/metrology.hpp"
#include "dickeqfi/oracle.hpp"
#include "dickeqfi/parallel.hpp"
#include "dickeqfi/sweep.hpp"

namespace dickeqfi::cli {

using nlohmann::json;

namespace {

void require_format(const RunConfig& c, std::initializer_list<OutputFormat> allowed) {
  const auto f = c.effective_format();
  for (auto a : allowed) {
    if (a == f) return;
  }
  throw UsageError("format: '" + to_string(f) + "' is not available for " + c.command());
}

json document(const RunConfig& c) {
  json j;
  j["generator"] = "dickeqfi " + version();
  if (!c.no_header) {
    // Strip the "# dickeqfi <v> generated " prefix and keep the timestamp.
    const auto line = provenance_line();
    j["generated"] = line.substr(line.rfind(' ') + 1);
  }
  j["command"] = c.command();
  return j;
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// JSON has no infinities; they travel as strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string field(double v) { return format_double(v); }

}  // namespace

int cmd_exchange(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto& p = std::get<ExchangeParams>(c.params);
  require_format(c, {OutputFormat::csv, OutputFormat::json});
  if (p.n_values.empty()) throw UsageError("n: no photon numbers given");
  p.family.arm_ladder(2);
  if (p.verify_oracle) {
    for (int n : p.n_values) {
      if (n > c.oracle_limit) {
        throw UsageError("verify-oracle: N = " + std::to_string(n) +
                         " exceeds the oracle limit of " + std::to_string(c.oracle_limit));
      }
    }
  }
  const int jobs = effective_jobs(c.jobs);
  const auto rows = qfi_vs_n_sweep(p.family, p.n_values, jobs);

  std::vector<double> oracle_values(rows.size(), std::nan(""));
  int status = exit_ok;
  if (p.verify_oracle) {
    OracleOptions opts;
    opts.max_total_photons = c.oracle_limit;
    opts.jobs = jobs;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (!rows[k].ok) continue;
      const auto ladder = p.family.arm_ladder(rows[k].n);
      oracle_values[k] = oracle_integral(ladder, ladder, 1, 0.0, opts).value;
      if (!(std::abs(oracle_values[k] - rows[k].i_n) <= 1e-9)) {
        err << "exchange: recurrence and oracle differ by "
            << format_double(std::abs(oracle_values[k] - rows[k].i_n)) << " at N = " << rows[k].n
            << '\n';
        status = exit_numeric;
      }
    }
  }
  for (const auto& r : rows) {
    if (!r.ok) {
      err << "exchange: N = " << r.n << " failed: " << r.error << '\n';
      status = exit_numeric;
    }
  }

  if (c.effective_format() == OutputFormat::json) {
    json doc = document(c);
    doc["family"] = p.family.label();
    json arr = json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      json row = {{"N", r.n}, {"ok", r.ok}};
      if (r.ok) {
        row.update({{"I_N", r.i_n},
                    {"F_Q", r.f_q},
                    {"dphi2", r.dphi2},
                    {"dphi2_snl", r.dphi2_snl},
                    {"dphi2_hl", r.dphi2_hl},
                    {"dphi2_fock", r.dphi2_fock}});
        if (p.verify_oracle) {
          row["I_oracle"] = oracle_values[k];
          row["abs_diff"] = std::abs(oracle_values[k] - r.i_n);
        }
      } else {
        row["error"] = r.error;
      }
      arr.push_back(row);
    }
    doc["rows"] = arr;
    write_json(out, doc);
    return status;
  }

  CsvWriter csv(out);
  if (!c.no_header) out << provenance_line() << '\n';
  csv.comment("family " + p.family.label());
  std::vector<std::string> cols{"N", "I_N", "F_Q", "dphi2", "dphi2_snl", "dphi2_hl", "dphi2_fock"};
  if (p.verify_oracle) {
    cols.emplace_back("I_oracle");
    cols.emplace_back("abs_diff");
  }
  csv.header(cols);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (!r.ok) {
      csv.comment("N=" + std::to_string(r.n) + " failed: " + r.error);
      continue;
    }
    std::vector<std::string> f{std::to_string(r.n), field(r.i_n),       field(r.f_q),
                               field(r.dphi2),      field(r.dphi2_snl), field(r.dphi2_hl),
                               field(r.dphi2_fock)};
    if (p.verify_oracle) {
      f.push_back(field(oracle_values[k]));
      f.push_back(field(std::abs(oracle_values[k] - r.i_n)));
    }
    csv.row(f);
  }
  return status;
}

int cmd_loss(const RunConfig& c, std::ostream& out, std::ostream& err) {
  (void)err;
  const auto& p = std::get<LossParams>(c.params);
  require_format(c, {OutputFormat::csv, OutputFormat::json});
  if (p.n_values.empty()) throw UsageError("n: no emitter numbers given");
  if (p.purcell.empty()) throw UsageError("purcell: no Purcell factors given");
  for (int n : p.n_values) {
    if (n < 1) throw UsageError("n: emitter numbers must be >= 1");
  }
  for (double f : p.purcell) {
    if (!(f > 0.0)) throw UsageError("purcell: values must be positive");
  }

  if (p.trace) {
    if (p.n_values.size() != 1 || p.purcell.size() != 1) {
      throw UsageError("trace: needs exactly one N and one Purcell factor");
    }
    if (p.trace_points < 2) throw UsageError("trace_points: must be >= 2");
    if (!(p.trace_t_max >= 0.0)) throw UsageError("trace_t_max: must be >= 0");
    const int n = p.n_values.front();
    const auto loss = LossModel::from_purcell(p.purcell.front());
    const double t_max =
        p.trace_t_max > 0.0 ? p.trace_t_max : 4.0 * superradiance_timescale(n, 1.0).exact;
    std::vector<double> grid(static_cast<std::size_t>(p.trace_points));
    for (int k = 0; k < p.trace_points; ++k) grid[k] = t_max * k / (p.trace_points - 1);
    const auto trace = dicke_populations(n, loss, grid);

    if (c.effective_format() == OutputFormat::json) {
      json doc = document(c);
      doc["N"] = n;
      doc["purcell"] = num(p.purcell.front());
      doc["time"] = trace.time;
      doc["populations"] = trace.populations;
      doc["residence"] = trace.residence;
      doc["collection_probability"] = trace.collection_probability;
      write_json(out, doc);
      return exit_ok;
    }
    CsvWriter csv(out);
    if (!c.no_header) out << provenance_line() << '\n';
    std::vector<std::string> cols{"t"};
    for (int m = 0; m <= n; ++m) cols.push_back("P_" + std::to_string(m));
    cols.emplace_back("sum");
    csv.header(cols);
    for (std::size_t k = 0; k < trace.time.size(); ++k) {
      std::vector<double> row{trace.time[k]};
      row.insert(row.end(), trace.populations[k].begin(), trace.populations[k].end());
      row.push_back(1.0 - trace.sum_deficit[k]);
      csv.row(row);
    }
    return exit_ok;
  }

  struct Point {
    int n;
    double purcell;
    CollectionProbability prob;
  };
  std::vector<std::pair<int, double>> grid;
  for (int n : p.n_values) {
    for (double f : p.purcell) grid.emplace_back(n, f);
  }
  const auto points =
      parallel_map<Point>(grid.size(), effective_jobs(c.jobs), [&](std::size_t k) {
        const auto [n, f] = grid[k];
        return Point{n, f, dicke_collection_probability(n, LossModel::from_purcell(f))};
      });
  auto log_estimate = [](const Point& pt) {
    return std::log(static_cast<double>(pt.n)) / pt.purcell;
  };

  if (c.effective_format() == OutputFormat::json) {
    json doc = document(c);
    json arr = json::array();
    for (const auto& pt : points) {
      arr.push_back({{"N", pt.n},
                     {"purcell", num(pt.purcell)},
                     {"one_minus_p_exact", 1.0 - pt.prob.exact},
                     {"one_minus_p_product", 1.0 - pt.prob.product},
                     {"log_estimate", log_estimate(pt)}});
    }
    doc["rows"] = arr;
    write_json(out, doc);
    return exit_ok;
  }
  CsvWriter csv(out);
  if (!c.no_header) out << provenance_line() << '\n';
  csv.header({"N", "purcell", "one_minus_p_exact", "one_minus_p_product", "log_estimate"});
  for (const auto& pt : points) {
    csv.row({std::to_string(pt.n), field(pt.purcell), field(1.0 - pt.prob.exact),
             field(1.0 - pt.prob.product), field(log_estimate(pt))});
  }
  return exit_ok;
}

int cmd_parity(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto& p = std::get<ParityParams>(c.params);
  require_format(c, {OutputFormat::csv, OutputFormat::json});
  if (p.m < 1) throw UsageError("m: must be >= 1");
  if (p.points < 2) throw UsageError("points: must be >= 2");

  std::vector<double> integrals;
  if (p.single_mode) {
    integrals = single_mode_integrals(p.m);
  } else {
    p.family.arm_ladder(2);
    if (2 * p.m > c.oracle_limit) {
      throw UsageError("m: multimode parity needs the oracle, which is limited to " +
                       std::to_string(c.oracle_limit) +
                       " photons; use --single-mode or raise --oracle-limit");
    }
    const auto ladder = p.family.arm_ladder(2 * p.m);
    OracleOptions opts;
    opts.max_total_photons = c.oracle_limit;
    opts.jobs = effective_jobs(c.jobs);
    for (int l = 0; l <= p.m; ++l) {
      integrals.push_back(oracle_integral(ladder, ladder, l, 0.0, opts).value);
    }
  }

  std::vector<double> grid(static_cast<std::size_t>(p.points));
  for (int k = 0; k < p.points; ++k) {
    grid[k] = std::numbers::pi / 2.0 * k / (p.points - 1);
  }
  const auto curve = parity_curve(p.m, integrals, grid);
  const double numeric = parity_numerical_curvature(p.m, integrals);
  const double slope = parity_numerical_slope(p.m, integrals);
  const auto i1 = make_closed_form_integral(integrals[1], 2 * p.m);
  const double qfi = qfi_twin(2 * p.m, i1).qfi;
  const double saturation = qfi / numeric;
  const double legendre_numeric = numeric / 4.0;
  const double legendre_exact = p.m * (p.m + 1.0) / 2.0;

  int status = exit_ok;
  if (std::abs(numeric - curve.curvature) > 1e-6 * curve.curvature) {
    err << "parity: numerical curvature " << format_double(numeric)
        << " disagrees with the analytic value " << format_double(curve.curvature) << '\n';
    status = exit_numeric;
  }

  if (c.effective_format() == OutputFormat::json) {
    json doc = document(c);
    doc["m"] = p.m;
    doc["single_mode"] = p.single_mode;
    if (!p.single_mode) doc["family"] = p.family.label();
    doc["integrals"] = integrals;
    doc["phi"] = curve.phi;
    doc["expectation"] = curve.expectation;
    doc["curvature_analytic"] = curve.curvature;
    doc["curvature_numeric"] = numeric;
    doc["slope_at_zero"] = slope;
    doc["qfi"] = qfi;
    doc["dphi2_times_qfi"] = saturation;
    if (p.check_derivative) {
      doc["legendre_slope_at_1_numeric"] = legendre_numeric;
      doc["legendre_slope_at_1_exact"] = legendre_exact;
    }
    write_json(out, doc);
    return status;
  }

  CsvWriter csv(out);
  if (!c.no_header) out << provenance_line() << '\n';
  csv.comment(p.single_mode ? "single-mode m=" + std::to_string(p.m)
                            : p.family.label() + " m=" + std::to_string(p.m));
  csv.header({"phi", "expectation"});
  for (std::size_t k = 0; k < curve.phi.size(); ++k) {
    csv.row({curve.phi[k], curve.expectation[k]});
  }
  csv.comment("curvature " + format_double(numeric) + " analytic " +
              format_double(curve.curvature) + " qfi " + format_double(qfi));
  csv.comment("dphi2_times_qfi " + format_double(saturation) + " slope_at_zero " +
              format_double(slope));
  if (p.check_derivative) {
    csv.comment("legendre_slope_at_1 " + format_double(legendre_numeric) + " expected " +
                format_double(legendre_exact));
  }
  return status;
}

namespace {

struct FidelityRow {
  int n;
  double p;
  double i_n;
  double ideal;
  double bound;
  bool meets_target;
};

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string short_num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

int cmd_report(const RunConfig& c, std::ostream& out, std::ostream& err) {
  (void)err;
  const auto& rp = std::get<ReportParams>(c.params);
  const PlatformParams platform = rp.resolve();
  if (!(rp.target_fidelity > 0.0 && rp.target_fidelity < 1.0)) {
    throw UsageError("target_fidelity: must lie in (0, 1)");
  }
  for (int n : rp.fidelity_n) {
    if (n < 2 || n % 2 != 0) throw UsageError("fidelity_n: values must be even and >= 2");
  }

  const LossModel loss{1.0, platform.gamma_star / platform.gamma_1d};
  auto dicke_i = [](int n) {
    return exchange_integral(TwinConfiguration::twin(build_dicke(n / 2, 1.0))).value;
  };
  const int n = platform.n_photons;
  const double i_n = dicke_i(n);
  const double p = dicke_collection_probability(n, loss).exact;
  const ErrorBudget budget = full_budget(platform, i_n, p);

  const auto rows = parallel_map<FidelityRow>(
      rp.fidelity_n.size(), effective_jobs(c.jobs), [&](std::size_t k) {
        const int nk = rp.fidelity_n[k];
        FidelityRow r{};
        r.n = nk;
        r.p = dicke_collection_probability(nk, loss).exact;
        r.i_n = dicke_i(nk);
        r.ideal = nk * (r.i_n * nk + 2.0) / 2.0;
        r.bound = r.p * r.p * r.ideal;
        r.meets_target = r.p >= rp.target_fidelity;
        return r;
      });
  std::optional<FidelityCeiling> ceiling;
  if (platform.gamma_star > 0.0) {
    ceiling = fidelity_ceiling(platform.gamma_1d / platform.gamma_star, rp.target_fidelity);
  }

  const auto fmt = c.effective_format();
  if (fmt == OutputFormat::json) {
    json doc = document(c);
    doc["budget"] = budget;
    json fid = json::array();
    for (const auto& r : rows) {
      fid.push_back({{"N", r.n},
                     {"p", r.p},
                     {"I_N", r.i_n},
                     {"ideal_qfi", r.ideal},
                     {"lossy_bound", r.bound},
                     {"meets_target", r.meets_target}});
    }
    doc["fidelity_table"] = fid;
    doc["target_fidelity"] = rp.target_fidelity;
    if (ceiling) {
      doc["fidelity_ceiling"] = {{"n_max", ceiling->n_max},
                                 {"log_estimate", ceiling->log_estimate},
                                 {"purcell", ceiling->purcell}};
    }
    write_json(out, doc);
    return exit_ok;
  }

  if (fmt == OutputFormat::csv) {
    CsvWriter csv(out);
    if (!c.no_header) out << provenance_line() << '\n';
    csv.comment("N " + std::to_string(n) + " I_N " + field(i_n) + " p " + field(p) +
                " ideal_qfi " + field(budget.ideal_qfi) + " combined_qfi " +
                field(budget.combined_qfi) + " (first-order composition)");
    csv.header({"channel", "kind", "correction", "feasible", "margin"});
    static const char* kinds[] = {"multiplicative", "additive", "infidelity", "feasibility",
                                  "collection"};
    for (const auto& e : budget.entries) {
      csv.row({e.channel, kinds[static_cast<int>(e.kind)], field(e.correction),
               e.feasible ? "yes" : "no", field(e.margin)});
    }
    csv.comment("fidelity table, target p >= " + field(rp.target_fidelity));
    csv.header({"N", "p", "I_N", "ideal_qfi", "lossy_bound", "meets_target"});
    for (const auto& r : rows) {
      csv.row({std::to_string(r.n), field(r.p), field(r.i_n), field(r.ideal), field(r.bound),
               r.meets_target ? "yes" : "no"});
    }
    if (ceiling) {
      csv.comment("fidelity ceiling n_max " + std::to_string(ceiling->n_max) +
                  " log_estimate " + field(ceiling->log_estimate));
    }
    return exit_ok;
  }

  if (!c.no_header) out << provenance_line() << '\n';
  out << "Error budget for N = " << n << " photons (" << n / 2 << " per arm)\n";
  out << "  Q = " << short_num(platform.quality_factor) << ", n_g = "
      << short_num(platform.group_index) << ", lambda = " << short_num(platform.wavelength)
      << " m, gamma_1d = " << short_num(platform.gamma_1d) << " /s, gamma_star = "
      << short_num(platform.gamma_star) << " /s\n\n";
  out << "  " << pad("channel", 22) << pad("kind", 16) << pad("value", 16) << pad("ok", 5)
      << "margin\n";
  static const char* kinds[] = {"multiplicative", "additive", "infidelity", "feasibility",
                                "collection"};
  for (const auto& e : budget.entries) {
    out << "  " << pad(e.channel, 22) << pad(kinds[static_cast<int>(e.kind)], 16)
        << pad(short_num(e.correction), 16) << pad(e.feasible ? "yes" : "NO", 5)
        << short_num(e.margin) << "  " << e.note << '\n';
  }
  out << "\n  I_N                 " << short_num(i_n) << '\n';
  out << "  I_eff               " << short_num(budget.i_eff) << '\n';
  out << "  collection p        " << short_num(p) << '\n';
  out << "  ideal F_Q           " << short_num(budget.ideal_qfi) << '\n';
  out << "  combined F_Q        " << short_num(budget.combined_qfi)
      << "  (first-order composition of channels)\n";
  out << "  SNL / HL            " << n << " / " << n * n << "\n\n";
  out << "Fidelity table (target p >= " << short_num(rp.target_fidelity) << ")\n";
  out << "  " << pad("N", 8) << pad("p", 14) << pad("I_N", 14) << pad("ideal F_Q", 14)
      << pad("p^2 F_Q", 14) << "target\n";
  for (const auto& r : rows) {
    out << "  " << pad(std::to_string(r.n), 8) << pad(short_num(r.p), 14)
        << pad(short_num(r.i_n), 14) << pad(short_num(r.ideal), 14) << pad(short_num(r.bound), 14)
        << (r.meets_target ? "yes" : "no") << '\n';
  }
  if (ceiling) {
    out << "\n  largest N with p >= " << short_num(ceiling->target) << ": " << ceiling->n_max
        << " (estimate exp((1-F) P_1d) = " << short_num(ceiling->log_estimate)
        << ", P_1d = " << short_num(ceiling->purcell) << ")\n";
  }
  return exit_ok;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto& p = std::get<VerifyParams>(c.params);
  require_format(c, {OutputFormat::csv, OutputFormat::json, OutputFormat::text});
  if (p.max_m < 1) throw UsageError("max_m: must be >= 1");
  if (2 * p.max_m > c.oracle_limit) {
    throw UsageError("max_m: 2 * " + std::to_string(p.max_m) + " photons exceeds the oracle limit of " +
                     std::to_string(c.oracle_limit));
  }
  if (p.families.empty()) throw UsageError("families: nothing to verify");

  struct Check {
    std::string family;
    int m;
    double recurrence;
    double oracle;
    double exact;
    bool has_exact;
    double diff;
    bool pass;
  };
  std::vector<std::pair<FamilySpec, int>> cases;
  for (const auto& f : p.families) {
    for (int m = 1; m <= p.max_m; ++m) cases.emplace_back(f, m);
  }
  OracleOptions opts;
  opts.max_total_photons = c.oracle_limit;
  const auto checks =
      parallel_map<Check>(cases.size(), effective_jobs(c.jobs), [&](std::size_t k) {
        const auto& [fam, m] = cases[k];
        const auto ladder = fam.arm_ladder(2 * m);
        Check ch{};
        ch.family = fam.label();
        ch.m = m;
        ch.recurrence = exchange_integral(TwinConfiguration::twin(ladder)).value;
        ch.oracle = oracle_integral(ladder, ladder, 1, 0.0, opts).value;
        ch.has_exact = 2 * m <= exact_oracle_limit;
        ch.exact = ch.has_exact ? oracle_integral_exact(ladder, ladder, 1).integral.value : 0.0;
        ch.diff = std::abs(ch.recurrence - ch.oracle);
        ch.pass = ch.diff <= p.tolerance &&
                  (!ch.has_exact || std::abs(ch.recurrence - ch.exact) <= p.tolerance);
        return ch;
      });

  int status = exit_ok;
  for (const auto& ch : checks) {
    if (!ch.pass) {
      err << "verify: " << ch.family << " m=" << ch.m << " fails (|diff| = "
          << format_double(ch.diff) << ")\n";
      status = exit_numeric;
    }
  }

  const auto fmt = c.effective_format();
  if (fmt == OutputFormat::json) {
    json doc = document(c);
    doc["tolerance"] = p.tolerance;
    json arr = json::array();
    for (const auto& ch : checks) {
      json row = {{"family", ch.family}, {"m", ch.m},       {"I_recurrence", ch.recurrence},
                  {"I_oracle", ch.oracle}, {"abs_diff", ch.diff}, {"pass", ch.pass}};
      if (ch.has_exact) row["I_exact"] = ch.exact;
      arr.push_back(row);
    }
    doc["checks"] = arr;
    write_json(out, doc);
    return status;
  }
  if (fmt == OutputFormat::csv) {
    CsvWriter csv(out);
    if (!c.no_header) out << provenance_line() << '\n';
    csv.header({"family", "m", "I_recurrence", "I_oracle", "I_exact", "abs_diff", "pass"});
    for (const auto& ch : checks) {
      csv.row({ch.family, std::to_string(ch.m), field(ch.recurrence), field(ch.oracle),
               ch.has_exact ? field(ch.exact) : "", field(ch.diff), ch.pass ? "yes" : "no"});
    }
    return status;
  }
  if (!c.no_header) out << provenance_line() << '\n';
  for (const auto& ch : checks) {
    out << (ch.pass ? "PASS " : "FAIL ") << pad(ch.family, 28) << " m=" << ch.m
        << "  recurrence " << format_double(ch.recurrence) << "  oracle "
        << format_double(ch.oracle) << "  |diff| " << short_num(ch.diff) << '\n';
  }
  return status;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.params.index()) {
      case 0: return cmd_exchange(config, out, err);
      case 1: return cmd_loss(config, out, err);
      case 2: return cmd_parity(config, out, err);
      case 3: return cmd_report(config, out, err);
      default: return cmd_verify(config, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const InvalidLadder& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const OracleTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  }
}

}  // namespace dickeqfi::cli
