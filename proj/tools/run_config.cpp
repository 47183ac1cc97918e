#include "run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "dickeqfi/errors.hpp"
#include "dickeqfi/parallel.hpp"

namespace dickeqfi::cli {

using nlohmann::json;

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::text: return "text";
  }
  return "csv";
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "text") return OutputFormat::text;
  throw UsageError("format: unknown output format '" + s + "' (expected csv, json or text)");
}

std::vector<double> default_purcell_grid() { return parse_purcell_list("10..1e5", 4); }

PlatformParams ReportParams::resolve() const {
  PlatformParams p = preset ? platform_preset(*preset) : PlatformParams{};
  if (!preset) {
    const std::pair<const char*, bool> required[] = {
        {"quality_factor", quality_factor.has_value()}, {"group_index", group_index.has_value()},
        {"wavelength", wavelength.has_value()},         {"gamma_1d", gamma_1d.has_value()},
        {"n_photons", n_photons.has_value()}};
    for (const auto& [key, present] : required) {
      if (!present) {
        throw UsageError(std::string("report: missing required parameter '") + key +
                         "' (give it, or start from --preset)");
      }
    }
  }
  if (quality_factor) p.quality_factor = *quality_factor;
  if (group_index) p.group_index = *group_index;
  if (wavelength) p.wavelength = *wavelength;
  if (gamma_1d) p.gamma_1d = *gamma_1d;
  if (gamma_star) p.gamma_star = *gamma_star;
  if (n_photons) p.n_photons = *n_photons;
  if (pulse_error) p.pulse_error = *pulse_error;
  if (delta_gamma) p.delta_gamma = *delta_gamma;
  if (delay) p.delay = *delay;
  if (interferometer_loss) p.interferometer_loss = *interferometer_loss;
  if (margin_factor) p.margin_factor = *margin_factor;
  p.validate();
  return p;
}

std::string RunConfig::command() const {
  static const char* names[] = {"exchange", "loss", "parity", "report", "verify"};
  return names[params.index()];
}

OutputFormat RunConfig::effective_format() const {
  if (format) return *format;
  return std::holds_alternative<ReportParams>(params) ? OutputFormat::text : OutputFormat::csv;
}

std::vector<std::string> command_names() {
  return {"exchange", "loss", "parity", "report", "verify"};
}

CommandParams default_params(const std::string& command) {
  if (command == "exchange") return ExchangeParams{};
  if (command == "loss") return LossParams{};
  if (command == "parity") return ParityParams{};
  if (command == "report") return ReportParams{};
  if (command == "verify") return VerifyParams{};
  throw UsageError("command: unknown subcommand '" + command + "'");
}

namespace {

// Doubles go through JSON as numbers, except infinities, which JSON lacks.
json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw UsageError(key + ": expected a number");
}

json family_to_json(const FamilySpec& f) {
  return {{"family", dickeqfi::to_string(f.family)}, {"u_over_gamma", f.u_over_gamma}};
}

class Reader {
 public:
  Reader(const json& j, std::string scope) : j_(j), scope_(std::move(scope)) {
    if (!j_.is_object()) throw UsageError(scope_ + ": expected a JSON object");
  }

  void allow(std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [key, value] : j_.items()) {
      if (!ok.count(key)) throw UsageError(name(key) + ": unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const { return j_.at(key); }
  std::string name(const std::string& key) const {
    return scope_.empty() ? key : scope_ + "." + key;
  }

  void read(const char* key, double& out) const {
    if (has(key)) out = number_from_json(at(key), name(key));
  }
  void read(const char* key, std::optional<double>& out) const {
    if (has(key)) out = number_from_json(at(key), name(key));
  }
  void read(const char* key, int& out) const {
    if (!has(key)) return;
    if (!at(key).is_number_integer()) throw UsageError(name(key) + ": expected an integer");
    out = at(key).get<int>();
  }
  void read(const char* key, std::optional<int>& out) const {
    if (!has(key)) return;
    int v = 0;
    read(key, v);
    out = v;
  }
  void read(const char* key, bool& out) const {
    if (!has(key)) return;
    if (!at(key).is_boolean()) throw UsageError(name(key) + ": expected true or false");
    out = at(key).get<bool>();
  }
  void read(const char* key, std::string& out) const {
    if (!has(key)) return;
    if (!at(key).is_string()) throw UsageError(name(key) + ": expected a string");
    out = at(key).get<std::string>();
  }
  void read(const char* key, std::optional<std::string>& out) const {
    if (!has(key)) return;
    std::string v;
    read(key, v);
    out = v;
  }
  void read(const char* key, std::vector<int>& out) const {
    if (!has(key)) return;
    if (!at(key).is_array()) throw UsageError(name(key) + ": expected an array of integers");
    out.clear();
    for (const auto& v : at(key)) {
      if (!v.is_number_integer()) throw UsageError(name(key) + ": expected an array of integers");
      out.push_back(v.get<int>());
    }
  }
  void read(const char* key, std::vector<double>& out) const {
    if (!has(key)) return;
    if (!at(key).is_array()) throw UsageError(name(key) + ": expected an array of numbers");
    out.clear();
    for (const auto& v : at(key)) out.push_back(number_from_json(v, name(key)));
  }
  void read(const char* key, FamilySpec& out) const {
    if (!has(key)) return;
    Reader r(at(key), name(key));
    r.allow({"family", "u_over_gamma"});
    std::string fam = dickeqfi::to_string(out.family);
    r.read("family", fam);
    try {
      out.family = ladder_family_from_string(fam);
    } catch (const UsageError& e) {
      throw UsageError(r.name("family") + ": " + e.what());
    }
    r.read("u_over_gamma", out.u_over_gamma);
  }

 private:
  const json& j_;
  std::string scope_;
};

template <typename T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (!v) return;
  if constexpr (std::is_same_v<T, double>) {
    j[key] = number_to_json(*v);
  } else {
    j[key] = *v;
  }
}

json params_to_json(const ExchangeParams& p) {
  return {{"family", family_to_json(p.family)},
          {"n_values", p.n_values},
          {"verify_oracle", p.verify_oracle}};
}

json params_to_json(const LossParams& p) {
  json purcell = json::array();
  for (double v : p.purcell) purcell.push_back(number_to_json(v));
  return {{"n_values", p.n_values},
          {"purcell", purcell},
          {"trace", p.trace},
          {"trace_t_max", p.trace_t_max},
          {"trace_points", p.trace_points}};
}

json params_to_json(const ParityParams& p) {
  return {{"single_mode", p.single_mode},
          {"family", family_to_json(p.family)},
          {"m", p.m},
          {"points", p.points},
          {"check_derivative", p.check_derivative}};
}

json params_to_json(const ReportParams& p) {
  json j = json::object();
  put(j, "preset", p.preset);
  put(j, "quality_factor", p.quality_factor);
  put(j, "group_index", p.group_index);
  put(j, "wavelength", p.wavelength);
  put(j, "gamma_1d", p.gamma_1d);
  put(j, "gamma_star", p.gamma_star);
  put(j, "n_photons", p.n_photons);
  put(j, "pulse_error", p.pulse_error);
  put(j, "delta_gamma", p.delta_gamma);
  put(j, "delay", p.delay);
  put(j, "interferometer_loss", p.interferometer_loss);
  put(j, "margin_factor", p.margin_factor);
  j["target_fidelity"] = p.target_fidelity;
  j["fidelity_n"] = p.fidelity_n;
  return j;
}

json params_to_json(const VerifyParams& p) {
  json fams = json::array();
  for (const auto& f : p.families) fams.push_back(family_to_json(f));
  return {{"max_m", p.max_m}, {"families", fams}, {"tolerance", p.tolerance}};
}

void params_from_json(const Reader& r, ExchangeParams& p) {
  r.read("family", p.family);
  r.read("n_values", p.n_values);
  r.read("verify_oracle", p.verify_oracle);
}

void params_from_json(const Reader& r, LossParams& p) {
  r.read("n_values", p.n_values);
  r.read("purcell", p.purcell);
  r.read("trace", p.trace);
  r.read("trace_t_max", p.trace_t_max);
  r.read("trace_points", p.trace_points);
}

void params_from_json(const Reader& r, ParityParams& p) {
  r.read("single_mode", p.single_mode);
  r.read("family", p.family);
  r.read("m", p.m);
  r.read("points", p.points);
  r.read("check_derivative", p.check_derivative);
}

void params_from_json(const Reader& r, ReportParams& p) {
  r.read("preset", p.preset);
  r.read("quality_factor", p.quality_factor);
  r.read("group_index", p.group_index);
  r.read("wavelength", p.wavelength);
  r.read("gamma_1d", p.gamma_1d);
  r.read("gamma_star", p.gamma_star);
  r.read("n_photons", p.n_photons);
  r.read("pulse_error", p.pulse_error);
  r.read("delta_gamma", p.delta_gamma);
  r.read("delay", p.delay);
  r.read("interferometer_loss", p.interferometer_loss);
  r.read("margin_factor", p.margin_factor);
  r.read("target_fidelity", p.target_fidelity);
  r.read("fidelity_n", p.fidelity_n);
}

void params_from_json(const Reader& r, VerifyParams& p) {
  r.read("max_m", p.max_m);
  r.read("tolerance", p.tolerance);
  if (r.has("families")) {
    const auto& arr = r.at("families");
    if (!arr.is_array()) throw UsageError(r.name("families") + ": expected an array");
    p.families.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      json wrapper = {{"f", arr[i]}};
      Reader w(wrapper, r.name("families[" + std::to_string(i) + "]"));
      FamilySpec f;
      w.read("f", f);
      p.families.push_back(f);
    }
  }
}

std::set<std::string> param_keys(const CommandParams& params) {
  std::set<std::string> keys;
  std::visit(
      [&](const auto& p) {
        const json j = params_to_json(p);
        for (const auto& [k, v] : j.items()) keys.insert(k);
      },
      params);
  return keys;
}

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command();
  j["params"] = std::visit([](const auto& p) { return params_to_json(p); }, c.params);
  j["output"] = c.output;
  if (c.format) j["format"] = to_string(*c.format);
  j["jobs"] = c.jobs;
  j["oracle_limit"] = c.oracle_limit;
  j["no_header"] = c.no_header;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  Reader top(j, "");
  top.allow({"command", "params", "output", "format", "jobs", "oracle_limit", "no_header"});
  if (!top.has("command")) throw UsageError("command: missing key");
  std::string command;
  top.read("command", command);
  RunConfig c;
  c.params = default_params(command);
  if (top.has("params")) {
    Reader r(top.at("params"), "params");
    const auto known = param_keys(c.params);
    // Report keys are optional and only present when set, so list them all.
    static const std::set<std::string> report_keys = {
        "preset", "quality_factor", "group_index", "wavelength", "gamma_1d",
        "gamma_star", "n_photons", "pulse_error", "delta_gamma", "delay",
        "interferometer_loss", "margin_factor", "target_fidelity", "fidelity_n"};
    const auto& allowed = std::holds_alternative<ReportParams>(c.params) ? report_keys : known;
    for (const auto& [key, value] : top.at("params").items()) {
      if (!allowed.count(key)) throw UsageError(r.name(key) + ": unknown key");
    }
    std::visit([&](auto& p) { params_from_json(r, p); }, c.params);
  }
  top.read("output", c.output);
  if (top.has("format")) {
    std::string f;
    top.read("format", f);
    c.format = output_format_from_string(f);
  }
  top.read("jobs", c.jobs);
  top.read("oracle_limit", c.oracle_limit);
  top.read("no_header", c.no_header);
  if (c.jobs < 0) throw UsageError("jobs: must be >= 0");
  if (c.oracle_limit < 1) throw UsageError("oracle_limit: must be >= 1");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

namespace {

long long parse_integer(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + s + "' is not an integer");
  }
  if (pos != s.size()) throw UsageError(what + ": '" + s + "' is not an integer");
  return v;
}

double parse_real(const std::string& s, const std::string& what) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + s + "' is not a number");
  }
  if (pos != s.size()) throw UsageError(what + ": '" + s + "' is not a number");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text, int step) {
  if (step < 1) throw UsageError("step: must be >= 1");
  if (text.empty()) throw UsageError("n: empty list");
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<int>(parse_integer(item, "n")));
      continue;
    }
    const long long lo = parse_integer(item.substr(0, dots), "n");
    const long long hi = parse_integer(item.substr(dots + 2), "n");
    if (hi < lo) throw UsageError("n: range '" + item + "' is empty");
    if ((hi - lo) / step > 1'000'000) throw UsageError("n: range '" + item + "' is too long");
    for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<double> parse_purcell_list(const std::string& text, int per_decade) {
  if (per_decade < 1) throw UsageError("per-decade: must be >= 1");
  if (text.empty()) throw UsageError("purcell: empty list");
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      const double v = parse_real(item, "purcell");
      if (!(v > 0.0)) throw UsageError("purcell: values must be positive");
      out.push_back(v);
      continue;
    }
    const double lo = parse_real(item.substr(0, dots), "purcell");
    const double hi = parse_real(item.substr(dots + 2), "purcell");
    if (!(lo > 0.0) || !(hi >= lo) || std::isinf(hi)) {
      throw UsageError("purcell: range '" + item + "' must satisfy 0 < lo <= hi < inf");
    }
    const double decades = std::log10(hi / lo);
    const int steps = static_cast<int>(std::round(decades * per_decade));
    if (steps > 100000) throw UsageError("purcell: range '" + item + "' is too long");
    for (int k = 0; k <= steps; ++k) {
      out.push_back(k == steps ? hi : lo * std::pow(10.0, static_cast<double>(k) / per_decade));
    }
  }
  return out;
}

int effective_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DICKEQFI_JOBS")) {
    try {
      const long long v = parse_integer(env, "DICKEQFI_JOBS");
      if (v > 0 && v < 4096) return static_cast<int>(v);
    } catch (const UsageError&) {
    }
    throw UsageError("DICKEQFI_JOBS: expected a positive integer, got '" + std::string(env) + "'");
  }
  return resolve_jobs(0);
}

}  // namespace dickeqfi::cli
