#include "cavisteady/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cavisteady/density_oracle.hpp"
#include "cavisteady/eom.hpp"
#include "cavisteady/errors.hpp"
#include "cavisteady/observables.hpp"
#include "cavisteady/perturbative.hpp"

namespace cavisteady {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidConfig, "cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidConfig, "cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return v;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string_view to_string(ScanParameter p) noexcept {
  switch (p) {
    case ScanParameter::kJ: return "j";
    case ScanParameter::kDelta: return "delta";
    case ScanParameter::kLaserOffset: return "laser_offset";
    case ScanParameter::kOmega: return "omega";
    case ScanParameter::kNThermal: return "n_thermal";
  }
  return "unknown";
}

ScanRange parse_scan_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) {
    throw Error(ErrorCode::kInvalidConfig, "scan must look like name:from:to:steps, got '" + std::string(text) + "'");
  }
  ScanRange r;
  const auto name = trim(parts[0]);
  if (name == "j") {
    r.parameter = ScanParameter::kJ;
  } else if (name == "delta") {
    r.parameter = ScanParameter::kDelta;
  } else if (name == "laser_offset") {
    r.parameter = ScanParameter::kLaserOffset;
  } else if (name == "omega") {
    r.parameter = ScanParameter::kOmega;
  } else if (name == "n_thermal" || name == "nthermal") {
    r.parameter = ScanParameter::kNThermal;
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown scan parameter '" + std::string(name) + "'");
  }
  r.from = parse_double(parts[1], "scan start");
  r.to = parse_double(parts[2], "scan end");
  r.steps = parse_int(parts[3], "scan steps");
  return r;
}

std::vector<double> scan_points(const ScanRange& range) {
  std::vector<double> out;
  if (range.steps <= 1) {
    out.push_back(range.from);
    return out;
  }
  const double span = range.to - range.from;
  for (int k = 0; k < range.steps; ++k) {
    out.push_back(k == range.steps - 1 ? range.to : range.from + span * k / (range.steps - 1));
  }
  return out;
}

ObservableSelection parse_observables(std::string_view text) {
  ObservableSelection sel{false, false, false};
  for (auto part : split(text, ',')) {
    part = trim(part);
    if (part == "n_a" || part == "n") {
      sel.n_a = true;
    } else if (part == "g2") {
      sel.g2 = true;
    } else if (part == "nn") {
      sel.nn = true;
    } else if (!part.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "unknown observable '" + std::string(part) + "'");
    }
  }
  return sel;
}

void validate_config(const ScanConfig& config) {
  const auto params = validate_params(config.base);
  if (config.methods.empty()) throw Error(ErrorCode::kInvalidConfig, "at least one method is required");
  if (config.scan) {
    if (config.scan->steps < 1) throw Error(ErrorCode::kInvalidConfig, "scan steps must be >= 1");
    if (!(config.scan->from <= config.scan->to)) throw Error(ErrorCode::kInvalidConfig, "scan needs from <= to");
  }
  if (config.observables.g2 && params.n_max() < 2) {
    throw Error(ErrorCode::kInvalidConfig, "g2 requires n_max >= 2");
  }
  if (std::find(config.methods.begin(), config.methods.end(), Method::kOracle) != config.methods.end()) {
    const int cut = config.method_options.oracle_cut < 0 ? params.n_max() : config.method_options.oracle_cut;
    double dim = 1.0;
    for (int i = 0; i < params.n_cavities(); ++i) dim *= cut + 1;
    if (dim > static_cast<double>(config.method_options.oracle_max_dimension)) {
      throw Error(ErrorCode::kInvalidConfig, "oracle dimension (n_cut+1)^N exceeds the cap");
    }
  }
}

ScanConfig config_from_json(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");

  ScanConfig c;
  try {
    c.base.n_cavities = j.value("n", c.base.n_cavities);
    c.base.n_max = j.value("nmax", c.base.n_max);
    c.base.delta = j.value("delta", c.base.delta);
    c.base.u = j.value("u", c.base.u);
    c.base.j = j.value("j", c.base.j);
    c.base.omega = j.value("omega", c.base.omega);
    c.base.gamma0 = j.value("gamma0", c.base.gamma0);
    c.base.n_thermal = j.value("nthermal", c.base.n_thermal);
    if (j.value("appendix_verbatim", false)) c.base.pump_diagonal = PumpDiagonal::kAppendixVerbatim;

    const auto read_methods = [&](const json& m) {
      std::vector<std::string> names;
      if (m.is_array()) {
        names = m.get<std::vector<std::string>>();
      } else {
        for (auto part : split(m.get<std::string>(), ',')) names.emplace_back(trim(part));
      }
      c.methods.clear();
      for (const auto& name : names) {
        const auto method = parse_method(name);
        if (!method) throw Error(ErrorCode::kInvalidConfig, "unknown method '" + name + "'");
        c.methods.push_back(*method);
      }
    };
    if (j.contains("methods")) read_methods(j["methods"]);
    if (j.contains("method")) read_methods(j["method"]);
    if (j.contains("scan")) c.scan = parse_scan_range(j["scan"].get<std::string>());
    if (j.contains("observables")) {
      const auto& o = j["observables"];
      std::string joined;
      if (o.is_array()) {
        for (const auto& s : o) joined += s.get<std::string>() + ",";
      } else {
        joined = o.get<std::string>();
      }
      c.observables = parse_observables(joined);
    }
    c.out_path = j.value("out", c.out_path);
    if (j.contains("format")) {
      const auto f = j["format"].get<std::string>();
      if (f == "csv") {
        c.format = OutputFormat::kCsv;
      } else if (f == "json") {
        c.format = OutputFormat::kJson;
      } else {
        throw Error(ErrorCode::kInvalidConfig, "format must be csv or json");
      }
    }
    c.method_options.oracle_cut = j.value("oracle_cut", c.method_options.oracle_cut);
    c.method_options.full_system = j.value("full_system", c.method_options.full_system);
    c.threads = j.value("threads", c.threads);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("bad config field: ") + e.what());
  }
  return c;
}

SolutionVector solve_method(const SystemParams& params, Method method, const MethodOptions& options) {
  switch (method) {
    case Method::kExact: {
      AssemblyOptions assembly;
      if (!options.full_system) assembly.seeds = observable_seeds(params.n_cavities(), params.n_max());
      return solve_steady(assemble_system(params, assembly));
    }
    case Method::kPert0: return solve_perturbative(params, 0);
    case Method::kPert1: return solve_perturbative(params, 1);
    case Method::kPert2: return solve_perturbative(params, 2);
    case Method::kOracle: {
      OracleOptions oracle;
      oracle.n_cut = options.oracle_cut < 0 ? params.n_max() : options.oracle_cut;
      oracle.max_dimension = options.oracle_max_dimension;
      return oracle_solution(params, oracle);
    }
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown method");
}

namespace {

ParamRecord at_point(ParamRecord base, ScanParameter p, double value) {
  switch (p) {
    case ScanParameter::kJ: base.j = value; break;
    case ScanParameter::kDelta: base.delta = value; break;
    case ScanParameter::kLaserOffset: base.delta = -value; break;
    case ScanParameter::kOmega: base.omega = value; break;
    case ScanParameter::kNThermal: base.n_thermal = value; break;
  }
  return base;
}

std::string_view stored_name(ScanParameter p) {
  return p == ScanParameter::kLaserOffset ? "delta" : to_string(p);
}

double stored_value(ScanParameter p, double value) { return p == ScanParameter::kLaserOffset ? -value : value; }

void append_error(std::string& into, const std::string& what) {
  if (!into.empty()) into += "; ";
  into += what;
}

ResultRow evaluate(const ScanConfig& config, const ParamRecord& record, Method method) {
  ResultRow row;
  row.method = method;
  try {
    const auto params = validate_params(record);
    const auto v = solve_method(params, method, config.method_options);
    row.residual = v.residual();
    if (config.observables.n_a || config.observables.g2) row.n_a = population(v);
    if (config.observables.g2) {
      try {
        row.g2 = coherence_g2(v);
      } catch (const Error& e) {
        append_error(row.error, e.what());
      }
    }
    if (config.observables.nn) row.nn = nearest_neighbour_coherence(v);
    if (!config.observables.n_a) row.n_a.reset();
    for (const auto& w : v.warnings()) append_error(row.error, w);
  } catch (const Error& e) {
    append_error(row.error, e.what());
  } catch (const std::exception& e) {
    append_error(row.error, e.what());
  }
  return row;
}

}  // namespace

std::vector<ResultRow> run_scan(const ScanConfig& config) {
  validate_config(config);

  std::vector<double> values{0.0};
  std::string name = "none";
  if (config.scan) {
    values = scan_points(*config.scan);
    name = std::string(stored_name(config.scan->parameter));
  }
  const std::size_t n_methods = config.methods.size();
  std::vector<ResultRow> rows(values.size() * n_methods);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      const std::size_t point = k / n_methods;
      const Method method = config.methods[k % n_methods];
      auto record = config.base;
      double stored = 0.0;
      if (config.scan) {
        record = at_point(config.base, config.scan->parameter, values[point]);
        stored = stored_value(config.scan->parameter, values[point]);
      }
      auto row = evaluate(config, record, method);
      row.param_name = name;
      row.param_value = stored;
      rows[k] = std::move(row);
    }
  };

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + '"';
}

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::string describe(const ScanConfig& c) {
  std::ostringstream s;
  const auto& b = c.base;
  s << "rates in units of gamma0; N=" << b.n_cavities << " n_max=" << b.n_max << " delta=" << format_double(b.delta)
    << " u=" << format_double(b.u) << " j=" << format_double(b.j) << " omega=" << format_double(b.omega)
    << " gamma0=" << format_double(b.gamma0) << " n_thermal=" << format_double(b.n_thermal)
    << " pump_diagonal=" << (b.pump_diagonal == PumpDiagonal::kCorrected ? "corrected" : "appendix-verbatim");
  return s.str();
}

}  // namespace

void write_csv(const std::vector<ResultRow>& rows, const ScanConfig& config, std::ostream& out) {
  out << "# cavisteady; " << describe(config) << '\n';
  out << "param_name,param_value,method,n_a,g2,re_nn,im_nn,residual,error\n";
  for (const auto& r : rows) {
    out << r.param_name << ',' << format_double(r.param_value) << ',' << to_string(r.method) << ','
        << opt(r.n_a) << ',' << opt(r.g2) << ','
        << (r.nn ? format_double(r.nn->real()) : std::string()) << ','
        << (r.nn ? format_double(r.nn->imag()) : std::string()) << ',' << opt(r.residual) << ','
        << csv_field(r.error) << '\n';
  }
}

void write_json(const std::vector<ResultRow>& rows, const ScanConfig& config, std::ostream& out) {
  using nlohmann::json;
  json doc;
  doc["units"] = describe(config);
  json arr = json::array();
  const auto num = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  for (const auto& r : rows) {
    json row;
    row["param_name"] = r.param_name;
    row["param_value"] = r.param_value;
    row["method"] = std::string(to_string(r.method));
    row["n_a"] = num(r.n_a);
    row["g2"] = num(r.g2);
    row["re_nn"] = r.nn ? json(r.nn->real()) : json(nullptr);
    row["im_nn"] = r.nn ? json(r.nn->imag()) : json(nullptr);
    row["residual"] = num(r.residual);
    row["error"] = r.error;
    arr.push_back(std::move(row));
  }
  doc["rows"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

void write_results(const std::vector<ResultRow>& rows, const ScanConfig& config, std::ostream& fallback) {
  const auto emit = [&](std::ostream& os) {
    if (config.format == OutputFormat::kJson) {
      write_json(rows, config, os);
    } else {
      write_csv(rows, config, os);
    }
  };
  if (config.out_path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoFailure, "cannot open " + config.out_path);
  emit(file);
  file.flush();
  if (!file) throw Error(ErrorCode::kIoFailure, "write failed for " + config.out_path);
}

}  // namespace cavisteady
