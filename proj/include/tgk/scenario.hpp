#pragma once

// JSON scenario files: parsing with schema checks, dispatch to the owning
// module, and deterministic CSV/JSON emission.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tgk/errors.hpp"
#include "tgk/ledger.hpp"
#include "tgk/operators.hpp"
#include "tgk/solver_fourier.hpp"
#include "tgk/solver_spectral.hpp"
#include "tgk/specfun.hpp"
#include "tgk/suite.hpp"
#include "tgk/verify.hpp"

namespace tgk {

using Json = nlohmann::ordered_json;

enum class ScenarioKind { specfun_eval, solve_spectral, solve_fourier, verify, demo_illposed };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::specfun_eval: return "specfun-eval";
    case ScenarioKind::solve_spectral: return "solve-spectral";
    case ScenarioKind::solve_fourier: return "solve-fourier";
    case ScenarioKind::verify: return "verify";
    case ScenarioKind::demo_illposed: return "demo-illposed";
  }
  return "verify";
}

inline ScenarioKind parse_scenario_kind(std::string_view s) {
  if (s == "specfun-eval") return ScenarioKind::specfun_eval;
  if (s == "solve-spectral") return ScenarioKind::solve_spectral;
  if (s == "solve-fourier") return ScenarioKind::solve_fourier;
  if (s == "verify") return ScenarioKind::verify;
  if (s == "demo-illposed") return ScenarioKind::demo_illposed;
  throw ConfigError("unknown scenario kind '" + std::string(s) + "'");
}

namespace cfg {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + ": missing field '" + key + "'");
  return *it;
}

inline double number(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

inline int integer(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ConfigError(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

inline int integer_or(const Json& j, const char* key, int fallback, const std::string& where) {
  return j.contains(key) ? integer(j, key, where) : fallback;
}

inline std::string text(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) throw ConfigError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::string text_or(const Json& j, const char* key, std::string fallback, const std::string& where) {
  return j.contains(key) ? text(j, key, where) : fallback;
}

inline std::vector<double> numbers(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// Either an explicit array or {"start", "stop", "count"} (inclusive ends).
inline std::vector<double> grid(const Json& v, const std::string& where) {
  if (v.is_array()) return numbers(v, where);
  const double a = number(v, "start", where);
  const double b = number(v, "stop", where);
  const int n = integer(v, "count", where);
  if (n < 1) throw ConfigError(where + ": count must be positive");
  if (n == 1) return {a};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

inline std::map<std::string, double> params(const Json& j, const std::string& where) {
  std::map<std::string, double> out;
  if (!j.contains("params")) return out;
  const Json& p = j.at("params");
  if (!p.is_object()) throw ConfigError(where + ": params must be an object");
  for (const auto& [k, v] : p.items()) {
    if (!v.is_number()) throw ConfigError(where + ": parameter '" + k + "' must be a number");
    out[k] = v.get<double>();
  }
  return out;
}

inline void only_fields(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError(where + ": unknown field '" + k + "'");
  }
}

}  // namespace cfg

struct OutputNames {
  std::string csv;
  std::string json;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::verify;
  std::string name;
  Json config;  // full document, echoed into the report
  OutputNames outputs;
};

// Typed blocks, built by validation before any computation starts.
struct SpecfunConfig {
  std::string function;  // kilbas_saigo | mittag_leffler | bessel_k | airy_ai
  KSParams ks;
  double alpha = 1.0, beta = 1.0, nu = 0.0;
  std::vector<double> z;
};

struct SpectralConfig {
  ProblemSpec problem;
  int K = 1;
  std::vector<double> x;
  std::vector<DomainPoint> y;
};

struct FourierConfig {
  FourierProblem problem;
  std::vector<double> x;
  MultiplierPath path = MultiplierPath::kilbas_saigo;
};

struct IllPosedConfig {
  double alpha = 0.75, xi = 1.0, threshold = 1e8;
};

namespace detail {

inline SpecfunConfig parse_specfun(const Json& j) {
  const std::string w = "specfun-eval";
  SpecfunConfig c;
  c.function = cfg::text(j, "function", w);
  const Json& p = cfg::field(j, "params", w);
  if (c.function == "kilbas_saigo") {
    c.ks = {cfg::number(p, "alpha", w), cfg::number(p, "m", w), cfg::number(p, "n", w)};
    c.ks.validate();
  } else if (c.function == "mittag_leffler") {
    c.alpha = cfg::number(p, "alpha", w);
    c.beta = cfg::number(p, "beta", w);
    if (!(c.alpha > 0.0) || !(c.beta > 0.0)) throw InvalidParams("mittag_leffler: alpha and beta must be positive");
  } else if (c.function == "bessel_k") {
    c.nu = cfg::number(p, "nu", w);
  } else if (c.function != "airy_ai") {
    throw ConfigError(w + ": unknown function '" + c.function + "'");
  }
  c.z = cfg::grid(cfg::field(j, "z", w), w + ".z");
  if (c.z.empty()) throw ConfigError(w + ": z grid is empty");
  return c;
}

inline CoefficientVector parse_spectral_data(const Json& d, const SpectralOperator& op, int K) {
  const std::string w = "solve-spectral.data";
  const std::string type = cfg::text(d, "type", w);
  if (type == "coefficients") {
    CoefficientVector c;
    c.first_mode = op.first_mode();
    c.values = cfg::numbers(cfg::field(d, "values", w), w + ".values");
    return c;
  }
  if (type == "power_law") {
    // φ_k = amplitude · (k + shift)^{-exponent}, alternating sign when requested.
    const double a = cfg::number(d, "amplitude", w);
    const double e = cfg::number(d, "exponent", w);
    const double shift = cfg::number_or(d, "shift", 0.0, w);
    const bool alternating = d.contains("alternating") && d.at("alternating").is_boolean() && d.at("alternating").get<bool>();
    CoefficientVector c;
    c.first_mode = op.first_mode();
    for (int i = 0; i < K; ++i) {
      const int k = c.first_mode + i;
      if (!(k + shift > 0.0)) throw ConfigError(w + ": k + shift must be positive");
      c.values.push_back(a * std::pow(k + shift, -e) * (alternating && (k % 2 == 0) ? -1.0 : 1.0));
    }
    return c;
  }
  if (type == "samples") {
    const std::vector<double> s = cfg::numbers(cfg::field(d, "values", w), w + ".values");
    return project_sampled_data(s, op, K);
  }
  throw ConfigError(w + ": unknown data type '" + type + "' (coefficients, power_law, samples)");
}

inline SpectralConfig parse_spectral(const Json& j) {
  const std::string w = "solve-spectral";
  SpectralConfig c;
  c.problem.alpha = cfg::number(j, "alpha", w);
  c.problem.beta = cfg::number(j, "beta", w);
  const Json& o = cfg::field(j, "operator", w);
  c.problem.op = make_operator(cfg::text(o, "kind", w + ".operator"), cfg::params(o, w + ".operator"));
  const std::string inf = cfg::text_or(j, "infinity", "bounded", w);
  if (inf == "bounded") {
    c.problem.infinity = InfinityCondition::bounded;
  } else if (inf == "decay_to_zero") {
    c.problem.infinity = InfinityCondition::decay_to_zero;
  } else {
    throw ConfigError(w + ": infinity must be 'bounded' or 'decay_to_zero'");
  }
  c.K = cfg::integer(j, "K", w);
  if (c.K < 1) throw ConfigError(w + ": K must be positive");
  c.problem.data = parse_spectral_data(cfg::field(j, "data", w), c.problem.op, c.K);
  c.problem.validate();
  c.x = cfg::grid(cfg::field(j, "x", w), w + ".x");
  for (double x : c.x) {
    if (!(x >= 0.0)) throw DomainError(w + ": x samples must be nonnegative");
  }
  const Json& yj = cfg::field(j, "y", w);
  const int edge = cfg::integer_or(yj.is_object() ? yj : Json::object(), "edge", 0, w + ".y");
  Json ygrid = yj;
  if (yj.is_object() && !yj.contains("start")) {
    // {"count": n} spans the operator interval including its ends.
    ygrid = Json{{"start", c.problem.op.y_min()}, {"stop", c.problem.op.y_max()},
                 {"count", cfg::integer(yj, "count", w + ".y")}};
  }
  for (double y : cfg::grid(ygrid, w + ".y")) c.y.push_back({edge, y});
  for (const auto& y : c.y) {
    if (!c.problem.op.contains(y)) throw DomainError(w + ": y sample outside the operator domain");
  }
  return c;
}

inline std::vector<Monomial> parse_terms(const Json& j, const std::string& w) {
  std::vector<Monomial> out;
  if (!j.contains("terms")) return out;
  for (const auto& t : j.at("terms")) {
    Monomial m;
    const std::vector<double> pw = cfg::numbers(cfg::field(t, "powers", w), w + ".powers");
    if (pw.empty() || pw.size() > 2) throw ConfigError(w + ": powers must have one or two entries");
    for (std::size_t i = 0; i < pw.size(); ++i) m.powers[i] = static_cast<int>(pw[i]);
    m.coefficient = cfg::number(t, "coefficient", w);
    out.push_back(m);
  }
  return out;
}

inline FourierConfig parse_fourier(const Json& j) {
  const std::string w = "solve-fourier";
  FourierConfig c;
  FourierProblem& p = c.problem;
  p.alpha = cfg::number(j, "alpha", w);
  p.beta = cfg::number(j, "beta", w);
  const Json& s = cfg::field(j, "symbol", w);
  const int N = cfg::integer(s, "dimension", w + ".symbol");
  p.symbol = make_symbol(cfg::text(s, "kind", w + ".symbol"), N, cfg::params(s, w + ".symbol"),
                         parse_terms(s, w + ".symbol"));
  p.half_width = cfg::number(j, "half_width", w);
  p.points = cfg::integer(j, "points", w);
  p.pad_factor = cfg::integer_or(j, "pad_factor", 1, w);
  const Json& d = cfg::field(j, "data", w);
  const std::string type = cfg::text(d, "type", w + ".data");
  if (type == "gaussian") {
    const double a = cfg::number(d, "amplitude", w + ".data");
    const double width = cfg::number(d, "width", w + ".data");
    if (!(width > 0.0)) throw ConfigError(w + ".data: width must be positive");
    p.data = FourierProblem::sample(N, p.half_width, p.points,
                                    [&](double y1, double y2) { return a * std::exp(-(y1 * y1 + y2 * y2) / (width * width)); });
  } else if (type == "samples") {
    p.data = cfg::numbers(cfg::field(d, "values", w + ".data"), w + ".data.values");
  } else {
    throw ConfigError(w + ".data: unknown data type '" + type + "' (gaussian, samples)");
  }
  p.validate();
  c.x = cfg::grid(cfg::field(j, "x", w), w + ".x");
  const std::string path = cfg::text_or(j, "multiplier", "kilbas_saigo", w);
  if (path == "kilbas_saigo") {
    c.path = MultiplierPath::kilbas_saigo;
  } else if (path == "mittag_leffler") {
    c.path = MultiplierPath::mittag_leffler;
  } else {
    throw ConfigError(w + ": multiplier must be 'kilbas_saigo' or 'mittag_leffler'");
  }
  return c;
}

inline IllPosedConfig parse_illposed(const Json& j) {
  const std::string w = "demo-illposed";
  IllPosedConfig c;
  c.alpha = cfg::number(j, "alpha", w);
  c.xi = cfg::number(j, "xi", w);
  c.threshold = cfg::number_or(j, "threshold", 1e8, w);
  if (!(c.alpha > 0.5 && c.alpha < 1.0)) throw DomainError(w + ": alpha must lie in (1/2, 1)");
  if (!(c.xi > 0.0)) throw DomainError(w + ": xi must be positive");
  if (!(c.threshold > 1.0)) throw DomainError(w + ": threshold must exceed 1");
  return c;
}

}  // namespace detail

inline Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
  Scenario s;
  s.kind = parse_scenario_kind(cfg::text(j, "kind", "scenario"));
  s.name = cfg::text_or(j, "name", to_string(s.kind), "scenario");
  s.config = j;
  const std::string stem = s.name;
  s.outputs.csv = stem + ".csv";
  s.outputs.json = stem + ".json";
  if (j.contains("output")) {
    const Json& o = j.at("output");
    s.outputs.csv = cfg::text_or(o, "csv", s.outputs.csv, "scenario.output");
    s.outputs.json = cfg::text_or(o, "json", s.outputs.json, "scenario.output");
  }
  for (const std::string* f : {&s.outputs.csv, &s.outputs.json}) {
    if (f->empty() || f->find('/') != std::string::npos || f->find('\\') != std::string::npos || *f == "." ||
        *f == "..") {
      throw ConfigError("scenario.output: file names must be plain names without directories");
    }
  }
  // Validation of the kind-specific block happens here, before dispatch.
  switch (s.kind) {
    case ScenarioKind::specfun_eval: detail::parse_specfun(j); break;
    case ScenarioKind::solve_spectral: detail::parse_spectral(j); break;
    case ScenarioKind::solve_fourier: detail::parse_fourier(j); break;
    case ScenarioKind::verify: parse_suite(cfg::text_or(j, "suite", "full", "verify")); break;
    case ScenarioKind::demo_illposed: detail::parse_illposed(j); break;
  }
  return s;
}

inline Scenario parse_scenario_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunReport {
  Scenario scenario;
  Json result;  // kind-specific summary
  std::optional<ClaimLedger> ledger;
  std::vector<OutputFile> outputs;
  double wall_time_seconds = 0.0;  // never serialized
};

namespace detail {

inline std::string num(double v) { return format_double(v); }

inline RunReport run_specfun(const Scenario& s) {
  const SpecfunConfig c = parse_specfun(s.config);
  RunReport r;
  std::ostringstream csv;
  csv << "function,z,value,abs_error_estimate,terms_used,extended_precision\n";
  Json rows = Json::array();
  std::optional<KilbasSaigo> ks;
  std::optional<MittagLeffler> ml;
  if (c.function == "kilbas_saigo") ks.emplace(c.ks);
  if (c.function == "mittag_leffler") ml.emplace(c.alpha, c.beta);
  for (double z : c.z) {
    EvalResult e;
    if (ks) {
      e = ks->evaluate(z);
    } else if (ml) {
      e = ml->evaluate(z);
    } else if (c.function == "bessel_k") {
      e.value = bessel_k(c.nu, z);
      e.abs_error_estimate = NAN;
      e.terms_used = 0;
    } else {
      e.value = airy_ai(z);
      e.abs_error_estimate = NAN;
      e.terms_used = 0;
    }
    csv << c.function << ',' << num(z) << ',' << num(e.value) << ',' << num(e.abs_error_estimate) << ','
        << e.terms_used << ',' << (e.extended_precision ? 1 : 0) << '\n';
    rows.push_back(Json{{"z", z}, {"value", json_number(e.value)}});
  }
  r.result = Json{{"function", c.function}, {"points", static_cast<int>(c.z.size())}, {"values", rows}};
  r.outputs.push_back({s.outputs.csv, csv.str()});
  return r;
}

inline RunReport run_spectral(const Scenario& s) {
  const SpectralConfig c = parse_spectral(s.config);
  const SpectralSolution sol = solve_spectral(c.problem, c.K);
  const std::vector<double> u = evaluate_solution_grid(sol, c.x, c.y);
  std::ostringstream csv;
  csv << "x,y,u\n";
  for (std::size_t a = 0; a < c.x.size(); ++a) {
    for (std::size_t b = 0; b < c.y.size(); ++b) {
      csv << num(c.x[a]) << ',' << num(c.y[b].y) << ',' << num(u[a * c.y.size() + b]) << '\n';
    }
  }
  const SolutionNorms n = solution_norms(sol, c.x);
  RunReport r;
  r.result = Json{{"operator", std::string(to_string(c.problem.op.kind()))},
                  {"K", c.K},
                  {"tail_bound", json_number(sol.tail_bound())},
                  {"norms",
                   {{"sup_L2", json_number(n.sup_L2)},
                    {"sup_weighted_D2alpha", json_number(n.sup_weighted_D2alpha)},
                    {"sup_Lu", json_number(n.sup_Lu)},
                    {"data_L2", json_number(n.data_L2)},
                    {"data_HL", json_number(n.data_HL)}}}};
  r.outputs.push_back({s.outputs.csv, csv.str()});
  return r;
}

inline RunReport run_fourier(const Scenario& s) {
  const FourierConfig c = parse_fourier(s.config);
  const FourierSolution sol = solve_fourier(c.problem, c.x, c.path);
  const FourierProblem& p = c.problem;
  const int M = p.points;
  std::ostringstream csv;
  csv << (p.dimension() == 1 ? "x,y,u\n" : "x,y1,y2,u\n");
  Json slices = Json::array();
  for (const auto& sl : sol.slices) {
    if (p.dimension() == 1) {
      for (int j = 0; j < M; ++j) csv << num(sl.x) << ',' << num(p.coordinate(j)) << ',' << num(sl.field[j]) << '\n';
    } else {
      for (int a = 0; a < M; ++a) {
        for (int b = 0; b < M; ++b) {
          csv << num(sl.x) << ',' << num(p.coordinate(a)) << ',' << num(p.coordinate(b)) << ','
              << num(sl.field[static_cast<std::size_t>(a) * M + b]) << '\n';
        }
      }
    }
    slices.push_back(Json{{"x", sl.x}, {"l2_norm", json_number(sl.l2_norm)}, {"weighted_norm", json_number(sl.weighted_norm)}});
  }
  RunReport r;
  r.result = Json{{"dimension", p.dimension()},
                  {"data_L2", json_number(sol.data_l2)},
                  {"data_HL", json_number(sol.data_hl)},
                  {"skipped_frequencies", sol.skipped_frequencies},
                  {"slices", slices}};
  r.outputs.push_back({s.outputs.csv, csv.str()});
  return r;
}

inline Json illposed_json(const IllPosedConfig& c, const IllPosedResult& d) {
  return Json{{"alpha", c.alpha},
              {"xi", c.xi},
              {"threshold", c.threshold},
              {"x_star", json_number(d.x_star)},
              {"finite", std::isfinite(d.x_star)},
              {"monotone", d.monotone},
              {"x_first_branch", json_number(d.x_first)},
              {"x_second_branch", json_number(d.x_second)},
              {"samples", d.samples}};
}

}  // namespace detail

inline RunReport run_scenario(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport r;
  switch (s.kind) {
    case ScenarioKind::specfun_eval: r = detail::run_specfun(s); break;
    case ScenarioKind::solve_spectral: r = detail::run_spectral(s); break;
    case ScenarioKind::solve_fourier: r = detail::run_fourier(s); break;
    case ScenarioKind::verify: {
      const SuiteKind k = parse_suite(cfg::text_or(s.config, "suite", "full", "verify"));
      r.ledger = run_verify_suite(k);
      r.result = Json{{"suite", to_string(k)},
                      {"entries", static_cast<int>(r.ledger->entries().size())},
                      {"all_passed", r.ledger->all_passed()}};
      r.outputs.push_back({s.outputs.csv, r.ledger->to_csv()});
      break;
    }
    case ScenarioKind::demo_illposed: {
      const IllPosedConfig c = detail::parse_illposed(s.config);
      r.result = detail::illposed_json(c, illposed_demo(c.alpha, c.xi, c.threshold));
      break;
    }
  }
  r.scenario = s;
  r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct ManifestEntry {
  std::string name;
  std::string sha256;
  std::size_t bytes = 0;
};

using ContentHasher = std::function<std::string(std::string_view)>;

// Report document: scenario echo, result summary, ledger, and the manifest
// of the data files. Wall time is excluded so reruns are byte-identical.
inline Json report_json(const RunReport& r, const std::vector<ManifestEntry>& manifest) {
  Json j;
  j["scenario"] = r.scenario.config;
  j["result"] = r.result;
  if (r.ledger) j["ledger"] = r.ledger->to_json();
  Json m = Json::array();
  for (const auto& e : manifest) m.push_back(Json{{"file", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  j["manifest"] = m;
  return j;
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// Writes the data files and the JSON report into `dir`; returns the manifest
// including the report itself as the last entry.
inline std::vector<ManifestEntry> emit_report(const RunReport& r, const std::filesystem::path& dir,
                                              const ContentHasher& hash) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<ManifestEntry> manifest;
  for (const auto& f : r.outputs) {
    write_file(dir / f.name, f.content);
    manifest.push_back({f.name, hash(f.content), f.content.size()});
  }
  const std::string report = report_json(r, manifest).dump(2) + "\n";
  write_file(dir / r.scenario.outputs.json, report);
  manifest.push_back({r.scenario.outputs.json, hash(report), report.size()});
  return manifest;
}

}  // namespace tgk
