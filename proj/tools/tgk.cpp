// tgk command-line front end. Every failure prints one diagnostic line
//   tgk: error category=<c> kind=<k> exit=<n> message="<text>"
// on stderr and exits with the category code.

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "tgk/tgk.hpp"

namespace {

constexpr int kClaimsFailed = 6;

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw tgk::IoError("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

const char* category_name(tgk::ErrorCategory c) {
  switch (c) {
    case tgk::ErrorCategory::config: return "config";
    case tgk::ErrorCategory::domain: return "domain";
    case tgk::ErrorCategory::numeric: return "numeric";
    case tgk::ErrorCategory::ill_posed: return "ill_posed";
    case tgk::ErrorCategory::io: return "io";
  }
  return "numeric";
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

int report_error(const tgk::Error& e) {
  std::cerr << "tgk: error category=" << category_name(e.category()) << " kind=" << e.kind()
            << " exit=" << e.exit_code() << " message=" << quoted(e.what()) << '\n';
  return e.exit_code();
}

tgk::Json read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tgk::IoError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return tgk::Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw tgk::ConfigError(std::string("scenario: invalid JSON: ") + e.what());
  }
}

// A missing "kind" is filled from the subcommand; a different one is rejected.
tgk::Scenario scenario_for(tgk::Json j, std::optional<tgk::ScenarioKind> expected) {
  if (expected) {
    if (!j.is_object()) throw tgk::ConfigError("scenario: expected a JSON object");
    if (!j.contains("kind")) {
      j["kind"] = tgk::to_string(*expected);
    } else if (!j["kind"].is_string() || j["kind"].get<std::string>() != tgk::to_string(*expected)) {
      throw tgk::ConfigError(std::string("scenario kind does not match the subcommand (expected ") +
                             tgk::to_string(*expected) + ")");
    }
  }
  return tgk::parse_scenario(j);
}

int execute(const tgk::Scenario& s, const std::string& out_dir) {
  const tgk::RunReport r = tgk::run_scenario(s);
  const auto manifest = tgk::emit_report(r, out_dir, sha256_hex);
  for (const auto& m : manifest) std::cout << m.sha256 << "  " << (std::filesystem::path(out_dir) / m.name).string() << '\n';
  std::fprintf(stderr, "wall_time_seconds=%.3f\n", r.wall_time_seconds);
  if (s.kind == tgk::ScenarioKind::demo_illposed) std::cout << r.result.dump() << '\n';
  if (r.ledger) {
    int failed = 0;
    for (const auto& e : r.ledger->entries()) failed += e.status == tgk::ClaimStatus::fail;
    std::cout << "ledger entries=" << r.ledger->entries().size() << " failed=" << failed << '\n';
    if (failed > 0) return kClaimsFailed;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kilbas-Saigo special functions, fractional elliptic solvers and claim audits"};
  app.require_subcommand(1);
  std::string config, out_dir = "out", suite = "full";
  double alpha = 0.75, xi = 1.0, threshold = 1e8;

  auto* specfun = app.add_subcommand("specfun", "special functions");
  specfun->require_subcommand(1);
  auto* eval = specfun->add_subcommand("eval", "evaluate a special function on a grid");
  eval->add_option("--config", config, "scenario file")->required();
  eval->add_option("--out", out_dir, "output directory");

  auto* solve = app.add_subcommand("solve", "boundary value solvers");
  solve->require_subcommand(1);
  auto* spectral = solve->add_subcommand("spectral", "eigenfunction-expansion solver");
  spectral->add_option("--config", config, "scenario file")->required();
  spectral->add_option("--out", out_dir, "output directory");
  auto* fourier = solve->add_subcommand("fourier", "Fourier-multiplier solver");
  fourier->add_option("--config", config, "scenario file")->required();
  fourier->add_option("--out", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--suite", suite, "full | bounds | residuals");
  verify->add_option("--out", out_dir, "output directory")->required();

  auto* demo = app.add_subcommand("demo", "demonstrations");
  demo->require_subcommand(1);
  auto* illposed = demo->add_subcommand("illposed", "growth of the non-sequential problem");
  illposed->add_option("--alpha", alpha, "order in (1/2, 1)")->required();
  illposed->add_option("--xi", xi, "frequency magnitude")->required();
  illposed->add_option("--threshold", threshold, "growth threshold");
  illposed->add_option("--out", out_dir, "output directory");

  auto* run = app.add_subcommand("run", "run any scenario file");
  run->add_option("--config", config, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(tgk::ConfigError(e.what()));
  }

  try {
    if (eval->parsed()) return execute(scenario_for(read_config(config), tgk::ScenarioKind::specfun_eval), out_dir);
    if (spectral->parsed()) {
      return execute(scenario_for(read_config(config), tgk::ScenarioKind::solve_spectral), out_dir);
    }
    if (fourier->parsed()) return execute(scenario_for(read_config(config), tgk::ScenarioKind::solve_fourier), out_dir);
    if (run->parsed()) return execute(scenario_for(read_config(config), std::nullopt), out_dir);
    if (verify->parsed()) {
      return execute(tgk::parse_scenario(tgk::Json{{"kind", "verify"}, {"name", "verify_" + suite}, {"suite", suite}}),
                     out_dir);
    }
    if (illposed->parsed()) {
      return execute(tgk::parse_scenario(tgk::Json{{"kind", "demo-illposed"},
                                                   {"name", "illposed"},
                                                   {"alpha", alpha},
                                                   {"xi", xi},
                                                   {"threshold", threshold}}),
                     out_dir);
    }
  } catch (const tgk::Error& e) {
    return report_error(e);
  } catch (const nlohmann::json::exception& e) {
    return report_error(tgk::ConfigError(e.what()));
  } catch (const std::exception& e) {
    return report_error(tgk::PrecisionError(std::string("unexpected failure: ") + e.what()));
  }
  return 0;
}
