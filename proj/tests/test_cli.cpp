#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <string>

#include "tgk/scenario.hpp"

using namespace tgk;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = TGK_SCENARIO_DIR;

struct CliRun {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(TGK_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) r.output += buf.data();
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("tgk_test_cli_" + name);
  fs::remove_all(d);
  return d;
}

std::string fake_hash(std::string_view s) { return std::to_string(std::hash<std::string_view>{}(s)); }

template <class E>
void expect_rejects(const std::string& text) {
  EXPECT_THROW(parse_scenario_text(text), E) << text;
}

const std::regex kDiagnostic(R"(tgk: error category=(\w+) kind=(\w+) exit=(\d) message=".*")");

}  // namespace

TEST(ScenarioParsing, RejectsMalformedDocuments) {
  expect_rejects<ConfigError>("[1, 2]");
  expect_rejects<ConfigError>("{\"kind\": ");
  expect_rejects<ConfigError>(R"({"name": "x"})");
  expect_rejects<ConfigError>(R"({"kind": "simulate"})");
  expect_rejects<ConfigError>(R"({"kind": "verify", "suite": "most"})");
  expect_rejects<ConfigError>(R"({"kind": "verify", "output": {"csv": "../escape.csv"}})");
  expect_rejects<ConfigError>(R"({"kind": "verify", "output": {"json": "a/b.json"}})");
  expect_rejects<ConfigError>(R"({"kind": "specfun-eval", "function": "zeta", "params": {}, "z": [1]})");
  expect_rejects<ConfigError>(R"({"kind": "specfun-eval", "function": "airy_ai", "params": {}, "z": []})");
  expect_rejects<ConfigError>(R"({"kind": "specfun-eval", "function": "airy_ai", "params": {}, "z": "many"})");
  expect_rejects<ConfigError>(R"({"kind": "solve-spectral", "beta": 0})");
}

TEST(ScenarioParsing, RejectsOutOfDomainParameters) {
  expect_rejects<InvalidParams>(
      R"({"kind": "specfun-eval", "function": "kilbas_saigo", "params": {"alpha": 0.5, "m": 1, "n": -2}, "z": [1]})");
  const std::string spectral = R"({"kind": "solve-spectral", "alpha": ALPHA, "beta": 0,
    "operator": {"kind": "dirichlet_interval"}, "K": 4,
    "data": {"type": "coefficients", "values": [1, 0, 0, 0]}, "x": [0, 1], "y": YS})";
  auto with = [&](std::string a, std::string ys) {
    std::string s = spectral;
    s.replace(s.find("ALPHA"), 5, a);
    s.replace(s.find("YS"), 2, ys);
    return s;
  };
  EXPECT_NO_THROW(parse_scenario_text(with("0.75", R"({"count": 5})")));
  expect_rejects<DomainError>(with("0.4", R"({"count": 5})"));
  expect_rejects<DomainError>(with("0.75", "[0.5, 1.5]"));
  expect_rejects<InvalidParams>(R"({"kind": "solve-spectral", "alpha": 0.75, "beta": 0,
    "operator": {"kind": "star_graph", "params": {"edges": 1}}, "K": 1,
    "data": {"type": "coefficients", "values": [1]}, "x": [0], "y": [0]})");
  expect_rejects<DomainError>(R"({"kind": "solve-fourier", "alpha": 1, "beta": 0,
    "symbol": {"kind": "laplacian", "dimension": 1}, "half_width": 10, "points": 100,
    "data": {"type": "gaussian", "amplitude": 1, "width": 1}, "x": [1]})");
  expect_rejects<DomainError>(R"({"kind": "demo-illposed", "alpha": 1.0, "xi": 1})");
}

TEST(ScenarioRun, CanonicalScenariosAreDeterministic) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    const Scenario s = load_scenario(entry.path());
    const RunReport a = run_scenario(s);
    const RunReport b = run_scenario(s);
    ASSERT_EQ(a.outputs.size(), b.outputs.size()) << entry.path();
    for (std::size_t i = 0; i < a.outputs.size(); ++i) {
      EXPECT_EQ(a.outputs[i].name, b.outputs[i].name);
      EXPECT_EQ(a.outputs[i].content, b.outputs[i].content) << entry.path();
    }
    EXPECT_EQ(report_json(a, {}).dump(), report_json(b, {}).dump()) << entry.path();
    EXPECT_FALSE(report_json(a, {}).contains("wall_time_seconds"));
  }
  EXPECT_GE(count, 8);
}

TEST(ScenarioRun, SpectralCsvLayout) {
  const RunReport r = run_scenario(load_scenario(kScenarios / "half_strip.json"));
  ASSERT_EQ(r.outputs.size(), 1u);
  const std::string& csv = r.outputs[0].content;
  EXPECT_EQ(csv.rfind("x,y,u\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 64 * 64 + 1);
  EXPECT_EQ(r.result["K"], 32);
}

TEST(ScenarioRun, IllPosedResultHasFiniteCrossing) {
  const RunReport r = run_scenario(load_scenario(kScenarios / "illposed.json"));
  EXPECT_TRUE(r.outputs.empty());
  EXPECT_TRUE(r.result["finite"].get<bool>());
  EXPECT_TRUE(r.result["monotone"].get<bool>());
}

TEST(ScenarioRun, EmitReportWritesManifest) {
  const fs::path dir = scratch("emit");
  const RunReport r = run_scenario(load_scenario(kScenarios / "ks_eval.json"));
  const auto manifest = emit_report(r, dir, fake_hash);
  ASSERT_EQ(manifest.size(), 2u);
  EXPECT_EQ(manifest[0].name, "ks_eval.csv");
  EXPECT_EQ(slurp(dir / "ks_eval.csv"), r.outputs[0].content);
  EXPECT_EQ(manifest[0].sha256, fake_hash(r.outputs[0].content));
  const auto report = nlohmann::json::parse(slurp(dir / "ks_eval.json"));
  EXPECT_EQ(report["manifest"][0]["file"], "ks_eval.csv");
  EXPECT_EQ(report["scenario"]["name"], "ks_eval");
  // A regular file in place of the output directory.
  std::ofstream(dir / "blocker") << "x";
  EXPECT_THROW(emit_report(r, dir / "blocker" / "sub", fake_hash), IoError);
  fs::remove_all(dir);
}

TEST(Cli, RunWritesFilesAndPrintsHashes) {
  const fs::path dir = scratch("run");
  const CliRun r = run_cli("run --config " + (kScenarios / "ml_eval.json").string() + " --out " + dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(std::regex_search(r.output, std::regex("[0-9a-f]{64}  .*ml_eval\\.csv")));
  EXPECT_TRUE(std::regex_search(r.output, std::regex("[0-9a-f]{64}  .*ml_eval\\.json")));
  const RunReport lib = run_scenario(load_scenario(kScenarios / "ml_eval.json"));
  EXPECT_EQ(slurp(dir / "ml_eval.csv"), lib.outputs[0].content);

  const std::string first = slurp(dir / "ml_eval.json");
  EXPECT_EQ(run_cli("specfun eval --config " + (kScenarios / "ml_eval.json").string() + " --out " + dir.string()).exit_code, 0);
  EXPECT_EQ(slurp(dir / "ml_eval.json"), first);
  fs::remove_all(dir);
}

TEST(Cli, DemoAndVerifySubcommands) {
  const fs::path dir = scratch("demo");
  const CliRun d = run_cli("demo illposed --alpha 0.75 --xi 2 --out " + dir.string());
  EXPECT_EQ(d.exit_code, 0) << d.output;
  EXPECT_NE(d.output.find("\"x_star\""), std::string::npos);
  const CliRun v = run_cli("verify --suite bounds --out " + dir.string());
  EXPECT_EQ(v.exit_code, 0) << v.output;
  EXPECT_NE(v.output.find("failed=0"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "verify_bounds.csv"));
  fs::remove_all(dir);
}

TEST(Cli, ExitCodesAndDiagnostics) {
  const fs::path dir = scratch("errors");
  fs::create_directories(dir);
  auto expect_exit = [&](const std::string& args, int code, const std::string& category) {
    const CliRun r = run_cli(args);
    EXPECT_EQ(r.exit_code, code) << args << "\n" << r.output;
    std::smatch m;
    ASSERT_TRUE(std::regex_search(r.output, m, kDiagnostic)) << r.output;
    EXPECT_EQ(m[1].str(), category);
    EXPECT_EQ(std::stoi(m[3].str()), code);
  };
  expect_exit("simulate", 1, "config");
  expect_exit("verify --suite most --out " + dir.string(), 1, "config");
  expect_exit("run --config " + (dir / "missing.json").string(), 5, "io");

  std::ofstream(dir / "broken.json") << "{ not json";
  expect_exit("run --config " + (dir / "broken.json").string(), 1, "config");
  // `run` has no subcommand to supply a missing kind.
  std::ofstream(dir / "bad_alpha.json") << R"({"alpha": 0.2, "xi": 1})";
  expect_exit("run --config " + (dir / "bad_alpha.json").string(), 1, "config");
  std::ofstream(dir / "spectral_as_fourier.json") << slurp(kScenarios / "half_strip.json");
  expect_exit("solve fourier --config " + (dir / "spectral_as_fourier.json").string(), 1, "config");
  expect_exit("demo illposed --alpha 0.4 --xi 1 --out " + dir.string(), 2, "domain");
  // A blocked output directory.
  std::ofstream(dir / "file") << "x";
  expect_exit("demo illposed --alpha 0.75 --xi 1 --out " + (dir / "file" / "sub").string(), 5, "io");
  fs::remove_all(dir);
}
