#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "egt/scenario.hpp"

using egt::Analysis;
using egt::Scenario;
using egt::SchemaError;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

json scenario_doc() {
  return json{
      {"game", {{"matrix", {{-1.0, 2.0}, {0.0, 1.0}}}}},
      {"initial", {0.9, 0.1}},
      {"integrator",
       {{"method", "rk4"}, {"dt", 0.001}, {"t_end", 2.0}, {"renormalize", true}}},
      {"analyses", {"vector", "lax", "quantum-self-consistent", "entropy-series", "equilibria"}},
      {"output", {{"directory", "out"}, {"format", "csv"}}},
  };
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string schema_field(const json& doc) {
  try {
    egt::parse_scenario(doc);
  } catch (const SchemaError& e) {
    return e.field();
  }
  return "";
}

// Runs the installed CLI binary; returns its exit code.
int run_cli(const std::string& args, std::string* stdout_text = nullptr) {
  const char* binary = std::getenv("EGTLAB_BIN");
  REQUIRE(binary != nullptr);
  const fs::path capture = fs::temp_directory_path() / "egtlab_cli_capture.txt";
  const std::string command = std::string(binary) + " " + args + " > " + capture.string() + " 2>&1";
  const int status = std::system(command.c_str());
  if (stdout_text != nullptr) *stdout_text = read_file(capture);
  fs::remove(capture);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("scenario parses and normalizes") {
  const Scenario scenario = egt::parse_scenario(scenario_doc());
  CHECK(scenario.game.size() == 2);
  CHECK(scenario.initial[0] == 0.9);
  CHECK(scenario.integrator.dt == 0.001);
  CHECK(scenario.analyses.size() == 5);
  CHECK(scenario.output_format == egt::OutputFormat::csv);
  CHECK(scenario.hbar == 1.0);
}

TEST_CASE("scenario accepts a bare matrix and deduplicates analyses") {
  json doc = scenario_doc();
  doc["game"] = json::array({{-1.0, 2.0}, {0.0, 1.0}});
  doc["analyses"] = {"vector", "vector", "lax"};
  const Scenario scenario = egt::parse_scenario(doc);
  CHECK(scenario.game(0, 1) == 2.0);
  CHECK(scenario.analyses.size() == 2);
}

TEST_CASE("schema violations carry the offending field path") {
  json doc = scenario_doc();
  doc["initial"] = {0.8, 0.1};  // sums to 0.9
  CHECK(schema_field(doc) == "initial");

  doc = scenario_doc();
  doc.erase("game");
  CHECK(schema_field(doc) == "game");

  doc = scenario_doc();
  doc["integrator"]["dt"] = -1.0;
  CHECK(schema_field(doc) == "integrator.dt");

  doc = scenario_doc();
  doc["integrator"]["method"] = "rk5";
  CHECK(schema_field(doc) == "integrator.method");

  doc = scenario_doc();
  doc["analyses"].push_back("spectral");
  CHECK(schema_field(doc) == "analyses");

  doc = scenario_doc();
  doc["output"]["format"] = "xml";
  CHECK(schema_field(doc) == "output.format");

  doc = scenario_doc();
  doc["initial"] = {0.2, 0.3, 0.5};
  CHECK(schema_field(doc) == "initial");

  doc = scenario_doc();
  doc["frobnicate"] = 1;
  CHECK(schema_field(doc) == "frobnicate");

  doc = scenario_doc();
  doc["tolerances"] = {{"trace_drift", "tight"}};
  CHECK(schema_field(doc) == "tolerances.trace_drift");
}

TEST_CASE("equilibria analysis is rejected for large games") {
  json doc = scenario_doc();
  doc["game"] = {{"matrix", json::array()}};
  auto& matrix = doc["game"]["matrix"];
  for (int i = 0; i < 5; ++i) {
    json row = json::array();
    for (int j = 0; j < 5; ++j) row.push_back(0.0);
    matrix.push_back(row);
  }
  doc["initial"] = {0.2, 0.2, 0.2, 0.2, 0.2};
  CHECK(schema_field(doc) == "analyses");
}

TEST_CASE("dump and re-parse round-trips to an equivalent scenario") {
  const Scenario scenario = egt::parse_scenario(scenario_doc());
  const auto echoed = egt::dump_scenario(scenario);
  const Scenario reparsed = egt::parse_scenario(json::parse(echoed.dump()));
  CHECK(egt::dump_scenario(reparsed).dump() == echoed.dump());
}

TEST_CASE("run_scenario writes every requested series plus the manifest") {
  TempDir dir("egt_scenario_zero");
  json doc = scenario_doc();
  doc["game"] = {{"matrix", {{0.0, 0.0}, {0.0, 0.0}}}};
  doc["integrator"]["dt"] = 0.01;
  doc["integrator"]["t_end"] = 1.0;
  const Scenario scenario = egt::parse_scenario(doc);

  const egt::RunManifest manifest =
      egt::run_scenario(scenario, dir.path.string(), "fnv1a64:0");
  CHECK(manifest.analyses.size() == 5);
  CHECK(manifest.all_within_tolerance);
  for (const auto& analysis : manifest.analyses) {
    for (const auto& file : analysis.files) {
      CHECK(fs::exists(dir.path / file));
    }
  }
  CHECK(fs::exists(dir.path / "manifest.json"));

  // zero game: the vector series is constant
  const std::string vector_csv = read_file(dir.path / "vector.csv");
  std::istringstream lines(vector_csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,x_1,x_2");
  std::string first_row;
  std::getline(lines, first_row);
  CHECK(first_row.substr(first_row.find(',')) == ",0.90000000000000002,0.10000000000000001");
}

TEST_CASE("hawk-dove manifests record small cross-form discrepancies") {
  TempDir dir("egt_scenario_hd");
  json doc = scenario_doc();
  doc["analyses"] = {"vector", "lax"};
  const Scenario scenario = egt::parse_scenario(doc);
  const egt::RunManifest manifest =
      egt::run_scenario(scenario, dir.path.string(), "fnv1a64:1");

  REQUIRE(manifest.analyses.size() == 2);
  CHECK(manifest.all_within_tolerance);
  const auto& lax = manifest.analyses[1];
  CHECK(lax.name == "lax");
  CHECK(lax.drift_summary["max_diag_vs_vector"].get<double>() <= 1e-5);
  CHECK(lax.drift_summary["max_trace_drift"].get<double>() <= 1e-8);
}

TEST_CASE("run_scenario output is byte-identical across runs") {
  TempDir dir_a("egt_scenario_det_a");
  TempDir dir_b("egt_scenario_det_b");
  json doc = scenario_doc();
  doc["integrator"]["t_end"] = 1.0;
  const Scenario scenario = egt::parse_scenario(doc);

  egt::run_scenario(scenario, dir_a.path.string(), "fnv1a64:2");
  egt::run_scenario(scenario, dir_b.path.string(), "fnv1a64:2");

  for (const auto& entry : fs::directory_iterator(dir_a.path)) {
    const fs::path twin = dir_b.path / entry.path().filename();
    REQUIRE(fs::exists(twin));
    CHECK(read_file(entry.path()) == read_file(twin));
  }
}

TEST_CASE("json output format carries the same tables") {
  TempDir dir("egt_scenario_json");
  json doc = scenario_doc();
  doc["output"]["format"] = "json";
  doc["integrator"]["t_end"] = 0.5;
  const Scenario scenario = egt::parse_scenario(doc);
  const egt::RunManifest manifest =
      egt::run_scenario(scenario, dir.path.string(), "fnv1a64:3");
  CHECK(manifest.all_within_tolerance);
  const json vector_doc = json::parse(read_file(dir.path / "vector.json"));
  CHECK(vector_doc["columns"].size() == 3);
  CHECK(vector_doc["rows"].size() == 501);
}

TEST_CASE("strategy strings parse with validation") {
  const egt::MixedStrategy s = egt::parse_strategy_string("0.25, 0.75");
  CHECK(s[0] == 0.25);
  CHECK_THROWS_AS(egt::parse_strategy_string("0.5,half"), SchemaError);
  CHECK_THROWS_AS(egt::parse_strategy_string("0.5,0.4"), SchemaError);
}

TEST_CASE("cli: simulate is deterministic and reports the manifest") {
  TempDir dir("egt_cli_sim");
  json doc = scenario_doc();
  doc["integrator"]["t_end"] = 1.0;
  doc["output"]["directory"] = (dir.path / "run_a").string();
  const fs::path scenario_path = dir.path / "scenario.json";
  std::ofstream(scenario_path) << doc.dump(2);

  std::string out;
  CHECK(run_cli("simulate " + scenario_path.string(), &out) == 0);
  CHECK(out.find("manifest:") != std::string::npos);

  // second run into another directory via the environment override
  const fs::path run_b = dir.path / "run_b";
  const char* binary = std::getenv("EGTLAB_BIN");
  REQUIRE(binary != nullptr);
  const std::string command = "EGTLAB_OUTPUT_DIR=" + run_b.string() + " " +
                              std::string(binary) + " simulate " + scenario_path.string() +
                              " > /dev/null 2>&1";
  REQUIRE(std::system(command.c_str()) == 0);

  for (const auto& entry : fs::directory_iterator(dir.path / "run_a")) {
    const fs::path twin = run_b / entry.path().filename();
    REQUIRE(fs::exists(twin));
    CHECK(read_file(entry.path()) == read_file(twin));
  }
}

TEST_CASE("cli: schema violations exit 2 and name the field") {
  TempDir dir("egt_cli_schema");
  json doc = scenario_doc();
  doc["initial"] = {0.8, 0.1};
  const fs::path scenario_path = dir.path / "bad.json";
  std::ofstream(scenario_path) << doc.dump(2);

  std::string out;
  CHECK(run_cli("simulate " + scenario_path.string(), &out) == 2);
  CHECK(out.find("initial") != std::string::npos);
}

TEST_CASE("cli: dump-config round-trips") {
  TempDir dir("egt_cli_dump");
  const fs::path scenario_path = dir.path / "scenario.json";
  std::ofstream(scenario_path) << scenario_doc().dump(2);

  std::string out;
  CHECK(run_cli("simulate " + scenario_path.string() + " --dump-config", &out) == 0);
  const Scenario reparsed = egt::parse_scenario(json::parse(out));
  CHECK(egt::dump_scenario(reparsed).dump() ==
        egt::dump_scenario(egt::parse_scenario(scenario_doc())).dump());
}

TEST_CASE("cli: certify exit codes and verdicts") {
  TempDir dir("egt_cli_certify");
  const fs::path game_path = dir.path / "pd.json";
  std::ofstream(game_path) << R"({"matrix": [[3, 0], [5, 1]]})";

  std::string out;
  CHECK(run_cli("certify " + game_path.string() + " 0,1", &out) == 0);
  CHECK(out.find("verdict: ess") != std::string::npos);

  CHECK(run_cli("certify " + game_path.string() + " 1,0", &out) == 1);
  CHECK(out.find("verdict: none") != std::string::npos);
  CHECK(out.find("worst_deviation: 2") != std::string::npos);

  const fs::path rps_path = dir.path / "rps.json";
  std::ofstream(rps_path) << R"([[0, -1, 1], [1, 0, -1], [-1, 1, 0]])";
  // the rounded barycenter carries a 1e-7 deviation, beyond the 1e-9 default
  CHECK(run_cli("certify " + rps_path.string() + " 0.3333333,0.3333333,0.3333334 --tol 1e-6",
                &out) == 0);
  CHECK(out.find("verdict: nash") != std::string::npos);
  CHECK(run_cli("certify " + rps_path.string() + " 0.3333333,0.3333333,0.3333334", &out) == 1);
}

TEST_CASE("cli: maxent thermodynamics and exit codes") {
  TempDir dir("egt_cli_maxent");
  const fs::path spectrum_path = dir.path / "levels.json";
  std::ofstream(spectrum_path) << json::array({0.0, std::log(3.0)}).dump();

  std::string out;
  CHECK(run_cli("maxent " + spectrum_path.string() + " --beta 1", &out) == 0);
  CHECK(out.find("gibbs: 0.75 0.25") != std::string::npos);

  CHECK(run_cli("maxent " + spectrum_path.string() + " --beta 0", &out) == 0);
  CHECK(out.find("entropy: " + egt::format_double(std::log(2.0))) != std::string::npos);

  CHECK(run_cli("maxent " + spectrum_path.string() + " --target-energy -1", &out) == 4);
  CHECK(out.find("minimum") != std::string::npos);

  CHECK(run_cli("maxent " + spectrum_path.string() + " --beta 1 --verify", &out) == 0);
  CHECK(out.find("identities_all_pass: true") != std::string::npos);

  CHECK(run_cli("maxent " + spectrum_path.string(), &out) == 2);  // neither flag
}

TEST_CASE("cli: version flag") {
  std::string out;
  CHECK(run_cli("--version", &out) == 0);
  CHECK(out.find("egtlab") != std::string::npos);
}
