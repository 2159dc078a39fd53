#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "egt/errors.hpp"
#include "egt/game.hpp"
#include "egt/integrator.hpp"
#include "egt/maxent.hpp"

namespace egt {

// Canonical execution and output order.
enum class Analysis { vector, lax, quantum_self_consistent, entropy_series, equilibria };

const char* to_string(Analysis analysis);
Analysis analysis_from_string(const std::string& name);

enum class OutputFormat { csv, json };

const char* to_string(OutputFormat format);

// Per-flow invariant gates; a simulate run exits zero only when every
// recorded drift stays within these.
struct DriftTolerances {
  double simplex_drift = 1e-6;
  double trace_drift = 1e-8;
  double idempotency_drift = 1e-6;
  double hermiticity_drift = 1e-12;
  double min_eigenvalue = -1e-10;
  double purity_excess = 1e-10;
};

struct Scenario {
  PayoffMatrix game;
  MixedStrategy initial;
  IntegratorConfig integrator;
  std::vector<Analysis> analyses;  // deduplicated, canonical order
  std::string output_directory;
  OutputFormat output_format = OutputFormat::csv;
  double hbar = 1.0;
  DriftTolerances tolerances;
};

/// Parses and validates a scenario document. Violations throw SchemaError
/// carrying the offending field path.
Scenario parse_scenario(const nlohmann::json& document);

/// Normalized echo of a scenario; re-parsing it yields an equivalent value.
nlohmann::ordered_json dump_scenario(const Scenario& scenario);

struct AnalysisResult {
  std::string name;
  std::vector<std::string> files;
  nlohmann::ordered_json drift_summary;
  bool within_tolerance = true;
};

struct RunManifest {
  std::string scenario_fingerprint;
  std::string version;
  std::string format;
  std::vector<AnalysisResult> analyses;
  bool all_within_tolerance = true;
  std::string manifest_path;
};

// NumericalAbort annotated with the analysis that raised it.
class AnalysisAbort : public NumericalAbort {
 public:
  AnalysisAbort(std::string analysis, const NumericalAbort& cause)
      : NumericalAbort(std::string(cause.what()) + " (analysis '" + analysis + "')",
                       cause.time()),
        analysis_(std::move(analysis)) {}

  const std::string& analysis() const noexcept { return analysis_; }

 private:
  std::string analysis_;
};

/// Runs every requested analysis, writes one series file per analysis plus
/// manifest.json into output_dir, and returns the manifest. Output is
/// deterministic: identical scenarios produce byte-identical files.
RunManifest run_scenario(const Scenario& scenario, const std::string& output_dir,
                         const std::string& scenario_fingerprint);

// Input-file loaders shared by the CLI commands. Each accepts either a bare
// JSON value or an object wrapper ({"matrix": ...}, {"levels": ...}).
PayoffMatrix load_game_file(const std::string& path);
EnergySpectrum load_spectrum_file(const std::string& path);
Scenario load_scenario_file(const std::string& path, std::string* fingerprint_out = nullptr);

/// Parses a comma-separated strategy such as "0.5,0.5".
MixedStrategy parse_strategy_string(const std::string& text);

/// %.17g rendering used for all CSV and text output.
std::string format_double(double value);

}  // namespace egt
