#include "egt/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "egt/fingerprint.hpp"
#include "egt/info.hpp"
#include "egt/lax.hpp"
#include "egt/quantum.hpp"
#include "egt/replicator.hpp"
#include "egt/version.hpp"

namespace egt {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(Analysis analysis) {
  switch (analysis) {
    case Analysis::vector: return "vector";
    case Analysis::lax: return "lax";
    case Analysis::quantum_self_consistent: return "quantum-self-consistent";
    case Analysis::entropy_series: return "entropy-series";
    case Analysis::equilibria: return "equilibria";
  }
  return "vector";
}

Analysis analysis_from_string(const std::string& name) {
  if (name == "vector") return Analysis::vector;
  if (name == "lax") return Analysis::lax;
  if (name == "quantum-self-consistent") return Analysis::quantum_self_consistent;
  if (name == "entropy-series") return Analysis::entropy_series;
  if (name == "equilibria") return Analysis::equilibria;
  throw ValidationError("unknown analysis '" + name + "'");
}

const char* to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

std::string join_path(const std::string& parent, const char* key) {
  return parent.empty() ? std::string(key) : parent + "." + key;
}

const json& require_field(const json& obj, const std::string& parent, const char* key) {
  if (!obj.is_object()) {
    throw SchemaError(parent.empty() ? "(document)" : parent, "expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(join_path(parent, key), "missing required field");
  }
  return *it;
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw SchemaError(path, "expected a number");
  return value.get<double>();
}

bool as_bool(const json& value, const std::string& path) {
  if (!value.is_boolean()) throw SchemaError(path, "expected a boolean");
  return value.get<bool>();
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw SchemaError(path, "expected a string");
  return value.get<std::string>();
}

Vector as_vector(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) {
    throw SchemaError(path, "expected a non-empty array of numbers");
  }
  Vector out(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) {
      throw SchemaError(path, "element " + std::to_string(i) + " is not a number");
    }
    out(static_cast<Eigen::Index>(i)) = value[i].get<double>();
  }
  return out;
}

Matrix as_matrix(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) {
    throw SchemaError(path, "expected a non-empty array of rows");
  }
  const std::size_t rows = value.size();
  if (!value[0].is_array() || value[0].empty()) {
    throw SchemaError(path, "row 0 is not a non-empty array");
  }
  const std::size_t cols = value[0].size();
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!value[i].is_array() || value[i].size() != cols) {
      throw SchemaError(path, "row " + std::to_string(i) + " does not have " +
                                  std::to_string(cols) + " entries");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!value[i][j].is_number()) {
        throw SchemaError(path, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") is not a number");
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value[i][j].get<double>();
    }
  }
  return out;
}

void reject_unknown_keys(const json& obj, const std::string& parent,
                         std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool found = false;
    for (const char* key : known) {
      if (it.key() == key) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw SchemaError(join_path(parent, it.key().c_str()), "unknown field");
    }
  }
}

Matrix matrix_from_document(const json& value, const std::string& path) {
  if (value.is_object()) {
    reject_unknown_keys(value, path, {"matrix"});
    return as_matrix(require_field(value, path, "matrix"), join_path(path, "matrix"));
  }
  return as_matrix(value, path);
}

json read_json_file(const std::string& path, std::string* raw_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("(file)", "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string raw = buffer.str();
  if (raw_out != nullptr) *raw_out = raw;
  json document = json::parse(raw, nullptr, false);
  if (document.is_discarded()) {
    throw SchemaError("(document)", "not valid JSON: '" + path + "'");
  }
  return document;
}

}  // namespace

Scenario parse_scenario(const json& document) {
  if (!document.is_object()) throw SchemaError("(document)", "expected an object");
  reject_unknown_keys(document, "",
                      {"game", "initial", "integrator", "analyses", "output", "hbar",
                       "tolerances"});

  // game
  Matrix game_entries = matrix_from_document(require_field(document, "", "game"), "game");
  if (game_entries.rows() != game_entries.cols()) {
    throw SchemaError("game", "payoff matrix must be square, got " +
                                  std::to_string(game_entries.rows()) + "x" +
                                  std::to_string(game_entries.cols()));
  }
  PayoffMatrix game = [&] {
    try {
      return PayoffMatrix(std::move(game_entries));
    } catch (const ValidationError& e) {
      throw SchemaError("game", e.what());
    }
  }();

  // initial
  MixedStrategy initial = [&] {
    Vector weights = as_vector(require_field(document, "", "initial"), "initial");
    try {
      return MixedStrategy(std::move(weights));
    } catch (const ValidationError& e) {
      throw SchemaError("initial", e.what());
    }
  }();
  if (initial.size() != game.size()) {
    throw SchemaError("initial", "has " + std::to_string(initial.size()) +
                                     " components but the game has " +
                                     std::to_string(game.size()) + " strategies");
  }

  // integrator
  const json& integ = require_field(document, "", "integrator");
  if (!integ.is_object()) throw SchemaError("integrator", "expected an object");
  reject_unknown_keys(integ, "integrator", {"method", "dt", "t_end", "renormalize"});
  IntegratorConfig cfg;
  const std::string method = as_string(require_field(integ, "integrator", "method"),
                                       "integrator.method");
  try {
    cfg.method = integrator_method_from_string(method);
  } catch (const ValidationError& e) {
    throw SchemaError("integrator.method", e.what());
  }
  cfg.dt = as_number(require_field(integ, "integrator", "dt"), "integrator.dt");
  cfg.t_end = as_number(require_field(integ, "integrator", "t_end"), "integrator.t_end");
  if (integ.contains("renormalize")) {
    cfg.renormalize = as_bool(integ["renormalize"], "integrator.renormalize");
  }
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw SchemaError("integrator.dt", "must be positive and finite");
  }
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) {
    throw SchemaError("integrator.t_end", "must be positive and finite");
  }
  if (!(cfg.dt < cfg.t_end)) {
    throw SchemaError("integrator.dt", "must be smaller than t_end");
  }

  // analyses
  const json& analyses_doc = require_field(document, "", "analyses");
  if (!analyses_doc.is_array()) throw SchemaError("analyses", "expected an array of strings");
  std::set<Analysis> requested;
  for (std::size_t i = 0; i < analyses_doc.size(); ++i) {
    if (!analyses_doc[i].is_string()) {
      throw SchemaError("analyses", "element " + std::to_string(i) + " is not a string");
    }
    try {
      requested.insert(analysis_from_string(analyses_doc[i].get<std::string>()));
    } catch (const ValidationError& e) {
      throw SchemaError("analyses", e.what());
    }
  }
  if (requested.count(Analysis::equilibria) && game.size() > 4) {
    throw SchemaError("analyses", "equilibria requires n <= 4 strategies, game has n=" +
                                      std::to_string(game.size()));
  }
  std::vector<Analysis> analyses(requested.begin(), requested.end());

  // output
  const json& output = require_field(document, "", "output");
  if (!output.is_object()) throw SchemaError("output", "expected an object");
  reject_unknown_keys(output, "output", {"directory", "format"});
  const std::string directory = as_string(require_field(output, "output", "directory"),
                                          "output.directory");
  if (directory.empty()) throw SchemaError("output.directory", "must not be empty");
  const std::string format_name = as_string(require_field(output, "output", "format"),
                                            "output.format");
  OutputFormat format;
  if (format_name == "csv") {
    format = OutputFormat::csv;
  } else if (format_name == "json") {
    format = OutputFormat::json;
  } else {
    throw SchemaError("output.format", "expected 'csv' or 'json', got '" + format_name + "'");
  }

  // hbar
  double hbar = 1.0;
  if (document.contains("hbar")) {
    hbar = as_number(document["hbar"], "hbar");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
      throw SchemaError("hbar", "must be positive and finite");
    }
  }

  // tolerances
  DriftTolerances tolerances;
  if (document.contains("tolerances")) {
    const json& tol = document["tolerances"];
    if (!tol.is_object()) throw SchemaError("tolerances", "expected an object");
    reject_unknown_keys(tol, "tolerances",
                        {"simplex_drift", "trace_drift", "idempotency_drift",
                         "hermiticity_drift", "min_eigenvalue", "purity_excess"});
    auto maybe = [&tol](const char* key, double* slot) {
      if (tol.contains(key)) {
        *slot = as_number(tol[key], join_path("tolerances", key));
      }
    };
    maybe("simplex_drift", &tolerances.simplex_drift);
    maybe("trace_drift", &tolerances.trace_drift);
    maybe("idempotency_drift", &tolerances.idempotency_drift);
    maybe("hermiticity_drift", &tolerances.hermiticity_drift);
    maybe("min_eigenvalue", &tolerances.min_eigenvalue);
    maybe("purity_excess", &tolerances.purity_excess);
  }

  return Scenario{std::move(game), std::move(initial), cfg,       std::move(analyses),
                  directory,       format,             hbar,      tolerances};
}

ordered_json dump_scenario(const Scenario& scenario) {
  ordered_json out;
  ordered_json matrix = ordered_json::array();
  for (int i = 0; i < scenario.game.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < scenario.game.size(); ++j) row.push_back(scenario.game(i, j));
    matrix.push_back(row);
  }
  out["game"] = ordered_json{{"matrix", matrix}};

  ordered_json initial = ordered_json::array();
  for (int i = 0; i < scenario.initial.size(); ++i) initial.push_back(scenario.initial[i]);
  out["initial"] = initial;

  out["integrator"] = ordered_json{{"method", to_string(scenario.integrator.method)},
                                   {"dt", scenario.integrator.dt},
                                   {"t_end", scenario.integrator.t_end},
                                   {"renormalize", scenario.integrator.renormalize}};

  ordered_json analyses = ordered_json::array();
  for (Analysis a : scenario.analyses) analyses.push_back(to_string(a));
  out["analyses"] = analyses;

  out["output"] = ordered_json{{"directory", scenario.output_directory},
                               {"format", to_string(scenario.output_format)}};
  out["hbar"] = scenario.hbar;
  out["tolerances"] = ordered_json{{"simplex_drift", scenario.tolerances.simplex_drift},
                                   {"trace_drift", scenario.tolerances.trace_drift},
                                   {"idempotency_drift", scenario.tolerances.idempotency_drift},
                                   {"hermiticity_drift", scenario.tolerances.hermiticity_drift},
                                   {"min_eigenvalue", scenario.tolerances.min_eigenvalue},
                                   {"purity_excess", scenario.tolerances.purity_excess}};
  return out;
}

namespace {

// One tabular series; rendered as CSV or as a columns/rows JSON document.
struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

std::string render_series_csv(const Series& series) {
  std::string text;
  for (std::size_t c = 0; c < series.columns.size(); ++c) {
    if (c > 0) text += ',';
    text += series.columns[c];
  }
  text += '\n';
  for (const auto& row : series.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) text += ',';
      text += format_double(row[c]);
    }
    text += '\n';
  }
  return text;
}

std::string render_series_json(const Series& series) {
  ordered_json doc;
  doc["columns"] = series.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : series.rows) rows.push_back(row);
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string series_filename(const char* stem, OutputFormat format) {
  return std::string(stem) + (format == OutputFormat::csv ? ".csv" : ".json");
}

void emit_series(const std::filesystem::path& dir, const std::string& filename,
                 OutputFormat format, const Series& series) {
  write_text_file(dir / filename, format == OutputFormat::csv ? render_series_csv(series)
                                                              : render_series_json(series));
}

}  // namespace

RunManifest run_scenario(const Scenario& scenario, const std::string& output_dir,
                         const std::string& scenario_fingerprint) {
  namespace fs = std::filesystem;
  const fs::path dir(output_dir);
  fs::create_directories(dir);

  const auto requested = [&scenario](Analysis a) {
    return std::find(scenario.analyses.begin(), scenario.analyses.end(), a) !=
           scenario.analyses.end();
  };

  RunManifest manifest;
  manifest.scenario_fingerprint = scenario_fingerprint;
  manifest.version = kVersion;
  manifest.format = to_string(scenario.output_format);

  const bool needs_trajectory =
      requested(Analysis::vector) || requested(Analysis::lax) ||
      requested(Analysis::quantum_self_consistent) || requested(Analysis::entropy_series);

  Trajectory trajectory;
  if (needs_trajectory) {
    // The shared vector trajectory is attributed to the first requesting
    // analysis if it aborts.
    const char* owner = requested(Analysis::vector) ? "vector"
                        : requested(Analysis::lax)  ? "lax"
                        : requested(Analysis::quantum_self_consistent)
                            ? "quantum-self-consistent"
                            : "entropy-series";
    try {
      trajectory = integrate(scenario.initial, scenario.game, scenario.integrator);
    } catch (const NumericalAbort& abort) {
      throw AnalysisAbort(owner, abort);
    }
  }

  const int n = scenario.game.size();

  for (Analysis analysis : scenario.analyses) {
    AnalysisResult result;
    result.name = to_string(analysis);

    switch (analysis) {
      case Analysis::vector: {
        Series series;
        series.columns.push_back("t");
        for (int i = 1; i <= n; ++i) series.columns.push_back("x_" + std::to_string(i));
        for (std::size_t k = 0; k < trajectory.size(); ++k) {
          std::vector<double> row;
          row.push_back(trajectory.times[k]);
          for (int i = 0; i < n; ++i) row.push_back(trajectory.states[k][i]);
          series.rows.push_back(std::move(row));
        }
        const std::string filename = series_filename("vector", scenario.output_format);
        emit_series(dir, filename, scenario.output_format, series);
        result.files.push_back(filename);
        result.drift_summary = {{"max_simplex_drift", trajectory.meta.max_simplex_drift}};
        result.within_tolerance =
            trajectory.meta.max_simplex_drift <= scenario.tolerances.simplex_drift;
        break;
      }

      case Analysis::lax: {
        MatrixTrajectory matrix_traj;
        try {
          matrix_traj = integrate_matrix(scenario.initial, scenario.game, scenario.integrator);
        } catch (const NumericalAbort& abort) {
          throw AnalysisAbort("lax", abort);
        }
        Series series;
        series.columns.push_back("t");
        for (int i = 1; i <= n; ++i) series.columns.push_back("x_" + std::to_string(i));
        series.columns.push_back("trace_drift");
        series.columns.push_back("idempotency_drift");
        double max_diag_vs_vector = 0.0;
        for (std::size_t k = 0; k < matrix_traj.size(); ++k) {
          std::vector<double> row;
          row.push_back(matrix_traj.times[k]);
          const Vector diag = matrix_traj.states[k].diagonal();
          for (int i = 0; i < n; ++i) row.push_back(diag(i));
          row.push_back(matrix_traj.trace_drift[k]);
          row.push_back(matrix_traj.idempotency_drift[k]);
          series.rows.push_back(std::move(row));
          if (k < trajectory.size()) {
            const double diff =
                (diag - trajectory.states[k].weights()).cwiseAbs().maxCoeff();
            max_diag_vs_vector = std::max(max_diag_vs_vector, diff);
          }
        }
        const std::string filename = series_filename("lax", scenario.output_format);
        emit_series(dir, filename, scenario.output_format, series);
        result.files.push_back(filename);
        result.drift_summary = {{"max_trace_drift", matrix_traj.max_trace_drift()},
                                {"max_idempotency_drift", matrix_traj.max_idempotency_drift()},
                                {"max_hermiticity_drift", matrix_traj.max_hermiticity_drift()},
                                {"max_diag_vs_vector", max_diag_vs_vector}};
        result.within_tolerance =
            matrix_traj.max_trace_drift() <= scenario.tolerances.trace_drift &&
            matrix_traj.max_idempotency_drift() <= scenario.tolerances.idempotency_drift &&
            matrix_traj.max_hermiticity_drift() <= scenario.tolerances.hermiticity_drift;
        break;
      }

      case Analysis::quantum_self_consistent: {
        Evolution evolution;
        try {
          evolution = evolve_self_consistent(quantize(scenario.initial), scenario.game,
                                             scenario.hbar, scenario.integrator);
        } catch (const NumericalAbort& abort) {
          throw AnalysisAbort("quantum-self-consistent", abort);
        }
        Series series;
        series.columns = {"t", "S_vn", "series_rate", "exact_rate"};
        double max_vs_freq = 0.0;
        for (std::size_t k = 0; k < evolution.size(); ++k) {
          const DensityOperator& rho = evolution.states[k];
          Vector diag = rho.matrix().diagonal().real();
          for (Eigen::Index i = 0; i < diag.size(); ++i) {
            if (diag(i) < 0.0) diag(i) = 0.0;
          }
          const ComplexMatrix lambda =
              detail::lambda_from_raw(diag, scenario.game.entries()).cast<Complex>();
          const ComplexMatrix drho = lambda * rho.matrix() - rho.matrix() * lambda;
          std::vector<double> row;
          row.push_back(evolution.times[k]);
          row.push_back(von_neumann_entropy(rho));
          row.push_back(vn_entropy_rate_series(rho, drho));
          row.push_back(vn_entropy_rate_exact(rho, drho));
          series.rows.push_back(std::move(row));
          if (k < trajectory.size()) {
            const Matrix expected =
                detail::freq_from_raw(trajectory.states[k].weights());
            const double diff =
                (rho.matrix() - expected.cast<Complex>()).cwiseAbs().maxCoeff();
            max_vs_freq = std::max(max_vs_freq, diff);
          }
        }
        const std::string filename = series_filename("quantum", scenario.output_format);
        emit_series(dir, filename, scenario.output_format, series);
        result.files.push_back(filename);
        result.drift_summary = {{"max_trace_drift", evolution.max_trace_drift()},
                                {"max_hermiticity_drift", evolution.max_hermiticity_drift()},
                                {"min_eigenvalue", evolution.lowest_eigenvalue()},
                                {"max_purity_excess", evolution.max_purity_excess()},
                                {"max_vs_freq_matrix", max_vs_freq}};
        result.within_tolerance =
            evolution.max_trace_drift() <= scenario.tolerances.trace_drift &&
            evolution.max_hermiticity_drift() <= scenario.tolerances.hermiticity_drift &&
            evolution.lowest_eigenvalue() >= scenario.tolerances.min_eigenvalue &&
            evolution.max_purity_excess() <= scenario.tolerances.purity_excess;
        break;
      }

      case Analysis::entropy_series: {
        // Boundary policy: components are clamped to 1e-15 before the
        // entropy formulas; every clamped sample is counted in the manifest.
        Series series;
        series.columns = {"t", "H", "dH_formula"};
        long long clamped_samples = 0;
        for (std::size_t k = 0; k < trajectory.size(); ++k) {
          Vector x = trajectory.states[k].weights();
          bool clamped = false;
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x(i) < 1e-15) {
              x(i) = 1e-15;
              clamped = true;
            }
          }
          if (clamped) ++clamped_samples;
          const MixedStrategy state = MixedStrategy::unchecked(x);
          series.rows.push_back({trajectory.times[k], shannon_entropy(x),
                                 shannon_rate(state, scenario.game)});
        }
        const std::string filename = series_filename("entropy", scenario.output_format);
        emit_series(dir, filename, scenario.output_format, series);
        result.files.push_back(filename);
        result.drift_summary = {{"clamped_samples", clamped_samples}};
        result.within_tolerance = true;
        break;
      }

      case Analysis::equilibria: {
        const FixedPointScan scan = find_fixed_points(scenario.game);
        // The verdict column is text; render the table manually for CSV and
        // as structured objects for JSON.
        std::string filename;
        if (scenario.output_format == OutputFormat::csv) {
          std::string text;
          for (int i = 1; i <= n; ++i) {
            if (i > 1) text += ',';
            text += "x_" + std::to_string(i);
          }
          text += ",rhs_norm,worst_deviation,verdict\n";
          for (const FixedPoint& point : scan.points) {
            for (int i = 0; i < n; ++i) {
              if (i > 0) text += ',';
              text += format_double(point.point[i]);
            }
            text += ',';
            text += format_double(point.rhs_norm);
            text += ',';
            text += format_double(point.worst_deviation);
            text += ',';
            text += to_string(point.nash_verdict);
            text += '\n';
          }
          filename = series_filename("equilibria", scenario.output_format);
          write_text_file(dir / filename, text);
        } else {
          ordered_json doc;
          ordered_json points = ordered_json::array();
          for (const FixedPoint& point : scan.points) {
            ordered_json entry;
            ordered_json weights = ordered_json::array();
            for (int i = 0; i < n; ++i) weights.push_back(point.point[i]);
            ordered_json support = ordered_json::array();
            for (int s : point.support) support.push_back(s + 1);
            entry["x"] = weights;
            entry["support"] = support;
            entry["rhs_norm"] = point.rhs_norm;
            entry["worst_deviation"] = point.worst_deviation;
            entry["verdict"] = to_string(point.nash_verdict);
            points.push_back(entry);
          }
          ordered_json singular = ordered_json::array();
          for (const auto& support : scan.singular_supports) {
            ordered_json entry = ordered_json::array();
            for (int s : support) entry.push_back(s + 1);
            singular.push_back(entry);
          }
          doc["points"] = points;
          doc["singular_supports"] = singular;
          filename = series_filename("equilibria", scenario.output_format);
          write_text_file(dir / filename, doc.dump(2) + "\n");
        }
        result.files.push_back(filename);

        double max_rhs_norm = 0.0;
        for (const FixedPoint& point : scan.points) {
          max_rhs_norm = std::max(max_rhs_norm, point.rhs_norm);
        }
        result.drift_summary = {
            {"points", static_cast<long long>(scan.points.size())},
            {"singular_supports", static_cast<long long>(scan.singular_supports.size())},
            {"max_rhs_norm", max_rhs_norm}};
        result.within_tolerance = true;
        break;
      }
    }

    manifest.analyses.push_back(std::move(result));
  }

  manifest.all_within_tolerance = true;
  for (const AnalysisResult& result : manifest.analyses) {
    if (!result.within_tolerance) manifest.all_within_tolerance = false;
  }

  ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = manifest.version;
  doc["scenario_fingerprint"] = manifest.scenario_fingerprint;
  doc["format"] = manifest.format;
  ordered_json analyses = ordered_json::array();
  for (const AnalysisResult& result : manifest.analyses) {
    ordered_json entry;
    entry["name"] = result.name;
    entry["files"] = result.files;
    entry["drift"] = result.drift_summary;
    entry["within_tolerance"] = result.within_tolerance;
    analyses.push_back(entry);
  }
  doc["analyses"] = analyses;
  doc["all_within_tolerance"] = manifest.all_within_tolerance;

  const fs::path manifest_path = dir / "manifest.json";
  write_text_file(manifest_path, doc.dump(2) + "\n");
  manifest.manifest_path = manifest_path.string();
  return manifest;
}

PayoffMatrix load_game_file(const std::string& path) {
  const json document = read_json_file(path, nullptr);
  Matrix entries = matrix_from_document(document, "game");
  if (entries.rows() != entries.cols()) {
    throw SchemaError("game", "payoff matrix must be square, got " +
                                  std::to_string(entries.rows()) + "x" +
                                  std::to_string(entries.cols()));
  }
  try {
    return PayoffMatrix(std::move(entries));
  } catch (const ValidationError& e) {
    throw SchemaError("game", e.what());
  }
}

EnergySpectrum load_spectrum_file(const std::string& path) {
  const json document = read_json_file(path, nullptr);
  Vector levels;
  if (document.is_object()) {
    reject_unknown_keys(document, "", {"levels"});
    levels = as_vector(require_field(document, "", "levels"), "levels");
  } else {
    levels = as_vector(document, "levels");
  }
  try {
    return EnergySpectrum(std::move(levels));
  } catch (const ValidationError& e) {
    throw SchemaError("levels", e.what());
  }
}

Scenario load_scenario_file(const std::string& path, std::string* fingerprint_out) {
  std::string raw;
  const json document = read_json_file(path, &raw);
  if (fingerprint_out != nullptr) {
    *fingerprint_out = "fnv1a64:" + fnv1a64_hex(raw.data(), raw.size());
  }
  return parse_scenario(document);
}

MixedStrategy parse_strategy_string(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      std::size_t used = 0;
      const double value = std::stod(token, &used);
      while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) {
        ++used;
      }
      if (used != token.size()) throw std::invalid_argument(token);
      values.push_back(value);
    } catch (const std::exception&) {
      throw SchemaError("strategy", "'" + token + "' is not a number");
    }
  }
  if (values.empty()) throw SchemaError("strategy", "expected comma-separated reals");
  Vector weights(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    weights(static_cast<Eigen::Index>(i)) = values[i];
  }
  try {
    return MixedStrategy(std::move(weights));
  } catch (const ValidationError& e) {
    throw SchemaError("strategy", e.what());
  }
}

}  // namespace egt
