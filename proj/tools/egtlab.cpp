#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "egt/game.hpp"
#include "egt/info.hpp"
#include "egt/maxent.hpp"
#include "egt/scenario.hpp"
#include "egt/version.hpp"

namespace {

// Exit-code contract: 0 success, 1 certification failure or drift gate
// exceeded, 2 schema violation, 3 numerical abort, 4 infeasible target.
constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitSchema = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInfeasible = 4;

const char* witness_kind_name(egt::Witness::Kind kind) {
  switch (kind) {
    case egt::Witness::Kind::beats_equilibrium: return "beats equilibrium";
    case egt::Witness::Kind::ties_equilibrium: return "ties equilibrium";
    case egt::Witness::Kind::fails_stability: return "fails stability";
  }
  return "?";
}

int run_simulate(const std::string& scenario_path, bool dump_config) {
  std::string fingerprint;
  const egt::Scenario scenario = egt::load_scenario_file(scenario_path, &fingerprint);

  if (dump_config) {
    std::cout << egt::dump_scenario(scenario).dump(2) << "\n";
    return kExitOk;
  }

  std::string output_dir = scenario.output_directory;
  if (const char* override_dir = std::getenv("EGTLAB_OUTPUT_DIR")) {
    if (*override_dir != '\0') output_dir = override_dir;
  }

  const egt::RunManifest manifest = egt::run_scenario(scenario, output_dir, fingerprint);
  for (const egt::AnalysisResult& result : manifest.analyses) {
    std::cout << result.name << ": "
              << (result.within_tolerance ? "ok" : "drift exceeded tolerance");
    for (const std::string& file : result.files) std::cout << " " << file;
    std::cout << "\n";
  }
  std::cout << "manifest: " << manifest.manifest_path << "\n";
  return manifest.all_within_tolerance ? kExitOk : kExitFailed;
}

int run_certify(const std::string& game_path, const std::string& strategy_text, double tol,
                bool as_json) {
  const egt::PayoffMatrix game = egt::load_game_file(game_path);
  const egt::MixedStrategy strategy = egt::parse_strategy_string(strategy_text);
  if (strategy.size() != game.size()) {
    throw egt::SchemaError("strategy", "has " + std::to_string(strategy.size()) +
                                           " components but the game has " +
                                           std::to_string(game.size()) + " strategies");
  }

  const egt::EquilibriumReport report = egt::certify_ess(strategy, game, tol);

  if (as_json) {
    nlohmann::ordered_json doc;
    doc["verdict"] = egt::to_string(report.verdict);
    doc["worst_deviation"] = report.worst_deviation;
    nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();
    for (const egt::Witness& witness : report.witnesses) {
      witnesses.push_back({{"strategy", witness.strategy + 1},
                           {"kind", witness_kind_name(witness.kind)},
                           {"margin", witness.margin}});
    }
    doc["witnesses"] = witnesses;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "verdict: " << egt::to_string(report.verdict) << "\n";
    std::cout << "worst_deviation: " << egt::format_double(report.worst_deviation) << "\n";
    if (report.witnesses.empty()) {
      std::cout << "witnesses: none\n";
    } else {
      std::cout << "witnesses:\n";
      for (const egt::Witness& witness : report.witnesses) {
        std::cout << "  s" << witness.strategy + 1 << " " << witness_kind_name(witness.kind)
                  << " (margin " << egt::format_double(witness.margin) << ")\n";
      }
    }
  }
  return report.verdict == egt::Verdict::none ? kExitFailed : kExitOk;
}

int run_maxent(const std::string& spectrum_path, double beta, bool has_target, double target,
               bool verify, double h, bool as_json) {
  const egt::EnergySpectrum spectrum = egt::load_spectrum_file(spectrum_path);

  double solved_beta = beta;
  if (has_target) solved_beta = egt::solve_beta(spectrum, target);

  const egt::ThermoState state = egt::thermo_state(spectrum, solved_beta);
  const egt::Vector gibbs = egt::gibbs_distribution(spectrum, solved_beta);

  nlohmann::ordered_json report_doc;
  if (verify) {
    const egt::IdentityReport report = egt::verify_identities(spectrum, solved_beta, h);
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const egt::IdentityCheck& check : report.checks) {
      nlohmann::ordered_json entry;
      entry["name"] = check.name;
      if (check.skipped) {
        entry["skipped"] = check.skip_reason;
      } else {
        entry["analytic"] = check.analytic;
        entry["finite_difference"] = check.finite_difference;
        entry["relative_error"] = check.relative_error;
        entry["pass"] = check.pass;
      }
      checks.push_back(entry);
    }
    report_doc = {{"h", report.h},
                  {"tolerance", report.tolerance},
                  {"checks", checks},
                  {"all_pass", report.all_pass}};
  }

  if (as_json) {
    nlohmann::ordered_json doc;
    doc["beta"] = state.beta;
    doc["tau"] = state.tau;
    doc["Z"] = state.Z;
    doc["log_Z"] = state.log_Z;
    doc["mean_energy"] = state.mean_energy;
    doc["entropy"] = state.entropy;
    doc["energy_variance"] = state.energy_variance;
    nlohmann::ordered_json dist = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < gibbs.size(); ++i) dist.push_back(gibbs(i));
    doc["gibbs"] = dist;
    if (verify) doc["identities"] = report_doc;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "beta: " << egt::format_double(state.beta) << "\n";
    std::cout << "tau: " << egt::format_double(state.tau) << "\n";
    std::cout << "Z: " << egt::format_double(state.Z) << "\n";
    std::cout << "log_Z: " << egt::format_double(state.log_Z) << "\n";
    std::cout << "mean_energy: " << egt::format_double(state.mean_energy) << "\n";
    std::cout << "entropy: " << egt::format_double(state.entropy) << "\n";
    std::cout << "energy_variance: " << egt::format_double(state.energy_variance) << "\n";
    std::cout << "gibbs:";
    for (Eigen::Index i = 0; i < gibbs.size(); ++i) {
      std::cout << " " << egt::format_double(gibbs(i));
    }
    std::cout << "\n";
    if (verify) {
      std::cout << "identities (h=" << egt::format_double(report_doc["h"].get<double>())
                << ", tolerance=" << egt::format_double(report_doc["tolerance"].get<double>())
                << "):\n";
      for (const auto& entry : report_doc["checks"]) {
        std::cout << "  " << entry["name"].get<std::string>() << ": ";
        if (entry.contains("skipped")) {
          std::cout << "skipped (" << entry["skipped"].get<std::string>() << ")\n";
        } else {
          std::cout << (entry["pass"].get<bool>() ? "pass" : "FAIL")
                    << " analytic=" << egt::format_double(entry["analytic"].get<double>())
                    << " fd=" << egt::format_double(entry["finite_difference"].get<double>())
                    << " rel_err=" << egt::format_double(entry["relative_error"].get<double>())
                    << "\n";
        }
      }
      std::cout << "identities_all_pass: "
                << (report_doc["all_pass"].get<bool>() ? "true" : "false") << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replicator dynamics, its commutator and density-operator forms, entropy "
               "diagnostics, and maximum-entropy thermodynamics"};
  app.set_version_flag("--version", std::string(egt::kToolName) + " " + egt::kVersion);
  app.require_subcommand(1);

  // simulate
  std::string scenario_path;
  bool dump_config = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Run the analyses requested by a scenario");
  simulate->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  simulate->add_flag("--dump-config", dump_config,
                     "Echo the normalized scenario and exit without running");

  // certify
  std::string game_path;
  std::string strategy_text;
  double certify_tol = egt::kDefaultCertifyTol;
  bool certify_json = false;
  CLI::App* certify =
      app.add_subcommand("certify", "Certify a strategy as Nash / evolutionarily stable");
  certify->add_option("game", game_path, "Game file (JSON payoff matrix)")->required();
  certify->add_option("strategy", strategy_text, "Comma-separated strategy weights")->required();
  certify->add_option("--tol", certify_tol, "Certification tolerance");
  certify->add_flag("--json", certify_json, "Emit the report as JSON");

  // maxent
  std::string spectrum_path;
  double beta = 0.0;
  double target_energy = 0.0;
  bool verify = false;
  double fd_step = 1e-4;
  bool maxent_json = false;
  CLI::App* maxent =
      app.add_subcommand("maxent", "Gibbs distribution and thermodynamics for a spectrum");
  maxent->add_option("spectrum", spectrum_path, "Spectrum file (JSON energy levels)")->required();
  CLI::Option* beta_opt = maxent->add_option("--beta", beta, "Inverse temperature");
  CLI::Option* target_opt =
      maxent->add_option("--target-energy", target_energy, "Mean energy to match");
  beta_opt->excludes(target_opt);
  target_opt->excludes(beta_opt);
  maxent->add_flag("--verify", verify, "Append the derivative-identity report");
  maxent->add_option("--step", fd_step, "Central-difference step for --verify");
  maxent->add_flag("--json", maxent_json, "Emit everything as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return run_simulate(scenario_path, dump_config);
    }
    if (certify->parsed()) {
      return run_certify(game_path, strategy_text, certify_tol, certify_json);
    }
    if (maxent->parsed()) {
      const bool has_beta = beta_opt->count() > 0;
      const bool has_target = target_opt->count() > 0;
      if (has_beta == has_target) {
        std::cerr << "maxent requires exactly one of --beta or --target-energy\n";
        return kExitSchema;
      }
      return run_maxent(spectrum_path, beta, has_target, target_energy, verify, fd_step,
                        maxent_json);
    }
  } catch (const egt::SchemaError& e) {
    std::cerr << e.what() << "\n";
    return kExitSchema;
  } catch (const egt::AnalysisAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const egt::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const egt::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const egt::DegenerateError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const egt::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitOk;
}
