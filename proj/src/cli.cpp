#include "rigidflock/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "log.hpp"
#include "rigidflock/output.hpp"
#include "rigidflock/rigidity.hpp"
#include "rigidflock/scenario.hpp"
#include "rigidflock/simulator.hpp"

namespace rigidflock::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Scenario apply_overrides(const Scenario& base, const SimulateOptions& options) {
  if (!options.duration && !options.dt && !options.seed) return base;
  json doc = scenario_to_json(base);
  if (options.duration) doc["integration"]["duration_s"] = *options.duration;
  if (options.dt) doc["integration"]["dt_s"] = *options.dt;
  if (options.seed) doc["initial"]["seed"] = *options.seed;
  return parse_scenario(doc);
}

bool write_file(const fs::path& path, const std::string& contents, std::ostream& err) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    err << "error: cannot write " << path.string() << '\n';
    return false;
  }
  out << contents;
  out.close();
  if (!out) {
    err << "error: failed writing " << path.string() << '\n';
    return false;
  }
  return true;
}

}  // namespace

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = apply_overrides(load_scenario(options.scenario), options);
  } catch (const ScenarioParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const ValidationError& e) {
    err << "error: invalid scenario at " << (e.pointer().empty() ? "/" : e.pointer()) << ": " << e.what() << '\n';
    return kExitError;
  }

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec || !fs::is_directory(options.out_dir)) {
    err << "error: cannot create output directory " << options.out_dir.string() << '\n';
    return kExitError;
  }

  std::ostringstream trajectory;
  std::ostringstream metric_rows;
  json summary;
  if (scenario.integration.duration == 0.0) {
    // Dry run: schema only.
    trajectory << trajectory_header(scenario.mode, scenario.n()) << '\n';
    metric_rows << metrics_header(scenario.mode, scenario.formation.graph()) << '\n';
    summary = {{"scenario", scenario.name},
               {"mode", to_string(scenario.mode)},
               {"parameters_source", scenario.parameters_source},
               {"seed", scenario.initial.seed},
               {"n", scenario.n()},
               {"edges", scenario.formation.graph().edge_count()},
               {"dt_s", scenario.integration.dt},
               {"duration_s", 0.0},
               {"samples", 0}};
  } else {
    TrajectoryLog log;
    try {
      log = run(scenario);
    } catch (const SimulationDiverged& e) {
      err << "error: " << e.what() << '\n';
      return kExitDiverged;
    }
    write_trajectory_csv(log, trajectory);
    write_metrics_csv(log, metric_rows);
    summary = summary_to_json(metrics(log, scenario.settle_time), scenario, log);
  }

  if (!write_file(options.out_dir / "trajectory.csv", trajectory.str(), err) ||
      !write_file(options.out_dir / "metrics.csv", metric_rows.str(), err) ||
      !write_file(options.out_dir / "summary.json", summary.dump(2) + "\n", err)) {
    return kExitError;
  }
  out << "wrote " << (options.out_dir / "trajectory.csv").string() << ", metrics.csv, summary.json\n";
  return kExitOk;
}

int cmd_check_rigidity(const fs::path& file, std::ostream& out, std::ostream& err) {
  Framework framework;
  try {
    std::ifstream in(file);
    if (!in) {
      err << "error: cannot open " << file.string() << '\n';
      return kExitError;
    }
    framework = parse_framework(json::parse(in));
  } catch (const json::parse_error& e) {
    err << "error: " << file.string() << ": " << e.what() << '\n';
    return kExitError;
  } catch (const ValidationError& e) {
    err << "error: invalid framework at " << e.pointer() << ": " << e.what() << '\n';
    return kExitError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  const int n = framework.graph.n();
  const int rank = numerical_rank(rigidity_matrix(framework));
  const bool big_enough = n >= 3;
  const bool infinitesimal = big_enough && is_infinitesimally_rigid(framework);
  const bool minimal = big_enough && is_minimally_rigid(framework);
  const json report = {{"n", n},
                       {"a", framework.graph.edge_count()},
                       {"rank", rank},
                       {"infinitesimally_rigid", infinitesimal},
                       {"minimally_rigid", minimal}};
  out << report.dump() << '\n';
  return infinitesimal && minimal ? kExitOk : kExitNotRigid;
}

int run(int argc, char** argv) {
  CLI::App app{"Distance-based flocking and target interception for unicycle formations"};
  app.require_subcommand(1);

  SimulateOptions sim;
  double duration = 0.0;
  double dt = 0.0;
  unsigned long long seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write trajectory.csv, metrics.csv, summary.json");
  simulate->add_option("scenario", sim.scenario, "Scenario JSON file")->required();
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  auto* duration_opt = simulate->add_option("--duration", duration, "Override duration (s)");
  auto* dt_opt = simulate->add_option("--dt", dt, "Override integration step (s)");
  auto* seed_opt = simulate->add_option("--seed", seed, "Override initial-condition seed");

  fs::path formation_file;
  auto* check = app.add_subcommand("check-rigidity", "Report rank and rigidity of a framework");
  check->add_option("file", formation_file, "Formation or scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  detail::logger();
  if (*simulate) {
    if (*duration_opt) sim.duration = duration;
    if (*dt_opt) sim.dt = dt;
    if (*seed_opt) sim.seed = seed;
    return cmd_simulate(sim, std::cout, std::cerr);
  }
  return cmd_check_rigidity(formation_file, std::cout, std::cerr);
}

}  // namespace rigidflock::cli
