#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "rigidflock/cli.hpp"

namespace cli = rigidflock::cli;
namespace fs = std::filesystem;
using fixture::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result simulate(const cli::SimulateOptions& options) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::cmd_simulate(options, out, err);
  return {code, out.str(), err.str()};
}

Result check(const fs::path& file) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::cmd_check_rigidity(file, out, err);
  return {code, out.str(), err.str()};
}

int run_argv(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("check-rigidity on the pentagon") {
  const Result r = check(oracle::scenario_dir() / "pentagon_formation.json");
  CHECK(r.code == cli::kExitOk);
  const json report = json::parse(r.out);
  CHECK(report["rank"] == 7);
  CHECK(report["n"] == 5);
  CHECK(report["a"] == 7);
  CHECK(report["infinitesimally_rigid"] == true);
  CHECK(report["minimally_rigid"] == true);
}

TEST_CASE("check-rigidity accepts a scenario file") {
  CHECK(check(oracle::scenario_dir() / "pentagon_intercept.json").code == cli::kExitOk);
}

TEST_CASE("check-rigidity on non-rigid frameworks") {
  const Result square = check(oracle::scenario_dir() / "square_no_diagonal.json");
  CHECK(square.code == cli::kExitNotRigid);
  CHECK(json::parse(square.out)["rank"] == 4);

  fixture::TempDir dir("collinear");
  const json collinear = {{"graph", {{"n", 4}, {"edges", {{1, 2}, {2, 3}, {3, 4}, {1, 3}, {2, 4}}}}},
                          {"positions", {{0, 0}, {1, 0}, {2, 0}, {3, 0}}}};
  CHECK(check(fixture::write_json(dir.path(), "collinear.json", collinear)).code == cli::kExitNotRigid);

  const json pair = {{"graph", {{"n", 2}, {"edges", {{1, 2}}}}}, {"positions", {{0, 0}, {1, 0}}}};
  CHECK(check(fixture::write_json(dir.path(), "pair.json", pair)).code == cli::kExitNotRigid);
}

TEST_CASE("check-rigidity parse errors exit 1") {
  fixture::TempDir dir("badframework");
  std::ofstream(dir.path() / "broken.json") << "[1, 2";
  CHECK(check(dir.path() / "broken.json").code == cli::kExitError);
  CHECK(check(dir.path() / "missing.json").code == cli::kExitError);
  const json wrong = {{"graph", {{"n", 3}, {"edges", {{1, 1}}}}}, {"positions", {{0, 0}, {1, 0}, {0, 1}}}};
  CHECK(check(fixture::write_json(dir.path(), "loop.json", wrong)).code == cli::kExitError);
}

TEST_CASE("simulate writes all three outputs") {
  fixture::TempDir dir("simulate");
  const Result r = simulate({oracle::scenario_dir() / "pentagon_flock.json", dir.path() / "out", 0.5, {}, {}});
  CHECK(r.code == cli::kExitOk);
  CHECK(fs::exists(dir.path() / "out" / "trajectory.csv"));
  CHECK(fs::exists(dir.path() / "out" / "metrics.csv"));
  const json summary = oracle::load_json(dir.path() / "out" / "summary.json");
  CHECK(summary["samples"] == 51);
  CHECK(summary["seed"] == 7);
  CHECK(summary["duration_s"] == 0.5);
}

TEST_CASE("simulate overrides seed and dt") {
  fixture::TempDir dir("override");
  const auto scen = oracle::scenario_dir() / "pentagon_flock.json";
  CHECK(simulate({scen, dir.path() / "a", 0.1, 5e-4, 3ULL}).code == cli::kExitOk);
  const json summary = oracle::load_json(dir.path() / "a" / "summary.json");
  CHECK(summary["seed"] == 3);
  CHECK(summary["dt_s"] == 5e-4);
  CHECK(simulate({scen, dir.path() / "b", 0.1, 0.5, {}}).code == cli::kExitError);
}

TEST_CASE("simulate with zero duration writes header-only CSVs") {
  fixture::TempDir dir("dry");
  const Result r = simulate({oracle::scenario_dir() / "pentagon_intercept.json", dir.path(), 0.0, {}, {}});
  CHECK(r.code == cli::kExitOk);
  const std::string traj = oracle::read_file(dir.path() / "trajectory.csv");
  const std::string met = oracle::read_file(dir.path() / "metrics.csv");
  CHECK(std::count(traj.begin(), traj.end(), '\n') == 1);
  CHECK(std::count(met.begin(), met.end(), '\n') == 1);
  CHECK(traj.rfind("t_s,x_m_1", 0) == 0);
  CHECK(oracle::load_json(dir.path() / "summary.json")["samples"] == 0);
}

TEST_CASE("simulate into an unwritable location exits 1") {
  fixture::TempDir dir("unwritable");
  std::ofstream(dir.path() / "plain_file") << "x";
  const Result r = simulate({oracle::scenario_dir() / "pentagon_flock.json", dir.path() / "plain_file" / "out", 0.1, {}, {}});
  CHECK(r.code == cli::kExitError);
  CHECK(r.err.find("output directory") != std::string::npos);
}

TEST_CASE("simulate reports invalid scenarios with the field pointer") {
  fixture::TempDir dir("invalid");
  json doc = fixture::flock_doc();
  doc["gains"]["k_a"] = -1;
  const Result r = simulate({fixture::write_json(dir.path(), "neg.json", doc), dir.path() / "out", {}, {}, {}});
  CHECK(r.code == cli::kExitError);
  CHECK(r.err.find("/gains/k_a") != std::string::npos);

  json outside = fixture::intercept_doc();
  outside["formation"]["positions"][5] = json::array({0.5, 0.5});
  const Result h = simulate({fixture::write_json(dir.path(), "hull.json", outside), dir.path() / "out", {}, {}, {}});
  CHECK(h.code == cli::kExitError);
  CHECK(h.err.find("/formation/positions") != std::string::npos);

  CHECK(simulate({dir.path() / "absent.json", dir.path() / "out", {}, {}, {}}).code == cli::kExitError);
}

TEST_CASE("simulate exits 3 on divergence") {
  fixture::TempDir dir("diverge");
  json doc = fixture::flock_doc();
  doc["gains"]["k_a"] = 1e12;
  const Result r = simulate({fixture::write_json(dir.path(), "wild.json", doc), dir.path() / "out", 1.0, {}, {}});
  CHECK(r.code == cli::kExitDiverged);
  CHECK(r.err.find("diverged") != std::string::npos);
}

TEST_CASE("argument parsing") {
  CHECK(run_argv({"rigidflock", "--help"}) == cli::kExitOk);
  CHECK(run_argv({"rigidflock"}) == cli::kExitError);
  CHECK(run_argv({"rigidflock", "simulate"}) == cli::kExitError);
  CHECK(run_argv({"rigidflock", "check-rigidity", (oracle::scenario_dir() / "square_no_diagonal.json").string()}) ==
        cli::kExitNotRigid);
}
