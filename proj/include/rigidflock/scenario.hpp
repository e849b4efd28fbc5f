#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rigidflock/flocking.hpp"
#include "rigidflock/interception.hpp"
#include "rigidflock/rigidity.hpp"
#include "rigidflock/trajectory.hpp"
#include "rigidflock/unicycle.hpp"

namespace rigidflock {

enum class Mode { kFlock, kIntercept };

/// Frame in which each agent evaluates its observer signum.
enum class ObserverFrame {
  /// The agent's body frame (local-frame implementation; rotation equivariant).
  kBody,
  /// The common inertial frame.
  kWorld,
};

/// A scenario field failed validation. `pointer()` is a JSON pointer to it.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// The scenario file could not be read or is not JSON.
class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialConditions {
  /// Explicit poses take precedence over the seeded generator.
  std::optional<std::vector<Pose>> poses;
  std::uint64_t seed = 1;
  /// Each agent starts uniformly inside a disk of this radius around its
  /// (offset) target position, with a uniform random heading.
  double perturbation_radius = 0.0;
  Vec2 offset = Vec2::Zero();

  friend bool operator==(const InitialConditions&, const InitialConditions&) = default;
};

struct ObserverConfig {
  double smoothing_epsilon = 0.0;
  /// Sign of the anchor term in the flocking observer. +1 pulls the flagged
  /// agents' estimates toward v0; -1 is the alternative sign convention.
  double flocking_anchor_sign = 1.0;
  ObserverFrame frame = ObserverFrame::kBody;
  /// Flocking: v_f_hat(0). Intercept: v_T_hat(0) and e_T_hat(0). Zero when empty.
  std::vector<Vec2> initial_flocking_velocity;
  std::vector<Vec2> initial_target_velocity;
  std::vector<Vec2> initial_target_error;

  friend bool operator==(const ObserverConfig&, const ObserverConfig&) = default;
};

struct IntegrationConfig {
  double dt = 1e-3;
  double duration = 10.0;
  int sample_every = 10;

  friend bool operator==(const IntegrationConfig&, const IntegrationConfig&) = default;
};

struct Scenario {
  std::string name;
  Mode mode = Mode::kFlock;
  TargetFormation formation;

  /// Used when mode == kFlock.
  FlockingGains flocking;
  /// Bound on |dv0/dt|; taken from the file when given, otherwise from the
  /// reference model.
  double gamma0 = 0.0;
  /// Agents with direct access to v0 (1-based), flocking only.
  std::vector<NodeId> informed_agents;

  /// Used when mode == kIntercept.
  InterceptionGains interception;
  /// Differentiate v_T numerically for the leader instead of using a_T.
  bool numerical_target_acceleration = false;

  /// Flocking velocity source (flock) or target motion (intercept).
  TrajectoryModel reference;

  InitialConditions initial;
  ObserverConfig observer;
  IntegrationConfig integration;
  double settle_time = 20.0;
  /// "replication" or "repo_default"; copied into summary.json.
  std::string parameters_source = "repo_default";

  /// Non-fatal findings (gain bounds); not serialized.
  std::vector<std::string> warnings;

  int n() const { return formation.graph().n(); }
  NodeId leader() const { return n(); }
  /// b_i per agent (0-based index).
  std::vector<int> access_flags() const;
  const std::vector<double>& heading_gains() const {
    return mode == Mode::kFlock ? flocking.c : interception.c;
  }
  double shape_gain() const { return mode == Mode::kFlock ? flocking.k_a : interception.k_a; }

  friend bool operator==(const Scenario& a, const Scenario& b);
};

/// Explicit poses, or the seeded perturbation of the (offset) target
/// formation. Deterministic for a given scenario.
std::vector<Pose> initial_poses(const Scenario& s);

/// Parses and validates; throws ValidationError naming the offending field.
Scenario parse_scenario(const nlohmann::json& doc);

/// Reads a file, parses and validates it, and logs warnings to stderr.
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& s);

/// Framework from {"graph": {"n", "edges"}, "positions"}; also accepts a full
/// scenario document and uses its "formation" member.
Framework parse_framework(const nlohmann::json& doc);

Graph parse_graph(const nlohmann::json& doc, const std::string& pointer = "/graph");

/// The heuristic bound 2 max|v_T| + k_T |e_T(0)|.
double interception_error_bound_heuristic(double max_target_speed, double k_T, double initial_error_norm);

std::string to_string(Mode mode);

}  // namespace rigidflock
