#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigidflock/flocking.hpp"
#include "rigidflock/interception.hpp"
#include "rigidflock/scenario.hpp"
#include "rigidflock/unicycle.hpp"

namespace rigidflock {

/// A state became non-finite or left the |coordinate| <= 1e6 m box.
class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(NodeId agent, double time, const std::string& what);
  NodeId agent() const { return agent_; }
  double time() const { return time_; }

 private:
  NodeId agent_;
  double time_;
};

/// Ground truth. Observer estimates are stored in the inertial frame.
struct WorldState {
  std::size_t step = 0;
  double time = 0.0;
  std::vector<Pose> poses;
  /// Compensation terms of the summed position increments.
  std::vector<Vec2> position_carry;
  /// Flocking velocity estimates (flock mode).
  std::vector<Vec2> vf_hat;
  /// Target velocity and interception error estimates (intercept mode).
  std::vector<Vec2> vT_hat;
  std::vector<Vec2> eT_hat;
  /// theta_id from the previous evaluation, used to flag branch jumps.
  std::vector<std::optional<double>> last_theta_id;
  /// Previous target velocity, for the numerical-acceleration option.
  std::optional<Vec2> last_target_velocity;
  std::size_t heading_jumps = 0;
};

/// Everything agent i may use about neighbor j, in agent i's body frame.
struct NeighborMeasurement {
  NodeId id = 0;
  /// p_i - p_j
  Vec2 rel_position = Vec2::Zero();
  /// theta_i - theta_j, wrapped
  double rel_heading = 0.0;
  /// Communicated estimates.
  Vec2 vf_hat = Vec2::Zero();
  Vec2 vT_hat = Vec2::Zero();
  Vec2 eT_hat = Vec2::Zero();
};

/// Privileged target data, leader only.
struct TargetMeasurement {
  Vec2 e_target = Vec2::Zero();
  Vec2 v_target = Vec2::Zero();
  Vec2 a_target = Vec2::Zero();
};

/// Locality-restricted information for one agent. Every vector is expressed
/// in the agent's body frame; nothing here reveals global positions or
/// headings of other agents.
struct Measurement {
  NodeId agent = 0;
  int access_flag = 0;
  /// The agent's own observer states (its private memory).
  Vec2 own_vf_hat = Vec2::Zero();
  Vec2 own_vT_hat = Vec2::Zero();
  Vec2 own_eT_hat = Vec2::Zero();
  std::vector<NeighborMeasurement> neighbors;
  std::optional<Vec2> flocking_velocity;
  std::optional<TargetMeasurement> target;
  /// Own absolute heading, present only when observers run in the world frame.
  std::optional<double> compass_heading;
};

/// Per-agent output of the first control pass (agent body frame).
struct AgentPass1 {
  std::vector<NeighborGeometry> geometry;
  Vec2 u = Vec2::Zero();
  /// Desired heading relative to the agent's own heading; equals -theta_err.
  double theta_id_body = 0.0;
  double theta_err = 0.0;
  /// B(theta_err) u: the velocity shared with neighbors.
  Vec2 velocity = Vec2::Zero();
  Vec2 vf_hat_rate = Vec2::Zero();
  Vec2 vT_hat_rate = Vec2::Zero();
  Vec2 eT_hat_rate = Vec2::Zero();
};

/// Everything computed from one snapshot, in the inertial frame.
struct StepEvaluation {
  std::vector<ControlIntermediates> control;
  std::vector<VelocityCommand> commands;
  std::vector<Vec2> vf_hat_rate;
  std::vector<Vec2> vT_hat_rate;
  std::vector<Vec2> eT_hat_rate;
  std::optional<TargetState> target;
};

/// One logged sample (inertial frame).
struct SampleRow {
  double time = 0.0;
  std::vector<Pose> poses;
  std::vector<VelocityCommand> commands;
  std::vector<ControlIntermediates> control;
  std::vector<Vec2> vf_hat;
  std::vector<Vec2> vT_hat;
  std::vector<Vec2> eT_hat;
  std::optional<TargetState> target;
  /// Flocking velocity v0(t), flock mode.
  std::optional<Vec2> flocking_velocity;
};

struct MetricRow {
  double time = 0.0;
  /// |p_ij| - d_ij per edge, canonical order.
  std::vector<double> edge_errors;
  std::vector<double> theta_err;
  /// |v_f_hat_i - v0| (flock) or |v_T_hat_i - v_T| (intercept).
  std::vector<double> velocity_estimate_errors;
  /// |e_T_hat_i - e_T|, intercept only.
  std::vector<double> target_error_estimate_errors;
  double e_target_norm = 0.0;
  double z_norm = 0.0;
  double shape_distance = 0.0;
  bool hull_contains = false;
};

struct TrajectoryLog {
  Mode mode = Mode::kFlock;
  Graph graph;
  std::uint64_t seed = 0;
  double dt = 0.0;
  int sample_every = 1;
  std::vector<SampleRow> samples;
  std::vector<MetricRow> metrics;
  std::size_t heading_jumps = 0;
};

struct Summary {
  double settle_time = 0.0;
  double initial_shape_distance = 0.0;
  double initial_z_norm = 0.0;
  double final_max_edge_error = 0.0;
  double max_edge_error_after_settle = 0.0;
  double final_max_heading_error = 0.0;
  double max_heading_error_after_settle = 0.0;
  double final_max_estimation_error = 0.0;
  double max_estimation_error_after_settle = 0.0;
  double final_shape_distance = 0.0;
  std::optional<double> final_e_target_norm;
  std::optional<double> max_e_target_norm_after_settle;
  std::optional<bool> final_hull_contains;
  std::optional<bool> hull_contains_after_settle;
};

/// Initial poses and observer states from the scenario.
WorldState initial_world(const Scenario& scenario);

/// Measurement for agent i (1-based) under assumptions of relative sensing
/// and neighbor-only communication.
Measurement measure(const WorldState& world, NodeId i, const Scenario& scenario);

/// First pass for one agent: geometry, u, heading error, observer rates.
AgentPass1 control_pass1(const Measurement& m, const Scenario& scenario);

/// Second pass: u_dot, theta_id_dot and the command. `neighbor_velocities`
/// holds B(theta_err_j) u_j for each entry of m.neighbors, in agent i's frame.
ControlIntermediates control_pass2(const Measurement& m, const AgentPass1& own,
                                   std::span<const Vec2> neighbor_velocities, const Scenario& scenario,
                                   VelocityCommand& command);

/// Evaluates all agents on the snapshot without advancing it.
StepEvaluation evaluate(const WorldState& world, const Scenario& scenario);

/// Euler-integrates poses and observers with a precomputed evaluation.
WorldState advance(const WorldState& world, const StepEvaluation& eval, const Scenario& scenario, double dt);

/// evaluate + advance. Throws SimulationDiverged.
WorldState step_world(const WorldState& world, const Scenario& scenario, double dt);

/// Metrics for one state and its evaluation.
MetricRow compute_metrics(const WorldState& world, const StepEvaluation& eval, const Scenario& scenario);

/// Runs for integration.duration, sampling every sample_every steps
/// (including t = 0 and the final step).
TrajectoryLog run(const Scenario& scenario);
TrajectoryLog run(const Scenario& scenario, const WorldState& initial);

Summary metrics(const TrajectoryLog& log, double settle_time);

}  // namespace rigidflock
