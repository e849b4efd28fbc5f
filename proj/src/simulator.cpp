#include "rigidflock/simulator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <spdlog/spdlog.h>

#include "log.hpp"
#include "rigidflock/observers.hpp"
#include "rigidflock/rigidity.hpp"

namespace rigidflock {

namespace {

constexpr double kDivergenceBound = 1e6;

std::string describe_divergence(NodeId agent, double time, const std::string& what) {
  std::ostringstream os;
  os << "simulation diverged: agent " << agent << " at t = " << time << " s (" << what << ")";
  return os.str();
}

/// World-frame reference signals at the snapshot time.
struct References {
  std::optional<Vec2> flocking_velocity;
  std::optional<TargetState> target;
};

References references_at(const WorldState& world, const Scenario& s) {
  References r;
  const TrajectorySample ref = sample(s.reference, world.time);
  if (s.mode == Mode::kFlock) {
    r.flocking_velocity = ref.v;
  } else {
    TargetState t{ref.p, ref.v, ref.a};
    if (s.numerical_target_acceleration) {
      t.a = world.last_target_velocity && world.step > 0
                ? Vec2((ref.v - *world.last_target_velocity) / s.integration.dt)
                : Vec2::Zero();
    }
    r.target = t;
  }
  return r;
}

Measurement measure_with(const WorldState& world, NodeId i, const Scenario& s, const References& refs) {
  const Graph& g = s.formation.graph();
  const Pose& self = world.poses[i - 1];
  const Mat2 to_local = rotation(-self.theta);

  Measurement m;
  m.agent = i;
  m.access_flag = s.access_flags()[i - 1];
  if (s.observer.frame == ObserverFrame::kWorld) m.compass_heading = self.theta;

  const bool flock = s.mode == Mode::kFlock;
  if (flock) {
    m.own_vf_hat = to_local * world.vf_hat[i - 1];
  } else {
    m.own_vT_hat = to_local * world.vT_hat[i - 1];
    m.own_eT_hat = to_local * world.eT_hat[i - 1];
  }

  for (NodeId j : g.neighbors(i)) {
    const Pose& other = world.poses[j - 1];
    NeighborMeasurement nb;
    nb.id = j;
    nb.rel_position = to_local * (self.position() - other.position());
    nb.rel_heading = wrap_angle(self.theta - other.theta);
    if (flock) {
      nb.vf_hat = to_local * world.vf_hat[j - 1];
    } else {
      nb.vT_hat = to_local * world.vT_hat[j - 1];
      nb.eT_hat = to_local * world.eT_hat[j - 1];
    }
    m.neighbors.push_back(nb);
  }

  if (m.access_flag == 1) {
    if (flock) {
      m.flocking_velocity = to_local * *refs.flocking_velocity;
    } else {
      const TargetState& t = *refs.target;
      m.target = TargetMeasurement{to_local * interception_error(t.p, self.position()), to_local * t.v, to_local * t.a};
    }
  }
  return m;
}

/// Signum observer update evaluated in the agent's body frame, or in the
/// world frame when a compass heading is supplied.
Vec2 local_observer_rate(const Measurement& m, const Vec2& own, const std::vector<Vec2>& neighbor_estimates,
                         const std::optional<Vec2>& anchor_term, double alpha, const ObserverOptions& options) {
  if (!m.compass_heading) return observer_rate(own, neighbor_estimates, anchor_term, alpha, options);
  const Mat2 to_world = rotation(*m.compass_heading);
  std::vector<Vec2> world_neighbors;
  for (const Vec2& e : neighbor_estimates) world_neighbors.push_back(to_world * e);
  std::optional<Vec2> world_anchor;
  if (anchor_term) world_anchor = to_world * *anchor_term;
  return to_world.transpose() * observer_rate(to_world * own, world_neighbors, world_anchor, alpha, options);
}

void check_finite(const Vec2& v, NodeId agent, double time, const char* what) {
  if (!v.allFinite() || v.cwiseAbs().maxCoeff() > kDivergenceBound) throw SimulationDiverged(agent, time, what);
}

}  // namespace

SimulationDiverged::SimulationDiverged(NodeId agent, double time, const std::string& what)
    : std::runtime_error(describe_divergence(agent, time, what)), agent_(agent), time_(time) {}

WorldState initial_world(const Scenario& s) {
  WorldState w;
  w.poses = initial_poses(s);
  const auto n = static_cast<std::size_t>(s.n());
  if (s.mode == Mode::kFlock) {
    w.vf_hat = s.observer.initial_flocking_velocity;
    if (w.vf_hat.empty()) w.vf_hat.assign(n, Vec2::Zero());
  } else {
    w.vT_hat = s.observer.initial_target_velocity;
    w.eT_hat = s.observer.initial_target_error;
    if (w.vT_hat.empty()) w.vT_hat.assign(n, Vec2::Zero());
    if (w.eT_hat.empty()) w.eT_hat.assign(n, Vec2::Zero());
    w.vT_hat.back() = sample(s.reference, 0.0).v;
  }
  w.last_theta_id.assign(n, std::nullopt);
  w.position_carry.assign(n, Vec2::Zero());
  return w;
}

Measurement measure(const WorldState& world, NodeId i, const Scenario& s) {
  if (i < 1 || i > s.n()) throw InputError("agent id out of range");
  return measure_with(world, i, s, references_at(world, s));
}

AgentPass1 control_pass1(const Measurement& m, const Scenario& s) {
  const Graph& g = s.formation.graph();
  const NodeId i = m.agent;
  AgentPass1 out;
  for (const NeighborMeasurement& nb : m.neighbors) {
    const double d = s.formation.distances()[g.edge_index(i, nb.id)];
    out.geometry.push_back({nb.rel_position, nb.rel_position.squaredNorm() - d * d});
  }

  if (s.mode == Mode::kFlock) {
    const auto& gains = s.flocking;
    out.u = control_u(out.geometry, m.own_vf_hat, gains.k_a);

    std::vector<Vec2> estimates;
    for (const auto& nb : m.neighbors) estimates.push_back(nb.vf_hat);
    std::optional<Vec2> anchor;
    if (m.access_flag == 1) anchor = m.own_vf_hat - *m.flocking_velocity;
    const ObserverOptions opts{s.observer.flocking_anchor_sign, AnchorMode::kSelf, s.observer.smoothing_epsilon};
    out.vf_hat_rate = local_observer_rate(m, m.own_vf_hat, estimates, anchor, gains.alpha, opts);
  } else {
    const auto& gains = s.interception;
    const int n = s.n();
    if (i == n) {
      out.u = leader_u(m.target->e_target, m.target->v_target, gains.k_T);
    } else {
      out.u = follower_u(i, n, out.geometry, m.own_eT_hat, m.own_vT_hat, gains.k_a, gains.k_T);
    }

    std::vector<Vec2> v_estimates;
    std::vector<Vec2> e_estimates;
    for (const auto& nb : m.neighbors) {
      v_estimates.push_back(nb.vT_hat);
      e_estimates.push_back(nb.eT_hat);
    }
    // Only the leader is flagged, so the leader's estimate is the agent's own.
    std::optional<Vec2> v_anchor;
    std::optional<Vec2> e_anchor;
    if (m.access_flag == 1) {
      v_anchor = m.own_vT_hat - m.target->v_target;
      e_anchor = m.own_eT_hat - m.target->e_target;
    }
    const ObserverOptions opts{1.0, AnchorMode::kLeader, s.observer.smoothing_epsilon};
    out.vT_hat_rate = local_observer_rate(m, m.own_vT_hat, v_estimates, v_anchor, gains.alpha1, opts);
    out.eT_hat_rate = local_observer_rate(m, m.own_eT_hat, e_estimates, e_anchor, gains.alpha2, opts);
  }

  // Body frame: the agent's own heading is 0.
  out.theta_id_body = desired_heading(out.u);
  out.theta_err = wrap_angle(-out.theta_id_body);
  out.velocity = b_matrix(out.theta_err) * out.u;
  return out;
}

ControlIntermediates control_pass2(const Measurement& m, const AgentPass1& own,
                                   std::span<const Vec2> neighbor_velocities, const Scenario& s,
                                   VelocityCommand& command) {
  ControlIntermediates ci;
  ci.u = own.u;
  ci.theta_id = own.theta_id_body;
  ci.theta_err = own.theta_err;

  if (s.mode == Mode::kFlock) {
    ci.u_dot = u_dot(own.geometry, own.velocity, neighbor_velocities, own.vf_hat_rate, s.flocking.k_a);
  } else {
    const auto& gains = s.interception;
    if (m.agent == s.n()) {
      const Vec2 e_dot = interception_error_rate(m.target->e_target, m.target->v_target, own.theta_err, gains.k_T);
      ci.u_dot = leader_u_dot(e_dot, m.target->a_target, gains.k_T);
    } else {
      ci.u_dot = follower_u_dot(m.agent, s.n(), own.geometry, own.velocity, neighbor_velocities, own.eT_hat_rate,
                                own.vT_hat_rate, gains.k_a, gains.k_T);
    }
  }
  ci.theta_id_dot = desired_heading_rate(ci.u, ci.u_dot);
  command = velocity_command(ci.u, 0.0, ci.theta_id, ci.theta_id_dot, s.heading_gains()[m.agent - 1]);
  return ci;
}

StepEvaluation evaluate(const WorldState& world, const Scenario& s) {
  const int n = s.n();
  const References refs = references_at(world, s);

  std::vector<Measurement> measurements;
  std::vector<AgentPass1> pass1;
  measurements.reserve(n);
  pass1.reserve(n);
  for (NodeId i = 1; i <= n; ++i) {
    measurements.push_back(measure_with(world, i, s, refs));
    pass1.push_back(control_pass1(measurements.back(), s));
  }

  StepEvaluation eval;
  eval.target = refs.target;
  eval.control.resize(n);
  eval.commands.resize(n);
  const bool flock = s.mode == Mode::kFlock;
  (flock ? eval.vf_hat_rate : eval.vT_hat_rate).resize(n);
  if (!flock) eval.eT_hat_rate.resize(n);

  for (NodeId i = 1; i <= n; ++i) {
    const Measurement& m = measurements[i - 1];
    // Neighbor j communicates B(theta_err_j) u_j in its own frame; agent i
    // re-expresses it using the measured relative heading.
    std::vector<Vec2> neighbor_velocities;
    for (const auto& nb : m.neighbors) neighbor_velocities.push_back(rotation(-nb.rel_heading) * pass1[nb.id - 1].velocity);

    VelocityCommand cmd;
    ControlIntermediates ci = control_pass2(m, pass1[i - 1], neighbor_velocities, s, cmd);

    const double heading = world.poses[i - 1].theta;
    const Mat2 to_world = rotation(heading);
    ci.u = to_world * ci.u;
    ci.u_dot = to_world * ci.u_dot;
    ci.theta_id = wrap_angle(heading + ci.theta_id);
    eval.control[i - 1] = ci;
    eval.commands[i - 1] = cmd;
    if (flock) {
      eval.vf_hat_rate[i - 1] = to_world * pass1[i - 1].vf_hat_rate;
    } else {
      eval.vT_hat_rate[i - 1] = to_world * pass1[i - 1].vT_hat_rate;
      eval.eT_hat_rate[i - 1] = to_world * pass1[i - 1].eT_hat_rate;
    }
  }
  return eval;
}

WorldState advance(const WorldState& world, const StepEvaluation& eval, const Scenario& s, double dt) {
  WorldState next = world;
  next.step = world.step + 1;
  next.time = s.integration.dt == dt ? static_cast<double>(next.step) * dt : world.time + dt;

  const int n = s.n();
  if (next.position_carry.size() != static_cast<std::size_t>(n)) next.position_carry.assign(n, Vec2::Zero());
  for (int k = 0; k < n; ++k) {
    const NodeId agent = k + 1;
    const double theta_id = eval.control[k].theta_id;
    if (world.last_theta_id[k] && std::abs(wrap_angle(theta_id - *world.last_theta_id[k])) > std::numbers::pi / 2) {
      ++next.heading_jumps;
      detail::logger().debug("desired heading of agent {} jumped by more than pi/2 at t = {} s", agent, world.time);
    }
    next.last_theta_id[k] = theta_id;

    // Kahan summation keeps far-from-origin positions from drifting by
    // one rounding error per step.
    const Pose& prev = world.poses[k];
    const Pose moved = step(prev, eval.commands[k], dt);
    Vec2& carry = next.position_carry[k];
    const double v = eval.commands[k].v;
    const Vec2 corrected = Vec2(v * std::cos(prev.theta) * dt, v * std::sin(prev.theta) * dt) - carry;
    const Vec2 sum = prev.position() + corrected;
    carry = (sum - prev.position()) - corrected;
    next.poses[k] = {sum.x(), sum.y(), moved.theta};
    const Pose& p = next.poses[k];
    check_finite(Vec2(p.x, p.y), agent, next.time, "position");
    if (!std::isfinite(p.theta)) throw SimulationDiverged(agent, next.time, "heading");

    if (s.mode == Mode::kFlock) {
      next.vf_hat[k] += eval.vf_hat_rate[k] * dt;
      check_finite(next.vf_hat[k], agent, next.time, "flocking velocity estimate");
    } else {
      next.vT_hat[k] += eval.vT_hat_rate[k] * dt;
      next.eT_hat[k] += eval.eT_hat_rate[k] * dt;
      check_finite(next.vT_hat[k], agent, next.time, "target velocity estimate");
      check_finite(next.eT_hat[k], agent, next.time, "interception error estimate");
    }
  }
  if (eval.target) next.last_target_velocity = eval.target->v;
  return next;
}

WorldState step_world(const WorldState& world, const Scenario& s, double dt) {
  if (!(dt > 0.0)) throw InputError("integration step must be positive");
  return advance(world, evaluate(world, s), s, dt);
}

MetricRow compute_metrics(const WorldState& world, const StepEvaluation& eval, const Scenario& s) {
  const int n = s.n();
  Points positions;
  for (const Pose& p : world.poses) positions.push_back(p.position());

  MetricRow row;
  row.time = world.time;
  const auto& edges = s.formation.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    row.edge_errors.push_back((positions[edges[k].i - 1] - positions[edges[k].j - 1]).norm() -
                              s.formation.distances()[k]);
  }
  for (const auto& ci : eval.control) row.theta_err.push_back(ci.theta_err);
  row.z_norm = distance_errors(positions, s.formation).norm();
  row.shape_distance = shape_distance(positions, s.formation);

  const TrajectorySample ref = sample(s.reference, world.time);
  if (s.mode == Mode::kFlock) {
    for (int k = 0; k < n; ++k) row.velocity_estimate_errors.push_back((world.vf_hat[k] - ref.v).norm());
  } else {
    const Vec2 e_target = interception_error(ref.p, positions.back());
    row.e_target_norm = e_target.norm();
    for (int k = 0; k < n; ++k) {
      row.velocity_estimate_errors.push_back((world.vT_hat[k] - ref.v).norm());
      row.target_error_estimate_errors.push_back((world.eT_hat[k] - e_target).norm());
    }
    row.hull_contains = convex_hull_contains(std::span<const Vec2>(positions.data(), positions.size() - 1), ref.p);
  }
  return row;
}

namespace {
SampleRow make_sample(const WorldState& world, const StepEvaluation& eval, const Scenario& s) {
  SampleRow row;
  row.time = world.time;
  row.poses = world.poses;
  row.commands = eval.commands;
  row.control = eval.control;
  row.vf_hat = world.vf_hat;
  row.vT_hat = world.vT_hat;
  row.eT_hat = world.eT_hat;
  row.target = eval.target;
  if (s.mode == Mode::kFlock) row.flocking_velocity = sample(s.reference, world.time).v;
  return row;
}
}  // namespace

TrajectoryLog run(const Scenario& s) { return run(s, initial_world(s)); }

TrajectoryLog run(const Scenario& s, const WorldState& initial) {
  const double dt = s.integration.dt;
  const auto steps = static_cast<std::size_t>(std::llround(s.integration.duration / dt));
  const auto every = static_cast<std::size_t>(s.integration.sample_every);

  TrajectoryLog log;
  log.mode = s.mode;
  log.graph = s.formation.graph();
  log.seed = s.initial.seed;
  log.dt = dt;
  log.sample_every = s.integration.sample_every;

  WorldState world = initial;
  for (std::size_t k = 0;; ++k) {
    const StepEvaluation eval = evaluate(world, s);
    if (k % every == 0) {
      log.samples.push_back(make_sample(world, eval, s));
      log.metrics.push_back(compute_metrics(world, eval, s));
    }
    if (k == steps) break;
    world = advance(world, eval, s, dt);
  }
  log.heading_jumps = world.heading_jumps;
  return log;
}

Summary metrics(const TrajectoryLog& log, double settle_time) {
  Summary sum;
  sum.settle_time = settle_time;
  if (log.metrics.empty()) return sum;

  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  const bool intercept = log.mode == Mode::kIntercept;
  const MetricRow& first = log.metrics.front();
  const MetricRow& last = log.metrics.back();
  sum.initial_shape_distance = first.shape_distance;
  sum.initial_z_norm = first.z_norm;
  sum.final_max_edge_error = max_abs(last.edge_errors);
  sum.final_max_heading_error = max_abs(last.theta_err);
  sum.final_max_estimation_error =
      std::max(max_abs(last.velocity_estimate_errors), max_abs(last.target_error_estimate_errors));
  sum.final_shape_distance = last.shape_distance;

  double max_e_target = 0.0;
  bool hull_all = true;
  for (const MetricRow& row : log.metrics) {
    if (row.time < settle_time - 1e-9) continue;
    sum.max_edge_error_after_settle = std::max(sum.max_edge_error_after_settle, max_abs(row.edge_errors));
    sum.max_heading_error_after_settle = std::max(sum.max_heading_error_after_settle, max_abs(row.theta_err));
    sum.max_estimation_error_after_settle =
        std::max({sum.max_estimation_error_after_settle, max_abs(row.velocity_estimate_errors),
                  max_abs(row.target_error_estimate_errors)});
    max_e_target = std::max(max_e_target, row.e_target_norm);
    hull_all = hull_all && row.hull_contains;
  }
  if (intercept) {
    sum.final_e_target_norm = last.e_target_norm;
    sum.max_e_target_norm_after_settle = max_e_target;
    sum.final_hull_contains = last.hull_contains;
    sum.hull_contains_after_settle = hull_all;
  }
  return sum;
}

}  // namespace rigidflock
