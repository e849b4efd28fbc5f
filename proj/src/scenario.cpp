#include "rigidflock/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "log.hpp"
#include "rigidflock/observers.hpp"

namespace rigidflock {

using nlohmann::json;

namespace {

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

const json& require(const json& obj, const std::string& key, const std::string& ptr) {
  if (!obj.is_object()) throw ValidationError(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(child(ptr, key), "missing required field");
  return *it;
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw ValidationError(ptr, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(ptr, "must be finite");
  return x;
}

double number(const json& obj, const std::string& key, const std::string& ptr) {
  return as_number(require(obj, key, ptr), child(ptr, key));
}

double number_or(const json& obj, const std::string& key, const std::string& ptr, double fallback) {
  const json* v = find(obj, key);
  return v ? as_number(*v, child(ptr, key)) : fallback;
}

double positive(const json& obj, const std::string& key, const std::string& ptr) {
  const double x = number(obj, key, ptr);
  if (!(x > 0.0)) throw ValidationError(child(ptr, key), "must be positive");
  return x;
}

int integer(const json& v, const std::string& ptr) {
  if (!v.is_number_integer()) throw ValidationError(ptr, "expected an integer");
  return v.get<int>();
}

Vec2 as_vec2(const json& v, const std::string& ptr) {
  if (!v.is_array() || v.size() != 2) throw ValidationError(ptr, "expected [x, y]");
  return {as_number(v[0], child(ptr, 0)), as_number(v[1], child(ptr, 1))};
}

Vec2 vec2_or(const json& obj, const std::string& key, const std::string& ptr, const Vec2& fallback) {
  const json* v = find(obj, key);
  return v ? as_vec2(*v, child(ptr, key)) : fallback;
}

std::vector<Vec2> vec2_list(const json& v, const std::string& ptr, std::size_t expected) {
  if (!v.is_array()) throw ValidationError(ptr, "expected an array of [x, y]");
  if (v.size() != expected) {
    throw ValidationError(ptr, "expected " + std::to_string(expected) + " entries, got " + std::to_string(v.size()));
  }
  std::vector<Vec2> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_vec2(v[k], child(ptr, k)));
  return out;
}

json to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

json to_json(const std::vector<Vec2>& vs) {
  json out = json::array();
  for (const Vec2& v : vs) out.push_back(to_json(v));
  return out;
}

TrajectoryModel parse_trajectory(const json& doc, const std::string& ptr) {
  const json& kind_node = require(doc, "kind", ptr);
  if (!kind_node.is_string()) throw ValidationError(child(ptr, "kind"), "expected a string");
  const std::string kind = kind_node.get<std::string>();
  if (kind == "circle") {
    CircleTrajectory c;
    c.center = vec2_or(doc, "center_m", ptr, Vec2::Zero());
    c.radius = positive(doc, "radius_m", ptr);
    c.omega = number(doc, "omega_radps", ptr);
    c.phase = number_or(doc, "phase_rad", ptr, 0.0);
    return c;
  }
  if (kind == "line") {
    LineTrajectory l;
    l.start = vec2_or(doc, "start_m", ptr, Vec2::Zero());
    l.velocity = as_vec2(require(doc, "velocity_mps", ptr), child(ptr, "velocity_mps"));
    return l;
  }
  if (kind == "sine") {
    SineTrajectory s;
    s.start = vec2_or(doc, "start_m", ptr, Vec2::Zero());
    s.speed = number(doc, "speed_mps", ptr);
    s.amplitude = number(doc, "amplitude_m", ptr);
    s.omega = number(doc, "omega_radps", ptr);
    return s;
  }
  if (kind == "waypoints") {
    WaypointTrajectory w;
    const std::string pts_ptr = child(ptr, "points");
    const json& pts = require(doc, "points", ptr);
    if (!pts.is_array() || pts.empty()) throw ValidationError(pts_ptr, "expected a non-empty array of [t_s, x_m, y_m]");
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const std::string p = child(pts_ptr, k);
      if (!pts[k].is_array() || pts[k].size() != 3) throw ValidationError(p, "expected [t_s, x_m, y_m]");
      WaypointTrajectory::Waypoint wp{as_number(pts[k][0], child(p, 0)),
                                      {as_number(pts[k][1], child(p, 1)), as_number(pts[k][2], child(p, 2))}};
      if (!w.points.empty() && !(wp.t > w.points.back().t)) throw ValidationError(child(p, 0), "times must increase");
      w.points.push_back(wp);
    }
    return w;
  }
  throw ValidationError(child(ptr, "kind"), "unknown trajectory kind '" + kind + "'");
}

json trajectory_to_json(const TrajectoryModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CircleTrajectory>) {
          return {{"kind", "circle"}, {"center_m", to_json(m.center)}, {"radius_m", m.radius},
                  {"omega_radps", m.omega}, {"phase_rad", m.phase}};
        } else if constexpr (std::is_same_v<T, LineTrajectory>) {
          return {{"kind", "line"}, {"start_m", to_json(m.start)}, {"velocity_mps", to_json(m.velocity)}};
        } else if constexpr (std::is_same_v<T, SineTrajectory>) {
          return {{"kind", "sine"},         {"start_m", to_json(m.start)}, {"speed_mps", m.speed},
                  {"amplitude_m", m.amplitude}, {"omega_radps", m.omega}};
        } else {
          json pts = json::array();
          for (const auto& wp : m.points) pts.push_back(json::array({wp.t, wp.p.x(), wp.p.y()}));
          return {{"kind", "waypoints"}, {"points", pts}};
        }
      },
      model);
}

std::vector<double> heading_gains(const json& gains, const std::string& ptr, int n) {
  const json& c = require(gains, "c", ptr);
  const std::string c_ptr = child(ptr, "c");
  std::vector<double> out;
  if (c.is_array()) {
    if (static_cast<int>(c.size()) != n) throw ValidationError(c_ptr, "expected one heading gain per agent");
    for (std::size_t k = 0; k < c.size(); ++k) out.push_back(as_number(c[k], child(c_ptr, k)));
  } else {
    out.assign(static_cast<std::size_t>(n), as_number(c, c_ptr));
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!(out[k] > 0.0)) throw ValidationError(c.is_array() ? child(c_ptr, k) : c_ptr, "must be positive");
  }
  return out;
}

json heading_gains_to_json(const std::vector<double>& c) {
  if (!c.empty() && std::all_of(c.begin(), c.end(), [&](double x) { return x == c.front(); })) return c.front();
  return c;
}

std::vector<Vec2> estimates_or_zero(const json& obs, const std::string& key, const std::string& ptr, int n) {
  const json* v = find(obs, key);
  if (!v) return std::vector<Vec2>(static_cast<std::size_t>(n), Vec2::Zero());
  return vec2_list(*v, child(ptr, key), static_cast<std::size_t>(n));
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::kFlock ? "flock" : "intercept"; }

std::vector<int> Scenario::access_flags() const {
  std::vector<int> b(static_cast<std::size_t>(n()), 0);
  if (mode == Mode::kFlock) {
    for (NodeId i : informed_agents) b[i - 1] = 1;
  } else {
    b[leader() - 1] = 1;
  }
  return b;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.name == b.name && a.mode == b.mode && a.formation.framework().graph == b.formation.framework().graph &&
         a.formation.positions() == b.formation.positions() && a.formation.distances() == b.formation.distances() &&
         a.flocking == b.flocking && a.gamma0 == b.gamma0 && a.informed_agents == b.informed_agents &&
         a.interception == b.interception && a.numerical_target_acceleration == b.numerical_target_acceleration &&
         a.reference == b.reference && a.initial == b.initial && a.observer == b.observer &&
         a.integration == b.integration && a.settle_time == b.settle_time &&
         a.parameters_source == b.parameters_source;
}

Graph parse_graph(const json& doc, const std::string& ptr) {
  const json& n_node = require(doc, "n", ptr);
  const int n = integer(n_node, child(ptr, "n"));
  if (n < 1) throw ValidationError(child(ptr, "n"), "must be at least 1");
  const json& edges = require(doc, "edges", ptr);
  const std::string edges_ptr = child(ptr, "edges");
  if (!edges.is_array()) throw ValidationError(edges_ptr, "expected an array of [i, j]");
  std::vector<std::pair<NodeId, NodeId>> list;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string p = child(edges_ptr, k);
    if (!edges[k].is_array() || edges[k].size() != 2) throw ValidationError(p, "expected [i, j]");
    list.emplace_back(integer(edges[k][0], child(p, 0)), integer(edges[k][1], child(p, 1)));
  }
  try {
    return Graph(n, std::move(list));
  } catch (const InputError& e) {
    throw ValidationError(edges_ptr, e.what());
  }
}

Framework parse_framework(const json& doc) {
  const json& body = doc.contains("formation") ? doc["formation"] : doc;
  const std::string ptr = doc.contains("formation") ? "/formation" : "";
  Graph g = parse_graph(require(body, "graph", ptr), child(ptr, "graph"));
  const auto positions = vec2_list(require(body, "positions", ptr), child(ptr, "positions"),
                                   static_cast<std::size_t>(g.n()));
  return Framework(std::move(g), positions);
}

std::vector<Pose> initial_poses(const Scenario& s) {
  if (s.initial.poses) return *s.initial.poses;
  std::mt19937_64 rng(s.initial.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Pose> poses;
  for (const Vec2& target : s.formation.positions()) {
    const double r = s.initial.perturbation_radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const double heading = wrap_angle(std::numbers::pi * (2.0 * unit(rng) - 1.0));
    const Vec2 p = target + s.initial.offset + r * Vec2(std::cos(phi), std::sin(phi));
    poses.push_back({p.x(), p.y(), heading});
  }
  return poses;
}

double interception_error_bound_heuristic(double max_target_speed, double k_T, double initial_error_norm) {
  return 2.0 * max_target_speed + k_T * initial_error_norm;
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) throw ValidationError("", "scenario must be a JSON object");
  Scenario s;
  if (const json* name = find(doc, "name"); name && name->is_string()) s.name = name->get<std::string>();
  if (const json* src = find(doc, "parameters_source")) {
    if (!src->is_string()) throw ValidationError("/parameters_source", "expected a string");
    s.parameters_source = src->get<std::string>();
  }

  const json& mode = require(doc, "mode", "");
  if (mode == "flock") {
    s.mode = Mode::kFlock;
  } else if (mode == "intercept") {
    s.mode = Mode::kIntercept;
  } else {
    throw ValidationError("/mode", "must be \"flock\" or \"intercept\"");
  }

  // Formation
  {
    const json& f = require(doc, "formation", "");
    Framework framework = parse_framework(json{{"formation", f}});
    std::optional<std::vector<double>> distances;
    if (const json* d = find(f, "distances")) {
      if (!d->is_array()) throw ValidationError("/formation/distances", "expected an array");
      distances.emplace();
      for (std::size_t k = 0; k < d->size(); ++k) {
        distances->push_back(as_number((*d)[k], child("/formation/distances", k)));
      }
    }
    try {
      s.formation = TargetFormation(std::move(framework), distances ? &*distances : nullptr);
    } catch (const InputError& e) {
      throw ValidationError(distances ? "/formation/distances" : "/formation/positions", e.what());
    }
  }
  const int n = s.n();

  if (const json* leader = find(doc, "leader")) {
    if (s.mode != Mode::kIntercept) throw ValidationError("/leader", "only meaningful in intercept mode");
    if (integer(*leader, "/leader") != n) {
      throw ValidationError("/leader", "the leader must be agent n = " + std::to_string(n));
    }
  }

  const json& gains = require(doc, "gains", "");
  if (s.mode == Mode::kFlock) {
    s.flocking.k_a = positive(gains, "k_a", "/gains");
    s.flocking.c = heading_gains(gains, "/gains", n);
    s.flocking.alpha = positive(gains, "alpha", "/gains");
  } else {
    s.interception.k_a = positive(gains, "k_a", "/gains");
    s.interception.c = heading_gains(gains, "/gains", n);
    s.interception.k_T = positive(gains, "k_T", "/gains");
    s.interception.alpha1 = positive(gains, "alpha1", "/gains");
    s.interception.alpha2 = positive(gains, "alpha2", "/gains");
  }

  if (s.mode == Mode::kFlock) {
    s.reference = parse_trajectory(require(doc, "flocking_velocity", ""), "/flocking_velocity");
    s.gamma0 = number_or(gains, "gamma0", "/gains", acceleration_bound(s.reference));
    if (s.gamma0 < 0.0) throw ValidationError("/gains/gamma0", "must be non-negative");
    const json& informed = require(doc, "informed_agents", "");
    if (!informed.is_array() || informed.empty()) {
      throw ValidationError("/informed_agents", "at least one agent must know the flocking velocity");
    }
    for (std::size_t k = 0; k < informed.size(); ++k) {
      const int id = integer(informed[k], child("/informed_agents", k));
      if (id < 1 || id > n) throw ValidationError(child("/informed_agents", k), "agent id out of range");
      s.informed_agents.push_back(id);
    }
    std::sort(s.informed_agents.begin(), s.informed_agents.end());
    s.informed_agents.erase(std::unique(s.informed_agents.begin(), s.informed_agents.end()), s.informed_agents.end());
  } else {
    s.reference = parse_trajectory(require(doc, "target", ""), "/target");
    if (const json* v = find(doc, "numerical_target_acceleration")) {
      if (!v->is_boolean()) throw ValidationError("/numerical_target_acceleration", "expected a boolean");
      s.numerical_target_acceleration = v->get<bool>();
    }
    Points followers(s.formation.positions().begin(), s.formation.positions().end() - 1);
    if (!convex_hull_contains(followers, s.formation.positions().back(), 1e-9)) {
      throw ValidationError("/formation/positions",
                            "the leader's desired position must lie in the convex hull of the followers'");
    }
  }

  // Initial conditions
  if (const json* init = find(doc, "initial")) {
    if (const json* poses = find(*init, "poses")) {
      if (!poses->is_array() || static_cast<int>(poses->size()) != n) {
        throw ValidationError("/initial/poses", "expected one [x_m, y_m, theta_rad] per agent");
      }
      std::vector<Pose> list;
      for (std::size_t k = 0; k < poses->size(); ++k) {
        const std::string p = child("/initial/poses", k);
        const json& e = (*poses)[k];
        if (!e.is_array() || e.size() != 3) throw ValidationError(p, "expected [x_m, y_m, theta_rad]");
        list.push_back({as_number(e[0], child(p, 0)), as_number(e[1], child(p, 1)),
                        wrap_angle(as_number(e[2], child(p, 2)))});
      }
      s.initial.poses = std::move(list);
    }
    if (const json* seed = find(*init, "seed")) {
      if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long long>() >= 0)) {
        throw ValidationError("/initial/seed", "expected a non-negative integer");
      }
      s.initial.seed = seed->get<std::uint64_t>();
    }
    s.initial.perturbation_radius = number_or(*init, "perturbation_radius_m", "/initial", 0.0);
    if (s.initial.perturbation_radius < 0.0) {
      throw ValidationError("/initial/perturbation_radius_m", "must be non-negative");
    }
    s.initial.offset = vec2_or(*init, "offset_m", "/initial", Vec2::Zero());
  }

  // Observer options
  const json empty = json::object();
  const json* obs = find(doc, "observer");
  if (obs && !obs->is_object()) throw ValidationError("/observer", "expected an object");
  const json& o = obs ? *obs : empty;
  s.observer.smoothing_epsilon = number_or(o, "smoothing_epsilon", "/observer", 0.0);
  if (s.observer.smoothing_epsilon < 0.0) throw ValidationError("/observer/smoothing_epsilon", "must be non-negative");
  s.observer.flocking_anchor_sign = number_or(o, "flocking_anchor_sign", "/observer", 1.0);
  if (s.observer.flocking_anchor_sign != 1.0 && s.observer.flocking_anchor_sign != -1.0) {
    throw ValidationError("/observer/flocking_anchor_sign", "must be +1 or -1");
  }
  if (const json* frame = find(o, "frame")) {
    if (*frame == "body") {
      s.observer.frame = ObserverFrame::kBody;
    } else if (*frame == "world") {
      s.observer.frame = ObserverFrame::kWorld;
    } else {
      throw ValidationError("/observer/frame", "must be \"body\" or \"world\"");
    }
  }
  if (s.mode == Mode::kFlock) {
    s.observer.initial_flocking_velocity = estimates_or_zero(o, "initial_flocking_velocity", "/observer", n);
  } else {
    s.observer.initial_target_velocity = estimates_or_zero(o, "initial_target_velocity", "/observer", n);
    s.observer.initial_target_error = estimates_or_zero(o, "initial_target_error", "/observer", n);
    const Vec2 v_target0 = sample(s.reference, 0.0).v;
    Vec2& leader_estimate = s.observer.initial_target_velocity.back();
    if (find(o, "initial_target_velocity") && (leader_estimate - v_target0).norm() > 1e-12) {
      throw ValidationError(child("/observer/initial_target_velocity", static_cast<std::size_t>(n - 1)),
                            "the leader's target-velocity estimate must start at v_T(0)");
    }
    leader_estimate = v_target0;
  }

  // Integration
  if (const json* integ = find(doc, "integration")) {
    s.integration.dt = number_or(*integ, "dt_s", "/integration", s.integration.dt);
    s.integration.duration = number_or(*integ, "duration_s", "/integration", s.integration.duration);
    if (const json* se = find(*integ, "sample_every")) s.integration.sample_every = integer(*se, "/integration/sample_every");
  }
  if (!(s.integration.dt > 0.0)) throw ValidationError("/integration/dt_s", "must be positive");
  if (s.integration.duration < 0.0) throw ValidationError("/integration/duration_s", "must be non-negative");
  if (s.integration.sample_every < 1) throw ValidationError("/integration/sample_every", "must be at least 1");
  const auto& c = s.heading_gains();
  const double c_max = *std::max_element(c.begin(), c.end());
  if (!(s.integration.dt * c_max < 1.0)) {
    throw ValidationError("/integration/dt_s", "dt * max(c_i) must be below 1 for a stable heading loop");
  }

  if (const json* m = find(doc, "metrics")) {
    s.settle_time = number_or(*m, "settle_time_s", "/metrics", s.settle_time);
    if (s.settle_time < 0.0) throw ValidationError("/metrics/settle_time_s", "must be non-negative");
  }

  // Observer gain bounds: warnings only.
  if (s.mode == Mode::kFlock) {
    if (!gain_check(s.flocking.alpha, s.gamma0)) {
      s.warnings.push_back("gains.alpha = " + std::to_string(s.flocking.alpha) + " does not exceed gamma0 = " +
                           std::to_string(s.gamma0));
    }
  } else {
    auto& g = s.interception;
    g.gamma_T1 = number_or(gains, "gamma_T1", "/gains", acceleration_bound(s.reference));
    if (find(gains, "gamma_T2")) {
      g.gamma_T2 = number(gains, "gamma_T2", "/gains");
    } else {
      const Vec2 e0 = interception_error(sample(s.reference, 0.0).p, initial_poses(s).back().position());
      g.gamma_T2 = interception_error_bound_heuristic(speed_bound(s.reference), g.k_T, e0.norm());
    }
    if (!gain_check(g.alpha1, g.gamma_T1)) {
      s.warnings.push_back("gains.alpha1 = " + std::to_string(g.alpha1) + " does not exceed gamma_T1 = " +
                           std::to_string(g.gamma_T1));
    }
    if (!gain_check(g.alpha2, g.gamma_T2)) {
      s.warnings.push_back("gains.alpha2 = " + std::to_string(g.alpha2) + " does not exceed gamma_T2 = " +
                           std::to_string(g.gamma_T2));
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError(path.string() + ": " + e.what());
  }
  Scenario s = parse_scenario(doc);
  for (const auto& w : s.warnings) detail::logger().warn("{}: {}", path.string(), w);
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["mode"] = to_string(s.mode);
  doc["parameters_source"] = s.parameters_source;

  json edges = json::array();
  for (const Edge& e : s.formation.graph().edges()) edges.push_back(json::array({e.i, e.j}));
  doc["formation"] = {{"graph", {{"n", s.n()}, {"edges", edges}}},
                      {"positions", to_json(s.formation.positions())},
                      {"distances", s.formation.distances()}};

  if (s.mode == Mode::kFlock) {
    doc["gains"] = {{"k_a", s.flocking.k_a},
                    {"c", heading_gains_to_json(s.flocking.c)},
                    {"alpha", s.flocking.alpha},
                    {"gamma0", s.gamma0}};
    doc["informed_agents"] = s.informed_agents;
    doc["flocking_velocity"] = trajectory_to_json(s.reference);
  } else {
    const auto& g = s.interception;
    doc["leader"] = s.n();
    doc["gains"] = {{"k_a", g.k_a},       {"c", heading_gains_to_json(g.c)}, {"k_T", g.k_T},
                    {"alpha1", g.alpha1}, {"alpha2", g.alpha2},              {"gamma_T1", g.gamma_T1},
                    {"gamma_T2", g.gamma_T2}};
    doc["target"] = trajectory_to_json(s.reference);
    doc["numerical_target_acceleration"] = s.numerical_target_acceleration;
  }

  json init = {{"seed", s.initial.seed},
               {"perturbation_radius_m", s.initial.perturbation_radius},
               {"offset_m", to_json(s.initial.offset)}};
  if (s.initial.poses) {
    json poses = json::array();
    for (const Pose& p : *s.initial.poses) poses.push_back(json::array({p.x, p.y, p.theta}));
    init["poses"] = poses;
  }
  doc["initial"] = init;

  json obs = {{"smoothing_epsilon", s.observer.smoothing_epsilon},
              {"flocking_anchor_sign", s.observer.flocking_anchor_sign},
              {"frame", s.observer.frame == ObserverFrame::kBody ? "body" : "world"}};
  if (s.mode == Mode::kFlock) {
    obs["initial_flocking_velocity"] = to_json(s.observer.initial_flocking_velocity);
  } else {
    obs["initial_target_velocity"] = to_json(s.observer.initial_target_velocity);
    obs["initial_target_error"] = to_json(s.observer.initial_target_error);
  }
  doc["observer"] = obs;
  doc["integration"] = {{"dt_s", s.integration.dt},
                        {"duration_s", s.integration.duration},
                        {"sample_every", s.integration.sample_every}};
  doc["metrics"] = {{"settle_time_s", s.settle_time}};
  return doc;
}

}  // namespace rigidflock
