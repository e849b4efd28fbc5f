#include "rigidflock/output.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rigidflock {

std::string format_number(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

namespace {

std::string agent_column(const std::string& field, int i) { return field + "_" + std::to_string(i); }

void write_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out << ',';
    out << format_number(values[k]);
  }
  out << '\n';
}

}  // namespace

std::string trajectory_header(Mode mode, int n) {
  std::ostringstream os;
  os << "t_s";
  for (int i = 1; i <= n; ++i) {
    for (const char* f : {"x_m", "y_m", "theta_rad", "v_mps", "omega_radps", "ux_mps", "uy_mps", "theta_id_rad"}) {
      os << ',' << agent_column(f, i);
    }
    if (mode == Mode::kFlock) {
      os << ',' << agent_column("vf_hat_x_mps", i) << ',' << agent_column("vf_hat_y_mps", i);
    } else {
      os << ',' << agent_column("vT_hat_x_mps", i) << ',' << agent_column("vT_hat_y_mps", i) << ','
         << agent_column("eT_hat_x_m", i) << ',' << agent_column("eT_hat_y_m", i);
    }
  }
  if (mode == Mode::kFlock) {
    os << ",v0_x_mps,v0_y_mps";
  } else {
    os << ",pT_x_m,pT_y_m,vT_x_mps,vT_y_mps";
  }
  return os.str();
}

std::string metrics_header(Mode mode, const Graph& graph) {
  std::ostringstream os;
  os << "t_s";
  for (const Edge& e : graph.edges()) os << ",e_" << e.i << '_' << e.j;
  for (int i = 1; i <= graph.n(); ++i) os << ',' << agent_column("theta_err", i);
  const char* velocity_label = mode == Mode::kFlock ? "vf_err" : "vT_err";
  for (int i = 1; i <= graph.n(); ++i) os << ',' << agent_column(velocity_label, i);
  if (mode == Mode::kIntercept) {
    for (int i = 1; i <= graph.n(); ++i) os << ',' << agent_column("eT_err", i);
    os << ",e_T_norm,hull_contains";
  }
  os << ",z_norm,shape_distance_m";
  return os.str();
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
  const int n = log.graph.n();
  out << trajectory_header(log.mode, n) << '\n';
  for (const SampleRow& row : log.samples) {
    std::vector<double> values{row.time};
    for (int k = 0; k < n; ++k) {
      const Pose& p = row.poses[k];
      const auto& c = row.control[k];
      values.insert(values.end(), {p.x, p.y, p.theta, row.commands[k].v, row.commands[k].omega, c.u.x(), c.u.y(),
                                   c.theta_id});
      if (log.mode == Mode::kFlock) {
        values.insert(values.end(), {row.vf_hat[k].x(), row.vf_hat[k].y()});
      } else {
        values.insert(values.end(), {row.vT_hat[k].x(), row.vT_hat[k].y(), row.eT_hat[k].x(), row.eT_hat[k].y()});
      }
    }
    if (log.mode == Mode::kFlock) {
      values.insert(values.end(), {row.flocking_velocity->x(), row.flocking_velocity->y()});
    } else {
      values.insert(values.end(), {row.target->p.x(), row.target->p.y(), row.target->v.x(), row.target->v.y()});
    }
    write_row(out, values);
  }
}

void write_metrics_csv(const TrajectoryLog& log, std::ostream& out) {
  out << metrics_header(log.mode, log.graph) << '\n';
  for (const MetricRow& row : log.metrics) {
    std::vector<double> values{row.time};
    values.insert(values.end(), row.edge_errors.begin(), row.edge_errors.end());
    values.insert(values.end(), row.theta_err.begin(), row.theta_err.end());
    values.insert(values.end(), row.velocity_estimate_errors.begin(), row.velocity_estimate_errors.end());
    if (log.mode == Mode::kIntercept) {
      values.insert(values.end(), row.target_error_estimate_errors.begin(), row.target_error_estimate_errors.end());
      values.push_back(row.e_target_norm);
      values.push_back(row.hull_contains ? 1.0 : 0.0);
    }
    values.push_back(row.z_norm);
    values.push_back(row.shape_distance);
    write_row(out, values);
  }
}

nlohmann::json summary_to_json(const Summary& summary, const Scenario& scenario, const TrajectoryLog& log) {
  // "20" rather than "20.0" in the settle-time key.
  const std::string settle = format_number(summary.settle_time);
  const std::string suffix = "_after_" + settle + "s";

  nlohmann::json j;
  j["scenario"] = scenario.name;
  j["mode"] = to_string(scenario.mode);
  j["parameters_source"] = scenario.parameters_source;
  j["seed"] = log.seed;
  j["n"] = scenario.n();
  j["edges"] = scenario.formation.graph().edge_count();
  j["dt_s"] = log.dt;
  j["duration_s"] = log.samples.empty() ? 0.0 : log.samples.back().time;
  j["samples"] = log.samples.size();
  j["settle_time_s"] = summary.settle_time;
  j["heading_jump_events"] = log.heading_jumps;
  j["initial_shape_distance_m"] = summary.initial_shape_distance;
  j["initial_z_norm"] = summary.initial_z_norm;
  j["final_max_edge_error"] = summary.final_max_edge_error;
  j["max_edge_error" + suffix] = summary.max_edge_error_after_settle;
  j["final_max_heading_error"] = summary.final_max_heading_error;
  j["max_heading_error" + suffix] = summary.max_heading_error_after_settle;
  j["final_max_estimation_error"] = summary.final_max_estimation_error;
  j["max_estimation_error" + suffix] = summary.max_estimation_error_after_settle;
  j["final_shape_distance_m"] = summary.final_shape_distance;
  if (summary.final_e_target_norm) {
    j["final_e_T_norm"] = *summary.final_e_target_norm;
    j["max_e_T_norm" + suffix] = *summary.max_e_target_norm_after_settle;
    j["final_hull_contains"] = *summary.final_hull_contains;
    j["hull_contains" + suffix] = *summary.hull_contains_after_settle;
  }
  if (!scenario.warnings.empty()) j["warnings"] = scenario.warnings;
  return j;
}

}  // namespace rigidflock
