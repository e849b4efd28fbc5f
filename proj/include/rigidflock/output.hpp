#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "rigidflock/scenario.hpp"
#include "rigidflock/simulator.hpp"

namespace rigidflock {

/// Shortest round-trip decimal representation.
std::string format_number(double value);

/// Header rows of trajectory.csv / metrics.csv for a scenario.
std::string trajectory_header(Mode mode, int n);
std::string metrics_header(Mode mode, const Graph& graph);

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);
void write_metrics_csv(const TrajectoryLog& log, std::ostream& out);

nlohmann::json summary_to_json(const Summary& summary, const Scenario& scenario, const TrajectoryLog& log);

}  // namespace rigidflock
