#pragma once

#include <variant>
#include <vector>

#include "rigidflock/types.hpp"

namespace rigidflock {

/// Position, velocity and acceleration of an analytic reference at one time.
struct TrajectorySample {
  Vec2 p = Vec2::Zero();
  Vec2 v = Vec2::Zero();
  Vec2 a = Vec2::Zero();
};

/// center + radius (cos(omega t + phase), sin(omega t + phase))
struct CircleTrajectory {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  friend bool operator==(const CircleTrajectory&, const CircleTrajectory&) = default;
};

/// start + velocity t
struct LineTrajectory {
  Vec2 start = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  friend bool operator==(const LineTrajectory&, const LineTrajectory&) = default;
};

/// (x0 + speed t, y0 + amplitude sin(omega t))
struct SineTrajectory {
  Vec2 start = Vec2::Zero();
  double speed = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;
  friend bool operator==(const SineTrajectory&, const SineTrajectory&) = default;
};

/// Piecewise-linear interpolation through timed points; holds the first and
/// last points outside the time span. Velocity jumps at the corners, so the
/// reported acceleration is zero everywhere.
struct WaypointTrajectory {
  struct Waypoint {
    double t = 0.0;
    Vec2 p = Vec2::Zero();
    friend bool operator==(const Waypoint&, const Waypoint&) = default;
  };
  std::vector<Waypoint> points;
  friend bool operator==(const WaypointTrajectory&, const WaypointTrajectory&) = default;
};

using TrajectoryModel = std::variant<CircleTrajectory, LineTrajectory, SineTrajectory, WaypointTrajectory>;

TrajectorySample sample(const TrajectoryModel& model, double t);

/// Supremum of |acceleration| over all t.
double acceleration_bound(const TrajectoryModel& model);

/// Supremum of |velocity| over all t.
double speed_bound(const TrajectoryModel& model);

}  // namespace rigidflock
