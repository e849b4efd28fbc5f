#include "rigidflock/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace rigidflock {

namespace {

TrajectorySample sample_at(const CircleTrajectory& c, double t) {
  const double phi = c.omega * t + c.phase;
  const Vec2 radial(std::cos(phi), std::sin(phi));
  const Vec2 tangent(-std::sin(phi), std::cos(phi));
  return {c.center + c.radius * radial, c.radius * c.omega * tangent, -c.radius * c.omega * c.omega * radial};
}

TrajectorySample sample_at(const LineTrajectory& l, double t) { return {l.start + l.velocity * t, l.velocity, Vec2::Zero()}; }

TrajectorySample sample_at(const SineTrajectory& s, double t) {
  const double phi = s.omega * t;
  return {s.start + Vec2(s.speed * t, s.amplitude * std::sin(phi)),
          Vec2(s.speed, s.amplitude * s.omega * std::cos(phi)),
          Vec2(0.0, -s.amplitude * s.omega * s.omega * std::sin(phi))};
}

TrajectorySample sample_at(const WaypointTrajectory& w, double t) {
  const auto& pts = w.points;
  if (pts.empty()) return {};
  if (t <= pts.front().t) return {pts.front().p, Vec2::Zero(), Vec2::Zero()};
  if (t >= pts.back().t) return {pts.back().p, Vec2::Zero(), Vec2::Zero()};
  auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                             [](double time, const WaypointTrajectory::Waypoint& wp) { return time < wp.t; });
  auto lo = hi - 1;
  const double span = hi->t - lo->t;
  const Vec2 velocity = (hi->p - lo->p) / span;
  return {lo->p + velocity * (t - lo->t), velocity, Vec2::Zero()};
}

}  // namespace

TrajectorySample sample(const TrajectoryModel& model, double t) {
  return std::visit([t](const auto& m) { return sample_at(m, t); }, model);
}

double acceleration_bound(const TrajectoryModel& model) {
  if (const auto* c = std::get_if<CircleTrajectory>(&model)) return std::abs(c->radius) * c->omega * c->omega;
  if (const auto* s = std::get_if<SineTrajectory>(&model)) return std::abs(s->amplitude) * s->omega * s->omega;
  return 0.0;
}

double speed_bound(const TrajectoryModel& model) {
  if (const auto* c = std::get_if<CircleTrajectory>(&model)) return std::abs(c->radius * c->omega);
  if (const auto* l = std::get_if<LineTrajectory>(&model)) return l->velocity.norm();
  if (const auto* s = std::get_if<SineTrajectory>(&model)) {
    return std::hypot(s->speed, s->amplitude * s->omega);
  }
  double best = 0.0;
  const auto& pts = std::get<WaypointTrajectory>(model).points;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    best = std::max(best, (pts[k].p - pts[k - 1].p).norm() / (pts[k].t - pts[k - 1].t));
  }
  return best;
}

}  // namespace rigidflock
