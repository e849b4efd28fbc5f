#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rigidflock {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Points = std::vector<Vec2>;

/// Caller passed arguments that violate an operation's preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rigidity tests are only defined for frameworks with at least three nodes.
class UnsupportedSizeError : public InputError {
 public:
  using InputError::InputError;
};

/// Planar rotation by `angle` radians (counterclockwise).
inline Mat2 rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

/// Two-dimensional cross product (z component of a x b).
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace rigidflock
