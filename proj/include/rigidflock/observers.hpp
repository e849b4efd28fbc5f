#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "rigidflock/graph.hpp"
#include "rigidflock/types.hpp"

namespace rigidflock {

/// Componentwise signum, sgn(0) = 0.
Vec2 sgn_vec(const Vec2& x);

/// Componentwise clamp(x / eps, -1, 1); falls back to sgn_vec when eps <= 0.
Vec2 smoothed_sgn_vec(const Vec2& x, double eps);

/// Laplacian plus diag(b).
Eigen::MatrixXd m_matrix(const Graph& g, const std::vector<int>& access_flags);

/// Which estimate the privileged agents compare against the reference.
enum class AnchorMode {
  /// The agent's own estimate (flocking velocity observer).
  kSelf,
  /// Agent n's estimate (target velocity / interception error observers).
  kLeader,
};

struct ObserverOptions {
  /// Multiplies b_i (x_anchor - reference) inside the signum.
  double anchor_sign = 1.0;
  AnchorMode anchor = AnchorMode::kSelf;
  /// 0 keeps the discontinuous signum.
  double smoothing_epsilon = 0.0;
};

/// Per-agent state of one distributed signum consensus observer.
struct ObserverBank {
  std::vector<Vec2> estimates;
  double alpha = 0.0;
  std::vector<int> access_flags;

  /// Throws InputError on size mismatch, non-finite estimates, alpha <= 0 or
  /// a flag outside {0, 1}.
  void validate(int n) const;
};

/// rate_i = -alpha * sgn( sum_{j in N_i} (x_i - x_j) + s * b_i * (x_anchor - ref_i) ).
///
/// `references[i]` must be present for every flagged agent. When
/// `frame_headings` is non-empty, agent i evaluates the signum in its own
/// body frame (rotated by -heading_i) and the rate is rotated back.
std::vector<Vec2> consensus_observer_rate(const ObserverBank& bank, const Graph& g,
                                          const std::vector<std::optional<Vec2>>& references,
                                          const ObserverOptions& options = {},
                                          const std::vector<double>& frame_headings = {});

/// Single-agent form used by the distributed controllers. All vectors are in
/// the agent's own frame; `neighbor_estimates` are already expressed there.
Vec2 observer_rate(const Vec2& own, const std::vector<Vec2>& neighbor_estimates,
                   const std::optional<Vec2>& anchor_minus_reference, double alpha,
                   const ObserverOptions& options);

/// Observer gain must strictly exceed the disturbance bound.
bool gain_check(double alpha, double gamma);

}  // namespace rigidflock
