#include "rigidflock/observers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rigidflock {

namespace {
double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
}  // namespace

Vec2 sgn_vec(const Vec2& x) { return {sgn(x.x()), sgn(x.y())}; }

Vec2 smoothed_sgn_vec(const Vec2& x, double eps) {
  if (eps <= 0.0) return sgn_vec(x);
  return {std::clamp(x.x() / eps, -1.0, 1.0), std::clamp(x.y() / eps, -1.0, 1.0)};
}

Eigen::MatrixXd m_matrix(const Graph& g, const std::vector<int>& access_flags) {
  if (static_cast<int>(access_flags.size()) != g.n()) throw InputError("one access flag per node is required");
  Eigen::MatrixXd m = g.laplacian();
  for (int i = 0; i < g.n(); ++i) {
    if (access_flags[i] != 0 && access_flags[i] != 1) throw InputError("access flags must be 0 or 1");
    m(i, i) += access_flags[i];
  }
  return m;
}

void ObserverBank::validate(int n) const {
  if (static_cast<int>(estimates.size()) != n || static_cast<int>(access_flags.size()) != n) {
    throw InputError("observer bank size does not match the graph");
  }
  if (!(alpha > 0.0)) throw InputError("observer gain must be positive");
  for (const Vec2& e : estimates) {
    if (!e.allFinite()) throw InputError("observer estimates must be finite");
  }
  for (int b : access_flags) {
    if (b != 0 && b != 1) throw InputError("access flags must be 0 or 1");
  }
}

Vec2 observer_rate(const Vec2& own, const std::vector<Vec2>& neighbor_estimates,
                   const std::optional<Vec2>& anchor_minus_reference, double alpha, const ObserverOptions& options) {
  Vec2 argument = Vec2::Zero();
  for (const Vec2& other : neighbor_estimates) argument += own - other;
  if (anchor_minus_reference) argument += options.anchor_sign * *anchor_minus_reference;
  return -alpha * smoothed_sgn_vec(argument, options.smoothing_epsilon);
}

std::vector<Vec2> consensus_observer_rate(const ObserverBank& bank, const Graph& g,
                                          const std::vector<std::optional<Vec2>>& references,
                                          const ObserverOptions& options,
                                          const std::vector<double>& frame_headings) {
  const int n = g.n();
  bank.validate(n);
  if (static_cast<int>(references.size()) != n) throw InputError("one reference slot per agent is required");
  if (!frame_headings.empty() && static_cast<int>(frame_headings.size()) != n) {
    throw InputError("one frame heading per agent is required");
  }

  std::vector<Vec2> rates(static_cast<std::size_t>(n), Vec2::Zero());
  for (int i = 0; i < n; ++i) {
    std::optional<Vec2> anchor_term;
    if (bank.access_flags[i] == 1) {
      if (!references[i]) throw InputError("agent " + std::to_string(i + 1) + " is flagged but has no reference");
      const Vec2& anchor = options.anchor == AnchorMode::kSelf ? bank.estimates[i] : bank.estimates[n - 1];
      anchor_term = anchor - *references[i];
    }

    const Mat2 to_world = frame_headings.empty() ? Mat2::Identity() : rotation(frame_headings[i]);
    const Mat2 to_local = to_world.transpose();
    std::vector<Vec2> neighbors;
    for (NodeId j : g.neighbors(i + 1)) neighbors.push_back(to_local * bank.estimates[j - 1]);
    if (anchor_term) anchor_term = to_local * *anchor_term;

    rates[i] = to_world * observer_rate(to_local * bank.estimates[i], neighbors, anchor_term, bank.alpha, options);
  }
  return rates;
}

bool gain_check(double alpha, double gamma) { return alpha > gamma; }

}  // namespace rigidflock
