#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "rigidflock/scenario.hpp"

namespace fixture {

using nlohmann::json;

inline json flock_doc() { return oracle::load_json(oracle::scenario_dir() / "pentagon_flock.json"); }
inline json intercept_doc() { return oracle::load_json(oracle::scenario_dir() / "pentagon_intercept.json"); }

/// Pentagon flock with a constant flocking velocity, every agent placed
/// exactly in formation with the given heading offsets from v0.
inline json steady_flock_doc(const rigidflock::Vec2& v0, const std::vector<double>& heading_offsets) {
  json doc = flock_doc();
  doc["flocking_velocity"] = {{"kind", "line"}, {"start_m", {0.0, 0.0}}, {"velocity_mps", {v0.x(), v0.y()}}};
  doc["gains"].erase("gamma0");
  const double base = std::atan2(v0.y(), v0.x());
  json poses = json::array();
  json estimates = json::array();
  const auto p = oracle::pentagon();
  for (std::size_t k = 0; k < p.size(); ++k) {
    poses.push_back({p[k].x(), p[k].y(), base + heading_offsets[k]});
    estimates.push_back({v0.x(), v0.y()});
  }
  doc["initial"] = {{"poses", poses}};
  doc["observer"]["initial_flocking_velocity"] = estimates;
  return doc;
}

/// Temporary directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("rigidflock_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path write_json(const std::filesystem::path& dir, const std::string& name, const json& doc) {
  const auto path = dir / name;
  std::ofstream(path) << doc.dump(2);
  return path;
}

}  // namespace fixture
