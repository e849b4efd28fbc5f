#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace rigidflock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotRigid = 2;
inline constexpr int kExitDiverged = 3;

struct SimulateOptions {
  std::filesystem::path scenario;
  std::filesystem::path out_dir;
  std::optional<double> duration;
  std::optional<double> dt;
  std::optional<unsigned long long> seed;
};

/// Writes trajectory.csv, metrics.csv and summary.json into out_dir.
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

/// Prints the rigidity report as JSON.
int cmd_check_rigidity(const std::filesystem::path& file, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace rigidflock::cli
