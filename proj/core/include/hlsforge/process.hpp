#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hlsforge {

struct ProcessResult {
  int exit_code = -1;      ///< -1 when killed or never started
  bool timed_out = false;
  double runtime_s = 0.0;  ///< wall clock from spawn to reap
};

struct ProcessOptions {
  std::filesystem::path cwd;
  std::vector<std::pair<std::string, std::string>> environment;  ///< overrides on top of the parent env
  std::filesystem::path log_path;  ///< stdout+stderr; /dev/null when empty
  double timeout_s = 0.0;          ///< <= 0 disables the timeout
};

/// Spawns `argv` in its own process group and waits for it. On timeout the
/// whole group is sent SIGTERM, then SIGKILL after a short grace period.
/// Throws IOError when the process cannot be spawned.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options);

/// Absolute path of `name` resolved against PATH (or `name` itself when it
/// contains a slash and is executable).
std::optional<std::filesystem::path> find_executable(const std::string& name);

}  // namespace hlsforge
