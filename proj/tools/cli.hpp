#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hlsforge/aggregate.hpp"
#include "hlsforge/analysis.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/executor.hpp"
#include "hlsforge/frontends.hpp"
#include "hlsforge/toolflows.hpp"

namespace hlsforge::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kOk = 0,
  kDesignFailures = 1,
  kConfigError = 2,
  kEnvironmentError = 3,
  kNoData = 4,
};

/// Exit code for a library error.
int exit_code_for(const Error& error);

struct DatasetEntry {
  std::string name;
  fs::path path;
};

/// A flow as written in the config; vendor kinds resolve their executable only
/// when the build starts.
struct FlowConfig {
  std::string name;
  std::string kind;  ///< mock_hls_synth, mock_impl, external, vitis_hls_synth, vitis_hls_impl,
                     ///< intel_hls_synth, intel_quartus_impl
  double timeout_s = 3600.0;
  double mock_delay_s = 0.0;
  MockCostModel cost_model;
  std::vector<std::string> command;
  std::vector<std::string> required_files;
  std::vector<std::pair<std::string, std::string>> env;
  std::string executable;
};

struct RunConfig {
  fs::path work_dir;
  std::vector<DatasetEntry> datasets;
  FrontendConfig frontend;
  std::vector<FlowConfig> flows;
  int n_workers = 1;
  Strategy strategy = Strategy::fine_grained;
  bool pin_cores = false;
  std::uint64_t seed = 0;
};

/// Relative paths resolve against `base_dir`. Throws ConfigError naming the
/// offending field.
RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir);

/// Reads the file, then applies HLSFORGE_WORK_DIR when set.
RunConfig load_run_config(const fs::path& path);

std::string run_config_json(const RunConfig& cfg);

/// Throws ExecutableNotFound for vendor or external flows whose binary is missing.
ToolFlowSpec resolve_flow(const FlowConfig& flow);

MockCostModel parse_cost_model(const std::string& json_text);

std::vector<std::string> default_regress_metrics();

int cmd_expand(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_build(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct AggregateOptions {
  TableFormat format = TableFormat::csv;
  std::optional<fs::path> output;   ///< default `<work_dir>/dataset.<ext>`
  std::optional<fs::path> archive;  ///< zip path when archiving
  bool include_artifacts = false;
};

int cmd_aggregate(const RunConfig& cfg, const AggregateOptions& options, std::ostream& out, std::ostream& err);

struct RegressOptions {
  std::vector<std::string> metrics;  ///< empty: default_regress_metrics()
  double alpha = 0.05;
  std::optional<fs::path> json_out;  ///< JSON is printed after the table when unset
};

int cmd_regress(const fs::path& table_a, const fs::path& table_b, const RegressOptions& options, std::ostream& out,
                std::ostream& err);

struct StatsOptions {
  GroupBy group_by = GroupBy::base_design;
  std::vector<std::string> metrics = {"latency_avg_cycles", "hls_lut"};
  int bins = 10;
};

int cmd_stats(const fs::path& table, const StatsOptions& options, std::ostream& out, std::ostream& err);

struct DemoOptions {
  fs::path out_dir = "hlsforge_demo";
  std::uint64_t seed = 7;
  std::uint64_t n_samples = 6;
  int n_workers = 4;
  Strategy strategy = Strategy::fine_grained;
  MockCostModel cost_model;
};

/// Bundled designs -> expand -> mock build -> aggregate, plus a baseline run
/// of every design without directives and `coverage.json` comparing the two.
int cmd_demo(const DemoOptions& options, std::ostream& out, std::ostream& err);

}  // namespace hlsforge::cli
