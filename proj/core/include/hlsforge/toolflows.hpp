#pragma once

// Tool flows: one HLS synthesis or implementation step run inside a concrete
// design directory. Tool failures are reported through FlowOutcome::status,
// never thrown.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hlsforge/core.hpp"
#include "hlsforge/manifest.hpp"
#include "hlsforge/metrics.hpp"

namespace hlsforge {

inline constexpr std::string_view kCsynthReportPath = "hls_prj/solution1/syn/report/csynth.xml";
inline constexpr std::string_view kImplReportPath = "hls_prj/impl_report.json";

enum class FlowKind { mock_hls_synth, mock_impl, external };

std::string_view to_string(FlowKind kind);
FlowKind parse_flow_kind(std::string_view text);

/// Constants of the mock cost model. Two instances with different constants
/// stand in for two versions of the same tool.
struct MockCostModel {
  std::string version = "A";
  double lut_per_op = 25.0;
  double ff_per_op = 15.0;
  double bram_bytes = 2048.0;
  double clock_base_ns = 3.0;
  double clock_slope_ns = 0.2;
  double impl_resource_scale = 0.9;
  double wns_lut_coeff = 0.1;
  double whs_ns = 0.05;
  double power_base_w = 0.5;
  double power_per_lut_w = 1e-5;
  double power_per_dsp_w = 1e-3;
  double runtime_base_s = 1.0;
  double runtime_per_klut_s = 0.5;

  bool operator==(const MockCostModel&) const = default;
};

struct ToolFlowSpec {
  std::string name;
  FlowKind kind = FlowKind::mock_hls_synth;
  std::vector<std::string> required_files;
  double timeout_s = 3600.0;
  std::vector<std::pair<std::string, std::string>> environment;
  /// argv; `{design_dir}` and `{sources}` are expanded per design (external only).
  std::vector<std::string> command_template;
  /// Real time a mock flow sleeps before producing its reports.
  double mock_delay_s = 0.0;
  MockCostModel cost_model;
  std::string tool_name;
  std::string tool_version;
};

struct FlowOutcome {
  std::string design_id;
  std::string flow_name;
  FlowStatus status = FlowStatus::ok;
  double runtime_s = 0.0;
  std::filesystem::path log_path;
  std::string tool_name;
  std::string tool_version;

  bool operator==(const FlowOutcome&) const = default;
};

/// Directive settings recovered from a concrete design (from `opt.tcl` or
/// from i++ annotations in the sources).
struct DirectiveSettings {
  std::map<std::string, long long> unroll;           ///< label -> factor
  std::map<std::string, bool> pipelined;             ///< label -> pipelined
  std::map<std::string, long long> partition_banks;  ///< array label -> banks
};

/// Parses the directives in an `opt.tcl`. Unrolls without `-factor` are full
/// unrolls (factor = trip count). Throws LabelUnknown for targets absent from
/// the manifest.
DirectiveSettings settings_from_opt_tcl(std::string_view opt_tcl, const MockManifest& manifest);

/// Re-reads the annotations injected after anchor comments. i++ pipelines
/// loops by default, so every manifest loop is marked pipelined.
DirectiveSettings settings_from_intel_sources(const std::filesystem::path& dir, const MockManifest& manifest);

/// The analytical cost model behind the mock HLS flow.
HlsSynthMetrics mock_synth_metrics(const MockManifest& manifest, const DirectiveSettings& settings,
                                   const MockCostModel& cost = {});

/// Implementation metrics derived from HLS estimates.
ImplMetrics mock_impl_metrics(const HlsSynthMetrics& hls, double clock_target_ns, const MockCostModel& cost = {});

/// Deterministic modeled tool runtime for a mock flow.
double mock_runtime_s(const HlsSynthMetrics& hls, const MockCostModel& cost);

/// Vitis-shaped csynth.xml for `metrics`.
std::string render_csynth_xml(const HlsSynthMetrics& metrics, std::string_view top_name);
std::string render_impl_report_json(const ImplMetrics& metrics);

/// Runs `spec` in `design.dir`. Missing required files short-circuit to
/// skipped_missing_files. Writes `<flow>.log` and `<flow>.outcome.json` in the
/// design directory. Only setup problems (unwritable directory) throw.
FlowOutcome run_flow(const ToolFlowSpec& spec, const ConcreteDesign& design);

ToolFlowSpec mock_hls_synth_spec(MockCostModel cost = {}, double delay_s = 0.0);
ToolFlowSpec mock_impl_spec(MockCostModel cost = {}, double delay_s = 0.0);

FlowOutcome mock_hls_synth(const ConcreteDesign& design, const MockCostModel& cost = {});
FlowOutcome mock_impl(const ConcreteDesign& design, const MockCostModel& cost = {});

struct VendorToolOptions {
  std::string executable;  ///< overrides the default binary name
  double timeout_s = 7200.0;
};

/// Vendor adapters. Each resolves its executable at construction and throws
/// ExecutableNotFound naming the binary when it is missing.
ToolFlowSpec vitis_hls_synth_flow(const VendorToolOptions& options = {});
ToolFlowSpec vitis_hls_impl_flow(const VendorToolOptions& options = {});
ToolFlowSpec intel_hls_synth_flow(const VendorToolOptions& options = {});
ToolFlowSpec intel_quartus_impl_flow(const VendorToolOptions& options = {});

/// First non-empty output line of `<executable> <flag>`; cached per executable
/// for the life of the process.
std::string probe_tool_version(const std::string& executable, const std::string& flag);

/// Outcomes previously written by run_flow for this design, sorted by flow name.
std::vector<FlowOutcome> read_flow_outcomes(const std::filesystem::path& design_dir);

std::string flow_outcome_json(const FlowOutcome& outcome);

}  // namespace hlsforge
