#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hlsforge {

enum class FlowStatus { ok, failed, timeout, skipped_missing_files };

std::string_view to_string(FlowStatus status);
FlowStatus parse_flow_status(std::string_view text);

/// Severity order used when folding several flow statuses into one.
int severity(FlowStatus status);

struct HlsSynthMetrics {
  std::optional<std::int64_t> latency_best_cycles;
  std::optional<std::int64_t> latency_avg_cycles;
  std::optional<std::int64_t> latency_worst_cycles;
  std::optional<std::int64_t> ii;
  double clock_estimate_ns = 0.0;
  std::int64_t lut = 0;
  std::int64_t ff = 0;
  std::int64_t dsp = 0;
  std::int64_t bram = 0;
  std::int64_t uram = 0;

  bool operator==(const HlsSynthMetrics&) const = default;
};

struct ImplMetrics {
  double wns_ns = 0.0;
  double whs_ns = 0.0;
  std::int64_t lut = 0;
  std::int64_t ff = 0;
  std::int64_t dsp = 0;
  std::int64_t bram = 0;
  double total_power_w = 0.0;

  bool operator==(const ImplMetrics&) const = default;
};

struct ExecutionMeta {
  std::string tool_name;
  std::string tool_version;
  double runtime_s = 0.0;
  FlowStatus status = FlowStatus::ok;

  bool operator==(const ExecutionMeta&) const = default;
};

struct MetricsBundle {
  std::optional<HlsSynthMetrics> hls;
  std::optional<ImplMetrics> impl;
  std::optional<ExecutionMeta> execution;

  bool operator==(const MetricsBundle&) const = default;
};

}  // namespace hlsforge
