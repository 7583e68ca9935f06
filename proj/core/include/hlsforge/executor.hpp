#pragma once

// Parallel dispatch of tool flows. Every call blocks until all jobs finish;
// job failures come back as statuses.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hlsforge/core.hpp"
#include "hlsforge/toolflows.hpp"

namespace hlsforge {

enum class Strategy { naive, fine_grained };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);

struct Job {
  std::string design_id;
  std::string dataset_name;
  std::string flow_name;
  double synthetic_duration_s = 0.0;  // used by test runners only

  bool operator==(const Job&) const = default;
};

struct ExecutionRecord {
  Job job;
  int worker_index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  FlowStatus status = FlowStatus::ok;

  bool operator==(const ExecutionRecord&) const = default;
};

struct Timeline {
  std::vector<ExecutionRecord> records;  ///< sorted by (start_s, worker_index)
  int n_workers = 1;
  Strategy strategy = Strategy::fine_grained;
  bool pin_requested = false;
  std::vector<bool> pinned;  ///< per worker; false when the platform refused

  double makespan() const;
  /// Records on the same worker never overlap in [start_s, end_s).
  bool non_overlapping() const;
  /// Appends `other` shifted to start at this timeline's makespan.
  void append(const Timeline& other);
};

/// Runs one job on the calling worker thread.
using JobRunner = std::function<FlowStatus(const Job& job, std::size_t index)>;

/// Generic pool runner. `groups` are datasets; naive drains each group in its
/// own pool before starting the next, fine-grained pools every job at once.
/// Job indices count across groups in order.
Timeline run_jobs(const std::vector<std::vector<Job>>& groups, const JobRunner& runner, int n_workers,
                  bool pin_cores, Strategy strategy);

struct ExecutionResult {
  std::vector<FlowOutcome> outcomes;  ///< one per job, in job order
  Timeline timeline;
};

/// Abstract designs are run in place under their own name.
ExecutionResult execute_parallel_fine_grained(const DatasetCollection& collection, const ToolFlowSpec& flow,
                                              int n_workers, bool pin_cores);
ExecutionResult execute_parallel_naive(const DatasetCollection& collection, const ToolFlowSpec& flow,
                                       int n_workers, bool pin_cores);
ExecutionResult execute_parallel(const DatasetCollection& collection, const ToolFlowSpec& flow, int n_workers,
                                 bool pin_cores, Strategy strategy);

/// Greedy list scheduling without real time: each job in order goes to the
/// worker that frees up first (lowest index on ties). Naive mode waits for
/// the slowest worker between datasets.
double simulate_schedule(const std::vector<std::vector<double>>& durations, int n_workers, Strategy strategy);

std::string timeline_json(const Timeline& timeline);
Timeline parse_timeline_json(std::string_view text);

/// Step function of busy workers: `time_s,busy_workers` at every start/end.
std::string utilization_csv(const Timeline& timeline);

}  // namespace hlsforge
