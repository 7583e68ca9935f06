#include "hlsforge/executor.hpp"

#include <pthread.h>
#include <sched.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"

namespace hlsforge {

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::naive ? "naive" : "fine_grained";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "naive") return Strategy::naive;
  if (text == "fine_grained") return Strategy::fine_grained;
  throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(text) + "'");
}

double Timeline::makespan() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.end_s);
  return m;
}

bool Timeline::non_overlapping() const {
  std::vector<std::vector<std::pair<double, double>>> per_worker(std::max(n_workers, 1));
  for (const auto& r : records) {
    if (r.worker_index < 0 || r.worker_index >= n_workers || r.end_s < r.start_s) return false;
    per_worker[r.worker_index].emplace_back(r.start_s, r.end_s);
  }
  for (auto& spans : per_worker) {
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first < spans[i - 1].second) return false;
    }
  }
  return true;
}

void Timeline::append(const Timeline& other) {
  const double offset = makespan();
  for (auto r : other.records) {
    r.start_s += offset;
    r.end_s += offset;
    records.push_back(std::move(r));
  }
  n_workers = std::max(n_workers, other.n_workers);
  if (pinned.size() < other.pinned.size()) pinned.resize(other.pinned.size(), true);
  for (std::size_t i = 0; i < other.pinned.size(); ++i) pinned[i] = pinned[i] && other.pinned[i];
  pin_requested = pin_requested || other.pin_requested;
}

namespace {

bool pin_current_thread(int core) {
  cpu_set_t set;
  CPU_ZERO(&set);
  if (core < 0 || core >= CPU_SETSIZE) return false;
  CPU_SET(core, &set);
  return pthread_setaffinity_np(pthread_self(), sizeof(set), &set) == 0;
}

// One pool over `jobs`; indices are offset by `first_index`.
void run_pool(const std::vector<Job>& jobs, std::size_t first_index, const JobRunner& runner, int n_workers,
              bool pin_cores, Clock::time_point t0, Timeline& timeline) {
  if (jobs.empty()) return;
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::vector<char> pinned(n_workers, 0);
  auto work = [&](int worker) {
    if (pin_cores) pinned[worker] = pin_current_thread(worker) ? 1 : 0;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      const double start = std::chrono::duration<double>(Clock::now() - t0).count();
      FlowStatus status;
      try {
        status = runner(jobs[i], first_index + i);
      } catch (...) {
        status = FlowStatus::failed;
      }
      const double end = std::chrono::duration<double>(Clock::now() - t0).count();
      std::lock_guard lock(mu);
      timeline.records.push_back({jobs[i], worker, start, end, status});
    }
  };
  const int n_threads = static_cast<int>(std::min<std::size_t>(n_workers, jobs.size()));
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (int w = 0; w < n_threads; ++w) threads.emplace_back(work, w);
  for (auto& t : threads) t.join();
  if (pin_cores) {
    for (int w = 0; w < n_threads; ++w) timeline.pinned[w] = timeline.pinned[w] && pinned[w];
  }
}

struct RunTarget {
  ConcreteDesign design;
  Job job;
};

std::vector<std::vector<RunTarget>> collect_targets(const DatasetCollection& collection, const ToolFlowSpec& flow) {
  std::vector<std::vector<RunTarget>> groups;
  for (const auto& [name, dataset] : collection.datasets()) {
    std::vector<RunTarget> group;
    for (const auto& d : dataset.designs) {
      ConcreteDesign cd;
      if (const auto* c = std::get_if<ConcreteDesign>(&d)) {
        cd = *c;
      } else {
        const auto& a = std::get<AbstractDesign>(d);
        cd.id = a.name;
        cd.base_name = a.name;
        cd.dataset_name = a.dataset_name;
        cd.dir = a.source_dir;
      }
      Job job{cd.id, name, flow.name, 0.0};
      group.push_back({std::move(cd), std::move(job)});
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace

Timeline run_jobs(const std::vector<std::vector<Job>>& groups, const JobRunner& runner, int n_workers,
                  bool pin_cores, Strategy strategy) {
  if (n_workers < 1) throw Error(ErrorCode::InvalidArgument, "n_workers must be >= 1");
  Timeline timeline;
  timeline.n_workers = n_workers;
  timeline.strategy = strategy;
  timeline.pin_requested = pin_cores;
  timeline.pinned.assign(n_workers, pin_cores);
  const auto t0 = Clock::now();
  if (strategy == Strategy::fine_grained) {
    std::vector<Job> all;
    for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
    run_pool(all, 0, runner, n_workers, pin_cores, t0, timeline);
  } else {
    std::size_t offset = 0;
    for (const auto& g : groups) {
      run_pool(g, offset, runner, n_workers, pin_cores, t0, timeline);
      offset += g.size();
    }
  }
  std::sort(timeline.records.begin(), timeline.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.start_s, a.worker_index) < std::tie(b.start_s, b.worker_index);
  });
  return timeline;
}

ExecutionResult execute_parallel(const DatasetCollection& collection, const ToolFlowSpec& flow, int n_workers,
                                 bool pin_cores, Strategy strategy) {
  const auto groups = collect_targets(collection, flow);
  std::vector<const RunTarget*> flat;
  std::vector<std::vector<Job>> jobs;
  for (const auto& g : groups) {
    auto& js = jobs.emplace_back();
    for (const auto& t : g) {
      flat.push_back(&t);
      js.push_back(t.job);
    }
  }
  ExecutionResult result;
  result.outcomes.resize(flat.size());
  auto runner = [&](const Job&, std::size_t index) {
    const auto& target = *flat[index];
    FlowOutcome outcome;
    try {
      outcome = run_flow(flow, target.design);
    } catch (const std::exception&) {
      outcome.design_id = target.design.id;
      outcome.flow_name = flow.name;
      outcome.status = FlowStatus::failed;
    }
    result.outcomes[index] = outcome;
    return outcome.status;
  };
  result.timeline = run_jobs(jobs, runner, n_workers, pin_cores, strategy);
  return result;
}

ExecutionResult execute_parallel_fine_grained(const DatasetCollection& collection, const ToolFlowSpec& flow,
                                              int n_workers, bool pin_cores) {
  return execute_parallel(collection, flow, n_workers, pin_cores, Strategy::fine_grained);
}

ExecutionResult execute_parallel_naive(const DatasetCollection& collection, const ToolFlowSpec& flow,
                                       int n_workers, bool pin_cores) {
  return execute_parallel(collection, flow, n_workers, pin_cores, Strategy::naive);
}

double simulate_schedule(const std::vector<std::vector<double>>& durations, int n_workers, Strategy strategy) {
  if (durations.empty()) throw Error(ErrorCode::EmptyInput, "no datasets to schedule");
  if (n_workers < 1) throw Error(ErrorCode::InvalidArgument, "n_workers must be >= 1");
  std::vector<double> free_at(n_workers, 0.0);
  auto place = [&](double d) {
    const auto it = std::min_element(free_at.begin(), free_at.end());
    *it += d;
  };
  if (strategy == Strategy::fine_grained) {
    for (const auto& g : durations) {
      for (double d : g) place(d);
    }
    return *std::max_element(free_at.begin(), free_at.end());
  }
  double barrier = 0.0;
  for (const auto& g : durations) {
    std::fill(free_at.begin(), free_at.end(), barrier);
    for (double d : g) place(d);
    barrier = *std::max_element(free_at.begin(), free_at.end());
  }
  return barrier;
}

std::string timeline_json(const Timeline& timeline) {
  ordered_json j;
  j["n_workers"] = timeline.n_workers;
  j["strategy"] = std::string(to_string(timeline.strategy));
  j["pin_requested"] = timeline.pin_requested;
  j["pinned"] = timeline.pinned;
  j["makespan_s"] = timeline.makespan();
  auto& recs = j["records"] = ordered_json::array();
  for (const auto& r : timeline.records) {
    ordered_json o;
    o["design_id"] = r.job.design_id;
    o["dataset"] = r.job.dataset_name;
    o["flow"] = r.job.flow_name;
    o["worker"] = r.worker_index;
    o["start_s"] = r.start_s;
    o["end_s"] = r.end_s;
    o["status"] = std::string(to_string(r.status));
    recs.push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

Timeline parse_timeline_json(std::string_view text) {
  Timeline t;
  try {
    const auto j = nlohmann::json::parse(text);
    t.n_workers = j.at("n_workers").get<int>();
    t.strategy = parse_strategy(j.at("strategy").get<std::string>());
    t.pin_requested = j.at("pin_requested").get<bool>();
    t.pinned = j.at("pinned").get<std::vector<bool>>();
    for (const auto& o : j.at("records")) {
      ExecutionRecord r;
      r.job.design_id = o.at("design_id").get<std::string>();
      r.job.dataset_name = o.at("dataset").get<std::string>();
      r.job.flow_name = o.at("flow").get<std::string>();
      r.worker_index = o.at("worker").get<int>();
      r.start_s = o.at("start_s").get<double>();
      r.end_s = o.at("end_s").get<double>();
      r.status = parse_flow_status(o.at("status").get<std::string>());
      t.records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedReport, std::string("timeline: ") + e.what());
  }
  return t;
}

std::string utilization_csv(const Timeline& timeline) {
  std::vector<std::pair<double, int>> events;
  for (const auto& r : timeline.records) {
    events.emplace_back(r.start_s, +1);
    events.emplace_back(r.end_s, -1);
  }
  std::sort(events.begin(), events.end());
  std::string out = "time_s,busy_workers\n";
  if (events.empty() || events.front().first > 0) out += "0,0\n";
  int busy = 0;
  for (std::size_t i = 0; i < events.size();) {
    const double t = events[i].first;
    while (i < events.size() && events[i].first == t) busy += events[i++].second;
    out += format_double(t) + "," + std::to_string(busy) + "\n";
  }
  return out;
}

}  // namespace hlsforge
