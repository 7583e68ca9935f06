#include <json.hpp>
#include <ostream>

#include "cli.hpp"
#include "hlsforge/demo.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"

namespace hlsforge::cli {

using ordered_json = nlohmann::ordered_json;

int exit_code_for(const Error& error) {
  switch (error.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::MissingDirectory:
    case ErrorCode::EmptyDataset:
    case ErrorCode::DuplicateDesign:
    case ErrorCode::InvalidArgument:
    case ErrorCode::MalformedSpec:
    case ErrorCode::MalformedReport:
      return kConfigError;
    case ErrorCode::ExecutableNotFound:
    case ErrorCode::IOError:
    case ErrorCode::SourceUnreadable:
      return kEnvironmentError;
    case ErrorCode::NoPairs:
    case ErrorCode::EmptyInput:
    case ErrorCode::EmptyValues:
      return kNoData;
    default:
      return kDesignFailures;
  }
}

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kEnvironmentError;
  }
}

DatasetCollection load_config_datasets(const RunConfig& cfg) {
  DatasetCollection collection;
  for (const auto& d : cfg.datasets) collection.add(load_dataset(d.path, d.name));
  return collection;
}

fs::path default_table_path(const fs::path& work_dir, TableFormat format) {
  return work_dir / (format == TableFormat::csv ? "dataset.csv" : "dataset.jsonl");
}

void extract_collection(const DatasetCollection& collection) {
  for (const auto& [name, dataset] : collection.datasets()) {
    for (const auto& d : dataset.designs) write_standard_json(design_dir(d), extract_design_data(design_dir(d)));
  }
}

}  // namespace

std::vector<std::string> default_regress_metrics() {
  return {"latency_avg_cycles", "clock_estimate_ns", "hls_lut",     "hls_ff",     "hls_dsp",
          "hls_bram",           "impl_wns_ns",       "impl_lut",    "impl_ff",    "impl_total_power_w",
          "runtime_s"};
}

int cmd_expand(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto collection = load_config_datasets(cfg);
    const WorkspaceLayout ws{cfg.work_dir};
    const auto result = execute_frontend(collection, cfg.frontend, ws);
    std::size_t lowered = 0;
    for (const auto& r : result.reports) {
      out << r.design << ": space=" << r.space_size << " sampled=" << (r.pass_through ? 1 : r.sampled);
      if (r.pass_through) out << " (pass-through)";
      out << "\n";
      for (const auto& e : r.errors) err << r.dataset << "/" << r.design << ": " << e << "\n";
      lowered += r.lowered;
    }
    out << "lowered " << lowered << " concrete designs into " << cfg.work_dir.string() << "\n";
    return result.ok() ? kOk : kDesignFailures;
  });
}

int cmd_build(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.flows.empty()) throw Error(ErrorCode::ConfigError, "flows: no flows configured");
    std::vector<ToolFlowSpec> flows;
    for (const auto& f : cfg.flows) flows.push_back(resolve_flow(f));

    const WorkspaceLayout ws{cfg.work_dir};
    auto collection = load_workspace(ws);
    if (collection.empty()) collection = load_config_datasets(cfg);
    if (collection.design_count() == 0) {
      err << "error: no designs to build\n";
      return static_cast<int>(kNoData);
    }

    Timeline timeline;
    timeline.n_workers = cfg.n_workers;
    timeline.strategy = cfg.strategy;
    timeline.pin_requested = cfg.pin_cores;
    for (const auto& flow : flows) {
      const auto result = execute_parallel(collection, flow, cfg.n_workers, cfg.pin_cores, cfg.strategy);
      std::map<FlowStatus, std::size_t> counts;
      for (const auto& o : result.outcomes) ++counts[o.status];
      out << flow.name << ":";
      for (const auto status :
           {FlowStatus::ok, FlowStatus::failed, FlowStatus::timeout, FlowStatus::skipped_missing_files}) {
        out << " " << to_string(status) << "=" << counts[status];
      }
      out << "\n";
      timeline.append(result.timeline);
    }
    fs::create_directories(cfg.work_dir);
    write_text_file(ws.timeline_path(), timeline_json(timeline));
    write_text_file(cfg.work_dir / "utilization.csv", utilization_csv(timeline));
    extract_collection(collection);
    out << "makespan " << format_double(timeline.makespan()) << "s on " << cfg.n_workers << " workers ("
        << to_string(cfg.strategy) << ")\n";
    return static_cast<int>(kOk);
  });
}

int cmd_aggregate(const RunConfig& cfg, const AggregateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    extract_workspace(cfg.work_dir);
    const auto table = aggregate_collection(cfg.work_dir);
    const auto path = options.output.value_or(default_table_path(cfg.work_dir, options.format));
    export_tabular(table, path, options.format);
    out << "wrote " << table.rows.size() << " rows to " << path.string() << "\n";
    if (options.archive) {
      archive_dataset(cfg.work_dir, *options.archive, options.include_artifacts);
      out << "archived " << cfg.work_dir.string() << " to " << options.archive->string() << "\n";
    }
    return static_cast<int>(kOk);
  });
}

int cmd_regress(const fs::path& table_a, const fs::path& table_b, const RegressOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const auto a = load_table(table_a);
    const auto b = load_table(table_b);
    const auto metrics = options.metrics.empty() ? default_regress_metrics() : options.metrics;
    const auto report = compare_tool_versions(a.rows, b.rows, metrics, options.alpha);
    out << regression_report_table(report);
    const auto json = regression_report_json(report);
    if (options.json_out) {
      write_text_file(*options.json_out, json);
    } else {
      out << "\n" << json;
    }
    return static_cast<int>(kOk);
  });
}

int cmd_stats(const fs::path& table_path, const StatsOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto table = load_table(table_path);
    if (table.rows.empty()) throw Error(ErrorCode::EmptyInput, table_path.string() + " has no rows");
    const auto summary = coverage_summary(table.rows, options.group_by, options.metrics);
    ordered_json j;
    j["coverage"] = ordered_json::parse(coverage_summary_json(summary));
    ordered_json hists = ordered_json::object();
    for (const auto& m : options.metrics) {
      std::vector<double> values;
      for (const auto& row : table.rows) {
        if (const auto v = row.numeric(m)) values.push_back(*v);
      }
      if (values.empty()) continue;
      auto& h = hists[m] = ordered_json::array();
      for (const auto& bin : histogram(values, options.bins)) {
        h.push_back({{"lo", bin.lo}, {"hi", bin.hi}, {"count", bin.count}});
      }
    }
    j["histograms"] = hists;
    out << j.dump(2) << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_demo(const DemoOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto root = fs::absolute(options.out_dir);
    const auto designs = root / "designs";
    std::error_code ec;
    fs::remove_all(designs, ec);
    write_demo_dataset(designs);

    RunConfig cfg;
    cfg.work_dir = root / "work";
    cfg.datasets = {{"demo", designs}};
    cfg.seed = options.seed;
    cfg.frontend = {true, options.n_samples, options.seed, Vendor::xilinx};
    FlowConfig synth;
    synth.name = "mock_hls_synth";
    synth.kind = "mock_hls_synth";
    synth.cost_model = options.cost_model;
    FlowConfig impl = synth;
    impl.name = impl.kind = "mock_impl";
    cfg.flows = {synth, impl};
    cfg.n_workers = options.n_workers;
    cfg.strategy = options.strategy;
    write_text_file(root / "config.json", run_config_json(cfg));

    fs::remove_all(cfg.work_dir, ec);
    if (const int rc = cmd_expand(cfg, out, err); rc != kOk) return rc;
    if (const int rc = cmd_build(cfg, out, err); rc != kOk) return rc;
    AggregateOptions agg;
    agg.output = root / "dataset.csv";
    if (const int rc = cmd_aggregate(cfg, agg, out, err); rc != kOk) return rc;

    // Baseline: every design lowered without directives.
    RunConfig base_cfg = cfg;
    base_cfg.work_dir = root / "baseline";
    fs::remove_all(base_cfg.work_dir, ec);
    const WorkspaceLayout base_ws{base_cfg.work_dir};
    for (const auto& d : load_dataset(designs, "demo").designs) {
      lower_xilinx(std::get<AbstractDesign>(d), DirectiveAssignment{}, base_ws);
    }
    if (const int rc = cmd_build(base_cfg, out, err); rc != kOk) return rc;
    agg.output = root / "baseline.csv";
    if (const int rc = cmd_aggregate(base_cfg, agg, out, err); rc != kOk) return rc;

    const auto sampled = load_table(root / "dataset.csv");
    const auto base = load_table(root / "baseline.csv");
    std::vector<TableRow> grouped;
    for (auto row : base.rows) {
      row.at("dataset") = std::string("base");
      grouped.push_back(row);
      row.at("dataset") = std::string("expanded");
      grouped.push_back(std::move(row));
    }
    for (auto row : sampled.rows) {
      row.at("dataset") = std::string("expanded");
      grouped.push_back(std::move(row));
    }
    const std::vector<std::string> metrics = {"hls_lut", "latency_avg_cycles"};
    const auto summary = coverage_summary(grouped, GroupBy::dataset, metrics);
    ordered_json cov;
    cov["groups"] = ordered_json::parse(coverage_summary_json(summary));
    ordered_json contains = ordered_json::object();
    for (const auto& m : metrics) {
      const auto* b = summary.find("base", m);
      const auto* e = summary.find("expanded", m);
      const bool strict =
          b && e && e->min <= b->min && e->max >= b->max && (e->min < b->min || e->max > b->max);
      contains[m] = strict;
      out << "coverage " << m << ": base [" << (b ? format_double(b->min) : "-") << ", "
          << (b ? format_double(b->max) : "-") << "] expanded [" << (e ? format_double(e->min) : "-") << ", "
          << (e ? format_double(e->max) : "-") << "]" << (strict ? " (wider)" : "") << "\n";
    }
    cov["strictly_contains"] = contains;
    cov["per_design"] = ordered_json::parse(
        coverage_summary_json(coverage_summary(sampled.rows, GroupBy::base_design, metrics)));
    write_text_file(root / "coverage.json", cov.dump(2) + "\n");
    out << "demo output in " << root.string() << "\n";
    return static_cast<int>(kOk);
  });
}

}  // namespace hlsforge::cli
