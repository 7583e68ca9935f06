#include "hlsforge/toolflows.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

#include "hlsforge/aggregate.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/frontends.hpp"
#include "hlsforge/fsutil.hpp"
#include "hlsforge/process.hpp"

namespace hlsforge {

namespace {

std::string target_label(std::string_view target) {
  const auto slash = target.rfind('/');
  return std::string(slash == std::string_view::npos ? target : target.substr(slash + 1));
}

std::vector<std::string> tokens_of(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream ss{std::string(line)};
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string option_value(const std::vector<std::string>& toks, std::string_view opt) {
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i] == opt) return toks[i + 1];
  }
  return {};
}

long long parse_positive(const std::string& text, std::string_view what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, std::string(what) + " '" + text + "' is not a positive integer");
}

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

void check_loop(const MockManifest& m, const std::string& label) {
  if (!m.find_loop(label)) throw Error(ErrorCode::LabelUnknown, "loop '" + label + "' not in mock manifest");
}

class FlowLog {
 public:
  explicit FlowLog(const fs::path& path) : path_(path), out_(path, std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::IOError, "cannot write log " + path.string());
  }
  template <typename T>
  FlowLog& operator<<(const T& v) {
    out_ << v;
    return *this;
  }
  void flush() { out_.flush(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::ofstream out_;
};

void write_outcome(const ConcreteDesign& design, const FlowOutcome& outcome) {
  write_text_file(design.dir / (outcome.flow_name + ".outcome.json"), flow_outcome_json(outcome));
}

// Sleeps for the mock's synthetic duration; false if the timeout cut it short.
bool mock_sleep(const ToolFlowSpec& spec) {
  if (spec.mock_delay_s <= 0) return true;
  const double wait = std::min(spec.mock_delay_s, spec.timeout_s);
  std::this_thread::sleep_for(std::chrono::duration<double>(wait));
  return spec.mock_delay_s <= spec.timeout_s;
}

double run_mock_synth(const ToolFlowSpec& spec, const ConcreteDesign& design, FlowLog& log) {
  const auto manifest = load_mock_manifest(design.dir);
  DirectiveSettings settings;
  if (design.vendor == Vendor::intel) {
    settings = settings_from_intel_sources(design.dir, manifest);
  } else if (fs::exists(design.dir / kOptFile)) {
    settings = settings_from_opt_tcl(read_text_file(design.dir / kOptFile), manifest);
  }
  const auto hls = mock_synth_metrics(manifest, settings, spec.cost_model);
  const auto report = design.dir / kCsynthReportPath;
  fs::create_directories(report.parent_path());
  write_text_file(report, render_csynth_xml(hls, design.base_name));
  log << "mock synthesis (cost model " << spec.cost_model.version << ")\n"
      << "latency_avg=" << *hls.latency_avg_cycles << " lut=" << hls.lut << " ff=" << hls.ff << " dsp=" << hls.dsp
      << " bram=" << hls.bram << "\n";
  return mock_runtime_s(hls, spec.cost_model);
}

double run_mock_impl(const ToolFlowSpec& spec, const ConcreteDesign& design, FlowLog& log) {
  const auto report = design.dir / kCsynthReportPath;
  if (!fs::exists(report)) throw Error(ErrorCode::SynthReportMissing, report.string());
  const auto hls = parse_vitis_csynth_report(read_text_file(report));
  const auto manifest = load_mock_manifest(design.dir);
  const auto impl = mock_impl_metrics(hls, manifest.clock_target_ns, spec.cost_model);
  write_text_file(design.dir / kImplReportPath, render_impl_report_json(impl));
  log << "mock implementation (cost model " << spec.cost_model.version << ")\n"
      << "wns=" << format_double(impl.wns_ns) << " lut=" << impl.lut << "\n";
  return mock_runtime_s(hls, spec.cost_model);
}

std::vector<std::string> expand_command(const ToolFlowSpec& spec, const ConcreteDesign& design) {
  std::vector<std::string> argv;
  for (const auto& tok : spec.command_template) {
    if (tok == "{sources}") {
      for (const auto& rel : list_files_recursive(design.dir)) {
        const auto ext = fs::path(rel).extension();
        if (ext == ".c" || ext == ".cc" || ext == ".cpp" || ext == ".cxx") argv.push_back(rel);
      }
      continue;
    }
    std::string expanded = tok;
    const std::string key = "{design_dir}";
    for (auto pos = expanded.find(key); pos != std::string::npos; pos = expanded.find(key, pos)) {
      expanded.replace(pos, key.size(), design.dir.string());
      pos += design.dir.string().size();
    }
    argv.push_back(std::move(expanded));
  }
  return argv;
}

ToolFlowSpec vendor_flow(std::string name, std::string default_exe, const VendorToolOptions& options,
                         std::vector<std::string> args, std::vector<std::string> required, std::string version_flag) {
  const std::string exe = options.executable.empty() ? default_exe : options.executable;
  const auto resolved = find_executable(exe);
  if (!resolved) throw Error(ErrorCode::ExecutableNotFound, exe);
  ToolFlowSpec spec;
  spec.name = std::move(name);
  spec.kind = FlowKind::external;
  spec.timeout_s = options.timeout_s;
  spec.required_files = std::move(required);
  spec.command_template.push_back(resolved->string());
  spec.command_template.insert(spec.command_template.end(), args.begin(), args.end());
  spec.tool_name = fs::path(exe).filename().string();
  spec.tool_version = probe_tool_version(resolved->string(), version_flag);
  return spec;
}

}  // namespace

std::string_view to_string(FlowStatus status) {
  switch (status) {
    case FlowStatus::ok: return "ok";
    case FlowStatus::failed: return "failed";
    case FlowStatus::timeout: return "timeout";
    case FlowStatus::skipped_missing_files: return "skipped_missing_files";
  }
  return "failed";
}

FlowStatus parse_flow_status(std::string_view text) {
  if (text == "ok") return FlowStatus::ok;
  if (text == "failed") return FlowStatus::failed;
  if (text == "timeout") return FlowStatus::timeout;
  if (text == "skipped_missing_files") return FlowStatus::skipped_missing_files;
  throw Error(ErrorCode::InvalidArgument, "unknown flow status '" + std::string(text) + "'");
}

int severity(FlowStatus status) {
  switch (status) {
    case FlowStatus::ok: return 0;
    case FlowStatus::skipped_missing_files: return 1;
    case FlowStatus::failed: return 2;
    case FlowStatus::timeout: return 3;
  }
  return 2;
}

std::string_view to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::mock_hls_synth: return "mock_hls_synth";
    case FlowKind::mock_impl: return "mock_impl";
    case FlowKind::external: return "external";
  }
  return "external";
}

FlowKind parse_flow_kind(std::string_view text) {
  if (text == "mock_hls_synth") return FlowKind::mock_hls_synth;
  if (text == "mock_impl") return FlowKind::mock_impl;
  if (text == "external") return FlowKind::external;
  throw Error(ErrorCode::InvalidArgument, "unknown flow kind '" + std::string(text) + "'");
}

DirectiveSettings settings_from_opt_tcl(std::string_view opt_tcl, const MockManifest& manifest) {
  DirectiveSettings s;
  for (const auto& raw : split(opt_tcl, '\n')) {
    const auto toks = tokens_of(raw);
    if (toks.empty() || toks[0].front() == '#') continue;
    const auto& cmd = toks[0];
    const auto label = target_label(toks.back());
    if (cmd == "set_directive_unroll") {
      check_loop(manifest, label);
      const auto factor = option_value(toks, "-factor");
      s.unroll[label] = factor.empty() ? manifest.find_loop(label)->trip_count : parse_positive(factor, "unroll factor");
    } else if (cmd == "set_directive_pipeline") {
      check_loop(manifest, label);
      s.pipelined[label] = true;
    } else if (cmd == "set_directive_array_partition") {
      const auto* array = manifest.find_array(label);
      if (!array) throw Error(ErrorCode::LabelUnknown, "array '" + label + "' not in mock manifest");
      const auto type = option_value(toks, "-type");
      const auto factor = option_value(toks, "-factor");
      s.partition_banks[label] = type == "complete" ? array->depth : parse_positive(factor, "partition factor");
    }
  }
  return s;
}

DirectiveSettings settings_from_intel_sources(const fs::path& dir, const MockManifest& manifest) {
  DirectiveSettings s;
  for (const auto& loop : manifest.loops) s.pipelined[loop.label] = true;
  for (const auto& rel : list_files_recursive(dir)) {
    const auto ext = fs::path(rel).extension();
    if (ext != ".c" && ext != ".cc" && ext != ".cpp" && ext != ".cxx" && ext != ".h" && ext != ".hpp") continue;
    const auto lines = split(read_text_file(dir / rel), '\n');
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto t = trim(lines[i]);
      if (!t.starts_with(kIntelAnchorPrefix)) continue;
      const std::string label(trim(t.substr(kIntelAnchorPrefix.size())));
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        const auto a = trim(lines[j]);
        if (a.starts_with("#pragma unroll")) {
          check_loop(manifest, label);
          s.unroll[label] = parse_positive(std::string(trim(a.substr(14))), "unroll factor");
        } else if (a.starts_with("hls_numbanks(")) {
          if (!manifest.find_array(label)) throw Error(ErrorCode::LabelUnknown, "array '" + label + "' not in mock manifest");
          const auto close = a.find(')');
          s.partition_banks[label] = parse_positive(std::string(a.substr(13, close - 13)), "numbanks");
        } else {
          break;
        }
      }
    }
  }
  return s;
}

HlsSynthMetrics mock_synth_metrics(const MockManifest& m, const DirectiveSettings& settings, const MockCostModel& cost) {
  long long latency = 0;
  double lut = static_cast<double>(m.base_lut);
  double ff = static_cast<double>(m.base_ff);
  long long dsp = 0;
  long long max_unroll = 1;
  for (const auto& loop : m.loops) {
    const auto u_it = settings.unroll.find(loop.label);
    const long long u = u_it == settings.unroll.end() ? 1 : u_it->second;
    const auto p_it = settings.pipelined.find(loop.label);
    const bool pipelined = p_it != settings.pipelined.end() && p_it->second;
    const long long iterations = ceil_div(loop.trip_count, u);
    latency += pipelined ? iterations - 1 + loop.body_ops : iterations * loop.body_ops;
    lut += cost.lut_per_op * static_cast<double>(loop.body_ops * u);
    ff += cost.ff_per_op * static_cast<double>(loop.body_ops * u);
    dsp += loop.mult_ops * u;
    max_unroll = std::max(max_unroll, u);
  }
  long long bram = 0;
  for (const auto& array : m.arrays) {
    const auto b_it = settings.partition_banks.find(array.label);
    const long long banks = b_it == settings.partition_banks.end() ? 1 : b_it->second;
    bram += static_cast<long long>(std::ceil(static_cast<double>(array.depth * array.elem_bytes) / cost.bram_bytes)) *
            banks;
  }
  HlsSynthMetrics out;
  out.latency_avg_cycles = latency;
  out.latency_best_cycles = latency;
  out.latency_worst_cycles = 2 * latency;
  out.ii = latency + 1;
  out.clock_estimate_ns = cost.clock_base_ns + cost.clock_slope_ns * std::log2(static_cast<double>(max_unroll));
  out.lut = std::llround(lut);
  out.ff = std::llround(ff);
  out.dsp = dsp;
  out.bram = bram;
  out.uram = 0;
  return out;
}

ImplMetrics mock_impl_metrics(const HlsSynthMetrics& hls, double clock_target_ns, const MockCostModel& cost) {
  auto scaled = [&](std::int64_t v) { return std::llround(cost.impl_resource_scale * static_cast<double>(v)); };
  ImplMetrics out;
  out.lut = scaled(hls.lut);
  out.ff = scaled(hls.ff);
  out.dsp = scaled(hls.dsp);
  out.bram = scaled(hls.bram);
  out.wns_ns = clock_target_ns - hls.clock_estimate_ns -
               cost.wns_lut_coeff * std::log2(1.0 + static_cast<double>(hls.lut) / 1000.0);
  out.whs_ns = cost.whs_ns;
  out.total_power_w = cost.power_base_w + static_cast<double>(hls.lut) * cost.power_per_lut_w +
                      static_cast<double>(hls.dsp) * cost.power_per_dsp_w;
  return out;
}

double mock_runtime_s(const HlsSynthMetrics& hls, const MockCostModel& cost) {
  return cost.runtime_base_s + cost.runtime_per_klut_s * static_cast<double>(hls.lut) / 1000.0;
}

std::string render_csynth_xml(const HlsSynthMetrics& m, std::string_view top_name) {
  auto opt = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string("undef"); };
  std::ostringstream x;
  x << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<profile>\n"
    << "  <ReportVersion>\n    <Version>2023.1</Version>\n  </ReportVersion>\n"
    << "  <UserAssignments>\n    <TopModelName>" << top_name << "</TopModelName>\n  </UserAssignments>\n"
    << "  <PerformanceEstimates>\n"
    << "    <SummaryOfTimingAnalysis>\n"
    << "      <unit>ns</unit>\n"
    << "      <EstimatedClockPeriod>" << format_double(m.clock_estimate_ns) << "</EstimatedClockPeriod>\n"
    << "    </SummaryOfTimingAnalysis>\n"
    << "    <SummaryOfOverallLatency>\n"
    << "      <unit>clock cycles</unit>\n"
    << "      <Best-caseLatency>" << opt(m.latency_best_cycles) << "</Best-caseLatency>\n"
    << "      <Average-caseLatency>" << opt(m.latency_avg_cycles) << "</Average-caseLatency>\n"
    << "      <Worst-caseLatency>" << opt(m.latency_worst_cycles) << "</Worst-caseLatency>\n"
    << "      <Interval-min>" << opt(m.ii) << "</Interval-min>\n"
    << "      <Interval-max>" << opt(m.ii) << "</Interval-max>\n"
    << "    </SummaryOfOverallLatency>\n"
    << "  </PerformanceEstimates>\n"
    << "  <AreaEstimates>\n"
    << "    <Resources>\n"
    << "      <BRAM_18K>" << m.bram << "</BRAM_18K>\n"
    << "      <DSP>" << m.dsp << "</DSP>\n"
    << "      <FF>" << m.ff << "</FF>\n"
    << "      <LUT>" << m.lut << "</LUT>\n"
    << "      <URAM>" << m.uram << "</URAM>\n"
    << "    </Resources>\n"
    << "  </AreaEstimates>\n"
    << "</profile>\n";
  return x.str();
}

std::string render_impl_report_json(const ImplMetrics& m) {
  nlohmann::ordered_json j;
  j["wns_ns"] = m.wns_ns;
  j["whs_ns"] = m.whs_ns;
  j["lut"] = m.lut;
  j["ff"] = m.ff;
  j["dsp"] = m.dsp;
  j["bram"] = m.bram;
  j["total_power_w"] = m.total_power_w;
  return j.dump(2) + "\n";
}

FlowOutcome run_flow(const ToolFlowSpec& spec, const ConcreteDesign& design) {
  FlowOutcome outcome;
  outcome.design_id = design.id;
  outcome.flow_name = spec.name;
  outcome.log_path = design.dir / (spec.name + ".log");
  outcome.tool_name = spec.tool_name.empty() ? std::string(to_string(spec.kind)) : spec.tool_name;
  outcome.tool_version = spec.tool_version;
  if (spec.kind != FlowKind::external && outcome.tool_version.empty()) {
    outcome.tool_version = "mock-" + spec.cost_model.version;
  }

  FlowLog log(outcome.log_path);
  const auto missing = validate_design_files(design.dir, spec.required_files);
  if (!missing.empty()) {
    log << "skipped: missing required files:";
    for (const auto& m : missing) log << " " << m;
    log << "\n";
    outcome.status = FlowStatus::skipped_missing_files;
    write_outcome(design, outcome);
    return outcome;
  }

  if (spec.kind == FlowKind::external) {
    log.flush();
    ProcessOptions opts;
    opts.cwd = design.dir;
    opts.environment = spec.environment;
    opts.log_path = outcome.log_path;
    opts.timeout_s = spec.timeout_s;
    const auto argv = expand_command(spec, design);
    const auto r = run_process(argv, opts);
    outcome.runtime_s = r.runtime_s;
    outcome.status = r.timed_out ? FlowStatus::timeout : (r.exit_code == 0 ? FlowStatus::ok : FlowStatus::failed);
    write_outcome(design, outcome);
    return outcome;
  }

  if (!mock_sleep(spec)) {
    log << "timeout after " << format_double(spec.timeout_s) << "s\n";
    outcome.status = FlowStatus::timeout;
    outcome.runtime_s = spec.timeout_s;
    write_outcome(design, outcome);
    return outcome;
  }
  try {
    const double modeled = spec.kind == FlowKind::mock_hls_synth ? run_mock_synth(spec, design, log)
                                                                  : run_mock_impl(spec, design, log);
    outcome.runtime_s = spec.mock_delay_s + modeled;
    outcome.status = FlowStatus::ok;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    outcome.status = FlowStatus::failed;
    outcome.runtime_s = spec.mock_delay_s;
  }
  write_outcome(design, outcome);
  return outcome;
}

ToolFlowSpec mock_hls_synth_spec(MockCostModel cost, double delay_s) {
  ToolFlowSpec spec;
  spec.name = "mock_hls_synth";
  spec.kind = FlowKind::mock_hls_synth;
  spec.cost_model = std::move(cost);
  spec.mock_delay_s = delay_s;
  return spec;
}

ToolFlowSpec mock_impl_spec(MockCostModel cost, double delay_s) {
  ToolFlowSpec spec;
  spec.name = "mock_impl";
  spec.kind = FlowKind::mock_impl;
  spec.cost_model = std::move(cost);
  spec.mock_delay_s = delay_s;
  return spec;
}

FlowOutcome mock_hls_synth(const ConcreteDesign& design, const MockCostModel& cost) {
  return run_flow(mock_hls_synth_spec(cost), design);
}

FlowOutcome mock_impl(const ConcreteDesign& design, const MockCostModel& cost) {
  return run_flow(mock_impl_spec(cost), design);
}

ToolFlowSpec vitis_hls_synth_flow(const VendorToolOptions& options) {
  return vendor_flow("vitis_hls_synth", "vitis_hls", options, {"-f", "dataset_hls.tcl"}, {"dataset_hls.tcl"},
                     "-version");
}

ToolFlowSpec vitis_hls_impl_flow(const VendorToolOptions& options) {
  return vendor_flow("vitis_hls_impl", "vitis_hls", options, {"-f", "dataset_hls_ip_export.tcl"},
                     {"dataset_hls_ip_export.tcl"}, "-version");
}

ToolFlowSpec intel_hls_synth_flow(const VendorToolOptions& options) {
  return vendor_flow("intel_hls_synth", "i++", options, {"-march=Arria10", "--simulator", "none", "-o", "kernel",
                                                         "{sources}"},
                     {}, "--version");
}

ToolFlowSpec intel_quartus_impl_flow(const VendorToolOptions& options) {
  return vendor_flow("intel_quartus_impl", "quartus_sh", options, {"--flow", "compile", "quartus_compile"}, {},
                     "--version");
}

std::string probe_tool_version(const std::string& executable, const std::string& flag) {
  static std::mutex mutex;
  static std::map<std::string, std::string> cache;
  {
    std::lock_guard lock(mutex);
    if (const auto it = cache.find(executable); it != cache.end()) return it->second;
  }
  const auto tmp = fs::temp_directory_path() /
                   ("hlsforge_version_" + std::to_string(std::hash<std::string>{}(executable)) + "_" +
                    std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + ".txt");
  std::string version = "unknown";
  try {
    ProcessOptions opts;
    opts.log_path = tmp;
    opts.timeout_s = 30;
    fs::remove(tmp);
    run_process({executable, flag}, opts);
    for (const auto& line : split(read_text_file(tmp), '\n')) {
      const auto t = trim(line);
      if (!t.empty()) {
        version = std::string(t);
        break;
      }
    }
  } catch (const Error&) {
  }
  std::error_code ec;
  fs::remove(tmp, ec);
  std::lock_guard lock(mutex);
  return cache.emplace(executable, version).first->second;
}

std::string flow_outcome_json(const FlowOutcome& o) {
  nlohmann::ordered_json j;
  j["design_id"] = o.design_id;
  j["flow"] = o.flow_name;
  j["status"] = std::string(to_string(o.status));
  j["runtime_s"] = o.runtime_s;
  j["log"] = o.log_path.filename().string();
  j["tool_name"] = o.tool_name;
  j["tool_version"] = o.tool_version;
  return j.dump(2) + "\n";
}

std::vector<FlowOutcome> read_flow_outcomes(const fs::path& design_dir) {
  std::vector<FlowOutcome> out;
  std::error_code ec;
  if (!fs::is_directory(design_dir, ec)) return out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(design_dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".outcome.json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      const auto j = nlohmann::json::parse(read_text_file(f));
      FlowOutcome o;
      o.design_id = j.at("design_id").get<std::string>();
      o.flow_name = j.at("flow").get<std::string>();
      o.status = parse_flow_status(j.at("status").get<std::string>());
      o.runtime_s = j.at("runtime_s").get<double>();
      o.log_path = design_dir / j.at("log").get<std::string>();
      o.tool_name = j.value("tool_name", "");
      o.tool_version = j.value("tool_version", "");
      out.push_back(std::move(o));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedReport, f.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hlsforge
