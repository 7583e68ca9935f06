#include "hlsforge/aggregate.hpp"

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "design_manifest.hpp"
#include "hlsforge/core.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"
#include "hlsforge/toolflows.hpp"
#include "hlsforge/zip.hpp"

namespace hlsforge {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kHlsFile = "data_hls.json";
constexpr std::string_view kImplFile = "data_impl.json";
constexpr std::string_view kExecutionFile = "data_execution.json";

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) throw Error(ErrorCode::MissingField, key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedReport, std::string(key) + ": " + e.what());
  }
}

std::optional<std::int64_t> optional_int(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::int64_t>();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedReport, e.what());
  }
}

template <typename T>
void put_optional(ordered_json& j, const char* key, const std::optional<T>& v) {
  if (v) {
    j[key] = *v;
  } else {
    j[key] = nullptr;
  }
}

// RFC 4180 reader: quoted fields may contain separators, quotes ("") and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
      rows.push_back(std::move(row));
      row.clear();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw Error(ErrorCode::MalformedReport, "unterminated quoted CSV field");
  if (field_started || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {};
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return v;
        }
      },
      cell);
}

// Empty text is null for every column type.
Cell cell_from_text(const std::string& text, ColumnType type, std::string_view column) {
  if (text.empty()) return std::monostate{};
  switch (type) {
    case ColumnType::string: return text;
    case ColumnType::integer:
      if (const auto v = parse_int(text)) return *v;
      break;
    case ColumnType::real:
      if (const auto v = parse_real(text)) return *v;
      break;
  }
  throw Error(ErrorCode::MalformedReport, "column " + std::string(column) + ": bad value '" + text + "'");
}

ordered_json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return v;
        }
      },
      cell);
}

Cell cell_from_json(const json& j, ColumnType type, std::string_view column) {
  if (j.is_null()) return std::monostate{};
  try {
    switch (type) {
      case ColumnType::string: return j.get<std::string>();
      case ColumnType::integer: return j.get<std::int64_t>();
      case ColumnType::real: return j.get<double>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedReport, "column " + std::string(column) + ": " + e.what());
  }
  return std::monostate{};
}

void set_opt(TableRow& row, std::string_view col, const std::optional<std::int64_t>& v) {
  if (v) row.at(col) = *v;
}

void fill_hls(TableRow& row, const HlsSynthMetrics& m) {
  set_opt(row, "latency_best_cycles", m.latency_best_cycles);
  set_opt(row, "latency_avg_cycles", m.latency_avg_cycles);
  set_opt(row, "latency_worst_cycles", m.latency_worst_cycles);
  set_opt(row, "ii", m.ii);
  row.at("clock_estimate_ns") = m.clock_estimate_ns;
  row.at("hls_lut") = m.lut;
  row.at("hls_ff") = m.ff;
  row.at("hls_dsp") = m.dsp;
  row.at("hls_bram") = m.bram;
  row.at("hls_uram") = m.uram;
}

void fill_impl(TableRow& row, const ImplMetrics& m) {
  row.at("impl_wns_ns") = m.wns_ns;
  row.at("impl_whs_ns") = m.whs_ns;
  row.at("impl_lut") = m.lut;
  row.at("impl_ff") = m.ff;
  row.at("impl_dsp") = m.dsp;
  row.at("impl_bram") = m.bram;
  row.at("impl_total_power_w") = m.total_power_w;
}

void fill_execution(TableRow& row, const ExecutionMeta& m) {
  row.at("tool_name") = m.tool_name;
  row.at("tool_version") = m.tool_version;
  row.at("runtime_s") = m.runtime_s;
  row.at("status") = std::string(to_string(m.status));
}

void fill_assignment(TableRow& row, const DirectiveAssignment& a) {
  std::int64_t max_unroll = 1;
  std::int64_t pipelined = 0;
  std::int64_t partitioned = 0;
  for (const auto& s : a.selections) {
    if (s.param_kind == "unroll") {
      if (const auto v = parse_int(s.choice)) max_unroll = std::max(max_unroll, *v);
    }
    if (s.fixed_directive == "pipeline" || s.param_kind == "pipeline") ++pipelined;
    if (s.param_kind == "array_partition" || s.fixed_directive == "array_partition") ++partitioned;
  }
  row.at("assignment") = summarize(a);
  row.at("n_directives") = static_cast<std::int64_t>(a.selections.size());
  row.at("max_unroll") = max_unroll;
  row.at("n_pipelined") = pipelined;
  row.at("n_partitioned") = partitioned;
}

std::vector<fs::path> sorted_subdirs(const fs::path& dir) {
  std::vector<fs::path> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && !name.empty() && name.front() != '.') out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<fs::path> post_frontend_dirs(const fs::path& work_dir) {
  std::vector<fs::path> out;
  for (const auto& d : sorted_subdirs(work_dir)) {
    if (d.filename().string().ends_with(kPostFrontendSuffix)) out.push_back(d);
  }
  return out;
}

double convert_unit(double v, const std::string& rule) {
  if (rule == "identity") return v;
  if (rule == "ns_to_mhz" || rule == "mhz_to_ns") {
    if (v == 0) throw Error(ErrorCode::InvalidArgument, "zero in reciprocal unit conversion");
    return 1000.0 / v;
  }
  throw Error(ErrorCode::MalformedSpec, "unknown unit rule '" + rule + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Reports

HlsSynthMetrics parse_vitis_csynth_report(std::string_view xml_text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml_text)};
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::MalformedReport, std::string("csynth report: ") + e.what());
  }
  const pt::ptree* root = &tree;
  if (const auto profile = tree.get_child_optional("profile")) root = &*profile;
  const auto area = root->get_child_optional("AreaEstimates");
  if (!area) throw Error(ErrorCode::MalformedReport, "csynth report has no AreaEstimates");

  auto latency = [&](const char* path) -> std::optional<std::int64_t> {
    const auto text = root->get_optional<std::string>(std::string("PerformanceEstimates.SummaryOfOverallLatency.") + path);
    if (!text) return std::nullopt;
    return parse_int(*text);  // "undef" -> null
  };
  auto resource = [&](const char* name) -> std::int64_t {
    const auto text = area->get_optional<std::string>(std::string("Resources.") + name);
    if (!text) return 0;
    const auto v = parse_int(*text);
    if (!v) throw Error(ErrorCode::MalformedReport, std::string("bad resource value for ") + name);
    return *v;
  };

  HlsSynthMetrics m;
  m.latency_best_cycles = latency("Best-caseLatency");
  m.latency_avg_cycles = latency("Average-caseLatency");
  m.latency_worst_cycles = latency("Worst-caseLatency");
  m.ii = latency("Interval-min");
  if (const auto clock = root->get_optional<std::string>("PerformanceEstimates.SummaryOfTimingAnalysis.EstimatedClockPeriod")) {
    const auto v = parse_real(*clock);
    if (!v) throw Error(ErrorCode::MalformedReport, "bad EstimatedClockPeriod '" + *clock + "'");
    m.clock_estimate_ns = *v;
  }
  m.lut = resource("LUT");
  m.ff = resource("FF");
  m.dsp = resource("DSP");
  m.bram = resource("BRAM_18K");
  m.uram = resource("URAM");
  return m;
}

ImplMetrics parse_impl_report(std::string_view json_text) {
  const auto j = parse_json(json_text);
  if (!j.is_object()) throw Error(ErrorCode::MalformedReport, "impl report is not a JSON object");
  ImplMetrics m;
  m.wns_ns = required<double>(j, "wns_ns");
  m.whs_ns = required<double>(j, "whs_ns");
  m.lut = required<std::int64_t>(j, "lut");
  m.ff = required<std::int64_t>(j, "ff");
  m.dsp = required<std::int64_t>(j, "dsp");
  m.bram = required<std::int64_t>(j, "bram");
  m.total_power_w = required<double>(j, "total_power_w");
  return m;
}

std::string hls_metrics_json(const HlsSynthMetrics& m) {
  ordered_json j;
  put_optional(j, "latency_best_cycles", m.latency_best_cycles);
  put_optional(j, "latency_avg_cycles", m.latency_avg_cycles);
  put_optional(j, "latency_worst_cycles", m.latency_worst_cycles);
  put_optional(j, "ii", m.ii);
  j["clock_estimate_ns"] = m.clock_estimate_ns;
  j["lut"] = m.lut;
  j["ff"] = m.ff;
  j["dsp"] = m.dsp;
  j["bram"] = m.bram;
  j["uram"] = m.uram;
  return j.dump(2) + "\n";
}

std::string impl_metrics_json(const ImplMetrics& m) { return render_impl_report_json(m); }

std::string execution_meta_json(const ExecutionMeta& m) {
  ordered_json j;
  j["tool_name"] = m.tool_name;
  j["tool_version"] = m.tool_version;
  j["runtime_s"] = m.runtime_s;
  j["status"] = std::string(to_string(m.status));
  return j.dump(2) + "\n";
}

HlsSynthMetrics parse_hls_metrics_json(std::string_view text) {
  const auto j = parse_json(text);
  HlsSynthMetrics m;
  try {
    m.latency_best_cycles = optional_int(j, "latency_best_cycles");
    m.latency_avg_cycles = optional_int(j, "latency_avg_cycles");
    m.latency_worst_cycles = optional_int(j, "latency_worst_cycles");
    m.ii = optional_int(j, "ii");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedReport, e.what());
  }
  m.clock_estimate_ns = required<double>(j, "clock_estimate_ns");
  m.lut = required<std::int64_t>(j, "lut");
  m.ff = required<std::int64_t>(j, "ff");
  m.dsp = required<std::int64_t>(j, "dsp");
  m.bram = required<std::int64_t>(j, "bram");
  m.uram = required<std::int64_t>(j, "uram");
  return m;
}

ImplMetrics parse_impl_metrics_json(std::string_view text) { return parse_impl_report(text); }

ExecutionMeta parse_execution_meta_json(std::string_view text) {
  const auto j = parse_json(text);
  ExecutionMeta m;
  m.tool_name = required<std::string>(j, "tool_name");
  m.tool_version = required<std::string>(j, "tool_version");
  m.runtime_s = required<double>(j, "runtime_s");
  m.status = parse_flow_status(required<std::string>(j, "status"));
  return m;
}

std::vector<fs::path> write_standard_json(const fs::path& design_dir, const MetricsBundle& bundle) {
  std::vector<fs::path> written;
  auto emit = [&](std::string_view file, const std::optional<std::string>& text) {
    const auto path = design_dir / file;
    if (text) {
      write_text_file(path, *text);
      written.push_back(path);
    } else {
      std::error_code ec;
      fs::remove(path, ec);
    }
  };
  emit(kHlsFile, bundle.hls ? std::optional(hls_metrics_json(*bundle.hls)) : std::nullopt);
  emit(kImplFile, bundle.impl ? std::optional(impl_metrics_json(*bundle.impl)) : std::nullopt);
  emit(kExecutionFile, bundle.execution ? std::optional(execution_meta_json(*bundle.execution)) : std::nullopt);
  return written;
}

MetricsBundle read_standard_json(const fs::path& design_dir) {
  MetricsBundle b;
  if (fs::exists(design_dir / kHlsFile)) b.hls = parse_hls_metrics_json(read_text_file(design_dir / kHlsFile));
  if (fs::exists(design_dir / kImplFile)) b.impl = parse_impl_metrics_json(read_text_file(design_dir / kImplFile));
  if (fs::exists(design_dir / kExecutionFile)) {
    b.execution = parse_execution_meta_json(read_text_file(design_dir / kExecutionFile));
  }
  return b;
}

MetricsBundle extract_design_data(const fs::path& design_dir) {
  MetricsBundle b;
  if (const auto p = design_dir / kCsynthReportPath; fs::exists(p)) {
    try {
      b.hls = parse_vitis_csynth_report(read_text_file(p));
    } catch (const Error&) {
    }
  }
  if (const auto p = design_dir / kImplReportPath; fs::exists(p)) {
    try {
      b.impl = parse_impl_report(read_text_file(p));
    } catch (const Error&) {
    }
  }
  const auto outcomes = read_flow_outcomes(design_dir);
  if (!outcomes.empty()) {
    ExecutionMeta meta;
    std::vector<std::string> names;
    std::vector<std::string> versions;
    auto add_unique = [](std::vector<std::string>& v, const std::string& s) {
      if (!s.empty() && std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    };
    for (const auto& o : outcomes) {
      add_unique(names, o.tool_name);
      add_unique(versions, o.tool_version);
      meta.runtime_s += o.runtime_s;
      if (severity(o.status) > severity(meta.status)) meta.status = o.status;
    }
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : "+") + x;
      return s;
    };
    meta.tool_name = join(names);
    meta.tool_version = join(versions);
    b.execution = meta;
  }
  return b;
}

std::size_t extract_workspace(const fs::path& work_dir) {
  std::size_t n = 0;
  for (const auto& dataset : post_frontend_dirs(work_dir)) {
    for (const auto& design : sorted_subdirs(dataset)) {
      write_standard_json(design, extract_design_data(design));
      ++n;
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Table

const std::vector<Column>& table_columns() {
  using T = ColumnType;
  using S = Section;
  static const std::vector<Column> kColumns = {
      {"design_id", T::string, S::identity},
      {"base_name", T::string, S::identity},
      {"dataset", T::string, S::identity},
      {"vendor", T::string, S::identity},
      {"source", T::string, S::identity},
      {"assignment", T::string, S::assignment},
      {"n_directives", T::integer, S::assignment},
      {"max_unroll", T::integer, S::assignment},
      {"n_pipelined", T::integer, S::assignment},
      {"n_partitioned", T::integer, S::assignment},
      {"latency_best_cycles", T::integer, S::hls},
      {"latency_avg_cycles", T::integer, S::hls},
      {"latency_worst_cycles", T::integer, S::hls},
      {"ii", T::integer, S::hls},
      {"clock_estimate_ns", T::real, S::hls},
      {"hls_lut", T::integer, S::hls},
      {"hls_ff", T::integer, S::hls},
      {"hls_dsp", T::integer, S::hls},
      {"hls_bram", T::integer, S::hls},
      {"hls_uram", T::integer, S::hls},
      {"impl_wns_ns", T::real, S::impl},
      {"impl_whs_ns", T::real, S::impl},
      {"impl_lut", T::integer, S::impl},
      {"impl_ff", T::integer, S::impl},
      {"impl_dsp", T::integer, S::impl},
      {"impl_bram", T::integer, S::impl},
      {"impl_total_power_w", T::real, S::impl},
      {"tool_name", T::string, S::execution},
      {"tool_version", T::string, S::execution},
      {"runtime_s", T::real, S::execution},
      {"status", T::string, S::execution},
  };
  return kColumns;
}

std::size_t column_index(std::string_view name) {
  const auto& cols = table_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i].name == name) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown column '" + std::string(name) + "'");
}

TableRow::TableRow() : cells(table_columns().size()) {}

const Cell& TableRow::at(std::string_view column) const { return cells.at(column_index(column)); }
Cell& TableRow::at(std::string_view column) { return cells.at(column_index(column)); }

std::optional<double> TableRow::numeric(std::string_view column) const {
  const auto& c = at(column);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return std::nullopt;
}

std::optional<std::string> TableRow::text(std::string_view column) const {
  if (const auto* s = std::get_if<std::string>(&at(column))) return *s;
  return std::nullopt;
}

bool TableRow::has_section(Section section) const {
  const auto& cols = table_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i].section == section && !std::holds_alternative<std::monostate>(cells[i])) return true;
  }
  return false;
}

AggregatedTable aggregate_collection(const fs::path& work_dir) {
  AggregatedTable table;
  for (const auto& dataset_dir : post_frontend_dirs(work_dir)) {
    std::string dataset = dataset_dir.filename().string();
    dataset.resize(dataset.size() - kPostFrontendSuffix.size());
    for (const auto& design_dir : sorted_subdirs(dataset_dir)) {
      TableRow row;
      row.at("dataset") = dataset;
      row.at("source") = std::string("hlsforge");
      const auto manifest = design_dir / kDesignManifestFile;
      if (fs::exists(manifest)) {
        const auto d = read_design_manifest(manifest);
        row.at("design_id") = d.id;
        row.at("base_name") = d.base_name;
        row.at("vendor") = std::string(to_string(d.vendor));
        fill_assignment(row, d.assignment);
      } else {
        row.at("design_id") = design_dir.filename().string();
      }
      const auto bundle = read_standard_json(design_dir);
      if (bundle.hls) fill_hls(row, *bundle.hls);
      if (bundle.impl) fill_impl(row, *bundle.impl);
      if (bundle.execution) fill_execution(row, *bundle.execution);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

TableFormat parse_table_format(std::string_view text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "jsonl") return TableFormat::jsonl;
  throw Error(ErrorCode::InvalidArgument, "unknown table format '" + std::string(text) + "'");
}

std::string table_to_csv(const AggregatedTable& table) {
  std::string out;
  const auto& cols = table_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i].name;
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cell_text(row.cells[i]));
    }
    out += '\n';
  }
  return out;
}

std::string table_to_jsonl(const AggregatedTable& table) {
  std::string out;
  const auto& cols = table_columns();
  for (const auto& row : table.rows) {
    ordered_json j;
    j["schema_version"] = kTableSchemaVersion;
    for (std::size_t i = 0; i < cols.size(); ++i) j[std::string(cols[i].name)] = cell_json(row.cells[i]);
    out += j.dump();
    out += '\n';
  }
  return out;
}

AggregatedTable table_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  const auto& cols = table_columns();
  if (rows.empty()) throw Error(ErrorCode::MalformedReport, "CSV has no header");
  const auto& header = rows.front();
  bool header_ok = header.size() == cols.size();
  for (std::size_t i = 0; header_ok && i < cols.size(); ++i) header_ok = header[i] == cols[i].name;
  if (!header_ok) throw Error(ErrorCode::MalformedReport, "CSV header does not match the table schema");
  AggregatedTable table;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != cols.size()) {
      throw Error(ErrorCode::MalformedReport, "CSV row " + std::to_string(r) + " has " +
                                                  std::to_string(rows[r].size()) + " fields");
    }
    TableRow row;
    for (std::size_t i = 0; i < cols.size(); ++i) row.cells[i] = cell_from_text(rows[r][i], cols[i].type, cols[i].name);
    table.rows.push_back(std::move(row));
  }
  return table;
}

AggregatedTable table_from_jsonl(std::string_view text) {
  AggregatedTable table;
  const auto& cols = table_columns();
  for (const auto& line : split(text, '\n')) {
    if (trim(line).empty()) continue;
    const auto j = parse_json(line);
    if (j.value("schema_version", 0) != kTableSchemaVersion) {
      throw Error(ErrorCode::MalformedReport, "unsupported table schema_version");
    }
    TableRow row;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string key(cols[i].name);
      row.cells[i] = j.contains(key) ? cell_from_json(j.at(key), cols[i].type, key) : Cell{};
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

fs::path export_tabular(const AggregatedTable& table, const fs::path& path, TableFormat format) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_text_file(path, format == TableFormat::csv ? table_to_csv(table) : table_to_jsonl(table));
  return path;
}

AggregatedTable load_table(const fs::path& path) {
  const auto text = read_text_file(path);
  return path.extension() == ".jsonl" ? table_from_jsonl(text) : table_from_csv(text);
}

// ---------------------------------------------------------------------------
// Import

ImportResult import_external_dataset(std::string_view mapping_spec_json, const fs::path& path) {
  json spec;
  try {
    spec = json::parse(mapping_spec_json);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedSpec, e.what());
  }
  std::string name;
  std::string format;
  std::vector<std::pair<std::string, std::string>> mapping;  // src -> dst
  std::map<std::string, std::string> units;
  try {
    name = spec.at("name").get<std::string>();
    format = spec.at("format").get<std::string>();
    for (const auto& [src, dst] : spec.at("columns").items()) mapping.emplace_back(src, dst.get<std::string>());
    if (spec.contains("units")) {
      for (const auto& [dst, rule] : spec.at("units").items()) units[dst] = rule.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedSpec, e.what());
  }
  if (!is_identifier(name)) throw Error(ErrorCode::MalformedSpec, "bad import name '" + name + "'");
  if (format != "csv" && format != "json") throw Error(ErrorCode::MalformedSpec, "format must be csv or json");
  std::set<std::string> targets;
  for (const auto& [src, dst] : mapping) {
    try {
      column_index(dst);
    } catch (const Error&) {
      throw Error(ErrorCode::MalformedSpec, "unknown target column '" + dst + "'");
    }
    if (!targets.insert(dst).second) throw Error(ErrorCode::MalformedSpec, "target '" + dst + "' mapped twice");
    if (dst == "source") throw Error(ErrorCode::MalformedSpec, "'source' is set by the importer");
  }
  for (const auto& [dst, rule] : units) {
    if (!targets.contains(dst)) throw Error(ErrorCode::MalformedSpec, "unit rule for unmapped column '" + dst + "'");
    if (rule != "identity" && rule != "ns_to_mhz" && rule != "mhz_to_ns") {
      throw Error(ErrorCode::MalformedSpec, "unknown unit rule '" + rule + "'");
    }
  }

  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::SourceUnreadable, e.what());
  }

  // Normalize both formats to header + string records.
  std::vector<std::map<std::string, std::optional<std::string>>> records;
  std::set<std::string> available;
  if (format == "csv") {
    std::vector<std::vector<std::string>> rows;
    try {
      rows = parse_csv(text);
    } catch (const Error& e) {
      throw Error(ErrorCode::SourceUnreadable, e.what());
    }
    if (rows.empty()) throw Error(ErrorCode::SourceUnreadable, "CSV has no header");
    const auto header = rows.front();
    available.insert(header.begin(), header.end());
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() == 1 && rows[r][0].empty()) continue;
      std::map<std::string, std::optional<std::string>> rec;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (i < rows[r].size()) rec[header[i]] = rows[r][i];
      }
      records.push_back(std::move(rec));
    }
  } else {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SourceUnreadable, e.what());
    }
    if (!doc.is_array()) throw Error(ErrorCode::SourceUnreadable, "JSON source must be an array of objects");
    for (const auto& obj : doc) {
      if (!obj.is_object()) throw Error(ErrorCode::SourceUnreadable, "JSON source must be an array of objects");
      std::map<std::string, std::optional<std::string>> rec;
      for (const auto& [k, v] : obj.items()) {
        available.insert(k);
        if (v.is_null()) {
          rec[k] = std::nullopt;
        } else if (v.is_string()) {
          rec[k] = v.get<std::string>();
        } else {
          rec[k] = v.dump();
        }
      }
      records.push_back(std::move(rec));
    }
  }
  for (const auto& [src, dst] : mapping) {
    if (!available.contains(src)) throw Error(ErrorCode::MalformedSpec, "source column '" + src + "' not found");
  }

  ImportResult result;
  for (std::size_t r = 0; r < records.size(); ++r) {
    TableRow row;
    row.at("source") = "external:" + name;
    row.at("dataset") = name;
    bool ok = true;
    std::string reason;
    for (const auto& [src, dst] : mapping) {
      const auto it = records[r].find(src);
      if (it == records[r].end() || !it->second || it->second->empty()) continue;
      const auto& raw = *it->second;
      const auto type = table_columns()[column_index(dst)].type;
      if (type == ColumnType::string) {
        row.at(dst) = raw;
        continue;
      }
      auto v = parse_real(raw);
      if (!v) {
        ok = false;
        reason = src + "='" + raw + "'";
        break;
      }
      const auto rule = units.contains(dst) ? units.at(dst) : std::string("identity");
      const double converted = convert_unit(*v, rule);
      if (type == ColumnType::integer) {
        row.at(dst) = static_cast<std::int64_t>(std::llround(converted));
      } else {
        row.at(dst) = converted;
      }
    }
    if (!ok) {
      ++result.dropped;
      result.warnings.push_back("row " + std::to_string(r + 1) + " dropped: non-numeric " + reason);
      continue;
    }
    if (std::holds_alternative<std::monostate>(row.at("design_id"))) {
      row.at("design_id") = name + "__r" + std::to_string(r + 1);
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Archive

fs::path archive_dataset(const fs::path& work_dir, const fs::path& out_path, bool include_artifacts) {
  static const std::set<std::string> kSourceExt = {".c", ".cc", ".cpp", ".cxx", ".h", ".hh", ".hpp"};
  std::vector<ZipEntry> entries;
  std::error_code ec;
  const auto out_abs = fs::weakly_canonical(out_path, ec);
  for (const auto& rel : list_files_recursive(work_dir)) {
    const fs::path p(rel);
    if (fs::weakly_canonical(work_dir / p, ec) == out_abs) continue;
    const auto file = p.filename().string();
    bool in_hls_prj = false;
    bool in_post_frontend = false;
    for (const auto& part : p) {
      in_hls_prj = in_hls_prj || part == "hls_prj";
      in_post_frontend = in_post_frontend || part.string().ends_with(kPostFrontendSuffix);
    }
    bool keep = false;
    if (in_hls_prj) {
      keep = include_artifacts;
    } else if (file.starts_with("data_") && p.extension() == ".json") {
      keep = true;
    } else if (file == "timeline.json" || file == kOptFile) {
      keep = true;
    } else if (in_post_frontend && kSourceExt.contains(p.extension().string())) {
      keep = true;
    }
    if (keep) entries.push_back({rel, read_text_file(work_dir / p)});
  }
  std::string manifest;
  for (const auto& e : entries) {
    manifest += e.name + " " + std::to_string(e.data.size()) + "\n";
  }
  entries.push_back({"MANIFEST.txt", manifest});
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_text_file(out_path, build_zip(entries));
  return out_path;
}

}  // namespace hlsforge
