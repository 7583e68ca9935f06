#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hlsforge/metrics.hpp"

namespace hlsforge {

namespace fs = std::filesystem;

inline constexpr int kTableSchemaVersion = 1;

/// Throws MalformedReport when the text is not XML or lacks AreaEstimates.
HlsSynthMetrics parse_vitis_csynth_report(std::string_view xml_text);

/// Throws MalformedReport (not JSON) or MissingField(name).
ImplMetrics parse_impl_report(std::string_view json_text);

std::string hls_metrics_json(const HlsSynthMetrics& m);
std::string impl_metrics_json(const ImplMetrics& m);
std::string execution_meta_json(const ExecutionMeta& m);

HlsSynthMetrics parse_hls_metrics_json(std::string_view text);
ImplMetrics parse_impl_metrics_json(std::string_view text);
ExecutionMeta parse_execution_meta_json(std::string_view text);

/// Writes `data_hls.json`, `data_impl.json`, `data_execution.json` into
/// `design_dir` for the sections present; files of absent sections are removed.
/// Returns the paths written.
std::vector<fs::path> write_standard_json(const fs::path& design_dir, const MetricsBundle& bundle);

/// Reads back whatever standard JSON files exist.
MetricsBundle read_standard_json(const fs::path& design_dir);

/// Builds a bundle from the raw tool reports and flow outcomes in a design
/// directory. Missing or malformed reports leave their section empty.
MetricsBundle extract_design_data(const fs::path& design_dir);

/// Runs extract_design_data + write_standard_json on every concrete design
/// under the workspace. Returns the number of designs visited.
std::size_t extract_workspace(const fs::path& work_dir);

// ---------------------------------------------------------------------------
// Aggregated table

enum class ColumnType { string, integer, real };
enum class Section { identity, assignment, hls, impl, execution };

struct Column {
  std::string_view name;
  ColumnType type;
  Section section;
};

/// The fixed, ordered column schema shared by CSV and JSONL export.
const std::vector<Column>& table_columns();

/// Index of `name` in table_columns(); throws InvalidArgument if unknown.
std::size_t column_index(std::string_view name);

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct TableRow {
  std::vector<Cell> cells;  ///< one per column, in schema order

  TableRow();

  const Cell& at(std::string_view column) const;
  Cell& at(std::string_view column);
  std::optional<double> numeric(std::string_view column) const;
  std::optional<std::string> text(std::string_view column) const;
  bool has_section(Section section) const;

  bool operator==(const TableRow&) const = default;
};

struct AggregatedTable {
  std::vector<TableRow> rows;

  bool operator==(const AggregatedTable&) const = default;
};

/// One row per concrete-design directory under every `*__post_frontend`
/// dataset; absent data files leave their sections null.
AggregatedTable aggregate_collection(const fs::path& work_dir);

enum class TableFormat { csv, jsonl };

TableFormat parse_table_format(std::string_view text);

std::string table_to_csv(const AggregatedTable& table);
std::string table_to_jsonl(const AggregatedTable& table);
AggregatedTable table_from_csv(std::string_view text);
AggregatedTable table_from_jsonl(std::string_view text);

fs::path export_tabular(const AggregatedTable& table, const fs::path& path, TableFormat format);

/// Loads a table written by export_tabular; the format follows the extension
/// (`.jsonl` or anything else as CSV).
AggregatedTable load_table(const fs::path& path);

// ---------------------------------------------------------------------------
// External data import

struct ImportResult {
  std::vector<TableRow> rows;
  std::size_t dropped = 0;  ///< rows discarded for unparseable numeric values
  std::vector<std::string> warnings;
};

/// `mapping_spec_json`: `{ "name", "format": "csv"|"json", "columns": {src: dst},
/// "units": {dst: "identity"|"ns_to_mhz"|"mhz_to_ns"} }`.
/// Throws MalformedSpec or SourceUnreadable.
ImportResult import_external_dataset(std::string_view mapping_spec_json, const fs::path& path);

// ---------------------------------------------------------------------------
// Archiving

/// Deterministic stored zip of the dataset: every `data_*.json`,
/// `timeline.json`, `opt.tcl` and design source, plus `hls_prj/**` when
/// `include_artifacts`. Members are sorted and timestamps zeroed; a
/// `MANIFEST.txt` listing the members is appended last.
fs::path archive_dataset(const fs::path& work_dir, const fs::path& out_path, bool include_artifacts = false);

}  // namespace hlsforge
