#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hlsforge/optdsl.hpp"

namespace hlsforge {

namespace fs = std::filesystem;

inline constexpr std::string_view kOptTemplateFile = "opt_template.tcl";
inline constexpr std::string_view kOptFile = "opt.tcl";
inline constexpr std::string_view kDesignManifestFile = "data_design.json";
inline constexpr std::string_view kMockManifestFile = "mock_manifest.json";
inline constexpr std::string_view kPostFrontendSuffix = "__post_frontend";

enum class Vendor { xilinx, intel };

std::string_view to_string(Vendor vendor);
Vendor parse_vendor(std::string_view text);

struct AbstractDesign {
  std::string name;
  std::string dataset_name;
  fs::path source_dir;
  std::vector<std::string> files;  ///< relative generic paths, sorted

  /// True when the design carries an `opt_template.tcl` for the OptDSL frontend.
  bool frontend_ready() const;

  bool operator==(const AbstractDesign&) const = default;
};

struct ConcreteDesign {
  std::string id;  ///< `<base_name>__<hash8>`, or the bare name for pass-through designs
  std::string base_name;
  std::string dataset_name;
  DirectiveAssignment assignment;
  fs::path dir;
  Vendor vendor = Vendor::xilinx;

  bool operator==(const ConcreteDesign&) const = default;
};

using Design = std::variant<AbstractDesign, ConcreteDesign>;

std::string_view design_name(const Design& design);
const fs::path& design_dir(const Design& design);

struct DesignDataset {
  std::string name;
  std::vector<Design> designs;

  bool operator==(const DesignDataset&) const = default;
};

/// Dataset name -> dataset; iteration order is by name.
class DatasetCollection {
 public:
  /// Throws DuplicateDesign when `dataset.name` is already present.
  void add(DesignDataset dataset);

  const std::map<std::string, DesignDataset>& datasets() const { return datasets_; }
  const DesignDataset* find(std::string_view name) const;
  std::size_t design_count() const;
  bool empty() const { return datasets_.empty(); }

  bool operator==(const DatasetCollection&) const = default;

 private:
  std::map<std::string, DesignDataset> datasets_;
};

/// Root of every generated artifact.
struct WorkspaceLayout {
  fs::path work_dir;

  fs::path post_frontend_dir(std::string_view dataset_name) const;
  fs::path timeline_path() const { return work_dir / "timeline.json"; }
};

std::string post_frontend_name(std::string_view dataset_name);

/// One AbstractDesign per immediate subdirectory of `dir`, sorted by name.
/// Hidden entries and `*.log` files are ignored.
/// Throws MissingDirectory, EmptyDataset, DuplicateDesign, InvalidArgument (bad name).
DesignDataset load_dataset(const fs::path& dir, std::string_view name);

/// Reads a `<name>__post_frontend` tree back into ConcreteDesigns using each
/// design's `data_design.json`.
DesignDataset load_post_frontend_dataset(const fs::path& dir);

/// Every `*__post_frontend` dataset under the workspace.
DatasetCollection load_workspace(const WorkspaceLayout& ws);

/// `<base_name>__<hex8>`, hex8 the first 8 hex chars of SHA-256 over
/// canonical_text(assignment). Selection order does not matter.
std::string concrete_design_id(std::string_view base_name, const DirectiveAssignment& assignment);

/// Names from `required` that do not exist in the design directory.
std::vector<std::string> validate_design_files(const Design& design, const std::vector<std::string>& required);
std::vector<std::string> validate_design_files(const fs::path& dir, const std::vector<std::string>& required);

}  // namespace hlsforge
