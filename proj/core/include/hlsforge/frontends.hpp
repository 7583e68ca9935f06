#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hlsforge/core.hpp"
#include "hlsforge/manifest.hpp"
#include "hlsforge/optdsl.hpp"

namespace hlsforge {

inline constexpr std::string_view kIntelAnchorPrefix = "// HLSFORGE_LABEL:";
inline constexpr std::string_view kIntelAnnotationsFile = "intel_annotations.json";

struct FrontendConfig {
  bool random_sample = true;
  std::uint64_t n_samples = 10;
  std::uint64_t seed = 0;
  Vendor vendor = Vendor::xilinx;
};

enum class Placement { before_loop, on_declaration };

std::string_view to_string(Placement placement);

struct IntelAnnotation {
  std::string label;
  std::string text;
  Placement placement = Placement::before_loop;
  std::string provenance;  ///< the OptDSL directive this was derived from

  bool operator==(const IntelAnnotation&) const = default;
};

/// Annotations for one OptDSL selection plus notes on directives that were
/// substituted without an emitted equivalent.
struct IntelMapping {
  std::vector<IntelAnnotation> annotations;
  std::vector<std::string> substitutions;
};

/// Uniform sampling without replacement of min(k, size) distinct indices in
/// [0, size), in draw order. Partial Fisher-Yates for size <= 2^20, rejection
/// sampling above that.
std::vector<std::uint64_t> sample_indices(std::uint64_t size, std::uint64_t k, std::uint64_t seed);

std::vector<DirectiveAssignment> sample_assignments(const DesignSpace& space, std::uint64_t k, std::uint64_t seed);

/// Copies the design into `<work_dir>/<dataset>__post_frontend/<id>/` with a
/// rendered `opt.tcl` in place of `opt_template.tcl`.
ConcreteDesign lower_xilinx(const AbstractDesign& design, const DirectiveAssignment& assignment,
                            const WorkspaceLayout& ws);
ConcreteDesign lower_xilinx(const AbstractDesign& design, const OptTemplate& tmpl,
                            const DirectiveAssignment& assignment, const WorkspaceLayout& ws);

/// `array` supplies element width (and depth for complete partitioning).
/// Throws UnsupportedDirective for directive kinds outside the mapping table.
IntelMapping map_directive_to_intel(const DirectiveLine& line, const std::string& choice,
                                    const ArraySpec* array = nullptr);

/// Injects i++ annotations after `// HLSFORGE_LABEL: <label>` anchors in the
/// copied sources. No `opt.tcl` is written; the id matches lower_xilinx.
ConcreteDesign lower_intel(const AbstractDesign& design, const DirectiveAssignment& assignment,
                           const WorkspaceLayout& ws);
ConcreteDesign lower_intel(const AbstractDesign& design, const OptTemplate& tmpl,
                           const DirectiveAssignment& assignment, const WorkspaceLayout& ws);

/// Copies a template-less design unchanged; its id is its own name.
ConcreteDesign pass_through(const AbstractDesign& design, Vendor vendor, const WorkspaceLayout& ws);

struct DesignFrontendReport {
  std::string dataset;
  std::string design;
  std::uint64_t space_size = 1;
  std::uint64_t sampled = 0;
  std::uint64_t lowered = 0;
  bool pass_through = false;
  std::vector<std::string> errors;

  bool failed() const { return !errors.empty() || (!pass_through && lowered == 0); }
};

struct FrontendResult {
  DatasetCollection collection;  ///< keyed by `<dataset>__post_frontend`
  std::vector<DesignFrontendReport> reports;

  bool ok() const;
};

/// Per-design errors are collected into `reports`; nothing here throws for a
/// single bad design.
FrontendResult execute_frontend(const DatasetCollection& collection, const FrontendConfig& cfg,
                                const WorkspaceLayout& ws);

/// Seed used for one design: cfg.seed mixed with the dataset and design name.
std::uint64_t design_seed(std::uint64_t seed, std::string_view dataset, std::string_view design);

}  // namespace hlsforge
