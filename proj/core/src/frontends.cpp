#include "hlsforge/frontends.hpp"

#include <algorithm>
#include <json.hpp>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "design_manifest.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"
#include "hlsforge/random.hpp"

namespace hlsforge {

namespace {

constexpr std::uint64_t kShuffleLimit = std::uint64_t{1} << 20;

bool is_source_file(const fs::path& p) {
  static const std::unordered_set<std::string> kExt = {".c", ".cc", ".cpp", ".cxx", ".h", ".hh", ".hpp"};
  return kExt.contains(p.extension().string());
}

fs::path fresh_design_dir(const WorkspaceLayout& ws, std::string_view dataset, std::string_view id) {
  const auto dir = ws.post_frontend_dir(dataset) / std::string(id);
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IOError, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void copy_design_file(const fs::path& from_root, const fs::path& to_root, const std::string& rel) {
  const auto dest = to_root / rel;
  std::error_code ec;
  fs::create_directories(dest.parent_path(), ec);
  fs::copy_file(from_root / rel, dest, fs::copy_options::overwrite_existing, ec);
  if (ec) throw Error(ErrorCode::IOError, "cannot copy " + rel + ": " + ec.message());
}

OptTemplate load_template(const AbstractDesign& design) {
  const auto path = design.source_dir / kOptTemplateFile;
  if (!design.frontend_ready() || !fs::exists(path)) {
    throw Error(ErrorCode::MissingTemplate, design.name + " has no " + std::string(kOptTemplateFile));
  }
  return parse_opt_template(read_text_file(path));
}

const DirectiveLine& line_for(const OptTemplate& tmpl, const Selection& s) {
  const auto* group = tmpl.find_group(s.group);
  if (!group || s.line_index >= group->lines.size()) {
    throw Error(ErrorCode::InvalidAssignment, "selection " + s.group + "/" + s.label + " not in template");
  }
  return group->lines[s.line_index];
}

std::string leading_whitespace(std::string_view line) {
  return std::string(line.substr(0, line.find_first_not_of(" \t")));
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(Placement placement) {
  return placement == Placement::before_loop ? "before_loop" : "on_declaration";
}

std::vector<std::uint64_t> sample_indices(std::uint64_t size, std::uint64_t k, std::uint64_t seed) {
  const std::uint64_t n = std::min(k, size);
  std::vector<std::uint64_t> out;
  out.reserve(n);
  Xoshiro256ss rng(seed);
  if (size <= kShuffleLimit) {
    std::vector<std::uint64_t> pool(size);
    std::iota(pool.begin(), pool.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto j = i + rng.below(size - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < n) {
    const auto idx = rng.below(size);
    if (seen.insert(idx).second) out.push_back(idx);
  }
  return out;
}

std::vector<DirectiveAssignment> sample_assignments(const DesignSpace& space, std::uint64_t k, std::uint64_t seed) {
  std::vector<DirectiveAssignment> out;
  for (const auto idx : sample_indices(space.size(), k, seed)) out.push_back(space.at(idx));
  return out;
}

ConcreteDesign lower_xilinx(const AbstractDesign& design, const DirectiveAssignment& assignment,
                            const WorkspaceLayout& ws) {
  return lower_xilinx(design, load_template(design), assignment, ws);
}

ConcreteDesign lower_xilinx(const AbstractDesign& design, const OptTemplate& tmpl,
                            const DirectiveAssignment& assignment, const WorkspaceLayout& ws) {
  if (!design.frontend_ready()) {
    throw Error(ErrorCode::MissingTemplate, design.name + " has no " + std::string(kOptTemplateFile));
  }
  const auto opt_tcl = render_assignment(tmpl, assignment);

  ConcreteDesign out;
  out.base_name = design.name;
  out.dataset_name = design.dataset_name;
  out.assignment = assignment.canonicalized();
  out.id = concrete_design_id(design.name, out.assignment);
  out.vendor = Vendor::xilinx;
  out.dir = fresh_design_dir(ws, design.dataset_name, out.id);

  for (const auto& rel : design.files) {
    if (rel == kOptTemplateFile) continue;
    copy_design_file(design.source_dir, out.dir, rel);
  }
  write_text_file(out.dir / kOptFile, opt_tcl);
  write_design_manifest(out);
  return out;
}

IntelMapping map_directive_to_intel(const DirectiveLine& line, const std::string& choice, const ArraySpec* array) {
  IntelMapping out;
  const std::string origin = line.param_kind + ":" + choice + " on " + line.label;

  if (!line.fixed_directive.empty()) {
    if (line.fixed_directive != "pipeline") {
      throw Error(ErrorCode::UnsupportedDirective, "fixed directive '" + line.fixed_directive + "' has no i++ mapping");
    }
    out.substitutions.push_back("pipeline on " + line.label + ": default-pipelined");
  }

  if (line.param_kind == "unroll") {
    out.annotations.push_back({line.label, "#pragma unroll " + choice, Placement::before_loop, origin});
  } else if (line.param_kind == "array_partition") {
    if (!array) {
      throw Error(ErrorCode::ManifestMissing, "array_partition on '" + line.label + "' needs element width");
    }
    const auto parts = split(choice, '-');
    std::string banks;
    if (parts.size() == 1 && parts[0] == "complete") {
      banks = std::to_string(array->depth);
    } else if (parts.size() == 2 && (parts[0] == "cyclic" || parts[0] == "block")) {
      banks = parts[1];
    } else {
      throw Error(ErrorCode::UnsupportedDirective, "array_partition choice '" + choice + "' has no i++ mapping");
    }
    out.annotations.push_back({line.label, "hls_numbanks(" + banks + ")", Placement::on_declaration, origin});
    out.annotations.push_back({line.label, "hls_bankwidth(" + std::to_string(array->elem_bytes) + ")",
                               Placement::on_declaration, origin});
  } else if (line.param_kind == "pipeline") {
    out.substitutions.push_back("pipeline:" + choice + " on " + line.label + ": default-pipelined");
  } else {
    throw Error(ErrorCode::UnsupportedDirective, "directive '" + line.param_kind + "' has no i++ mapping");
  }
  return out;
}

ConcreteDesign lower_intel(const AbstractDesign& design, const DirectiveAssignment& assignment,
                           const WorkspaceLayout& ws) {
  return lower_intel(design, load_template(design), assignment, ws);
}

ConcreteDesign lower_intel(const AbstractDesign& design, const OptTemplate& tmpl,
                           const DirectiveAssignment& assignment, const WorkspaceLayout& ws) {
  if (!design.frontend_ready()) {
    throw Error(ErrorCode::MissingTemplate, design.name + " has no " + std::string(kOptTemplateFile));
  }
  // Validates the assignment against the template exactly as the Xilinx path does.
  render_assignment(tmpl, assignment);
  const auto canonical = assignment.canonicalized();

  std::optional<MockManifest> manifest;
  if (fs::exists(design.source_dir / kMockManifestFile)) manifest = load_mock_manifest(design.source_dir);

  // label -> annotations, in canonical selection order
  std::map<std::string, std::vector<IntelAnnotation>> by_label;
  std::vector<std::string> substitutions;
  for (const auto& s : canonical.selections) {
    const auto& line = line_for(tmpl, s);
    const ArraySpec* array = manifest ? manifest->find_array(s.label) : nullptr;
    auto mapping = map_directive_to_intel(line, s.choice, array);
    auto& slot = by_label[s.label];
    slot.insert(slot.end(), mapping.annotations.begin(), mapping.annotations.end());
    substitutions.insert(substitutions.end(), mapping.substitutions.begin(), mapping.substitutions.end());
  }

  // Read every source and locate anchors before writing anything.
  std::map<std::string, std::vector<std::string>> sources;
  for (const auto& rel : design.files) {
    if (rel == kOptTemplateFile || !is_source_file(rel)) continue;
    sources[rel] = split(read_text_file(design.source_dir / rel), '\n');
  }
  auto anchor_label = [](std::string_view line) -> std::string {
    const auto t = trim(line);
    if (!t.starts_with(kIntelAnchorPrefix)) return {};
    return std::string(trim(t.substr(kIntelAnchorPrefix.size())));
  };
  for (const auto& [label, _] : by_label) {
    bool found = false;
    for (const auto& [rel, lines] : sources) {
      found = std::any_of(lines.begin(), lines.end(), [&](const auto& l) { return anchor_label(l) == label; });
      if (found) break;
    }
    if (!found) throw Error(ErrorCode::AnchorNotFound, label);
  }

  ConcreteDesign out;
  out.base_name = design.name;
  out.dataset_name = design.dataset_name;
  out.assignment = canonical;
  out.id = concrete_design_id(design.name, out.assignment);
  out.vendor = Vendor::intel;
  out.dir = fresh_design_dir(ws, design.dataset_name, out.id);

  for (const auto& rel : design.files) {
    if (rel == kOptTemplateFile) continue;
    const auto it = sources.find(rel);
    if (it == sources.end()) {
      copy_design_file(design.source_dir, out.dir, rel);
      continue;
    }
    std::vector<std::string> out_lines;
    for (const auto& line : it->second) {
      out_lines.push_back(line);
      const auto label = anchor_label(line);
      const auto ann = by_label.find(label);
      if (label.empty() || ann == by_label.end()) continue;
      const auto indent = leading_whitespace(line);
      std::string declaration;
      for (const auto& a : ann->second) {
        if (a.placement == Placement::before_loop) {
          out_lines.push_back(indent + a.text);
        } else {
          declaration += (declaration.empty() ? "" : " ") + a.text;
        }
      }
      if (!declaration.empty()) out_lines.push_back(indent + declaration);
    }
    std::string text;
    for (std::size_t i = 0; i < out_lines.size(); ++i) {
      if (i > 0) text += '\n';
      text += out_lines[i];
    }
    fs::create_directories((out.dir / rel).parent_path());
    write_text_file(out.dir / rel, text);
  }

  nlohmann::ordered_json j;
  j["annotations"] = nlohmann::ordered_json::array();
  for (const auto& [label, anns] : by_label) {
    for (const auto& a : anns) {
      j["annotations"].push_back({{"label", a.label},
                                  {"text", a.text},
                                  {"placement", std::string(to_string(a.placement))},
                                  {"provenance", a.provenance}});
    }
  }
  j["substitutions"] = substitutions;
  write_text_file(out.dir / kIntelAnnotationsFile, j.dump(2) + "\n");
  write_design_manifest(out);
  return out;
}

ConcreteDesign pass_through(const AbstractDesign& design, Vendor vendor, const WorkspaceLayout& ws) {
  ConcreteDesign out;
  out.id = design.name;
  out.base_name = design.name;
  out.dataset_name = design.dataset_name;
  out.vendor = vendor;
  out.dir = fresh_design_dir(ws, design.dataset_name, out.id);
  for (const auto& rel : design.files) copy_design_file(design.source_dir, out.dir, rel);
  write_design_manifest(out);
  return out;
}

bool FrontendResult::ok() const {
  return std::none_of(reports.begin(), reports.end(), [](const auto& r) { return r.failed(); });
}

std::uint64_t design_seed(std::uint64_t seed, std::string_view dataset, std::string_view design) {
  std::uint64_t state = seed ^ fnv1a(std::string(dataset) + "/" + std::string(design));
  return splitmix64(state);
}

FrontendResult execute_frontend(const DatasetCollection& collection, const FrontendConfig& cfg,
                                const WorkspaceLayout& ws) {
  if (cfg.random_sample && cfg.n_samples < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1 when random_sample is set");
  }
  FrontendResult result;
  for (const auto& [name, dataset] : collection.datasets()) {
    DesignDataset out;
    out.name = post_frontend_name(name);
    std::error_code ec;
    fs::remove_all(ws.post_frontend_dir(name), ec);
    for (const auto& design : dataset.designs) {
      DesignFrontendReport report;
      report.dataset = name;
      report.design = std::string(design_name(design));

      if (const auto* concrete = std::get_if<ConcreteDesign>(&design)) {
        report.pass_through = true;
        report.lowered = 1;
        out.designs.push_back(*concrete);
        result.reports.push_back(std::move(report));
        continue;
      }
      const auto& abstract = std::get<AbstractDesign>(design);
      try {
        if (!abstract.frontend_ready()) {
          report.pass_through = true;
          out.designs.push_back(pass_through(abstract, cfg.vendor, ws));
          report.lowered = 1;
          result.reports.push_back(std::move(report));
          continue;
        }
        const auto tmpl = load_template(abstract);
        const DesignSpace space(tmpl);
        report.space_size = space.size();
        std::vector<DirectiveAssignment> assignments;
        if (cfg.random_sample) {
          assignments = sample_assignments(space, cfg.n_samples, design_seed(cfg.seed, name, abstract.name));
        } else {
          assignments.assign(space.begin(), space.end());
        }
        report.sampled = assignments.size();
        for (const auto& a : assignments) {
          try {
            out.designs.push_back(cfg.vendor == Vendor::xilinx ? lower_xilinx(abstract, tmpl, a, ws)
                                                               : lower_intel(abstract, tmpl, a, ws));
            ++report.lowered;
          } catch (const Error& e) {
            report.errors.push_back(summarize(a) + ": " + e.what());
          }
        }
      } catch (const Error& e) {
        report.errors.push_back(e.what());
      }
      result.reports.push_back(std::move(report));
    }
    result.collection.add(std::move(out));
  }
  return result;
}

}  // namespace hlsforge
