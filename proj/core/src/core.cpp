#include "hlsforge/core.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

#include "design_manifest.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"
#include "hlsforge/hash.hpp"

namespace hlsforge {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Vendor vendor) { return vendor == Vendor::xilinx ? "xilinx" : "intel"; }

Vendor parse_vendor(std::string_view text) {
  if (text == "xilinx") return Vendor::xilinx;
  if (text == "intel") return Vendor::intel;
  throw Error(ErrorCode::InvalidArgument, "unknown vendor '" + std::string(text) + "'");
}

bool AbstractDesign::frontend_ready() const {
  return std::find(files.begin(), files.end(), kOptTemplateFile) != files.end();
}

std::string_view design_name(const Design& design) {
  return std::visit(
      [](const auto& d) -> std::string_view {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, AbstractDesign>) {
          return d.name;
        } else {
          return d.id;
        }
      },
      design);
}

const fs::path& design_dir(const Design& design) {
  return std::visit(
      [](const auto& d) -> const fs::path& {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, AbstractDesign>) {
          return d.source_dir;
        } else {
          return d.dir;
        }
      },
      design);
}

void DatasetCollection::add(DesignDataset dataset) {
  const auto name = dataset.name;
  if (!datasets_.emplace(name, std::move(dataset)).second) {
    throw Error(ErrorCode::DuplicateDesign, "dataset '" + name + "' already in collection");
  }
}

const DesignDataset* DatasetCollection::find(std::string_view name) const {
  const auto it = datasets_.find(std::string(name));
  return it == datasets_.end() ? nullptr : &it->second;
}

std::size_t DatasetCollection::design_count() const {
  std::size_t n = 0;
  for (const auto& [_, ds] : datasets_) n += ds.designs.size();
  return n;
}

std::string post_frontend_name(std::string_view dataset_name) {
  return std::string(dataset_name) + std::string(kPostFrontendSuffix);
}

fs::path WorkspaceLayout::post_frontend_dir(std::string_view dataset_name) const {
  return work_dir / post_frontend_name(dataset_name);
}

namespace {

bool ignored_entry(const fs::path& p) {
  const auto name = p.filename().string();
  return name.empty() || name.front() == '.' || p.extension() == ".log";
}

std::vector<std::string> scan_design_files(const fs::path& dir) {
  std::vector<std::string> files;
  for (const auto& rel : list_files_recursive(dir)) {
    const fs::path p(rel);
    bool skip = false;
    for (const auto& part : p) {
      if (ignored_entry(part)) {
        skip = true;
        break;
      }
    }
    if (!skip) files.push_back(rel);
  }
  return files;
}

std::vector<fs::path> sorted_subdirs(const fs::path& dir) {
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && !ignored_entry(entry.path())) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  return subdirs;
}

}  // namespace

DesignDataset load_dataset(const fs::path& dir, std::string_view name) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::MissingDirectory, dir.string());
  if (!is_identifier(name)) throw Error(ErrorCode::InvalidArgument, "bad dataset name '" + std::string(name) + "'");

  DesignDataset out;
  out.name = std::string(name);
  std::set<std::string> seen;
  for (const auto& sub : sorted_subdirs(dir)) {
    AbstractDesign d;
    d.name = sub.filename().string();
    if (!is_identifier(d.name)) throw Error(ErrorCode::InvalidArgument, "bad design name '" + d.name + "'");
    if (!seen.insert(d.name).second) throw Error(ErrorCode::DuplicateDesign, d.name);
    d.dataset_name = out.name;
    d.source_dir = sub;
    d.files = scan_design_files(sub);
    out.designs.emplace_back(std::move(d));
  }
  if (out.designs.empty()) throw Error(ErrorCode::EmptyDataset, dir.string());
  return out;
}

DesignDataset load_post_frontend_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::MissingDirectory, dir.string());
  DesignDataset out;
  out.name = dir.filename().string();
  std::string source_dataset = out.name;
  if (source_dataset.ends_with(kPostFrontendSuffix)) {
    source_dataset.resize(source_dataset.size() - kPostFrontendSuffix.size());
  }
  for (const auto& sub : sorted_subdirs(dir)) {
    const auto manifest = sub / kDesignManifestFile;
    if (!fs::exists(manifest)) continue;
    auto design = read_design_manifest(manifest);
    design.dir = sub;
    design.dataset_name = source_dataset;
    out.designs.emplace_back(std::move(design));
  }
  return out;
}

DatasetCollection load_workspace(const WorkspaceLayout& ws) {
  DatasetCollection out;
  if (!fs::is_directory(ws.work_dir)) return out;
  for (const auto& sub : sorted_subdirs(ws.work_dir)) {
    if (sub.filename().string().ends_with(kPostFrontendSuffix)) out.add(load_post_frontend_dataset(sub));
  }
  return out;
}

std::string concrete_design_id(std::string_view base_name, const DirectiveAssignment& assignment) {
  return std::string(base_name) + "__" + sha256_hex(canonical_text(assignment)).substr(0, 8);
}

std::vector<std::string> validate_design_files(const fs::path& dir, const std::vector<std::string>& required) {
  std::vector<std::string> missing;
  for (const auto& name : required) {
    std::error_code ec;
    if (!fs::exists(dir / name, ec)) missing.push_back(name);
  }
  return missing;
}

std::vector<std::string> validate_design_files(const Design& design, const std::vector<std::string>& required) {
  return validate_design_files(design_dir(design), required);
}

// design_manifest.hpp

std::string design_manifest_json(const ConcreteDesign& design) {
  ordered_json j;
  j["base_name"] = design.base_name;
  j["id"] = design.id;
  j["vendor"] = std::string(to_string(design.vendor));
  j["assignment"] = ordered_json::array();
  for (const auto& s : design.assignment.canonicalized().selections) {
    ordered_json entry;
    entry["group"] = s.group;
    entry["label"] = s.label;
    entry["line_index"] = s.line_index;
    entry["directive"] = s.fixed_directive.empty() ? s.param_kind : s.fixed_directive + "+" + s.param_kind;
    entry["choice"] = s.choice;
    j["assignment"].push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

void write_design_manifest(const ConcreteDesign& design) {
  write_text_file(design.dir / kDesignManifestFile, design_manifest_json(design));
}

ConcreteDesign read_design_manifest(const fs::path& path) {
  try {
    const auto j = nlohmann::json::parse(read_text_file(path));
    ConcreteDesign d;
    d.base_name = j.at("base_name").get<std::string>();
    d.id = j.at("id").get<std::string>();
    d.vendor = parse_vendor(j.at("vendor").get<std::string>());
    for (const auto& e : j.at("assignment")) {
      Selection s;
      s.group = e.at("group").get<std::string>();
      s.label = e.at("label").get<std::string>();
      s.line_index = e.at("line_index").get<std::size_t>();
      const auto directive = e.at("directive").get<std::string>();
      if (const auto plus = directive.find('+'); plus != std::string::npos) {
        s.fixed_directive = directive.substr(0, plus);
        s.param_kind = directive.substr(plus + 1);
      } else {
        s.param_kind = directive;
      }
      s.choice = e.at("choice").get<std::string>();
      d.assignment.selections.push_back(std::move(s));
    }
    d.dir = path.parent_path();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedReport, path.string() + ": " + e.what());
  }
}

}  // namespace hlsforge
