#pragma once

// Reader/writer for the per-design `data_design.json`.

#include <filesystem>
#include <string>

#include "hlsforge/core.hpp"

namespace hlsforge {

std::string design_manifest_json(const ConcreteDesign& design);
void write_design_manifest(const ConcreteDesign& design);
ConcreteDesign read_design_manifest(const std::filesystem::path& path);

}  // namespace hlsforge
