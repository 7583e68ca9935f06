#pragma once

// Small PolyBench-flavoured kernels bundled for the demo and the tests.
// Each design directory gets a kernel source with label anchors, an
// OptDSL template, the two Vitis scripts and a mock manifest.

#include <filesystem>
#include <string>
#include <vector>

#include "hlsforge/manifest.hpp"

namespace hlsforge {

struct DemoKernel {
  std::string name;
  MockManifest manifest;
  std::string opt_template;
};

const std::vector<DemoKernel>& demo_kernels();

/// Kernel source with a `// HLSFORGE_LABEL:` anchor before every loop and
/// local array declaration.
std::string demo_kernel_source(const DemoKernel& kernel);

/// Writes one directory per kernel under `dir` (all kernels when `names` is
/// empty). Returns the number written. Throws InvalidArgument for unknown names.
std::size_t write_demo_dataset(const std::filesystem::path& dir, const std::vector<std::string>& names = {});

}  // namespace hlsforge
