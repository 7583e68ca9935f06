#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hlsforge {

struct LoopSpec {
  std::string label;
  long long trip_count = 1;
  long long body_ops = 1;
  long long mult_ops = 0;

  bool operator==(const LoopSpec&) const = default;
};

struct ArraySpec {
  std::string label;
  long long elem_bytes = 4;
  long long depth = 1;

  bool operator==(const ArraySpec&) const = default;
};

/// Contents of `mock_manifest.json`: the static shape of a design that the
/// mock flows' cost model and the Intel lowering need.
struct MockManifest {
  long long base_lut = 0;
  long long base_ff = 0;
  double clock_target_ns = 10.0;
  std::vector<LoopSpec> loops;
  std::vector<ArraySpec> arrays;

  const LoopSpec* find_loop(std::string_view label) const;
  const ArraySpec* find_array(std::string_view label) const;

  bool operator==(const MockManifest&) const = default;
};

/// Throws MalformedReport on schema violations.
MockManifest parse_mock_manifest(std::string_view json_text);

/// Throws ManifestMissing when the file does not exist.
MockManifest load_mock_manifest(const std::filesystem::path& design_dir);

std::string mock_manifest_json(const MockManifest& manifest);

}  // namespace hlsforge
