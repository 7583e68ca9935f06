#include "hlsforge/manifest.hpp"

#include <json.hpp>

#include "hlsforge/core.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"

namespace hlsforge {

const LoopSpec* MockManifest::find_loop(std::string_view label) const {
  for (const auto& l : loops) {
    if (l.label == label) return &l;
  }
  return nullptr;
}

const ArraySpec* MockManifest::find_array(std::string_view label) const {
  for (const auto& a : arrays) {
    if (a.label == label) return &a;
  }
  return nullptr;
}

MockManifest parse_mock_manifest(std::string_view json_text) {
  MockManifest m;
  try {
    const auto j = nlohmann::json::parse(json_text);
    m.base_lut = j.at("base_lut").get<long long>();
    m.base_ff = j.at("base_ff").get<long long>();
    m.clock_target_ns = j.value("clock_target_ns", 10.0);
    for (const auto& l : j.value("loops", nlohmann::json::array())) {
      LoopSpec spec{l.at("label").get<std::string>(), l.at("trip_count").get<long long>(),
                    l.at("body_ops").get<long long>(), l.value("mult_ops", 0LL)};
      if (spec.trip_count < 1 || spec.body_ops < 1 || spec.mult_ops < 0) {
        throw Error(ErrorCode::MalformedReport, "loop '" + spec.label + "' has out-of-range counts");
      }
      m.loops.push_back(std::move(spec));
    }
    for (const auto& a : j.value("arrays", nlohmann::json::array())) {
      ArraySpec spec{a.at("label").get<std::string>(), a.at("elem_bytes").get<long long>(),
                     a.at("depth").get<long long>()};
      if (spec.elem_bytes < 1 || spec.depth < 1) {
        throw Error(ErrorCode::MalformedReport, "array '" + spec.label + "' has out-of-range sizes");
      }
      m.arrays.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedReport, std::string("mock manifest: ") + e.what());
  }
  if (m.base_lut < 0 || m.base_ff < 0 || m.clock_target_ns <= 0) {
    throw Error(ErrorCode::MalformedReport, "mock manifest: negative base resources or clock target");
  }
  return m;
}

MockManifest load_mock_manifest(const std::filesystem::path& design_dir) {
  const auto path = design_dir / kMockManifestFile;
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::ManifestMissing, path.string());
  return parse_mock_manifest(read_text_file(path));
}

std::string mock_manifest_json(const MockManifest& m) {
  nlohmann::ordered_json j;
  j["base_lut"] = m.base_lut;
  j["base_ff"] = m.base_ff;
  j["clock_target_ns"] = m.clock_target_ns;
  j["loops"] = nlohmann::ordered_json::array();
  for (const auto& l : m.loops) {
    j["loops"].push_back({{"label", l.label}, {"trip_count", l.trip_count}, {"body_ops", l.body_ops},
                          {"mult_ops", l.mult_ops}});
  }
  j["arrays"] = nlohmann::ordered_json::array();
  for (const auto& a : m.arrays) {
    j["arrays"].push_back({{"label", a.label}, {"elem_bytes", a.elem_bytes}, {"depth", a.depth}});
  }
  return j.dump(2) + "\n";
}

}  // namespace hlsforge
