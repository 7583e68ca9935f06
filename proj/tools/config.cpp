#include <algorithm>
#include <cstdlib>
#include <json.hpp>
#include <map>

#include "cli.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"
#include "hlsforge/process.hpp"

namespace hlsforge::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigError, field + ": " + what);
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  const auto field = where.empty() ? key : where + "." + key;
  if (!j.contains(key)) config_error(field, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(field, "wrong type");
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, const std::string& where, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return get<T>(j, key, where);
}

fs::path resolve(const fs::path& p, const fs::path& base) { return p.is_absolute() ? p : base / p; }

void read_cost_model(const json& j, const std::string& where, MockCostModel& c) {
  if (!j.is_object()) config_error(where, "must be an object");
  static const std::map<std::string, double MockCostModel::*> kFields = {
      {"lut_per_op", &MockCostModel::lut_per_op},
      {"ff_per_op", &MockCostModel::ff_per_op},
      {"bram_bytes", &MockCostModel::bram_bytes},
      {"clock_base_ns", &MockCostModel::clock_base_ns},
      {"clock_slope_ns", &MockCostModel::clock_slope_ns},
      {"impl_resource_scale", &MockCostModel::impl_resource_scale},
      {"wns_lut_coeff", &MockCostModel::wns_lut_coeff},
      {"whs_ns", &MockCostModel::whs_ns},
      {"power_base_w", &MockCostModel::power_base_w},
      {"power_per_lut_w", &MockCostModel::power_per_lut_w},
      {"power_per_dsp_w", &MockCostModel::power_per_dsp_w},
      {"runtime_base_s", &MockCostModel::runtime_base_s},
      {"runtime_per_klut_s", &MockCostModel::runtime_per_klut_s},
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "version") {
      c.version = get<std::string>(j, key, where);
      continue;
    }
    const auto it = kFields.find(key);
    if (it == kFields.end()) config_error(where + "." + key, "unknown cost-model constant");
    c.*(it->second) = get<double>(j, key, where);
  }
}

ordered_json cost_model_json(const MockCostModel& c) {
  ordered_json j;
  j["version"] = c.version;
  j["lut_per_op"] = c.lut_per_op;
  j["ff_per_op"] = c.ff_per_op;
  j["bram_bytes"] = c.bram_bytes;
  j["clock_base_ns"] = c.clock_base_ns;
  j["clock_slope_ns"] = c.clock_slope_ns;
  j["impl_resource_scale"] = c.impl_resource_scale;
  j["wns_lut_coeff"] = c.wns_lut_coeff;
  j["whs_ns"] = c.whs_ns;
  j["power_base_w"] = c.power_base_w;
  j["power_per_lut_w"] = c.power_per_lut_w;
  j["power_per_dsp_w"] = c.power_per_dsp_w;
  j["runtime_base_s"] = c.runtime_base_s;
  j["runtime_per_klut_s"] = c.runtime_per_klut_s;
  return j;
}

const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> kinds = {"mock_hls_synth",  "mock_impl",      "external",
                                                 "vitis_hls_synth", "vitis_hls_impl", "intel_hls_synth",
                                                 "intel_quartus_impl"};
  return kinds;
}

}  // namespace

MockCostModel parse_cost_model(const std::string& json_text) {
  MockCostModel c;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error("cost_model", e.what());
  }
  read_cost_model(j, "cost_model", c);
  return c;
}

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error("<root>", e.what());
  }
  if (!j.is_object()) config_error("<root>", "must be an object");

  RunConfig cfg;
  cfg.work_dir = resolve(get<std::string>(j, "work_dir", ""), base_dir);

  if (!j.contains("datasets")) config_error("datasets", "missing");
  if (!j.at("datasets").is_array() || j.at("datasets").empty()) config_error("datasets", "must be a nonempty list");
  for (std::size_t i = 0; i < j.at("datasets").size(); ++i) {
    const auto& d = j.at("datasets")[i];
    const auto where = "datasets[" + std::to_string(i) + "]";
    DatasetEntry e{get<std::string>(d, "name", where), resolve(get<std::string>(d, "path", where), base_dir)};
    if (!is_identifier(e.name)) config_error(where + ".name", "not an identifier");
    for (const auto& other : cfg.datasets) {
      if (other.name == e.name) config_error(where + ".name", "duplicate dataset '" + e.name + "'");
    }
    cfg.datasets.push_back(std::move(e));
  }

  cfg.seed = get_or<std::uint64_t>(j, "seed", "", 0);
  cfg.frontend.seed = cfg.seed;
  if (j.contains("frontend")) {
    const auto& f = j.at("frontend");
    cfg.frontend.random_sample = get_or<bool>(f, "random_sample", "frontend", true);
    cfg.frontend.n_samples = get_or<std::uint64_t>(f, "n_samples", "frontend", 10);
    cfg.frontend.seed = get_or<std::uint64_t>(f, "seed", "frontend", cfg.seed);
    const auto vendor = get_or<std::string>(f, "vendor", "frontend", "xilinx");
    try {
      cfg.frontend.vendor = parse_vendor(vendor);
    } catch (const Error&) {
      config_error("frontend.vendor", "unknown vendor '" + vendor + "'");
    }
    if (cfg.frontend.random_sample && cfg.frontend.n_samples < 1) config_error("frontend.n_samples", "must be >= 1");
  }

  if (j.contains("flows")) {
    if (!j.at("flows").is_array()) config_error("flows", "must be a list");
    for (std::size_t i = 0; i < j.at("flows").size(); ++i) {
      const auto& f = j.at("flows")[i];
      const auto where = "flows[" + std::to_string(i) + "]";
      FlowConfig fc;
      fc.kind = get<std::string>(f, "kind", where);
      if (std::find(known_kinds().begin(), known_kinds().end(), fc.kind) == known_kinds().end()) {
        config_error(where + ".kind", "unknown flow kind '" + fc.kind + "'");
      }
      fc.name = get_or<std::string>(f, "name", where, fc.kind);
      if (!is_identifier(fc.name)) config_error(where + ".name", "not an identifier");
      fc.timeout_s = get_or<double>(f, "timeout_s", where, 3600.0);
      if (fc.timeout_s <= 0) config_error(where + ".timeout_s", "must be positive");
      fc.mock_delay_s = get_or<double>(f, "mock_delay_s", where, 0.0);
      if (fc.mock_delay_s < 0) config_error(where + ".mock_delay_s", "must be >= 0");
      if (f.contains("cost_model")) read_cost_model(f.at("cost_model"), where + ".cost_model", fc.cost_model);
      fc.command = get_or<std::vector<std::string>>(f, "command", where, {});
      fc.required_files = get_or<std::vector<std::string>>(f, "required_files", where, {});
      for (const auto& [k, v] : get_or<std::map<std::string, std::string>>(f, "env", where, {})) {
        fc.env.emplace_back(k, v);
      }
      fc.executable = get_or<std::string>(f, "executable", where, "");
      if (fc.kind == "external" && fc.command.empty()) config_error(where + ".command", "required for external flows");
      cfg.flows.push_back(std::move(fc));
    }
  }

  cfg.n_workers = get_or<int>(j, "n_workers", "", 1);
  if (cfg.n_workers < 1) config_error("n_workers", "must be >= 1");
  const auto strategy = get_or<std::string>(j, "strategy", "", "fine_grained");
  try {
    cfg.strategy = parse_strategy(strategy);
  } catch (const Error&) {
    config_error("strategy", "must be naive or fine_grained");
  }
  cfg.pin_cores = get_or<bool>(j, "pin_cores", "", false);
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  RunConfig cfg;
  try {
    cfg = parse_run_config(text, fs::absolute(path).parent_path());
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  if (const char* override_dir = std::getenv("HLSFORGE_WORK_DIR"); override_dir && *override_dir) {
    cfg.work_dir = override_dir;
  }
  return cfg;
}

std::string run_config_json(const RunConfig& cfg) {
  ordered_json j;
  j["work_dir"] = cfg.work_dir.generic_string();
  j["datasets"] = ordered_json::array();
  for (const auto& d : cfg.datasets) j["datasets"].push_back({{"name", d.name}, {"path", d.path.generic_string()}});
  j["frontend"] = {{"random_sample", cfg.frontend.random_sample},
                   {"n_samples", cfg.frontend.n_samples},
                   {"seed", cfg.frontend.seed},
                   {"vendor", std::string(to_string(cfg.frontend.vendor))}};
  j["flows"] = ordered_json::array();
  for (const auto& f : cfg.flows) {
    ordered_json o;
    o["name"] = f.name;
    o["kind"] = f.kind;
    o["timeout_s"] = f.timeout_s;
    o["mock_delay_s"] = f.mock_delay_s;
    o["cost_model"] = cost_model_json(f.cost_model);
    if (!f.command.empty()) o["command"] = f.command;
    if (!f.required_files.empty()) o["required_files"] = f.required_files;
    if (!f.env.empty()) {
      ordered_json env;
      for (const auto& [k, v] : f.env) env[k] = v;
      o["env"] = env;
    }
    if (!f.executable.empty()) o["executable"] = f.executable;
    j["flows"].push_back(std::move(o));
  }
  j["n_workers"] = cfg.n_workers;
  j["strategy"] = std::string(to_string(cfg.strategy));
  j["pin_cores"] = cfg.pin_cores;
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

ToolFlowSpec resolve_flow(const FlowConfig& f) {
  ToolFlowSpec spec;
  VendorToolOptions vendor{f.executable, f.timeout_s};
  if (f.kind == "mock_hls_synth") {
    spec = mock_hls_synth_spec(f.cost_model, f.mock_delay_s);
  } else if (f.kind == "mock_impl") {
    spec = mock_impl_spec(f.cost_model, f.mock_delay_s);
  } else if (f.kind == "vitis_hls_synth") {
    spec = vitis_hls_synth_flow(vendor);
  } else if (f.kind == "vitis_hls_impl") {
    spec = vitis_hls_impl_flow(vendor);
  } else if (f.kind == "intel_hls_synth") {
    spec = intel_hls_synth_flow(vendor);
  } else if (f.kind == "intel_quartus_impl") {
    spec = intel_quartus_impl_flow(vendor);
  } else {
    const auto exe = find_executable(f.command.front());
    if (!exe) throw Error(ErrorCode::ExecutableNotFound, f.command.front());
    spec.kind = FlowKind::external;
    spec.command_template = f.command;
    spec.command_template.front() = exe->string();
    spec.tool_name = fs::path(f.command.front()).filename().string();
  }
  spec.name = f.name;
  spec.timeout_s = f.timeout_s;
  if (!f.required_files.empty()) spec.required_files = f.required_files;
  spec.environment.insert(spec.environment.end(), f.env.begin(), f.env.end());
  return spec;
}

}  // namespace hlsforge::cli
