#include <doctest.h>

#include <cmath>
#include <random>

#include "hlsforge/aggregate.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"
#include "hlsforge/process.hpp"
#include "hlsforge/toolflows.hpp"
#include "support.hpp"

using namespace hlsforge;
namespace ts = testing_support;
using ts::TempDir;

namespace {

ConcreteDesign make_design(const fs::path& dir, const MockManifest& m, const std::string& opt_tcl,
                           const std::string& id = "d") {
  fs::create_directories(dir);
  write_text_file(dir / "mock_manifest.json", mock_manifest_json(m));
  write_text_file(dir / "opt.tcl", opt_tcl);
  write_text_file(dir / "dataset_hls.tcl", "csynth_design\n");
  ConcreteDesign d;
  d.id = id;
  d.base_name = "top";
  d.dataset_name = "ds";
  d.dir = dir;
  return d;
}

MockManifest one_loop(long long trip, long long body, long long base_lut = 100) {
  MockManifest m;
  m.base_lut = base_lut;
  m.base_ff = 50;
  m.loops = {{"L", trip, body, 0}};
  return m;
}

std::string stub(const std::string& name) { return (ts::stubs_dir() / name).string(); }

}  // namespace

TEST_SUITE("toolflows") {
  TEST_CASE("cycle counts for unpipelined and pipelined loops") {
    const auto m = one_loop(128, 4);
    DirectiveSettings none;
    CHECK(*mock_synth_metrics(m, none).latency_avg_cycles == 512);
    DirectiveSettings piped;
    piped.unroll["L"] = 4;
    piped.pipelined["L"] = true;
    CHECK(*mock_synth_metrics(m, piped).latency_avg_cycles == 35);
  }

  TEST_CASE("LUT grows with unroll") {
    DirectiveSettings s;
    s.unroll["L"] = 2;
    CHECK(mock_synth_metrics(one_loop(16, 4, 100), s).lut == 300);
  }

  TEST_CASE("implementation metrics from HLS estimates") {
    HlsSynthMetrics h;
    h.lut = 300;
    h.clock_estimate_ns = 3.2;
    const auto impl = mock_impl_metrics(h, 10.0);
    CHECK(impl.lut == 270);
    CHECK(impl.wns_ns == doctest::Approx(6.762).epsilon(1e-4));
    CHECK(impl.total_power_w == doctest::Approx(0.5 + 300 * 1e-5));
    CHECK(impl.whs_ns == doctest::Approx(0.05));
  }

  TEST_CASE("opt.tcl parsing recovers unroll, pipeline and partitions") {
    MockManifest m = one_loop(8, 1);
    m.loops.push_back({"M", 10, 1, 0});
    m.arrays = {{"buf", 4, 64}, {"acc", 4, 16}};
    const auto s = settings_from_opt_tcl(
        "set_directive_pipeline top/L\n"
        "set_directive_unroll -factor 4 top/L\n"
        "set_directive_unroll top/M\n"
        "set_directive_array_partition -type cyclic -factor 8 top/buf\n"
        "set_directive_array_partition -type complete top/acc\n",
        m);
    CHECK(s.unroll.at("L") == 4);
    CHECK(s.unroll.at("M") == 10);
    CHECK(s.pipelined.at("L"));
    CHECK(s.partition_banks.at("buf") == 8);
    CHECK(s.partition_banks.at("acc") == 16);
    try {
      settings_from_opt_tcl("set_directive_unroll -factor 2 top/nope\n", m);
      FAIL("expected LabelUnknown");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LabelUnknown);
    }
  }

  TEST_CASE("cost model matches the hand evaluator on random manifests") {
    std::mt19937_64 rng(99);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int trial = 0; trial < 200; ++trial) {
      MockManifest m;
      m.base_lut = pick(0, 5000);
      m.base_ff = pick(0, 5000);
      std::string tcl;
      for (int i = 0, n = pick(1, 4); i < n; ++i) {
        const auto label = "L" + std::to_string(i);
        m.loops.push_back({label, pick(1, 500), pick(1, 9), pick(0, 3)});
        if (pick(0, 1)) tcl += "set_directive_unroll -factor " + std::to_string(1 << pick(0, 4)) + " top/" + label + "\n";
        if (pick(0, 1)) tcl += "set_directive_pipeline top/" + label + "\n";
      }
      for (int i = 0, n = pick(0, 2); i < n; ++i) {
        const auto label = "A" + std::to_string(i);
        m.arrays.push_back({label, 1LL << pick(0, 3), pick(1, 4096)});
        if (pick(0, 1)) tcl += "set_directive_array_partition -type cyclic -factor " + std::to_string(pick(2, 8)) +
                               " top/" + label + "\n";
      }
      CAPTURE(tcl);
      const auto got = mock_synth_metrics(m, settings_from_opt_tcl(tcl, m));
      const auto want = ts::hand_cost_model(m, ts::hand_parse_opt_tcl(tcl, m));
      CHECK(got.latency_avg_cycles == want.latency_avg_cycles);
      CHECK(got.latency_worst_cycles == want.latency_worst_cycles);
      CHECK(got.ii == want.ii);
      CHECK(got.lut == want.lut);
      CHECK(got.ff == want.ff);
      CHECK(got.dsp == want.dsp);
      CHECK(got.bram == want.bram);
      CHECK(got.clock_estimate_ns == doctest::Approx(want.clock_estimate_ns).epsilon(1e-12));
    }
  }

  TEST_CASE("monotonicity: larger unroll never slows a pipelined loop nor shrinks resources") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const auto trip = std::uniform_int_distribution<long long>(1, 1000)(rng);
      const auto body = std::uniform_int_distribution<long long>(1, 10)(rng);
      MockManifest m;
      m.loops = {{"L", trip, body, 2}};
      DirectiveSettings lo, hi;
      lo.pipelined["L"] = hi.pipelined["L"] = true;
      lo.unroll["L"] = std::uniform_int_distribution<long long>(1, 8)(rng);
      hi.unroll["L"] = lo.unroll["L"] * 2;
      const auto a = mock_synth_metrics(m, lo);
      const auto b = mock_synth_metrics(m, hi);
      CHECK(*b.latency_avg_cycles <= *a.latency_avg_cycles);
      CHECK(b.lut >= a.lut);
      CHECK(b.ff >= a.ff);
      CHECK(b.dsp >= a.dsp);
    }
  }

  TEST_CASE("mock synth then impl write reports that parse back; output is deterministic") {
    TempDir tmp;
    MockManifest m = one_loop(64, 3);
    m.arrays = {{"buf", 4, 1024}};
    const std::string tcl = "set_directive_unroll -factor 2 top/L\nset_directive_array_partition -type cyclic -factor 2 top/buf\n";
    const auto d = make_design(tmp / "d", m, tcl);
    const auto o = mock_hls_synth(d);
    CHECK(o.status == FlowStatus::ok);
    CHECK(o.tool_version == "mock-A");
    const auto xml = read_text_file(d.dir / std::string(kCsynthReportPath));
    const auto parsed = parse_vitis_csynth_report(xml);
    CHECK(parsed == mock_synth_metrics(m, settings_from_opt_tcl(tcl, m)));
    CHECK(mock_impl(d).status == FlowStatus::ok);
    CHECK(fs::exists(d.dir / std::string(kImplReportPath)));

    const auto again = make_design(tmp / "e", m, tcl);
    mock_hls_synth(again);
    CHECK(read_text_file(again.dir / std::string(kCsynthReportPath)) == xml);
    const auto outcomes = read_flow_outcomes(d.dir);
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes[0].flow_name == "mock_hls_synth");
  }

  TEST_CASE("impl without synth fails as data, not as an exception") {
    TempDir tmp;
    const auto d = make_design(tmp / "d", one_loop(4, 1), "\n");
    const auto o = mock_impl(d);
    CHECK(o.status == FlowStatus::failed);
    CHECK(read_text_file(o.log_path).find("csynth.xml") != std::string::npos);
  }

  TEST_CASE("missing manifest fails the design") {
    TempDir tmp;
    auto d = make_design(tmp / "d", one_loop(4, 1), "\n");
    fs::remove(d.dir / "mock_manifest.json");
    CHECK(mock_hls_synth(d).status == FlowStatus::failed);
  }

  TEST_CASE("missing required files skip the design") {
    TempDir tmp;
    const auto d = make_design(tmp / "d", one_loop(4, 1), "\n");
    auto spec = mock_hls_synth_spec();
    spec.required_files = {"dataset_hls_ip_export.tcl"};
    CHECK(run_flow(spec, d).status == FlowStatus::skipped_missing_files);
  }

  TEST_CASE("external command timeout") {
    TempDir tmp;
    const auto d = make_design(tmp / "d", one_loop(4, 1), "\n");
    ToolFlowSpec spec;
    spec.name = "sleeper";
    spec.kind = FlowKind::external;
    spec.timeout_s = 1.0;
    spec.command_template = {stub("sleep_stub.sh")};
    const auto o = run_flow(spec, d);
    CHECK(o.status == FlowStatus::timeout);
    CHECK(o.runtime_s >= 1.0);
    CHECK(o.runtime_s <= 1.5);
  }

  TEST_CASE("external command environment and design_dir expansion") {
    TempDir tmp;
    const auto d = make_design(tmp / "d", one_loop(4, 1), "\n");
    ToolFlowSpec spec;
    spec.name = "echo";
    spec.kind = FlowKind::external;
    spec.environment = {{"HLSFORGE_PROBE", "xyz"}};
    spec.command_template = {"/bin/sh", "-c", "echo $HLSFORGE_PROBE {design_dir}"};
    const auto o = run_flow(spec, d);
    CHECK(o.status == FlowStatus::ok);
    const auto log = read_text_file(o.log_path);
    CHECK(log.find("xyz " + d.dir.string()) != std::string::npos);
  }

  TEST_CASE("vendor adapter: missing executable names the binary") {
    try {
      vitis_hls_synth_flow({"definitely_not_a_tool_xyz", 10});
      FAIL("expected ExecutableNotFound");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ExecutableNotFound);
      CHECK(std::string(e.what()).find("definitely_not_a_tool_xyz") != std::string::npos);
    }
  }

  TEST_CASE("vendor adapter: failing stub gives status failed with stderr in the log") {
    TempDir tmp;
    const auto d = make_design(tmp / "d", one_loop(4, 1), "\n");
    const auto spec = vitis_hls_synth_flow({stub("fail_stub.sh"), 10});
    const auto o = run_flow(spec, d);
    CHECK(o.status == FlowStatus::failed);
    CHECK(read_text_file(o.log_path).find("license checkout failed") != std::string::npos);
  }

  TEST_CASE("vendor adapter: succeeding stub produces a parseable report and a version") {
    TempDir tmp;
    const auto d = make_design(tmp / "d", one_loop(4, 1), "\n");
    const auto spec = vitis_hls_synth_flow({stub("vitis_hls_stub.sh"), 10});
    CHECK(spec.tool_version == "Vitis HLS stub v2023.1 (64-bit)");
    const auto o = run_flow(spec, d);
    CHECK(o.status == FlowStatus::ok);
    const auto h = parse_vitis_csynth_report(read_text_file(d.dir / std::string(kCsynthReportPath)));
    CHECK(h.lut == 111);
    CHECK(*h.latency_avg_cycles == 12);
  }

  TEST_CASE("run_process reports exit codes") {
    TempDir tmp;
    ProcessOptions opts;
    opts.cwd = tmp.path();
    CHECK(run_process({"/bin/sh", "-c", "exit 3"}, opts).exit_code == 3);
    CHECK(run_process({"/bin/true"}, opts).exit_code == 0);
    CHECK(find_executable("sh").has_value());
    CHECK_FALSE(find_executable("no_such_binary_hlsforge").has_value());
  }
}
