#include <doctest.h>

#include <random>

#include "hlsforge/aggregate.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/executor.hpp"
#include "hlsforge/frontends.hpp"
#include "hlsforge/fsutil.hpp"
#include "hlsforge/zip.hpp"
#include "support.hpp"

using namespace hlsforge;
namespace ts = testing_support;
using ts::TempDir;

namespace {

const char* kCsynth = R"(<?xml version="1.0" encoding="UTF-8"?>
<profile>
  <PerformanceEstimates>
    <SummaryOfTimingAnalysis><EstimatedClockPeriod>3.650</EstimatedClockPeriod></SummaryOfTimingAnalysis>
    <SummaryOfOverallLatency>
      <Best-caseLatency>100</Best-caseLatency>
      <Average-caseLatency>undef</Average-caseLatency>
      <Worst-caseLatency>250</Worst-caseLatency>
      <Interval-min>101</Interval-min>
    </SummaryOfOverallLatency>
  </PerformanceEstimates>
  <AreaEstimates>
    <Resources><BRAM_18K>4</BRAM_18K><DSP>7</DSP><FF>900</FF><LUT>1200</LUT></Resources>
  </AreaEstimates>
</profile>
)";

fs::path build_small_workspace(const fs::path& root, std::uint64_t seed = 1) {
  DatasetCollection c;
  c.add(load_dataset(ts::designs_fixture(), "fx"));
  const auto r = execute_frontend(c, FrontendConfig{true, 3, seed, Vendor::xilinx}, WorkspaceLayout{root});
  execute_parallel(r.collection, mock_hls_synth_spec(), 2, false, Strategy::fine_grained);
  execute_parallel(r.collection, mock_impl_spec(), 2, false, Strategy::fine_grained);
  extract_workspace(root);
  return root;
}

}  // namespace

TEST_SUITE("aggregate") {
  TEST_CASE("csynth parsing: undef latency is null, missing URAM is zero") {
    const auto m = parse_vitis_csynth_report(kCsynth);
    CHECK(*m.latency_best_cycles == 100);
    CHECK_FALSE(m.latency_avg_cycles.has_value());
    CHECK(*m.latency_worst_cycles == 250);
    CHECK(*m.ii == 101);
    CHECK(m.clock_estimate_ns == doctest::Approx(3.65));
    CHECK(m.lut == 1200);
    CHECK(m.ff == 900);
    CHECK(m.dsp == 7);
    CHECK(m.bram == 4);
    CHECK(m.uram == 0);
  }

  TEST_CASE("csynth parsing failures") {
    CHECK_THROWS_AS(parse_vitis_csynth_report("not xml <"), Error);
    try {
      parse_vitis_csynth_report("<profile><PerformanceEstimates/></profile>");
      FAIL("expected MalformedReport");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedReport);
    }
  }

  TEST_CASE("impl report requires every key") {
    const auto m = parse_impl_report(
        R"({"wns_ns": 1.5, "whs_ns": 0.05, "lut": 10, "ff": 20, "dsp": 1, "bram": 2, "total_power_w": 0.6})");
    CHECK(m.lut == 10);
    try {
      parse_impl_report(R"({"wns_ns": 1.5})");
      FAIL("expected MissingField");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingField);
    }
  }

  TEST_CASE("standard JSON round trip on randomized bundles") {
    TempDir tmp;
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
      const auto b = ts::random_bundle(rng);
      write_standard_json(tmp.path(), b);
      CHECK(read_standard_json(tmp.path()) == b);
    }
  }

  TEST_CASE("aggregated table has one row per design with every section filled") {
    TempDir tmp;
    build_small_workspace(tmp.path());
    const auto table = aggregate_collection(tmp.path());
    REQUIRE(table.rows.size() == 6);
    for (const auto& row : table.rows) {
      CHECK(row.has_section(Section::hls));
      CHECK(row.has_section(Section::impl));
      CHECK(row.has_section(Section::execution));
      CHECK(*row.text("source") == "hlsforge");
      CHECK(*row.text("status") == "ok");
      CHECK(*row.text("tool_name") == "mock_hls_synth+mock_impl");
    }
  }

  TEST_CASE("CSV and JSONL round trip and are stable") {
    TempDir tmp;
    build_small_workspace(tmp.path());
    const auto table = aggregate_collection(tmp.path());
    const auto csv = table_to_csv(table);
    CHECK(table_from_csv(csv) == table);
    CHECK(table_to_csv(table_from_csv(csv)) == csv);
    const auto jsonl = table_to_jsonl(table);
    CHECK(table_from_jsonl(jsonl) == table);
    CHECK(table_to_csv(aggregate_collection(tmp.path())) == csv);
    export_tabular(table, tmp / "t.jsonl", TableFormat::jsonl);
    CHECK(load_table(tmp / "t.jsonl") == table);
  }

  TEST_CASE("CSV quoting survives commas, quotes and newlines") {
    AggregatedTable t;
    TableRow row;
    row.at("design_id") = std::string("x,\"y\"\nz");
    row.at("hls_lut") = std::int64_t{5};
    row.at("impl_wns_ns") = 0.1;
    t.rows.push_back(row);
    CHECK(table_from_csv(table_to_csv(t)) == t);
  }

  TEST_CASE("CSV with a wrong header is rejected") {
    CHECK_THROWS_AS(table_from_csv("a,b,c\n1,2,3\n"), Error);
  }

  TEST_CASE("absent data files leave sections null") {
    TempDir tmp;
    DatasetCollection c;
    c.add(load_dataset(ts::designs_fixture(), "fx"));
    execute_frontend(c, FrontendConfig{true, 2, 1, Vendor::xilinx}, WorkspaceLayout{tmp.path()});
    const auto table = aggregate_collection(tmp.path());
    REQUIRE(table.rows.size() == 4);
    for (const auto& row : table.rows) {
      CHECK_FALSE(row.has_section(Section::hls));
      CHECK(row.has_section(Section::assignment));
    }
  }

  TEST_CASE("external CSV import with column mapping and units") {
    const auto spec = R"({"name": "hlsyn", "format": "csv",
      "columns": {"kernel": "base_name", "lut": "hls_lut", "ff": "hls_ff", "dsp": "hls_dsp",
                  "bram": "hls_bram", "latency": "latency_avg_cycles", "pragma_config": "assignment"},
      "units": {"hls_lut": "identity"}})";
    const auto r = import_external_dataset(spec, ts::fixtures_dir() / "external/hlsyn_sample.csv");
    REQUIRE(r.rows.size() == 4);
    CHECK(r.dropped == 0);
    CHECK(*r.rows[0].text("source") == "external:hlsyn");
    CHECK(*r.rows[0].text("design_id") == "hlsyn__r1");
    CHECK(*r.rows[0].text("assignment") == "PIPE_L1=on,TILE_L2=2");
    CHECK(*r.rows[3].numeric("hls_lut") == 8821);
  }

  TEST_CASE("external import: unit conversion and dropped rows") {
    TempDir tmp;
    write_text_file(tmp / "x.json", R"([{"id": "a", "period": 4.0}, {"id": "b", "period": "fast"}])");
    const auto r = import_external_dataset(
        R"({"name": "ext", "format": "json", "columns": {"id": "design_id", "period": "clock_estimate_ns"},
            "units": {"clock_estimate_ns": "mhz_to_ns"}})",
        tmp / "x.json");
    REQUIRE(r.rows.size() == 1);
    CHECK(r.dropped == 1);
    CHECK(r.warnings.size() == 1);
    CHECK(*r.rows[0].numeric("clock_estimate_ns") == doctest::Approx(250.0));
  }

  TEST_CASE("external import errors") {
    const auto path = ts::fixtures_dir() / "external/hlsyn_sample.csv";
    auto code_of = [&](const std::string& spec, const fs::path& p) {
      try {
        import_external_dataset(spec, p);
      } catch (const Error& e) {
        return e.code();
      }
      FAIL("expected an Error");
      return ErrorCode::IOError;
    };
    CHECK(code_of(R"({"name": "x", "format": "csv", "columns": {"lut": "no_such_column"}})", path) ==
          ErrorCode::MalformedSpec);
    CHECK(code_of(R"({"name": "x", "format": "csv", "columns": {"missing": "hls_lut"}})", path) ==
          ErrorCode::MalformedSpec);
    CHECK(code_of(R"({"name": "x", "format": "csv", "columns": {"lut": "hls_lut"}})", "/nonexistent/file.csv") ==
          ErrorCode::SourceUnreadable);
    CHECK(code_of("{not json", path) == ErrorCode::MalformedSpec);
  }

  TEST_CASE("archives are deterministic and selective") {
    TempDir tmp;
    build_small_workspace(tmp / "w");
    const auto a = archive_dataset(tmp / "w", tmp / "a.zip");
    const auto b = archive_dataset(tmp / "w", tmp / "b.zip");
    CHECK(read_text_file(a) == read_text_file(b));
    const auto members = list_zip(read_text_file(a));
    REQUIRE_FALSE(members.empty());
    CHECK(members.back().name == "MANIFEST.txt");
    bool has_opt = false, has_hls_prj = false, has_data = false;
    for (const auto& m : members) {
      has_opt = has_opt || m.name.ends_with("/opt.tcl");
      has_hls_prj = has_hls_prj || m.name.find("hls_prj/") != std::string::npos;
      has_data = has_data || m.name.ends_with("/data_hls.json");
    }
    CHECK(has_opt);
    CHECK(has_data);
    CHECK_FALSE(has_hls_prj);
    const auto full = list_zip(read_text_file(archive_dataset(tmp / "w", tmp / "c.zip", true)));
    CHECK(full.size() > members.size());
  }

  TEST_CASE("zip container basics") {
    const auto bytes = build_zip({{"a.txt", "hello"}, {"dir/b.txt", ""}});
    const auto members = list_zip(bytes);
    REQUIRE(members.size() == 2);
    CHECK(members[0].name == "a.txt");
    CHECK(members[0].size == 5);
    CHECK(members[0].crc32 == 0x3610a686u);
    CHECK(bytes == build_zip({{"a.txt", "hello"}, {"dir/b.txt", ""}}));
    CHECK_THROWS_AS(list_zip("garbage"), Error);
  }
}
