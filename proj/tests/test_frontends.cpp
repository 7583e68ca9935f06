#include <doctest.h>

#include <map>
#include <set>

#include "hlsforge/error.hpp"
#include "hlsforge/frontends.hpp"
#include "hlsforge/fsutil.hpp"
#include "support.hpp"

using namespace hlsforge;
namespace ts = testing_support;
using ts::TempDir;

namespace {

DatasetCollection fixture_collection() {
  DatasetCollection c;
  c.add(load_dataset(ts::designs_fixture(), "fx"));
  return c;
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& rel : list_files_recursive(root)) out[rel] = read_text_file(root / rel);
  return out;
}

const AbstractDesign& fixture_design(const DatasetCollection& c, const std::string& name) {
  for (const auto& d : c.find("fx")->designs) {
    if (design_name(d) == name) return std::get<AbstractDesign>(d);
  }
  FAIL("no fixture design " << name);
  throw 0;
}

}  // namespace

TEST_SUITE("frontends") {
  TEST_CASE("sample_indices: distinct, in range, clamped, seeded") {
    const auto a = sample_indices(32, 10, 5);
    CHECK(a.size() == 10);
    CHECK(std::set<std::uint64_t>(a.begin(), a.end()).size() == 10);
    for (auto i : a) CHECK(i < 32);
    CHECK(a == sample_indices(32, 10, 5));
    CHECK(a != sample_indices(32, 10, 6));
    const auto all = sample_indices(7, 100, 1);
    CHECK(std::set<std::uint64_t>(all.begin(), all.end()) == std::set<std::uint64_t>{0, 1, 2, 3, 4, 5, 6});
    CHECK(sample_indices(0, 5, 1).empty());
  }

  TEST_CASE("sample_indices above the Fisher-Yates limit uses rejection and stays distinct") {
    const std::uint64_t huge = std::uint64_t{1} << 40;
    const auto s = sample_indices(huge, 1000, 9);
    CHECK(std::set<std::uint64_t>(s.begin(), s.end()).size() == 1000);
    for (auto i : s) CHECK(i < huge);
  }

  TEST_CASE("k=1 draws are close to uniform over 32 points") {
    std::vector<int> counts(32, 0);
    for (std::uint64_t seed = 0; seed < 32000; ++seed) ++counts[sample_indices(32, 1, seed).at(0)];
    // Binomial(32000, 1/32): mean 1000, sd ~31.
    for (int c : counts) CHECK((c > 850 && c < 1150));
  }

  TEST_CASE("lower_xilinx writes opt.tcl, drops the template and records the design") {
    TempDir tmp;
    const auto c = fixture_collection();
    const auto& k2mm = fixture_design(c, "k2mm");
    const auto tmpl = parse_opt_template(read_text_file(k2mm.source_dir / "opt_template.tcl"));
    const auto a = enumerate_design_space(tmpl).at(5);
    const auto d = lower_xilinx(k2mm, a, WorkspaceLayout{tmp.path()});
    CHECK(d.id == concrete_design_id("k2mm", a));
    CHECK(d.dir == tmp.path() / "fx__post_frontend" / d.id);
    CHECK(read_text_file(d.dir / "opt.tcl") == render_assignment(tmpl, a));
    CHECK_FALSE(fs::exists(d.dir / "opt_template.tcl"));
    CHECK(fs::exists(d.dir / "kernel.cpp"));
    CHECK(fs::exists(d.dir / "data_design.json"));

    const auto back = load_post_frontend_dataset(tmp.path() / "fx__post_frontend");
    REQUIRE(back.designs.size() == 1);
    const auto& c2 = std::get<ConcreteDesign>(back.designs[0]);
    CHECK(c2.id == d.id);
    CHECK(c2.assignment == d.assignment);
    CHECK(c2.dataset_name == "fx");
  }

  TEST_CASE("execute_frontend samples min(k, size) per design") {
    TempDir tmp;
    FrontendConfig cfg{true, 20, 3, Vendor::xilinx};
    const auto r = execute_frontend(fixture_collection(), cfg, WorkspaceLayout{tmp.path()});
    CHECK(r.ok());
    std::map<std::string, std::uint64_t> lowered;
    for (const auto& rep : r.reports) lowered[rep.design] = rep.lowered;
    CHECK(lowered["k2mm"] == 20);
    CHECK(lowered["atax"] == 18);
    CHECK(r.collection.design_count() == 38);
  }

  TEST_CASE("exhaustive expansion covers the space") {
    TempDir tmp;
    FrontendConfig cfg{false, 1, 0, Vendor::xilinx};
    const auto r = execute_frontend(fixture_collection(), cfg, WorkspaceLayout{tmp.path()});
    CHECK(r.collection.design_count() == 32 + 18);
  }

  TEST_CASE("same seed gives byte-identical trees; another seed does not") {
    TempDir a, b, c;
    FrontendConfig cfg{true, 5, 11, Vendor::xilinx};
    execute_frontend(fixture_collection(), cfg, WorkspaceLayout{a.path()});
    execute_frontend(fixture_collection(), cfg, WorkspaceLayout{b.path()});
    CHECK(tree_contents(a.path()) == tree_contents(b.path()));
    cfg.seed = 12;
    execute_frontend(fixture_collection(), cfg, WorkspaceLayout{c.path()});
    CHECK(tree_contents(a.path()) != tree_contents(c.path()));
  }

  TEST_CASE("designs without a template pass through under their own name") {
    TempDir tmp;
    fs::create_directories(tmp / "src/plain");
    write_text_file(tmp / "src/plain/top.cpp", "int top() { return 0; }\n");
    DatasetCollection c;
    c.add(load_dataset(tmp / "src", "raw"));
    const auto r = execute_frontend(c, FrontendConfig{}, WorkspaceLayout{tmp / "work"});
    REQUIRE(r.reports.size() == 1);
    CHECK(r.reports[0].pass_through);
    const auto& d = std::get<ConcreteDesign>(r.collection.find("raw__post_frontend")->designs.at(0));
    CHECK(d.id == "plain");
    CHECK(read_text_file(d.dir / "top.cpp") == "int top() { return 0; }\n");
  }

  TEST_CASE("a broken template fails only its own design") {
    TempDir tmp;
    fs::copy(ts::designs_fixture(), tmp / "src", fs::copy_options::recursive);
    write_text_file(tmp / "src/atax/opt_template.tcl", "loop_opt,2,1\n0,lp1,,unroll,[1]\n");
    DatasetCollection c;
    c.add(load_dataset(tmp / "src", "fx"));
    const auto r = execute_frontend(c, FrontendConfig{true, 4, 0, Vendor::xilinx}, WorkspaceLayout{tmp / "w"});
    CHECK_FALSE(r.ok());
    for (const auto& rep : r.reports) {
      if (rep.design == "atax") CHECK(rep.failed());
      if (rep.design == "k2mm") CHECK(rep.lowered == 4);
    }
  }

  TEST_CASE("intel mapping table") {
    DirectiveLine unroll{0, "lp1", "", "unroll", {"4"}};
    auto m = map_directive_to_intel(unroll, "4");
    REQUIRE(m.annotations.size() == 1);
    CHECK(m.annotations[0].text == "#pragma unroll 4");
    CHECK(m.annotations[0].placement == Placement::before_loop);

    DirectiveLine piped{0, "lp2", "pipeline", "unroll", {"2"}};
    m = map_directive_to_intel(piped, "2");
    CHECK(m.annotations.size() == 1);
    CHECK(m.substitutions.size() == 1);

    DirectiveLine part{0, "buf", "", "array_partition", {"cyclic-4"}};
    ArraySpec arr{"buf", 4, 24};
    m = map_directive_to_intel(part, "cyclic-4", &arr);
    REQUIRE(m.annotations.size() == 2);
    CHECK(m.annotations[0].text == "hls_numbanks(4)");
    CHECK(m.annotations[1].text == "hls_bankwidth(4)");
    CHECK(map_directive_to_intel(part, "complete", &arr).annotations[0].text == "hls_numbanks(24)");
    CHECK_THROWS_AS(map_directive_to_intel(part, "cyclic-4"), Error);

    DirectiveLine dataflow{0, "top", "", "dataflow", {"on"}};
    try {
      map_directive_to_intel(dataflow, "on");
      FAIL("expected UnsupportedDirective");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedDirective);
    }
  }

  TEST_CASE("lower_intel injects annotations after anchors and keeps the id") {
    TempDir tmp;
    const auto c = fixture_collection();
    const auto& atax = fixture_design(c, "atax");
    const auto tmpl = parse_opt_template(read_text_file(atax.source_dir / "opt_template.tcl"));
    const auto a = enumerate_design_space(tmpl).at(7);
    const auto d = lower_intel(atax, a, WorkspaceLayout{tmp.path()});
    CHECK(d.id == concrete_design_id("atax", a));
    CHECK(d.vendor == Vendor::intel);
    CHECK_FALSE(fs::exists(d.dir / "opt.tcl"));
    CHECK(fs::exists(d.dir / "intel_annotations.json"));
    const auto src = read_text_file(d.dir / "kernel.cpp");
    CHECK(src.find("#pragma unroll") != std::string::npos);
    CHECK(src.find("hls_numbanks(") != std::string::npos);
    const auto anchor = src.find("// HLSFORGE_LABEL: lp1");
    REQUIRE(anchor != std::string::npos);
    CHECK(src.find("#pragma unroll", anchor) < src.find("lp1: for", anchor));
  }

  TEST_CASE("lower_intel reports a missing anchor") {
    TempDir tmp;
    fs::create_directories(tmp / "src/atax");
    fs::copy(ts::designs_fixture() / "atax", tmp / "src/atax", fs::copy_options::recursive);
    auto text = read_text_file(tmp / "src/atax/kernel.cpp");
    text.replace(text.find("// HLSFORGE_LABEL: lp1"), 22, "// no anchor here");
    write_text_file(tmp / "src/atax/kernel.cpp", text);
    const auto ds = load_dataset(tmp / "src", "fx");
    const auto& atax = std::get<AbstractDesign>(ds.designs[0]);
    const auto tmpl = parse_opt_template(read_text_file(atax.source_dir / "opt_template.tcl"));
    try {
      lower_intel(atax, enumerate_design_space(tmpl).at(0), WorkspaceLayout{tmp / "w"});
      FAIL("expected AnchorNotFound");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AnchorNotFound);
    }
  }

  TEST_CASE("n_samples of zero is rejected") {
    TempDir tmp;
    CHECK_THROWS_AS(execute_frontend(fixture_collection(), FrontendConfig{true, 0, 0, Vendor::xilinx},
                                     WorkspaceLayout{tmp.path()}),
                    Error);
  }
}
