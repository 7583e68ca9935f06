#include <doctest.h>

#include "hlsforge/core.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"
#include "hlsforge/hash.hpp"
#include "hlsforge/random.hpp"
#include "support.hpp"

using namespace hlsforge;
using testing_support::TempDir;

namespace {

void touch(const fs::path& p, const std::string& text = "x") {
  fs::create_directories(p.parent_path());
  write_text_file(p, text);
}

Selection sel(std::string group, std::string label, std::size_t line, std::string choice) {
  Selection s;
  s.group = std::move(group);
  s.label = std::move(label);
  s.line_index = line;
  s.param_kind = "unroll";
  s.choice = std::move(choice);
  return s;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("sha256 known digests") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("load_dataset sorts designs and ignores hidden entries and logs") {
    TempDir tmp;
    touch(tmp / "ds/zeta/k.cpp");
    touch(tmp / "ds/alpha/k.cpp");
    touch(tmp / "ds/alpha/run.log");
    touch(tmp / "ds/alpha/.hidden");
    touch(tmp / "ds/.git/config");
    touch(tmp / "ds/loose_file.txt");
    const auto ds = load_dataset(tmp / "ds", "ds");
    REQUIRE(ds.designs.size() == 2);
    const auto& first = std::get<AbstractDesign>(ds.designs[0]);
    CHECK(first.name == "alpha");
    CHECK(first.dataset_name == "ds");
    CHECK(first.files == std::vector<std::string>{"k.cpp"});
    CHECK_FALSE(first.frontend_ready());
    CHECK(design_name(ds.designs[1]) == "zeta");
  }

  TEST_CASE("load_dataset error classes") {
    TempDir tmp;
    auto code_of = [](auto&& f) {
      try {
        f();
      } catch (const Error& e) {
        return e.code();
      }
      FAIL("expected an Error");
      return ErrorCode::IOError;
    };
    CHECK(code_of([&] { load_dataset(tmp / "nope", "ds"); }) == ErrorCode::MissingDirectory);
    fs::create_directories(tmp / "empty");
    CHECK(code_of([&] { load_dataset(tmp / "empty", "ds"); }) == ErrorCode::EmptyDataset);
    touch(tmp / "bad/has-dash/k.cpp");
    CHECK(code_of([&] { load_dataset(tmp / "bad", "ds"); }) == ErrorCode::InvalidArgument);
    touch(tmp / "ok/a/k.cpp");
    CHECK(code_of([&] { load_dataset(tmp / "ok", "bad name"); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("collection rejects a second dataset with the same name") {
    DatasetCollection c;
    c.add(DesignDataset{"a", {}});
    CHECK_THROWS_AS(c.add(DesignDataset{"a", {}}), Error);
    c.add(DesignDataset{"b", {}});
    CHECK(c.datasets().size() == 2);
    CHECK(c.find("b") != nullptr);
    CHECK(c.find("c") == nullptr);
  }

  TEST_CASE("concrete id is order independent and changes with the assignment") {
    DirectiveAssignment a{{sel("g", "lp1", 0, "2"), sel("g", "lp2", 1, "4")}};
    DirectiveAssignment b{{sel("g", "lp2", 1, "4"), sel("g", "lp1", 0, "2")}};
    DirectiveAssignment c{{sel("g", "lp1", 0, "2"), sel("g", "lp2", 1, "8")}};
    const auto id = concrete_design_id("k2mm", a);
    CHECK(id == concrete_design_id("k2mm", b));
    CHECK(id != concrete_design_id("k2mm", c));
    REQUIRE(id.size() == std::string("k2mm__").size() + 8);
    CHECK(id.rfind("k2mm__", 0) == 0);
    CHECK(id.substr(6) == sha256_hex(canonical_text(a)).substr(0, 8));
  }

  TEST_CASE("validate_design_files lists missing names") {
    TempDir tmp;
    touch(tmp / "d/kernel.cpp");
    const auto missing = validate_design_files(tmp / "d", {"kernel.cpp", "opt.tcl", "dataset_hls.tcl"});
    CHECK(missing == std::vector<std::string>{"opt.tcl", "dataset_hls.tcl"});
  }

  TEST_CASE("post-frontend naming") {
    CHECK(post_frontend_name("polybench") == "polybench__post_frontend");
    WorkspaceLayout ws{"/w"};
    CHECK(ws.post_frontend_dir("x") == fs::path("/w/x__post_frontend"));
    CHECK(ws.timeline_path() == fs::path("/w/timeline.json"));
  }

  TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 6.681413345468866, 1e-300, -2.5, 1e21}) {
      CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(3.0) == "3");
  }

  TEST_CASE("xoshiro is deterministic per seed and below() stays in range") {
    Xoshiro256ss a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
      const auto x = a();
      CHECK(x == b());
      differs = differs || x != c();
    }
    CHECK(differs);
    for (int i = 0; i < 1000; ++i) CHECK(a.below(7) < 7);
  }
}
