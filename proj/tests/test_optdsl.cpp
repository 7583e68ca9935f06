#include <doctest.h>

#include <random>
#include <set>

#include "hlsforge/error.hpp"
#include "hlsforge/optdsl.hpp"
#include "support.hpp"

using namespace hlsforge;
namespace ts = testing_support;

namespace {

ErrorCode parse_error(const std::string& text) {
  try {
    parse_opt_template(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("template parsed: " << text);
  return ErrorCode::IOError;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("optdsl") {
  TEST_CASE("loop_opt template parses into one group with three lines") {
    const auto t = parse_opt_template(ts::kLoopOptTemplate);
    REQUIRE(t.groups.size() == 1);
    const auto& g = t.groups[0];
    CHECK(g.name == "loop_opt");
    REQUIRE(g.lines.size() == 3);
    CHECK(g.lines[0].label == "lp2");
    CHECK(g.lines[0].fixed_directive == "pipeline");
    CHECK(g.lines[2].fixed_directive.empty());
    CHECK(g.lines[1].choices == std::vector<std::string>{"1", "2", "4", "8"});
    CHECK(t.templates.size() == 2);
  }

  TEST_CASE("loop_opt space: lp2 has 4 options, lp3 has 8 alternatives") {
    const auto space = enumerate_design_space(parse_opt_template(ts::kLoopOptTemplate));
    CHECK(space.size() == 32);
    REQUIRE(space.axes().size() == 2);
    CHECK(space.axes()[0].alternatives.size() == 4);
    CHECK(space.axes()[1].alternatives.size() == 8);
  }

  TEST_CASE("enumeration equals the brute-force oracle on random templates") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
      const auto text = ts::random_template(rng);
      CAPTURE(text);
      const auto tmpl = parse_opt_template(text);
      const auto space = enumerate_design_space(tmpl);
      std::set<std::string> got;
      for (const auto& a : space) got.insert(ts::assignment_key(a));
      CHECK(got.size() == space.size());
      CHECK(got == ts::brute_force_space(tmpl));
    }
  }

  TEST_CASE("rendered opt.tcl has no brackets, the right command count and is unique") {
    const auto tmpl = parse_opt_template(ts::kLoopOptTemplate);
    std::set<std::string> rendered;
    for (const auto& a : enumerate_design_space(tmpl)) {
      const auto text = render_assignment(tmpl, a);
      CHECK(text.find_first_of("[]") == std::string::npos);
      std::size_t expected = 0;
      for (const auto& s : a.selections) expected += s.fixed_directive.empty() ? 1 : 2;
      CHECK(count_lines(text) == expected);
      rendered.insert(text);
    }
    CHECK(rendered.size() == 32);
  }

  TEST_CASE("rendering substitutes name and factor") {
    const auto tmpl = parse_opt_template(ts::kLoopOptTemplate);
    const auto space = enumerate_design_space(tmpl);
    const auto first = space.at(0);
    CHECK(render_assignment(tmpl, first) ==
          "set_directive_pipeline k2mm/lp2\n"
          "set_directive_unroll -factor 1 k2mm/lp2\n"
          "set_directive_pipeline k2mm/lp3\n"
          "set_directive_unroll -factor 1 k2mm/lp3\n");
    CHECK(render_assignment(tmpl, DirectiveAssignment{}) == "\n");
  }

  TEST_CASE("multi-value choices fill placeholders by position") {
    const auto tmpl = parse_opt_template(
        "array_opt,1,1\n"
        "0,buf,,array_partition,[cyclic-2 block-4]\n"
        "set_directive_array_partition -type [type] -factor [factor] top/[name]\n");
    const auto space = enumerate_design_space(tmpl);
    REQUIRE(space.size() == 2);
    CHECK(render_assignment(tmpl, space.at(1)) == "set_directive_array_partition -type block -factor 4 top/buf\n");
  }

  TEST_CASE("comments and blank lines are skipped") {
    const auto tmpl = parse_opt_template(std::string("# header comment\n\n") + ts::kLoopOptTemplate + "\n# trailing\n");
    CHECK(design_space_size(tmpl) == 32);
  }

  TEST_CASE("empty template spans exactly one empty assignment") {
    const auto space = enumerate_design_space(parse_opt_template(""));
    CHECK(space.size() == 1);
    CHECK(space.at(0).empty());
  }

  TEST_CASE("syntax errors") {
    CHECK(parse_error("loop_opt,1,1\n0,lp1,,unroll,[1 2\nset_directive_unroll -factor [factor] t/[name]\n") ==
          ErrorCode::SyntaxError);
    CHECK(parse_error("loop_opt,1,1\n0,lp1,,unroll,[1 [2]]\nset_directive_unroll -factor [factor] t/[name]\n") ==
          ErrorCode::SyntaxError);
    CHECK(parse_error("loop_opt,1,1\n0,lp1,,unroll,[1\t2]\nset_directive_unroll -factor [factor] t/[name]\n") ==
          ErrorCode::SyntaxError);
    CHECK(parse_error("loop_opt,1,1\n0,lp1,,unroll,[]\nset_directive_unroll -factor [factor] t/[name]\n") ==
          ErrorCode::SyntaxError);
    CHECK(parse_error("loop_opt,1,1\n3,lp1,,unroll,[1]\nset_directive_unroll -factor [factor] t/[name]\n") ==
          ErrorCode::SyntaxError);
    CHECK(parse_error("0,lp1,,unroll,[1]\n") == ErrorCode::SyntaxError);
  }

  TEST_CASE("count mismatches") {
    CHECK(parse_error("loop_opt,2,1\n0,lp1,,unroll,[1]\nset_directive_unroll -factor [factor] t/[name]\n") ==
          ErrorCode::CountMismatch);
    CHECK(parse_error("loop_opt,1,2\n0,lp1,,unroll,[1]\nset_directive_unroll -factor [factor] t/[name]\n") ==
          ErrorCode::CountMismatch);
    CHECK(parse_error("loop_opt,1,1\n0,lp1,,unroll,[1]\n1,lp2,,unroll,[1]\n"
                      "set_directive_unroll -factor [factor] t/[name]\n") == ErrorCode::CountMismatch);
  }

  TEST_CASE("template matching and placeholder errors") {
    CHECK(parse_error("loop_opt,1,1\n0,lp1,pipeline,unroll,[1]\nset_directive_unroll -factor [factor] t/[name]\n") ==
          ErrorCode::UnmatchedTemplate);
    CHECK(parse_error("loop_opt,1,1\n0,lp1,,unroll,[1-2]\nset_directive_unroll -factor [factor] t/[name]\n") ==
          ErrorCode::UnfilledPlaceholder);
  }

  TEST_CASE("render rejects choices outside the template") {
    const auto tmpl = parse_opt_template(ts::kLoopOptTemplate);
    auto a = enumerate_design_space(tmpl).at(3);
    a.selections[0].choice = "16";
    CHECK_THROWS_AS(render_assignment(tmpl, a), Error);
    auto dup = enumerate_design_space(tmpl).at(3);
    dup.selections.push_back(dup.selections[0]);
    CHECK_THROWS_AS(render_assignment(tmpl, dup), Error);
  }

  TEST_CASE("at() out of range throws") {
    const auto space = enumerate_design_space(parse_opt_template(ts::kLoopOptTemplate));
    CHECK_THROWS_AS(space.at(32), Error);
  }

  TEST_CASE("summarize is readable and canonical") {
    const auto tmpl = parse_opt_template(ts::kLoopOptTemplate);
    const auto a = enumerate_design_space(tmpl).at(31);
    CHECK(summarize(a) == "loop_opt/lp2=pipeline+unroll:8;loop_opt/lp3=unroll:8");
  }
}
