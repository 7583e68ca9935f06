#pragma once

// OptDSL: the bracket-parameterized directive template language read from
// `opt_template.tcl`, and the design space it spans.
//
// A template is a sequence of groups:
//
//   loop_opt,3,2                                  <group>,<n_lines>,<n_templates>
//   0,lp2,pipeline,unroll,[1 2 4 8]               <index>,<label>,<fixed>,<kind>,[choices]
//   1,lp3,pipeline,unroll,[1 2 4 8]
//   2,lp3,,unroll,[1 2 4 8]
//   set_directive_unroll -factor [factor] k2mm/[name]
//   set_directive_pipeline k2mm/[name]
//
// Lines of one group that share a label are mutually exclusive alternatives;
// distinct (group, label) pairs are independent axes of a Cartesian product.

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hlsforge {

struct DirectiveLine {
  std::size_t index = 0;
  std::string label;
  std::string fixed_directive;  ///< empty when the line has no fixed directive
  std::string param_kind;
  std::vector<std::string> choices;

  bool operator==(const DirectiveLine&) const = default;
};

struct DirectiveGroup {
  std::string name;
  std::vector<DirectiveLine> lines;
  std::vector<std::string> templates;
  std::size_t declared_line_count = 0;
  std::size_t declared_template_count = 0;

  bool operator==(const DirectiveGroup&) const = default;
};

struct OptTemplate {
  std::vector<DirectiveGroup> groups;
  std::vector<std::string> templates;  ///< all template commands, in file order

  const DirectiveGroup* find_group(std::string_view name) const;
  bool empty() const { return groups.empty(); }

  bool operator==(const OptTemplate&) const = default;
};

/// One chosen (line, choice) for a (group, label) axis.
struct Selection {
  std::string group;
  std::string label;
  std::size_t line_index = 0;
  std::string fixed_directive;
  std::string param_kind;
  std::string choice;

  bool operator==(const Selection&) const = default;
};

struct DirectiveAssignment {
  std::vector<Selection> selections;

  /// Selections sorted by (group, label, line_index).
  DirectiveAssignment canonicalized() const;
  bool empty() const { return selections.empty(); }

  bool operator==(const DirectiveAssignment&) const = default;
};

/// Template-independent canonical text of an assignment; this is what the
/// concrete-design id hashes. One `group,label,line,fixed,kind,choice` line per
/// selection in canonical order.
std::string canonical_text(const DirectiveAssignment& assignment);

/// Compact human-readable form, e.g. `loop_opt/lp2=pipeline+unroll:4;loop_opt/lp3=unroll:8`.
std::string summarize(const DirectiveAssignment& assignment);

/// Throws Error{SyntaxError|CountMismatch|UnmatchedTemplate|UnfilledPlaceholder}.
OptTemplate parse_opt_template(std::string_view text);

struct Alternative {
  std::size_t line_index = 0;
  std::size_t choice_index = 0;
};

struct Axis {
  std::string group;
  std::string label;
  std::vector<Alternative> alternatives;
};

class DesignSpace {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = DirectiveAssignment;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = DirectiveAssignment;

    iterator() = default;
    iterator(const DesignSpace* space, std::uint64_t index) : space_(space), index_(index) {}

    DirectiveAssignment operator*() const { return space_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++index_;
      return copy;
    }
    bool operator==(const iterator& other) const { return index_ == other.index_; }

   private:
    const DesignSpace* space_ = nullptr;
    std::uint64_t index_ = 0;
  };

  explicit DesignSpace(OptTemplate tmpl);

  const std::vector<Axis>& axes() const { return axes_; }
  const OptTemplate& opt_template() const { return *template_; }

  /// Product of alternative counts; 1 for the empty template.
  std::uint64_t size() const { return size_; }

  /// Mixed-radix decode; index 0 is the first assignment of the
  /// lexicographic order, the last axis varies fastest.
  DirectiveAssignment at(std::uint64_t index) const;

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  std::shared_ptr<const OptTemplate> template_;
  std::vector<Axis> axes_;
  std::uint64_t size_ = 1;
};

DesignSpace enumerate_design_space(const OptTemplate& tmpl);
std::uint64_t design_space_size(const OptTemplate& tmpl);

/// Renders the concrete `opt.tcl` for `assignment`. Selections may cover any
/// subset of the axes; the output is in canonical axis order and always ends
/// with exactly one newline.
std::string render_assignment(const OptTemplate& tmpl, const DirectiveAssignment& assignment);

/// Directive commands produced for a single selection, fixed directive first.
std::vector<std::string> render_selection(const OptTemplate& tmpl, const Selection& selection);

}  // namespace hlsforge
