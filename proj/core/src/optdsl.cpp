#include "hlsforge/optdsl.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"

namespace hlsforge {

namespace {

[[noreturn]] void syntax_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": " + what);
}

[[noreturn]] void count_mismatch(const DirectiveGroup& group, const std::string& what) {
  throw Error(ErrorCode::CountMismatch, "group '" + group.name + "' declares " +
                                            std::to_string(group.declared_line_count) + " lines and " +
                                            std::to_string(group.declared_template_count) +
                                            " templates: " + what);
}

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<std::size_t> parse_count(std::string_view s) {
  if (!is_digits(s)) return std::nullopt;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// A line whose first comma field is an integer is a directive line, whatever
// else is wrong with it.
bool looks_like_directive_line(std::string_view line) {
  return is_digits(line.substr(0, line.find(',')));
}

bool looks_like_header(std::string_view line) {
  const auto fields = split(line, ',');
  return fields.size() == 3 && is_identifier(fields[0]) && is_digits(fields[1]) && is_digits(fields[2]);
}

DirectiveLine parse_directive_line(std::string_view line, std::size_t line_no, std::size_t expected_index) {
  const auto fields = split(line, ',');
  if (fields.size() != 5) {
    syntax_error(line_no, "directive line needs 5 comma-separated fields, got " + std::to_string(fields.size()));
  }
  DirectiveLine out;
  const auto index = parse_count(fields[0]);
  if (!index) syntax_error(line_no, "bad line index '" + fields[0] + "'");
  if (*index != expected_index) {
    syntax_error(line_no, "line index " + fields[0] + " does not match position " + std::to_string(expected_index));
  }
  out.index = *index;
  if (!is_identifier(fields[1])) syntax_error(line_no, "bad label '" + fields[1] + "'");
  out.label = fields[1];
  if (!fields[2].empty() && !is_identifier(fields[2])) {
    syntax_error(line_no, "bad fixed directive '" + fields[2] + "'");
  }
  out.fixed_directive = fields[2];
  if (!is_identifier(fields[3])) syntax_error(line_no, "bad directive kind '" + fields[3] + "'");
  out.param_kind = fields[3];

  const std::string& list = fields[4];
  if (list.empty() || list.front() != '[') syntax_error(line_no, "choices must be a bracketed list");
  if (list.back() != ']' || list.size() < 2) syntax_error(line_no, "unterminated bracket");
  const std::string_view body = std::string_view(list).substr(1, list.size() - 2);
  if (body.find('\t') != std::string_view::npos) syntax_error(line_no, "tab inside choice list");
  if (body.find_first_of("[]") != std::string_view::npos) syntax_error(line_no, "nested bracket in choice list");
  if (body.empty()) syntax_error(line_no, "empty choice list");
  for (auto& token : split(body, ' ')) {
    if (token.empty()) syntax_error(line_no, "choices must be separated by single spaces");
    out.choices.push_back(std::move(token));
  }
  return out;
}

// Distinct placeholder names other than `name`, in order of first appearance.
std::vector<std::string> value_placeholders(std::string_view tmpl) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = tmpl.find('[', pos)) != std::string_view::npos) {
    const auto close = tmpl.find(']', pos);
    if (close == std::string_view::npos) break;
    std::string name(tmpl.substr(pos + 1, close - pos - 1));
    if (name != "name" && std::find(names.begin(), names.end(), name) == names.end()) {
      names.push_back(std::move(name));
    }
    pos = close + 1;
  }
  return names;
}

bool matches_kind(std::string_view tmpl, std::string_view kind) {
  const std::string needle = "set_directive_" + std::string(kind);
  std::size_t pos = 0;
  while ((pos = tmpl.find(needle, pos)) != std::string_view::npos) {
    const auto end = pos + needle.size();
    if (end == tmpl.size() || tmpl[end] == ' ' || tmpl[end] == '\t') return true;
    pos = end;
  }
  return false;
}

const std::string* find_template(const DirectiveGroup& group, std::string_view kind) {
  for (const auto& t : group.templates) {
    if (matches_kind(t, kind)) return &t;
  }
  return nullptr;
}

void replace_all(std::string& text, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string fill_template(const std::string& tmpl, const std::string& label, const std::vector<std::string>& values,
                          const std::string& kind) {
  const auto names = value_placeholders(tmpl);
  if (names.size() != values.size()) {
    throw Error(ErrorCode::UnfilledPlaceholder, "template for '" + kind + "' has " + std::to_string(names.size()) +
                                                    " value placeholders but choice supplies " +
                                                    std::to_string(values.size()) + ": " + tmpl);
  }
  std::string out = tmpl;
  replace_all(out, "[name]", label);
  for (std::size_t i = 0; i < names.size(); ++i) replace_all(out, "[" + names[i] + "]", values[i]);
  if (out.find_first_of("[]") != std::string::npos) {
    throw Error(ErrorCode::UnfilledPlaceholder, "unfilled bracket in rendered directive: " + out);
  }
  return out;
}

std::vector<std::string> choice_values(const std::string& choice) { return split(choice, '-'); }

void validate_group_templates(const DirectiveGroup& group) {
  for (const auto& line : group.lines) {
    const auto* param_tmpl = find_template(group, line.param_kind);
    if (!param_tmpl) {
      throw Error(ErrorCode::UnmatchedTemplate,
                  "group '" + group.name + "' has no template for set_directive_" + line.param_kind);
    }
    const auto n_slots = value_placeholders(*param_tmpl).size();
    for (const auto& choice : line.choices) {
      if (choice_values(choice).size() != n_slots) {
        throw Error(ErrorCode::UnfilledPlaceholder, "choice '" + choice + "' of line " + std::to_string(line.index) +
                                                        " in group '" + group.name + "' does not fill " +
                                                        std::to_string(n_slots) + " placeholder(s)");
      }
    }
    if (!line.fixed_directive.empty()) {
      const auto* fixed_tmpl = find_template(group, line.fixed_directive);
      if (!fixed_tmpl) {
        throw Error(ErrorCode::UnmatchedTemplate,
                    "group '" + group.name + "' has no template for set_directive_" + line.fixed_directive);
      }
      if (!value_placeholders(*fixed_tmpl).empty()) {
        throw Error(ErrorCode::UnfilledPlaceholder, "fixed directive template takes no values: " + *fixed_tmpl);
      }
    }
  }
}

auto canonical_key(const Selection& s) { return std::tie(s.group, s.label, s.line_index); }

}  // namespace

const DirectiveGroup* OptTemplate::find_group(std::string_view name) const {
  for (const auto& g : groups) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

DirectiveAssignment DirectiveAssignment::canonicalized() const {
  DirectiveAssignment out = *this;
  std::stable_sort(out.selections.begin(), out.selections.end(),
                   [](const Selection& a, const Selection& b) { return canonical_key(a) < canonical_key(b); });
  return out;
}

std::string canonical_text(const DirectiveAssignment& assignment) {
  std::string out;
  for (const auto& s : assignment.canonicalized().selections) {
    out += s.group + ',' + s.label + ',' + std::to_string(s.line_index) + ',' + s.fixed_directive + ',' +
           s.param_kind + ',' + s.choice + '\n';
  }
  return out;
}

std::string summarize(const DirectiveAssignment& assignment) {
  std::string out;
  for (const auto& s : assignment.canonicalized().selections) {
    if (!out.empty()) out += ';';
    out += s.group + '/' + s.label + '=';
    if (!s.fixed_directive.empty()) out += s.fixed_directive + '+';
    out += s.param_kind + ':' + s.choice;
  }
  return out;
}

OptTemplate parse_opt_template(std::string_view text) {
  OptTemplate out;
  std::set<std::string> group_names;

  enum class State { Header, Lines, Templates };
  State state = State::Header;
  DirectiveGroup current;

  auto finish_group = [&] {
    validate_group_templates(current);
    out.templates.insert(out.templates.end(), current.templates.begin(), current.templates.end());
    out.groups.push_back(std::move(current));
    current = DirectiveGroup{};
    state = State::Header;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    switch (state) {
      case State::Header: {
        if (looks_like_directive_line(line)) {
          if (!out.groups.empty()) count_mismatch(out.groups.back(), "extra directive line " + std::to_string(line_no));
          syntax_error(line_no, "directive line before any group header");
        }
        if (line.starts_with("set_")) {
          if (!out.groups.empty()) count_mismatch(out.groups.back(), "extra template line " + std::to_string(line_no));
          syntax_error(line_no, "template line before any group header");
        }
        const auto fields = split(line, ',');
        if (fields.size() != 3) syntax_error(line_no, "malformed group header '" + std::string(line) + "'");
        if (!is_identifier(fields[0])) syntax_error(line_no, "bad group name '" + fields[0] + "'");
        const auto n_lines = parse_count(fields[1]);
        const auto n_templates = parse_count(fields[2]);
        if (!n_lines || !n_templates) syntax_error(line_no, "group header counts must be non-negative integers");
        if (!group_names.insert(fields[0]).second) syntax_error(line_no, "duplicate group '" + fields[0] + "'");
        current.name = fields[0];
        current.declared_line_count = *n_lines;
        current.declared_template_count = *n_templates;
        if (*n_lines > 0) {
          state = State::Lines;
        } else if (*n_templates > 0) {
          state = State::Templates;
        } else {
          finish_group();
        }
        break;
      }
      case State::Lines: {
        if (!looks_like_directive_line(line)) {
          count_mismatch(current, "found " + std::to_string(current.lines.size()) + " directive lines");
        }
        current.lines.push_back(parse_directive_line(line, line_no, current.lines.size()));
        if (current.lines.size() == current.declared_line_count) {
          if (current.declared_template_count > 0) {
            state = State::Templates;
          } else {
            finish_group();
          }
        }
        break;
      }
      case State::Templates: {
        if (looks_like_directive_line(line)) count_mismatch(current, "extra directive line " + std::to_string(line_no));
        if (looks_like_header(line)) {
          count_mismatch(current, "found " + std::to_string(current.templates.size()) + " templates");
        }
        current.templates.emplace_back(line);
        if (current.templates.size() == current.declared_template_count) finish_group();
        break;
      }
    }
  }

  if (state == State::Lines) {
    count_mismatch(current, "found " + std::to_string(current.lines.size()) + " directive lines");
  }
  if (state == State::Templates) {
    count_mismatch(current, "found " + std::to_string(current.templates.size()) + " templates");
  }
  return out;
}

DesignSpace::DesignSpace(OptTemplate tmpl) : template_(std::make_shared<const OptTemplate>(std::move(tmpl))) {
  std::map<std::pair<std::string, std::string>, Axis> by_key;
  for (const auto& group : template_->groups) {
    for (const auto& line : group.lines) {
      auto& axis = by_key[{group.name, line.label}];
      axis.group = group.name;
      axis.label = line.label;
      for (std::size_t c = 0; c < line.choices.size(); ++c) axis.alternatives.push_back({line.index, c});
    }
  }
  // std::map iteration gives canonical (group, label) order.
  for (auto& [key, axis] : by_key) {
    const std::uint64_t n = axis.alternatives.size();
    if (size_ > std::numeric_limits<std::uint64_t>::max() / n) {
      throw Error(ErrorCode::SpaceTooLarge, "design space size exceeds 2^64");
    }
    size_ *= n;
    axes_.push_back(std::move(axis));
  }
}

DirectiveAssignment DesignSpace::at(std::uint64_t index) const {
  if (index >= size_) throw Error(ErrorCode::InvalidArgument, "design point index out of range");
  DirectiveAssignment out;
  out.selections.resize(axes_.size());
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const auto& axis = axes_[i];
    const auto n = axis.alternatives.size();
    const auto& alt = axis.alternatives[index % n];
    index /= n;
    const auto* group = template_->find_group(axis.group);
    const auto& line = group->lines[alt.line_index];
    out.selections[i] =
        Selection{axis.group, axis.label, line.index, line.fixed_directive, line.param_kind, line.choices[alt.choice_index]};
  }
  return out;
}

DesignSpace enumerate_design_space(const OptTemplate& tmpl) { return DesignSpace(tmpl); }

std::uint64_t design_space_size(const OptTemplate& tmpl) { return DesignSpace(tmpl).size(); }

std::vector<std::string> render_selection(const OptTemplate& tmpl, const Selection& s) {
  const auto* group = tmpl.find_group(s.group);
  if (!group) throw Error(ErrorCode::InvalidAssignment, "unknown group '" + s.group + "'");
  if (s.line_index >= group->lines.size()) {
    throw Error(ErrorCode::InvalidAssignment, "group '" + s.group + "' has no line " + std::to_string(s.line_index));
  }
  const auto& line = group->lines[s.line_index];
  if (line.label != s.label || line.param_kind != s.param_kind || line.fixed_directive != s.fixed_directive) {
    throw Error(ErrorCode::InvalidAssignment,
                "selection does not match line " + std::to_string(s.line_index) + " of group '" + s.group + "'");
  }
  if (std::find(line.choices.begin(), line.choices.end(), s.choice) == line.choices.end()) {
    throw Error(ErrorCode::InvalidAssignment, "choice '" + s.choice + "' not offered for " + s.group + "/" + s.label);
  }

  std::vector<std::string> commands;
  if (!line.fixed_directive.empty()) {
    const auto* t = find_template(*group, line.fixed_directive);
    if (!t) throw Error(ErrorCode::UnmatchedTemplate, "no template for set_directive_" + line.fixed_directive);
    commands.push_back(fill_template(*t, line.label, {}, line.fixed_directive));
  }
  const auto* t = find_template(*group, line.param_kind);
  if (!t) throw Error(ErrorCode::UnmatchedTemplate, "no template for set_directive_" + line.param_kind);
  commands.push_back(fill_template(*t, line.label, choice_values(s.choice), line.param_kind));
  return commands;
}

std::string render_assignment(const OptTemplate& tmpl, const DirectiveAssignment& assignment) {
  const auto canonical = assignment.canonicalized();
  std::set<std::pair<std::string, std::string>> seen_axes;
  std::string out;
  for (const auto& s : canonical.selections) {
    if (!seen_axes.insert({s.group, s.label}).second) {
      throw Error(ErrorCode::InvalidAssignment, "two selections for axis " + s.group + "/" + s.label);
    }
    for (const auto& cmd : render_selection(tmpl, s)) {
      out += cmd;
      out += '\n';
    }
  }
  if (out.empty()) out = "\n";
  return out;
}

}  // namespace hlsforge
