#include "hwbdd/gherkin.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <utility>

namespace hwbdd::gherkin {
namespace {

constexpr std::string_view kFeature = "Feature:";
constexpr std::string_view kScenario = "Scenario:";
constexpr std::string_view kOutline = "Scenario Outline:";
constexpr std::string_view kExamples = "Examples:";

struct StepKeyword {
  std::string_view word;
  Keyword keyword;
};

constexpr std::array<StepKeyword, 5> kStepKeywords{{
    {"Given", Keyword::Given},
    {"When", Keyword::When},
    {"Then", Keyword::Then},
    {"And", Keyword::And},
    {"But", Keyword::But},
}};

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

// Codepoint count, used for table alignment.
std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(),
      [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

struct Placeholder {
  std::string name;
  std::size_t offset;  // position of '<'
  std::size_t length;  // including the angle brackets
};

std::vector<Placeholder> scan_placeholders(std::string_view text) {
  std::vector<Placeholder> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '<' || i + 1 >= text.size() || !is_ident_start(text[i + 1]))
      continue;
    std::size_t j = i + 1;
    while (j < text.size() && is_ident_char(text[j])) ++j;
    if (j < text.size() && text[j] == '>') {
      out.push_back({std::string(text.substr(i + 1, j - i - 1)), i, j - i + 1});
      i = j;
    }
  }
  return out;
}

std::string escape_cell(std::string_view cell) {
  std::string out;
  for (char c : cell) {
    if (c == '|' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  FeatureAst run() {
    if (source_.starts_with("\xEF\xBB\xBF")) source_.remove_prefix(3);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source_.size()) {
      std::size_t end = source_.find('\n', pos);
      if (end == std::string_view::npos) end = source_.size();
      ++line_no;
      handle_line(source_.substr(pos, end - pos), line_no);
      pos = end + 1;
    }
    if (!have_feature_) {
      throw SyntaxError("missing 'Feature:' header", line_no == 0 ? 1 : line_no,
                        1);
    }
    close_scenario();
    if (!description_.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < description_.size(); ++i) {
        if (i) joined.push_back('\n');
        joined += description_[i];
      }
      ast_.description = std::move(joined);
    }
    return std::move(ast_);
  }

 private:
  void handle_line(std::string_view raw, std::size_t line_no) {
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') return;
    const std::size_t column =
        static_cast<std::size_t>(text.data() - raw.data()) + 1;

    if (text.starts_with(kFeature)) {
      if (have_feature_)
        throw SyntaxError("a file holds a single Feature", line_no, column);
      have_feature_ = true;
      ast_.name = std::string(trim(text.substr(kFeature.size())));
      if (ast_.name.empty())
        throw SyntaxError("Feature name is empty", line_no, column);
      return;
    }
    if (!have_feature_)
      throw SyntaxError("expected 'Feature:' before other content", line_no,
                        column);

    if (text.starts_with(kOutline)) {
      open_scenario(ScenarioKind::Outline, text.substr(kOutline.size()),
                    line_no, column);
      return;
    }
    if (text.starts_with(kScenario)) {
      open_scenario(ScenarioKind::Plain, text.substr(kScenario.size()), line_no,
                    column);
      return;
    }
    if (text.starts_with(kExamples)) {
      start_examples(text, line_no, column);
      return;
    }
    if (text.front() == '|') {
      table_row(text, line_no, column);
      return;
    }
    if (auto kw = step_keyword(text)) {
      add_step(*kw, text, line_no, column);
      return;
    }
    if (!current_) {
      description_.emplace_back(text);
      return;
    }
    throw SyntaxError("unknown keyword in '" + std::string(text) + "'", line_no,
                      column);
  }

  static std::optional<StepKeyword> step_keyword(std::string_view text) {
    for (const auto& kw : kStepKeywords) {
      if (text.starts_with(kw.word) &&
          (text.size() == kw.word.size() || is_blank(text[kw.word.size()])))
        return kw;
    }
    return std::nullopt;
  }

  void open_scenario(ScenarioKind kind, std::string_view rest,
                     std::size_t line_no, std::size_t column) {
    close_scenario();
    ScenarioNode node;
    node.kind = kind;
    node.name = std::string(trim(rest));
    node.line = line_no;
    if (node.name.empty())
      throw SyntaxError("scenario name is empty", line_no, column);
    if (!names_.insert(node.name).second)
      throw SyntaxError("duplicate scenario name '" + node.name + "'", line_no,
                        column);
    current_ = std::move(node);
    scenario_column_ = column;
    in_examples_ = false;
    phase_ = -1;
  }

  void add_step(const StepKeyword& kw, std::string_view text,
                std::size_t line_no, std::size_t column) {
    if (!current_) throw SyntaxError("step outside a scenario", line_no, column);
    if (in_examples_)
      throw SyntaxError("step after an Examples table", line_no, column);
    Step step;
    step.keyword = kw.keyword;
    step.text = std::string(trim(text.substr(kw.word.size())));
    step.line = line_no;
    if (step.text.empty()) throw SyntaxError("step text is empty", line_no, column);

    if (kw.keyword == Keyword::And || kw.keyword == Keyword::But) {
      if (current_->steps.empty())
        throw SyntaxError(std::string(kw.word) + " cannot start a scenario",
                          line_no, column);
      step.resolved = current_->steps.back().resolved;
    } else {
      step.resolved = kw.keyword;
    }
    const int phase = step.resolved == Keyword::Given  ? 0
                      : step.resolved == Keyword::When ? 1
                                                       : 2;
    if (current_->steps.empty() && phase == 2)
      throw SyntaxError("scenario cannot start with Then", line_no, column);
    if (phase < phase_)
      throw SyntaxError(std::string(kw.word) + " step out of Given/When/Then order",
                        line_no, column);
    if (phase == 2 && phase_ < 1)
      throw SyntaxError("Then step without a preceding When", line_no, column);
    phase_ = phase;
    current_->steps.push_back(std::move(step));
  }

  void start_examples(std::string_view text, std::size_t line_no,
                      std::size_t column) {
    if (!current_) throw SyntaxError("Examples outside a scenario", line_no, column);
    if (current_->kind != ScenarioKind::Outline)
      throw SyntaxError("Examples belong to a Scenario Outline", line_no, column);
    if (in_examples_ || current_->examples)
      throw SyntaxError("an outline takes a single Examples table", line_no,
                        column);
    if (!trim(text.substr(kExamples.size())).empty())
      throw SyntaxError("unexpected text after 'Examples:'", line_no, column);
    in_examples_ = true;
    examples_line_ = line_no;
    examples_column_ = column;
    current_->examples = ExamplesTable{};
  }

  void table_row(std::string_view text, std::size_t line_no,
                 std::size_t column) {
    if (!in_examples_)
      throw SyntaxError("table row outside an Examples table", line_no, column);
    std::vector<std::string> cells;
    std::string cell;
    bool closed = false;
    for (std::size_t i = 1; i < text.size(); ++i) {
      const char c = text[i];
      closed = false;
      if (c == '\\') {
        if (i + 1 >= text.size() || (text[i + 1] != '|' && text[i + 1] != '\\'))
          throw SyntaxError("malformed table row: bad escape", line_no,
                            column + i);
        cell.push_back(text[++i]);
        continue;
      }
      if (c == '|') {
        cells.emplace_back(trim(cell));
        cell.clear();
        closed = true;
        continue;
      }
      cell.push_back(c);
    }
    if (!closed)
      throw SyntaxError("malformed table row: missing closing '|'", line_no,
                        column + text.size() - 1);

    auto& table = *current_->examples;
    if (table.columns.empty()) {
      std::set<std::string> seen;
      for (const auto& name : cells) {
        if (name.empty())
          throw SyntaxError("malformed table row: empty column name", line_no,
                            column);
        if (!seen.insert(name).second)
          throw SyntaxError("duplicate column '" + name + "'", line_no, column);
      }
      table.columns = std::move(cells);
      return;
    }
    if (cells.size() != table.columns.size())
      throw SyntaxError("malformed table row: expected " +
                            std::to_string(table.columns.size()) +
                            " cells, found " + std::to_string(cells.size()),
                        line_no, column);
    table.rows.push_back(std::move(cells));
  }

  void close_scenario() {
    if (!current_) return;
    ScenarioNode& node = *current_;
    if (node.steps.empty())
      throw SyntaxError("scenario '" + node.name + "' has no steps", node.line,
                        scenario_column_);
    if (phase_ < 1)
      throw SyntaxError("scenario '" + node.name + "' has no When step",
                        node.line, scenario_column_);
    if (phase_ < 2)
      throw SyntaxError("scenario '" + node.name + "' has no Then step",
                        node.line, scenario_column_);
    if (node.kind == ScenarioKind::Outline) {
      if (!node.examples)
        throw SyntaxError("outline '" + node.name + "' has no Examples",
                          node.line, scenario_column_);
      if (node.examples->columns.empty() || node.examples->rows.empty())
        throw SyntaxError("Examples table of '" + node.name + "' has no rows",
                          examples_line_, examples_column_);
      for (const auto& step : node.steps) {
        for (const auto& ph : scan_placeholders(step.text)) {
          if (!node.examples->column_index(ph.name))
            throw SyntaxError("placeholder <" + ph.name + "> has no column",
                              step.line, 1);
        }
      }
    }
    ast_.scenarios.push_back(std::move(node));
    current_.reset();
    in_examples_ = false;
  }

  std::string_view source_;
  FeatureAst ast_;
  bool have_feature_ = false;
  std::vector<std::string> description_;
  std::optional<ScenarioNode> current_;
  std::set<std::string> names_;
  std::size_t scenario_column_ = 1;
  bool in_examples_ = false;
  std::size_t examples_line_ = 0;
  std::size_t examples_column_ = 1;
  int phase_ = -1;
};

}  // namespace

std::string_view to_string(Keyword k) {
  switch (k) {
    case Keyword::Given: return "Given";
    case Keyword::When: return "When";
    case Keyword::Then: return "Then";
    case Keyword::And: return "And";
    case Keyword::But: return "But";
  }
  return "?";
}

std::optional<std::size_t> ExamplesTable::column_index(
    std::string_view name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns.begin());
}

FeatureAst parse_feature(std::string_view source) {
  return Parser(source).run();
}

std::string print_feature(const FeatureAst& ast) {
  std::ostringstream out;
  out << kFeature << ' ' << ast.name << '\n';
  if (ast.description) {
    std::string_view rest = *ast.description;
    while (!rest.empty()) {
      const std::size_t nl = rest.find('\n');
      const std::string_view line = rest.substr(0, nl);
      if (!trim(line).empty()) out << "  " << trim(line) << '\n';
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  for (const auto& scenario : ast.scenarios) {
    out << '\n'
        << "  "
        << (scenario.kind == ScenarioKind::Outline ? kOutline : kScenario) << ' '
        << scenario.name << '\n';
    for (const auto& step : scenario.steps)
      out << "    " << to_string(step.keyword) << ' ' << step.text << '\n';
    if (!scenario.examples) continue;

    const auto& table = *scenario.examples;
    std::vector<std::vector<std::string>> grid;
    grid.reserve(table.rows.size() + 1);
    grid.emplace_back();
    for (const auto& c : table.columns) grid.back().push_back(escape_cell(c));
    for (const auto& row : table.rows) {
      grid.emplace_back();
      for (const auto& c : row) grid.back().push_back(escape_cell(c));
    }
    std::vector<std::size_t> widths(table.columns.size(), 0);
    for (const auto& row : grid)
      for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i)
        widths[i] = std::max(widths[i], display_width(row[i]));

    out << '\n' << "    " << kExamples << '\n';
    for (const auto& row : grid) {
      out << "      |";
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << ' ' << row[i]
            << std::string(widths[i] - display_width(row[i]), ' ') << " |";
      }
      out << '\n';
    }
  }
  return out.str();
}

std::vector<std::string> placeholders(std::string_view text) {
  std::vector<std::string> names;
  for (auto& ph : scan_placeholders(text)) names.push_back(std::move(ph.name));
  return names;
}

std::string substitute(std::string_view text, const ExamplesTable& table,
                       std::size_t row) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& ph : scan_placeholders(text)) {
    const auto col = table.column_index(ph.name);
    if (!col) continue;
    out.append(text.substr(pos, ph.offset - pos));
    out += table.rows.at(row).at(*col);
    pos = ph.offset + ph.length;
  }
  out.append(text.substr(pos));
  return out;
}

std::vector<ScenarioNode> expand_scenario(const ScenarioNode& scenario) {
  if (scenario.kind == ScenarioKind::Plain || !scenario.examples)
    return {scenario};
  const auto& table = *scenario.examples;
  std::vector<ScenarioNode> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    ScenarioNode plain;
    plain.name = scenario.name + " [" + std::to_string(r + 1) + "]";
    plain.kind = ScenarioKind::Plain;
    plain.line = scenario.line;
    plain.steps = scenario.steps;
    for (auto& step : plain.steps) step.text = substitute(step.text, table, r);
    out.push_back(std::move(plain));
  }
  return out;
}

FeatureAst expand_outlines(const FeatureAst& ast) {
  FeatureAst out;
  out.name = ast.name;
  out.description = ast.description;
  for (const auto& scenario : ast.scenarios) {
    auto expanded = expand_scenario(scenario);
    std::move(expanded.begin(), expanded.end(),
              std::back_inserter(out.scenarios));
  }
  return out;
}

}  // namespace hwbdd::gherkin
