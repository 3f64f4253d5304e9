#pragma once

// Parser, canonical printer and outline expander for the Gherkin subset used
// by hardware scenarios: Feature, Scenario, Scenario Outline, Examples,
// Given/When/Then/And/But steps and `#` comments.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hwbdd/errors.hpp"

namespace hwbdd::gherkin {

enum class Keyword { Given, When, Then, And, But };

std::string_view to_string(Keyword k);

/// One step. `line` is informational and does not take part in equality, so a
/// re-parsed printout compares equal to the original.
struct Step {
  Keyword keyword = Keyword::Given;
  std::string text;
  Keyword resolved = Keyword::Given;  // always Given, When or Then
  std::size_t line = 0;

  friend bool operator==(const Step& a, const Step& b) {
    return a.keyword == b.keyword && a.text == b.text &&
           a.resolved == b.resolved;
  }
};

struct ExamplesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in `columns`, if present.
  std::optional<std::size_t> column_index(std::string_view name) const;

  friend bool operator==(const ExamplesTable&, const ExamplesTable&) = default;
};

enum class ScenarioKind { Plain, Outline };

struct ScenarioNode {
  std::string name;
  ScenarioKind kind = ScenarioKind::Plain;
  std::vector<Step> steps;
  std::optional<ExamplesTable> examples;  // engaged iff kind == Outline
  std::size_t line = 0;

  friend bool operator==(const ScenarioNode& a, const ScenarioNode& b) {
    return a.name == b.name && a.kind == b.kind && a.steps == b.steps &&
           a.examples == b.examples;
  }
};

struct FeatureAst {
  std::string name;
  std::optional<std::string> description;  // lines joined with '\n'
  std::vector<ScenarioNode> scenarios;

  friend bool operator==(const FeatureAst&, const FeatureAst&) = default;
};

/// Parses a feature file. Throws SyntaxError with line and column on any
/// violation of the grammar or of the AST invariants.
FeatureAst parse_feature(std::string_view source);

/// Canonical text: two-space indentation per level, a blank line before each
/// scenario, column-aligned tables, LF line endings.
std::string print_feature(const FeatureAst& ast);

/// Placeholder names (`<name>`) referenced in `text`, in order of appearance.
std::vector<std::string> placeholders(std::string_view text);

/// Replaces every `<column>` occurrence with the cell from `row`.
std::string substitute(std::string_view text, const ExamplesTable& table,
                       std::size_t row);

/// Expands a single scenario: a Plain scenario yields itself, an Outline one
/// Plain scenario per example row named "<name> [k]" (k from 1).
std::vector<ScenarioNode> expand_scenario(const ScenarioNode& scenario);

/// Replaces every Outline with its expansion, preserving order.
FeatureAst expand_outlines(const FeatureAst& ast);

}  // namespace hwbdd::gherkin
