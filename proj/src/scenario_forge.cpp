#include "hwbdd/scenario_forge.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <tuple>

#include "hwbdd/step_compiler.hpp"

namespace hwbdd::forge {
namespace {

using alu::Word;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Words, with ',', '=' and '.' split out as their own tokens.
std::vector<std::string> prompt_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == ',' || c == '=' || c == '.') {
      flush();
      tokens.emplace_back(1, c);
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return tokens;
}

class PromptParser {
 public:
  explicit PromptParser(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  PromptSpec run() {
    PromptSpec spec;
    expect("create");
    const std::string op_token = take("operation name");
    const auto op = alu::parse_op(op_token);
    if (!op) throw UnknownOperation("unknown operation '" + op_token + "'");
    spec.op = *op;
    expect("scenario");

    if (peek_is("with")) {
      ++pos_;
      spec.constraints.push_back(constraint());
      while (peek_is(",") && pos_ + 1 < tokens_.size() && !is_count(tokens_[pos_ + 1])) {
        ++pos_;
        spec.constraints.push_back(constraint());
      }
    }
    expect(",");
    const std::string n = take("example count");
    if (!is_count(n) || n.size() > 9)
      throw PromptSyntaxError("expected an example count", n);
    spec.count = std::stoul(n);
    if (spec.count == 0) throw PromptSyntaxError("example count must be positive", n);
    const std::string word = lower(take("'examples'"));
    if (word != "example" && word != "examples")
      throw PromptSyntaxError("expected 'examples'", word);
    if (peek_is(".")) ++pos_;
    if (pos_ != tokens_.size())
      throw PromptSyntaxError("unexpected trailing text", tokens_[pos_]);
    return spec;
  }

 private:
  static bool is_count(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  }

  bool peek_is(std::string_view word) const {
    return pos_ < tokens_.size() && lower(tokens_[pos_]) == word;
  }

  std::string take(std::string_view what) {
    if (pos_ >= tokens_.size())
      throw PromptSyntaxError("expected " + std::string(what) + " at end of prompt",
                              "");
    return tokens_[pos_++];
  }

  void expect(std::string_view word) {
    const std::string tok = take("'" + std::string(word) + "'");
    if (lower(tok) != word)
      throw PromptSyntaxError("expected '" + std::string(word) + "'", tok);
  }

  std::string literal() {
    const std::string tok = take("a literal");
    try {
      compiler::parse_int_literal(tok, alu::kMaxWidth);
    } catch (const Error&) {
      throw PromptSyntaxError("expected an integer literal", tok);
    }
    return tok;
  }

  Constraint constraint() {
    const std::string tok = take("a constraint");
    const std::string word = lower(tok);
    if (word == "a") {
      expect("=");
      if (peek_is("b")) {
        ++pos_;
        return EqualOperands{};
      }
      return FixedA{literal()};
    }
    if (word == "b") {
      expect("=");
      return FixedB{literal()};
    }
    if (word == "carry") return FlagGoal{alu::Flag::Carry, true};
    if (word == "overflow") return FlagGoal{alu::Flag::Overflow, true};
    if (word == "zero") return FlagGoal{alu::Flag::Zero, true};
    if (word == "no") {
      const std::string what = take("a flag");
      const std::string flag = lower(what);
      if (flag == "carry") return FlagGoal{alu::Flag::Carry, false};
      if (flag == "overflow") return FlagGoal{alu::Flag::Overflow, false};
      if (flag == "zero") return FlagGoal{alu::Flag::Zero, false};
      throw PromptSyntaxError("expected 'carry', 'overflow' or 'zero'", what);
    }
    throw PromptSyntaxError("unknown constraint", tok);
  }

  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

struct Resolved {
  std::optional<Word> a;
  std::optional<Word> b;
  bool equal = false;
};

Resolved resolve(const PromptSpec& spec, unsigned width) {
  Resolved r;
  for (const auto& c : spec.constraints) {
    if (const auto* fa = std::get_if<FixedA>(&c)) {
      const Word v = compiler::parse_int_literal(fa->literal, width);
      if (r.a && *r.a != v) throw Unsatisfiable("conflicting values for A");
      r.a = v;
    } else if (const auto* fb = std::get_if<FixedB>(&c)) {
      const Word v = compiler::parse_int_literal(fb->literal, width);
      if (r.b && *r.b != v) throw Unsatisfiable("conflicting values for B");
      r.b = v;
    } else if (std::holds_alternative<EqualOperands>(c)) {
      r.equal = true;
    }
  }
  return r;
}

bool has_goal(const PromptSpec& spec, alu::Flag flag, bool value) {
  return std::any_of(spec.constraints.begin(), spec.constraints.end(),
                     [&](const Constraint& c) {
                       const auto* g = std::get_if<FlagGoal>(&c);
                       return g && g->flag == flag && g->value == value;
                     });
}

// Candidates built to meet a flag goal directly when sampling gives up.
std::vector<OperandPair> constructive(const PromptSpec& spec, SplitMix64& rng,
                                      unsigned width) {
  const Word m = alu::mask(width);
  const Word half = Word{1} << (width - 1);
  std::vector<OperandPair> out;
  if (spec.op == alu::AluOp::ADD && has_goal(spec, alu::Flag::Overflow, true)) {
    if (rng.next() & 1U) {
      const Word a = rng.uniform(1, half - 1);
      out.push_back({a, rng.uniform(half - a, half - 1)});
    } else {
      const Word a = rng.uniform(half, m);
      out.push_back({a, rng.uniform(half, half + (m - a))});
    }
  }
  if (spec.op == alu::AluOp::ADD && has_goal(spec, alu::Flag::Carry, true)) {
    const Word a = rng.uniform(1, m);
    out.push_back({a, rng.uniform(m - a + 1, m)});
  }
  if (spec.op == alu::AluOp::SUB && has_goal(spec, alu::Flag::Zero, true)) {
    const Word a = rng.uniform(0, m);
    out.push_back({a, a});
  }
  return out;
}

std::string constraint_text(const Constraint& c) {
  if (std::holds_alternative<EqualOperands>(c)) return "A = B";
  if (const auto* fa = std::get_if<FixedA>(&c)) return "A = " + fa->literal;
  if (const auto* fb = std::get_if<FixedB>(&c)) return "B = " + fb->literal;
  const auto& g = std::get<FlagGoal>(c);
  return std::string(g.value ? "" : "no ") + std::string(alu::to_string(g.flag));
}

std::string bit(bool b) { return b ? "1" : "0"; }

}  // namespace

PromptSyntaxError::PromptSyntaxError(std::string message, std::string token)
    : Error(token.empty() ? message : message + " near '" + token + "'"),
      token_(std::move(token)) {}

PromptSpec parse_prompt(std::string_view text) {
  auto tokens = prompt_tokens(text);
  if (tokens.empty()) throw PromptSyntaxError("empty prompt", "");
  return PromptParser(std::move(tokens)).run();
}

std::string render_prompt(const PromptSpec& spec) {
  std::string out = "Create " + std::string(alu::to_string(spec.op)) + " scenario";
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    out += i == 0 ? " with " : ", ";
    out += constraint_text(spec.constraints[i]);
  }
  out += ", " + std::to_string(spec.count) + (spec.count == 1 ? " example." : " examples.");
  return out;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (lo >= hi) return lo;
  const std::uint64_t span = hi - lo;
  if (span == ~std::uint64_t{0}) return next();
  const std::uint64_t n = span + 1;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + x % n;
}

bool satisfies(const PromptSpec& spec, Word a, Word b, unsigned width) {
  const Resolved fixed = resolve(spec, width);
  if (fixed.a && a != *fixed.a) return false;
  if (fixed.b && b != *fixed.b) return false;
  if (fixed.equal && a != b) return false;
  const auto response = alu::evaluate({spec.op, a, b, width});
  for (const auto& c : spec.constraints) {
    if (const auto* g = std::get_if<FlagGoal>(&c)) {
      if (response.flags.get(g->flag) != g->value) return false;
    }
  }
  return true;
}

std::vector<OperandPair> solve_constraints(const PromptSpec& spec, std::uint64_t seed,
                                           unsigned width) {
  if (!alu::valid_width(width))
    throw RangeError("width " + std::to_string(width) + " out of range");
  const Resolved fixed = resolve(spec, width);
  const Word m = alu::mask(width);
  SplitMix64 rng(seed);

  std::vector<OperandPair> rows;
  rows.reserve(spec.count);
  for (std::size_t row = 0; row < spec.count; ++row) {
    std::optional<OperandPair> found;
    for (std::size_t draw = 0; draw < kDrawsPerRow && !found; ++draw) {
      Word a = rng.next() & m;
      Word b = rng.next() & m;
      if (fixed.a) a = *fixed.a;
      if (fixed.b) b = *fixed.b;
      if (fixed.equal) {
        if (fixed.b && !fixed.a)
          a = b;
        else
          b = a;
      }
      if (satisfies(spec, a, b, width)) found = OperandPair{a, b};
    }
    if (!found) {
      for (const auto& candidate : constructive(spec, rng, width)) {
        if (satisfies(spec, candidate.a, candidate.b, width)) {
          found = candidate;
          break;
        }
      }
    }
    if (!found)
      throw Unsatisfiable("no operands satisfy '" + render_prompt(spec) + "' at width " +
                          std::to_string(width));
    rows.push_back(*found);
  }
  return rows;
}

std::string outline_name(alu::AluOp op) {
  return std::string(alu::to_string(op)) + " behaves per specification";
}

gherkin::FeatureAst generate_with_templates(const PromptSpec& spec, std::uint64_t seed,
                                            unsigned width) {
  using gherkin::Keyword;
  const auto pairs = solve_constraints(spec, seed, width);

  std::vector<alu::Flag> flags{alu::Flag::Carry, alu::Flag::Zero, alu::Flag::Overflow};
  for (const auto& c : spec.constraints) {
    if (const auto* g = std::get_if<FlagGoal>(&c);
        g && std::find(flags.begin(), flags.end(), g->flag) == flags.end())
      flags.push_back(g->flag);
  }

  gherkin::ScenarioNode outline;
  outline.name = outline_name(spec.op);
  outline.kind = gherkin::ScenarioKind::Outline;
  auto step = [&](Keyword kw, Keyword resolved, std::string text) {
    outline.steps.push_back({kw, std::move(text), resolved, 0});
  };
  step(Keyword::Given, Keyword::Given, "the ALU is reset");
  step(Keyword::And, Keyword::Given, "the operands are A = <A> and B = <B>");
  step(Keyword::When, Keyword::When,
       "the operation " + std::string(alu::to_string(spec.op)) + " is performed");
  step(Keyword::Then, Keyword::Then, "the result should be <result>");
  for (alu::Flag f : flags) {
    const std::string name(alu::to_string(f));
    step(Keyword::And, Keyword::Then, "the " + name + " flag should be <" + name + ">");
  }

  gherkin::ExamplesTable table;
  table.columns = {"A", "B", "result"};
  for (alu::Flag f : flags) table.columns.emplace_back(alu::to_string(f));
  for (const auto& p : pairs) {
    const auto r = alu::evaluate({spec.op, p.a, p.b, width});
    std::vector<std::string> row{std::to_string(p.a), std::to_string(p.b),
                                 std::to_string(r.result)};
    for (alu::Flag f : flags) row.push_back(bit(r.flags.get(f)));
    table.rows.push_back(std::move(row));
  }
  outline.examples = std::move(table);

  gherkin::FeatureAst ast;
  ast.name = "ALU " + std::string(alu::to_string(spec.op)) + " operation";
  ast.description = "Generated from prompt: " + render_prompt(spec);
  ast.scenarios.push_back(std::move(outline));
  return ast;
}

std::string_view to_string(ProviderKind p) {
  return p == ProviderKind::Template ? "Template" : "Remote";
}

std::string_view to_string(Mode m) { return m == Mode::Strict ? "Strict" : "Repair"; }

std::string_view to_string(CheckField f) {
  switch (f) {
    case CheckField::Result: return "result";
    case CheckField::Carry: return "carry";
    case CheckField::Zero: return "zero";
    case CheckField::Overflow: return "overflow";
    case CheckField::Negative: return "negative";
  }
  return "?";
}

namespace {

struct LocatedCase {
  std::size_t scenario_index;
  std::size_t row;
  compiler::TestCase tc;
};

std::vector<LocatedCase> compile_located(const gherkin::FeatureAst& ast, unsigned width) {
  std::vector<LocatedCase> out;
  std::vector<compiler::CompileError::Entry> errors;
  for (std::size_t s = 0; s < ast.scenarios.size(); ++s) {
    const auto expanded = gherkin::expand_scenario(ast.scenarios[s]);
    for (std::size_t r = 0; r < expanded.size(); ++r) {
      try {
        out.push_back({s, r, compiler::bind_scenario(expanded[r], width)});
      } catch (const Error& e) {
        errors.push_back({expanded[r].name, e.what()});
      }
    }
  }
  if (!errors.empty()) throw compiler::CompileError(std::move(errors));
  return out;
}

constexpr std::array<std::pair<CheckField, alu::Flag>, 4> kFlagFields{{
    {CheckField::Carry, alu::Flag::Carry},
    {CheckField::Zero, alu::Flag::Zero},
    {CheckField::Overflow, alu::Flag::Overflow},
    {CheckField::Negative, alu::Flag::Negative},
}};

ValidationReport validate_located(const gherkin::FeatureAst& ast,
                                  const std::vector<LocatedCase>& cases) {
  ValidationReport report;
  report.total_rows = cases.size();
  for (const auto& lc : cases) {
    const auto r = alu::evaluate(lc.tc.stimulus);
    auto add = [&](CheckField field, Word found, Word oracle) {
      report.mismatches.push_back({ast.scenarios[lc.scenario_index].name, lc.row,
                                   lc.tc.name, field, found, oracle});
    };
    if (lc.tc.expect.result && *lc.tc.expect.result != r.result)
      add(CheckField::Result, *lc.tc.expect.result, r.result);
    for (const auto& [field, flag] : kFlagFields) {
      const auto& want = lc.tc.expect.flag(flag);
      if (want && *want != r.flags.get(flag)) add(field, *want, r.flags.get(flag));
    }
  }
  return report;
}

bool binds_field(const compiler::StepBinding& b, CheckField field, std::string& token) {
  if (const auto* res = std::get_if<compiler::ResultBinding>(&b)) {
    if (field != CheckField::Result) return false;
    token = res->value;
    return true;
  }
  if (const auto* fl = std::get_if<compiler::FlagBinding>(&b)) {
    for (const auto& [f, flag] : kFlagFields) {
      if (f == field && flag == fl->flag) {
        token = fl->value;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

ValidationReport validate_against_oracle(const gherkin::FeatureAst& ast, unsigned width) {
  return validate_located(ast, compile_located(ast, width));
}

std::size_t repair_against_oracle(gherkin::FeatureAst& ast, unsigned width) {
  const auto cases = compile_located(ast, width);
  const auto report = validate_located(ast, cases);
  if (report.clean()) return 0;

  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> touched_cells;
  std::set<std::pair<std::size_t, std::size_t>> touched_steps;
  for (const auto& mm : report.mismatches) {
    auto it = std::find_if(ast.scenarios.begin(), ast.scenarios.end(),
                           [&](const auto& s) { return s.name == mm.scenario; });
    if (it == ast.scenarios.end()) throw OracleMismatch(report);
    auto& scenario = *it;
    const std::size_t s_index = static_cast<std::size_t>(it - ast.scenarios.begin());
    const std::string value = mm.field == CheckField::Result
                                  ? std::to_string(mm.oracle)
                                  : (mm.oracle ? "1" : "0");
    bool repaired = false;
    for (std::size_t k = 0; k < scenario.steps.size() && !repaired; ++k) {
      auto& step = scenario.steps[k];
      const auto binding = compiler::match_step(step);
      std::string token;
      if (!binding || !binds_field(*binding, mm.field, token)) continue;

      const auto names = gherkin::placeholders(token);
      if (scenario.kind == gherkin::ScenarioKind::Outline) {
        if (names.size() != 1 || token != "<" + names[0] + ">") break;
        const auto col = scenario.examples->column_index(names[0]);
        if (!col) break;
        scenario.examples->rows.at(mm.row).at(*col) = value;
        touched_cells.insert({s_index, mm.row, *col});
      } else {
        const std::size_t at = step.text.rfind(token);
        if (at == std::string::npos) break;
        step.text.replace(at, token.size(), value);
        touched_steps.insert({s_index, k});
      }
      repaired = true;
    }
    if (!repaired) throw OracleMismatch(report);
  }
  if (!validate_against_oracle(ast, width).clean()) throw OracleMismatch(report);
  return touched_cells.size() + touched_steps.size();
}

NonParseableOutput::NonParseableOutput(std::string reason, std::string provider_text)
    : Error("provider output is not a usable feature: " + reason),
      provider_text_(std::move(provider_text)) {}

OracleMismatch::OracleMismatch(ValidationReport report)
    : Error(std::to_string(report.mismatches.size()) +
            " expectation(s) disagree with the golden model"),
      report_(std::move(report)) {}

ProviderResult generate_with_provider(const PromptSpec& spec, GenerationProvider& provider,
                                      Mode mode, unsigned width, std::uint64_t seed) {
  ProviderRequest request{render_prompt(spec), std::string(compiler::grammar_reference()),
                          spec.count};
  std::string text;
  try {
    text = provider.complete(request);
  } catch (const ProviderError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProviderError(e.what());
  }

  ProviderResult out;
  try {
    out.ast = gherkin::parse_feature(text);
    compiler::compile_feature(out.ast, width);
  } catch (const SyntaxError& e) {
    throw NonParseableOutput(e.what(), text);
  } catch (const compiler::CompileError& e) {
    throw NonParseableOutput(e.what(), text);
  }

  auto report = validate_against_oracle(out.ast, width);
  if (!report.clean()) {
    if (mode == Mode::Strict) throw OracleMismatch(std::move(report));
    out.record.corrections = repair_against_oracle(out.ast, width);
  }
  out.record.prompt_text = request.prompt;
  out.record.seed = seed;
  out.record.provider = provider.kind();
  out.record.feature_text = gherkin::print_feature(out.ast);
  return out;
}

}  // namespace hwbdd::forge
