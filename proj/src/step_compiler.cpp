#include "hwbdd/step_compiler.hpp"

#include <cctype>

namespace hwbdd::compiler {
namespace {

using gherkin::Keyword;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Whitespace-separated tokens; '=' always stands alone.
std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '=') {
      flush();
      tokens.emplace_back("=");
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return tokens;
}

// Matches `tokens` against `pattern`; "*" captures one token verbatim, other
// entries compare case-insensitively.
bool match(const std::vector<std::string>& tokens,
           std::initializer_list<std::string_view> pattern,
           std::vector<std::string>& captures) {
  if (tokens.size() != pattern.size()) return false;
  captures.clear();
  std::size_t i = 0;
  for (std::string_view p : pattern) {
    if (p == "*") {
      captures.push_back(tokens[i]);
    } else if (lower(tokens[i]) != p) {
      return false;
    }
    ++i;
  }
  return true;
}

int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return 99;
}

std::string describe_lit(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

std::string_view grammar_reference() {
  return "Given the ALU is reset\n"
         "Given the operands are A = <lit> and B = <lit>\n"
         "When the operation <OPNAME> is performed\n"
         "When the operation is <OPNAME>\n"
         "Then the result should be <lit>\n"
         "Then the <flag> flag should be <0|1>\n"
         "<OPNAME>: ADD SUB AND OR XOR NOT SHL SHR\n"
         "<flag>: carry zero overflow negative\n"
         "<lit>: decimal (optionally negative), 0x hexadecimal, 0b binary\n";
}

std::optional<bool>& ExpectationSet::flag(alu::Flag f) {
  switch (f) {
    case alu::Flag::Carry: return carry;
    case alu::Flag::Zero: return zero;
    case alu::Flag::Overflow: return overflow;
    case alu::Flag::Negative: return negative;
  }
  return carry;
}

const std::optional<bool>& ExpectationSet::flag(alu::Flag f) const {
  return const_cast<ExpectationSet*>(this)->flag(f);
}

bool ExpectationSet::any() const {
  return result || carry || zero || overflow || negative;
}

UnknownStep::UnknownStep(std::string phrase, std::size_t line)
    : Error("line " + std::to_string(line) + ": no step matches '" + phrase + "'"),
      phrase_(std::move(phrase)),
      line_(line) {}

namespace {
std::string join_entries(const std::vector<CompileError::Entry>& entries) {
  std::string msg;
  for (const auto& e : entries) {
    if (!msg.empty()) msg += '\n';
    msg += "scenario '" + e.scenario + "': " + e.message;
  }
  return msg;
}
}  // namespace

CompileError::CompileError(std::vector<Entry> entries)
    : Error(join_entries(entries)), entries_(std::move(entries)) {}

alu::Word parse_int_literal(std::string_view cell, unsigned width) {
  while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front())))
    cell.remove_prefix(1);
  while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back())))
    cell.remove_suffix(1);
  const std::string_view original = cell;
  if (cell.empty()) throw FormatError("empty literal");
  if (!alu::valid_width(width))
    throw RangeError("width " + std::to_string(width) + " out of range");

  bool negative = false;
  unsigned radix = 10;
  if (cell.front() == '-') {
    negative = true;
    cell.remove_prefix(1);
  } else if (cell.size() > 2 && cell[0] == '0' && (cell[1] == 'x' || cell[1] == 'X')) {
    radix = 16;
    cell.remove_prefix(2);
  } else if (cell.size() > 2 && cell[0] == '0' && (cell[1] == 'b' || cell[1] == 'B')) {
    radix = 2;
    cell.remove_prefix(2);
  }
  if (cell.empty()) throw FormatError("not a literal: " + describe_lit(original));

  // 128-bit accumulator: anything >= 2^64 is out of range at every width.
  unsigned __int128 value = 0;
  bool too_big = false;
  for (char c : cell) {
    const int d = digit_value(c);
    if (d >= static_cast<int>(radix))
      throw FormatError("not a literal: " + describe_lit(original));
    if (!too_big) {
      value = value * radix + static_cast<unsigned>(d);
      if (value > ~std::uint64_t{0}) too_big = true;
    }
  }

  const unsigned __int128 modulus = static_cast<unsigned __int128>(1) << width;
  if (negative) {
    const unsigned __int128 limit = modulus >> 1;  // |min signed|
    if (too_big || value > limit)
      throw RangeError(describe_lit(original) + " does not fit in " +
                       std::to_string(width) + " signed bits");
    if (value == 0) return 0;
    return static_cast<alu::Word>(modulus - value);
  }
  if (too_big || value >= modulus)
    throw RangeError(describe_lit(original) + " does not fit in " +
                     std::to_string(width) + " bits");
  return static_cast<alu::Word>(value);
}

std::optional<StepBinding> match_step(const gherkin::Step& step) {
  const auto tokens = tokenize(step.text);
  std::vector<std::string> cap;
  switch (step.resolved) {
    case Keyword::Given:
      if (match(tokens, {"the", "alu", "is", "reset"}, cap)) return ResetBinding{};
      if (match(tokens, {"the", "operands", "are", "a", "=", "*", "and", "b", "=", "*"},
                cap))
        return OperandsBinding{cap[0], cap[1]};
      break;
    case Keyword::When:
      if (match(tokens, {"the", "operation", "*", "is", "performed"}, cap))
        return OperationBinding{cap[0]};
      if (match(tokens, {"the", "operation", "is", "*"}, cap))
        return OperationBinding{cap[0]};
      break;
    case Keyword::Then:
      if (match(tokens, {"the", "result", "should", "be", "*"}, cap))
        return ResultBinding{cap[0]};
      if (match(tokens, {"the", "*", "flag", "should", "be", "*"}, cap)) {
        if (auto f = alu::parse_flag(cap[0])) return FlagBinding{*f, cap[1]};
      }
      break;
    default:
      break;
  }
  return std::nullopt;
}

TestCase bind_scenario(const gherkin::ScenarioNode& scenario, unsigned width) {
  TestCase tc;
  tc.name = scenario.name;
  tc.stimulus.width = width;
  bool have_operands = false;
  bool have_op = false;

  for (const auto& step : scenario.steps) {
    tc.source_lines.push_back(step.line);
    const auto binding = match_step(step);
    if (!binding) throw UnknownStep(step.text, step.line);
    const std::string where = "line " + std::to_string(step.line) + ": ";

    if (const auto* ops = std::get_if<OperandsBinding>(&*binding)) {
      if (have_operands) throw DuplicateBinding(where + "operands assigned twice");
      tc.stimulus.a = parse_int_literal(ops->a, width);
      tc.stimulus.b = parse_int_literal(ops->b, width);
      have_operands = true;
    } else if (const auto* op = std::get_if<OperationBinding>(&*binding)) {
      if (have_op) throw DuplicateBinding(where + "operation assigned twice");
      const auto parsed = alu::parse_op(op->name);
      if (!parsed) throw UnknownStep(step.text, step.line);
      tc.stimulus.op = *parsed;
      have_op = true;
    } else if (const auto* res = std::get_if<ResultBinding>(&*binding)) {
      if (tc.expect.result) throw DuplicateBinding(where + "result expected twice");
      tc.expect.result = parse_int_literal(res->value, width);
    } else if (const auto* fl = std::get_if<FlagBinding>(&*binding)) {
      auto& slot = tc.expect.flag(fl->flag);
      if (slot)
        throw DuplicateBinding(where + std::string(alu::to_string(fl->flag)) +
                               " flag expected twice");
      if (fl->value != "0" && fl->value != "1")
        throw FormatError(where + "flag value must be 0 or 1, found '" +
                          fl->value + "'");
      slot = fl->value == "1";
    }
  }
  if (!have_operands)
    throw MissingStimulus("scenario '" + scenario.name + "' sets no operands");
  if (!have_op)
    throw MissingStimulus("scenario '" + scenario.name + "' performs no operation");
  if (!tc.expect.any())
    throw MissingStimulus("scenario '" + scenario.name + "' checks nothing");
  return tc;
}

std::vector<TestCase> compile_feature(const gherkin::FeatureAst& ast,
                                      unsigned width) {
  std::vector<TestCase> cases;
  std::vector<CompileError::Entry> errors;
  for (const auto& scenario : ast.scenarios) {
    for (const auto& plain : gherkin::expand_scenario(scenario)) {
      try {
        cases.push_back(bind_scenario(plain, width));
      } catch (const Error& e) {
        errors.push_back({plain.name, e.what()});
      }
    }
  }
  if (!errors.empty()) throw CompileError(std::move(errors));
  return cases;
}

}  // namespace hwbdd::compiler
