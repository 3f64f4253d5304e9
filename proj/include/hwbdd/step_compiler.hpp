#pragma once

// Binds the hardware step phrases to ALU stimulus and expectations.
//
// Phrase grammar (keywords case-insensitive, runs of whitespace collapse):
//   Given the ALU is reset
//   Given the operands are A = <lit> and B = <lit>
//   When  the operation <OPNAME> is performed
//   When  the operation is <OPNAME>
//   Then  the result should be <lit>
//   Then  the <carry|zero|overflow|negative> flag should be <0|1>
//
// <lit> is a decimal (optionally negative), 0x-hexadecimal or 0b-binary
// integer. And/But steps take the class of the step they follow.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hwbdd/alu.hpp"
#include "hwbdd/errors.hpp"
#include "hwbdd/gherkin.hpp"

namespace hwbdd::compiler {

/// Short reference of the phrase grammar, sent to generation providers.
std::string_view grammar_reference();

struct ExpectationSet {
  std::optional<alu::Word> result;
  std::optional<bool> carry;
  std::optional<bool> zero;
  std::optional<bool> overflow;
  std::optional<bool> negative;

  std::optional<bool>& flag(alu::Flag f);
  const std::optional<bool>& flag(alu::Flag f) const;
  bool any() const;

  friend bool operator==(const ExpectationSet&, const ExpectationSet&) = default;
};

struct TestCase {
  std::string name;
  alu::AluVector stimulus;
  ExpectationSet expect;
  std::vector<std::size_t> source_lines;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

class UnknownStep : public Error {
 public:
  UnknownStep(std::string phrase, std::size_t line);
  const std::string& phrase() const noexcept { return phrase_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string phrase_;
  std::size_t line_;
};

class MissingStimulus : public Error {
 public:
  using Error::Error;
};

class DuplicateBinding : public Error {
 public:
  using Error::Error;
};

/// Every per-scenario failure of compile_feature, in scenario order.
class CompileError : public Error {
 public:
  struct Entry {
    std::string scenario;
    std::string message;
  };

  explicit CompileError(std::vector<Entry> entries);
  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  std::vector<Entry> entries_;
};

/// Parses an integer literal into a `width`-bit word. Negative decimals map to
/// their two's complement encoding. Throws FormatError or RangeError.
alu::Word parse_int_literal(std::string_view cell, unsigned width);

/// Raw captures of one matched phrase. Literal and operation tokens are kept
/// as text so that callers can tell placeholders from values.
struct ResetBinding {};
struct OperandsBinding {
  std::string a;
  std::string b;
};
struct OperationBinding {
  std::string name;
};
struct ResultBinding {
  std::string value;
};
struct FlagBinding {
  alu::Flag flag;
  std::string value;
};
using StepBinding = std::variant<ResetBinding, OperandsBinding, OperationBinding,
                                 ResultBinding, FlagBinding>;

/// Matches a step against the phrase grammar without interpreting the
/// captured tokens. Returns nullopt when no phrase of the step's class fits.
std::optional<StepBinding> match_step(const gherkin::Step& step);

/// Binds a Plain scenario. Throws UnknownStep, MissingStimulus,
/// DuplicateBinding or a literal error.
TestCase bind_scenario(const gherkin::ScenarioNode& scenario, unsigned width);

/// Expands outlines and binds every scenario in order. All failures are
/// collected into one CompileError.
std::vector<TestCase> compile_feature(const gherkin::FeatureAst& ast,
                                      unsigned width);

}  // namespace hwbdd::compiler
