#pragma once

// Scenario generation: the prompt mini-language, the constraint solver, the
// local template engine, provider-backed generation and oracle validation.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hwbdd/alu.hpp"
#include "hwbdd/errors.hpp"
#include "hwbdd/gherkin.hpp"

namespace hwbdd::forge {

struct EqualOperands {
  friend bool operator==(const EqualOperands&, const EqualOperands&) = default;
};
/// Literal text is resolved against the target width by the solver.
struct FixedA {
  std::string literal;
  friend bool operator==(const FixedA&, const FixedA&) = default;
};
struct FixedB {
  std::string literal;
  friend bool operator==(const FixedB&, const FixedB&) = default;
};
struct FlagGoal {
  alu::Flag flag = alu::Flag::Carry;
  bool value = true;
  friend bool operator==(const FlagGoal&, const FlagGoal&) = default;
};
using Constraint = std::variant<EqualOperands, FixedA, FixedB, FlagGoal>;

struct PromptSpec {
  alu::AluOp op = alu::AluOp::ADD;
  std::vector<Constraint> constraints;
  std::size_t count = 1;

  friend bool operator==(const PromptSpec&, const PromptSpec&) = default;
};

class PromptSyntaxError : public Error {
 public:
  PromptSyntaxError(std::string message, std::string token);
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

class UnknownOperation : public Error {
 public:
  using Error::Error;
};

class Unsatisfiable : public Error {
 public:
  using Error::Error;
};

/// `Create <OP> scenario [with <c> {, <c>}], <N> example[s][.]`
PromptSpec parse_prompt(std::string_view text);

/// Canonical prompt text for a spec; parse_prompt(render_prompt(s)) == s.
std::string render_prompt(const PromptSpec& spec);

/// splitmix64. Fixed so that generated tables are identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [lo, hi] (inclusive) by rejection of the biased tail.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

 private:
  std::uint64_t state_;
};

inline constexpr std::size_t kDrawsPerRow = 10'000;

/// True iff (a, b) satisfies every constraint of `spec` at `width`.
bool satisfies(const PromptSpec& spec, alu::Word a, alu::Word b, unsigned width);

struct OperandPair {
  alu::Word a = 0;
  alu::Word b = 0;
  friend bool operator==(const OperandPair&, const OperandPair&) = default;
};

/// `spec.count` operand pairs, each satisfying all constraints. Throws
/// Unsatisfiable when sampling and the constructive fallbacks both fail.
std::vector<OperandPair> solve_constraints(const PromptSpec& spec,
                                           std::uint64_t seed, unsigned width);

/// Name of the single outline emitted by the template engine.
std::string outline_name(alu::AluOp op);

/// Deterministic template generation; expectation cells come from the model.
gherkin::FeatureAst generate_with_templates(const PromptSpec& spec,
                                            std::uint64_t seed, unsigned width);

enum class ProviderKind { Template, Remote };
enum class Mode { Strict, Repair };

std::string_view to_string(ProviderKind p);
std::string_view to_string(Mode m);

struct GenerationRecord {
  std::string prompt_text;
  std::uint64_t seed = 0;
  ProviderKind provider = ProviderKind::Template;
  std::size_t corrections = 0;
  std::string feature_text;
};

enum class CheckField { Result, Carry, Zero, Overflow, Negative };
std::string_view to_string(CheckField f);

struct Mismatch {
  std::string scenario;  // source scenario (the outline for expanded rows)
  std::size_t row = 0;   // 0-based examples row; 0 for plain scenarios
  std::string case_name;
  CheckField field = CheckField::Result;
  alu::Word found = 0;
  alu::Word oracle = 0;

  friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

struct ValidationReport {
  std::size_t total_rows = 0;
  std::vector<Mismatch> mismatches;

  bool clean() const { return mismatches.empty(); }
};

/// Compiles `ast` (CompileError propagates) and compares every present
/// expectation with the golden model.
ValidationReport validate_against_oracle(const gherkin::FeatureAst& ast,
                                         unsigned width);

/// Rewrites every mismatched expectation with the oracle value. Returns the
/// number of cells changed. Throws OracleMismatch if a mismatch cannot be
/// localised to a single cell.
std::size_t repair_against_oracle(gherkin::FeatureAst& ast, unsigned width);

// ---- provider boundary -----------------------------------------------------

struct ProviderRequest {
  std::string prompt;
  std::string grammar;
  std::size_t count = 0;
};

std::string encode_request(const ProviderRequest& request);
/// Extracts the "feature" member; throws ProviderError on a malformed body.
std::string decode_response(std::string_view body);

class ProviderError : public Error {
 public:
  using Error::Error;
};

class NonParseableOutput : public Error {
 public:
  NonParseableOutput(std::string reason, std::string provider_text);
  const std::string& provider_text() const noexcept { return provider_text_; }

 private:
  std::string provider_text_;
};

class OracleMismatch : public Error {
 public:
  explicit OracleMismatch(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// A source of feature text for a prompt. Implementations may block.
class GenerationProvider {
 public:
  virtual ~GenerationProvider() = default;
  virtual ProviderKind kind() const = 0;
  /// Returns the provider's feature text; throws ProviderError.
  virtual std::string complete(const ProviderRequest& request) = 0;
};

/// File name used by StubProvider for a prompt: 16 hex digits of the FNV-1a
/// hash of the prompt text, plus ".json".
std::string stub_file_name(std::string_view prompt);

/// Serves canned response bodies ({"feature": ...}) from a directory.
class StubProvider final : public GenerationProvider {
 public:
  explicit StubProvider(std::string directory);
  ProviderKind kind() const override { return ProviderKind::Remote; }
  std::string complete(const ProviderRequest& request) override;

 private:
  std::string directory_;
};

/// HTTP(S) JSON endpoint. POSTs encode_request() with a bearer credential and
/// a 30 s timeout; no retries.
class RemoteProvider final : public GenerationProvider {
 public:
  RemoteProvider(std::string endpoint, std::string key);
  /// Reads HWBDD_LLM_ENDPOINT and HWBDD_LLM_KEY; throws ProviderError if the
  /// endpoint is unset.
  static RemoteProvider from_environment();

  ProviderKind kind() const override { return ProviderKind::Remote; }
  std::string complete(const ProviderRequest& request) override;

 private:
  std::string endpoint_;
  std::string key_;
};

struct ProviderResult {
  gherkin::FeatureAst ast;
  GenerationRecord record;
};

ProviderResult generate_with_provider(const PromptSpec& spec,
                                      GenerationProvider& provider, Mode mode,
                                      unsigned width, std::uint64_t seed = 0);

}  // namespace hwbdd::forge
