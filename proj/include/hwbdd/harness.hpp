#pragma once

// Runs compiled cases against the golden model, records the waveform and
// renders reports and a Verilog testbench for external simulators.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hwbdd/alu.hpp"
#include "hwbdd/step_compiler.hpp"
#include "hwbdd/vcd.hpp"

namespace hwbdd::sim {

/// Stimulus of case k is applied at k * kCasePeriodNs, outputs are sampled
/// kSettleNs later.
inline constexpr std::uint64_t kCasePeriodNs = 10;
inline constexpr std::uint64_t kSettleNs = 5;

struct Check {
  std::string field;
  alu::Word expected = 0;
  alu::Word actual = 0;
  bool ok = false;

  friend bool operator==(const Check&, const Check&) = default;
};

struct CaseResult {
  std::string name;
  bool passed = false;
  std::vector<Check> checks;
};

struct TestReport {
  std::string feature_name;
  std::vector<CaseResult> results;
  std::size_t passed = 0;
  std::size_t failed = 0;
};

struct RunOutput {
  TestReport report;
  vcd::Trace trace;
};

/// Signal names in declaration order: op, A, B, result, carry, zero,
/// overflow, negative.
std::vector<std::string> signal_names();

/// Cases must share one width. An empty list still declares every signal
/// (at the default width).
RunOutput run_cases(const std::vector<compiler::TestCase>& cases,
                    std::string feature_name = {});

/// Re-derives pass/fail per case by sampling the trace at the output times.
/// Used to confirm that a report is consistent with its waveform.
std::vector<bool> verdicts_from_trace(const vcd::Trace& trace,
                                      const std::vector<compiler::TestCase>& cases);

inline constexpr std::string_view kDefaultDutName = "alu";

/// Verilog-2001 testbench driving `dut_name` (default "alu" when empty).
/// Throws std::invalid_argument on an empty case list or mixed widths.
std::string emit_testbench(const std::vector<compiler::TestCase>& cases,
                           std::string_view dut_name = kDefaultDutName);

enum class ReportFormat { Human, Machine };

std::string render_report(const TestReport& report, ReportFormat format);

}  // namespace hwbdd::sim
