#include <gtest/gtest.h>

#include <set>

#include <json.hpp>

#include "hwbdd/harness.hpp"
#include "hwbdd/scenario_forge.hpp"

using namespace hwbdd;
using namespace hwbdd::sim;

namespace {

std::vector<compiler::TestCase> compile(const std::string& text, unsigned width = 16) {
  return compiler::compile_feature(gherkin::parse_feature(text), width);
}

std::vector<compiler::TestCase> reference_cases() {
  return compiler::compile_feature(
      forge::generate_with_templates(
          forge::parse_prompt("Create ADD scenario with A = B, 3 examples."), 42, 16),
      16);
}

const char* kWrongAdd =
    "Feature: wrong\n"
    "  Scenario: five plus five\n"
    "    Given the operands are A = 5 and B = 5\n"
    "    When the operation ADD is performed\n"
    "    Then the result should be 11\n";

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST(RunCases, ThreeCasesAllPass) {
  const auto cases = reference_cases();
  const auto run = run_cases(cases, "ALU ADD operation");
  EXPECT_EQ(run.report.passed, 3u);
  EXPECT_EQ(run.report.failed, 0u);
  std::set<std::uint64_t> stamps;
  for (const auto& c : run.trace.changes) stamps.insert(c.time);
  EXPECT_EQ(stamps, (std::set<std::uint64_t>{0, 5, 10, 15, 20, 25}));
  EXPECT_EQ(run.trace.end_time, 30u);
  EXPECT_FALSE(vcd::check(run.trace));
}

TEST(RunCases, DeclaresSignalsInOrder) {
  const auto run = run_cases(reference_cases());
  ASSERT_EQ(run.trace.signals.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(run.trace.signals[i].name, signal_names()[i]);
  EXPECT_EQ(run.trace.signals[0].width, 4u);
  EXPECT_EQ(run.trace.signals[1].width, 16u);
  EXPECT_EQ(run.trace.signals[3].width, 16u);
  EXPECT_EQ(run.trace.signals[7].width, 1u);
}

TEST(RunCases, WrongExpectationFails) {
  const auto run = run_cases(compile(kWrongAdd));
  EXPECT_EQ(run.report.passed, 0u);
  EXPECT_EQ(run.report.failed, 1u);
  ASSERT_EQ(run.report.results.size(), 1u);
  EXPECT_EQ(run.report.results[0].checks,
            (std::vector<Check>{{"result", 11, 10, false}}));
}

TEST(RunCases, EmptyListKeepsDeclarations) {
  const auto run = run_cases({});
  EXPECT_EQ(run.trace.signals.size(), 8u);
  EXPECT_TRUE(run.trace.changes.empty());
  EXPECT_FALSE(run.trace.end_time);
  EXPECT_EQ(run.report.passed + run.report.failed, 0u);
  const auto doc = vcd::write_vcd(run.trace, "alu");
  EXPECT_EQ(vcd::read_vcd_minimal(doc), run.trace);
}

TEST(RunCases, MixedWidthsRejected) {
  auto cases = compile(kWrongAdd, 16);
  auto more = compile(kWrongAdd, 8);
  cases.insert(cases.end(), more.begin(), more.end());
  EXPECT_THROW(run_cases(cases), std::invalid_argument);
  EXPECT_THROW(emit_testbench(cases), std::invalid_argument);
}

TEST(RunCases, TraceRoundTripsThroughVcd) {
  const auto run = run_cases(reference_cases());
  const auto doc = vcd::write_vcd(run.trace, "alu");
  const auto back = vcd::read_vcd_with_scope(doc);
  EXPECT_EQ(back.trace, run.trace);
  EXPECT_EQ(back.module_name, "alu");
  EXPECT_EQ(vcd::write_vcd(back.trace, "alu"), doc);
}

TEST(VerdictsFromTrace, AgreeWithReport) {
  const std::string text =
      "Feature: mix\n"
      "  Scenario: ok\n    Given the operands are A = 1 and B = 2\n"
      "    When the operation OR is performed\n    Then the result should be 3\n"
      "  Scenario: bad flag\n    Given the operands are A = 0xFFFF and B = 1\n"
      "    When the operation ADD is performed\n    Then the carry flag should be 0\n"
      "  Scenario: ok too\n    Given the operands are A = 3 and B = 1\n"
      "    When the operation SHL is performed\n    Then the result should be 6\n"
      "    And the negative flag should be 0\n";
  const auto cases = compile(text);
  const auto run = run_cases(cases);
  const auto verdicts = verdicts_from_trace(run.trace, cases);
  ASSERT_EQ(verdicts.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(verdicts[i], run.report.results[i].passed);
  EXPECT_EQ(verdicts, (std::vector<bool>{true, false, true}));
  EXPECT_EQ(verdicts_from_trace(vcd::read_vcd_minimal(vcd::write_vcd(run.trace, "alu")), cases),
            verdicts);
}

TEST(EmitTestbench, StructureForThreeCases) {
  const auto tb = emit_testbench(reference_cases());
  EXPECT_NE(tb.find("module alu_tb;"), std::string::npos);
  EXPECT_NE(tb.find("reg [15:0] a, b;"), std::string::npos);
  EXPECT_NE(tb.find("reg [3:0] op;"), std::string::npos);
  EXPECT_NE(tb.find("alu dut ("), std::string::npos);
  EXPECT_NE(tb.find("$dumpfile(\"trace.vcd\");"), std::string::npos);
  EXPECT_EQ(count(tb, "// stimulus "), 3u);
  EXPECT_EQ(count(tb, "// check "), 3u);
  EXPECT_EQ(count(tb, "$finish"), 1u);
  EXPECT_EQ(count(tb, "module "), 1u);
  EXPECT_EQ(count(tb, "endmodule"), 1u);
  EXPECT_NE(tb.find("op = 4'd0;"), std::string::npos);
}

TEST(EmitTestbench, DutNameAndWidth) {
  const auto tb = emit_testbench(compile(kWrongAdd, 8), "my_alu");
  EXPECT_NE(tb.find("module my_alu_tb;"), std::string::npos);
  EXPECT_NE(tb.find("my_alu dut ("), std::string::npos);
  EXPECT_NE(tb.find("reg [7:0] a, b;"), std::string::npos);
  EXPECT_NE(tb.find("result !== 8'd11"), std::string::npos);
  EXPECT_NE(emit_testbench(compile(kWrongAdd), "").find("module alu_tb;"), std::string::npos);
  EXPECT_THROW(emit_testbench({}), std::invalid_argument);
}

TEST(EmitTestbench, EscapesCaseNames) {
  const auto tb = emit_testbench(compile(
      "Feature: F\n  Scenario: say \"hi\" \\ there\n"
      "    Given the operands are A = 1 and B = 1\n"
      "    When the operation AND is performed\n    Then the zero flag should be 0\n"));
  EXPECT_NE(tb.find("PASS: say \\\"hi\\\" \\\\ there"), std::string::npos) << tb;
  EXPECT_NE(tb.find("if (zero !== 1'b0)"), std::string::npos);
}

TEST(RenderReport, Human) {
  const auto text = render_report(run_cases(compile(kWrongAdd), "wrong").report,
                                  ReportFormat::Human);
  EXPECT_EQ(text,
            "Feature: wrong\n"
            "  ✗ five plus five\n"
            "      result: expected 11, got 10\n"
            "0 passed, 1 failed\n");
}

TEST(RenderReport, MachineIsValidJson) {
  const auto report = run_cases(reference_cases(), "ALU ADD operation").report;
  const auto doc = nlohmann::json::parse(render_report(report, ReportFormat::Machine));
  EXPECT_EQ(doc["feature"], "ALU ADD operation");
  EXPECT_EQ(doc["passed"], 3);
  EXPECT_EQ(doc["failed"], 0);
  ASSERT_EQ(doc["cases"].size(), 3u);
  EXPECT_EQ(doc["cases"][0]["name"], "ADD behaves per specification [1]");
  EXPECT_EQ(doc["cases"][0]["checks"].size(), 4u);
  EXPECT_EQ(doc["cases"][0]["checks"][0]["field"], "result");
  EXPECT_TRUE(doc["cases"][2]["checks"][3]["ok"].get<bool>());
}
