#include "hwbdd/harness.hpp"

#include <array>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hwbdd::sim {
namespace {

using compiler::TestCase;

constexpr std::array<std::string_view, 8> kSignals{
    "op", "A", "B", "result", "carry", "zero", "overflow", "negative"};

constexpr std::array<alu::Flag, 4> kFlagOrder{alu::Flag::Carry, alu::Flag::Zero,
                                              alu::Flag::Overflow,
                                              alu::Flag::Negative};

unsigned common_width(const std::vector<TestCase>& cases) {
  if (cases.empty()) return alu::kDefaultWidth;
  const unsigned w = cases.front().stimulus.width;
  for (const auto& c : cases) {
    if (c.stimulus.width != w)
      throw std::invalid_argument("cases were compiled at different widths");
  }
  return w;
}

std::vector<Check> checks_for(const compiler::ExpectationSet& expect,
                              const alu::AluResponse& r) {
  std::vector<Check> checks;
  if (expect.result)
    checks.push_back({"result", *expect.result, r.result, *expect.result == r.result});
  for (alu::Flag f : kFlagOrder) {
    const auto& want = expect.flag(f);
    if (!want) continue;
    const bool got = r.flags.get(f);
    checks.push_back({std::string(alu::to_string(f)), *want, got, *want == got});
  }
  return checks;
}

std::string verilog_string(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n' || c == '\r') c = ' ';
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<std::string> signal_names() { return {kSignals.begin(), kSignals.end()}; }

RunOutput run_cases(const std::vector<TestCase>& cases, std::string feature_name) {
  const unsigned w = common_width(cases);
  RunOutput out;
  out.report.feature_name = std::move(feature_name);

  auto& trace = out.trace;
  std::array<std::string, kSignals.size()> ids;
  for (std::size_t i = 0; i < kSignals.size(); ++i) {
    const unsigned width = i == 0 ? 4 : (i <= 3 ? w : 1);
    ids[i] = vcd::declare(trace, std::string(kSignals[i]), width);
  }

  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& tc = cases[k];
    const std::uint64_t t_in = kCasePeriodNs * k;
    const std::uint64_t t_out = t_in + kSettleNs;
    const auto r = alu::evaluate(tc.stimulus);

    trace.changes.push_back({t_in, ids[0], alu::encoding(tc.stimulus.op)});
    trace.changes.push_back({t_in, ids[1], tc.stimulus.a});
    trace.changes.push_back({t_in, ids[2], tc.stimulus.b});
    trace.changes.push_back({t_out, ids[3], r.result});
    for (std::size_t f = 0; f < kFlagOrder.size(); ++f)
      trace.changes.push_back({t_out, ids[4 + f], r.flags.get(kFlagOrder[f])});

    CaseResult result;
    result.name = tc.name;
    result.checks = checks_for(tc.expect, r);
    result.passed = true;
    for (const auto& c : result.checks) result.passed = result.passed && c.ok;
    (result.passed ? out.report.passed : out.report.failed) += 1;
    out.report.results.push_back(std::move(result));
  }
  if (!cases.empty()) trace.end_time = kCasePeriodNs * cases.size();
  return out;
}

std::vector<bool> verdicts_from_trace(const vcd::Trace& trace,
                                      const std::vector<TestCase>& cases) {
  std::map<std::string, std::string> name_of;
  for (const auto& s : trace.signals) name_of[s.id] = s.name;

  std::vector<bool> verdicts;
  std::map<std::string, alu::Word> current;
  std::size_t next = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const std::uint64_t sample = kCasePeriodNs * k + kSettleNs;
    while (next < trace.changes.size() && trace.changes[next].time <= sample) {
      current[name_of[trace.changes[next].id]] = trace.changes[next].value;
      ++next;
    }
    const auto& e = cases[k].expect;
    bool ok = !e.result || current["result"] == *e.result;
    for (alu::Flag f : kFlagOrder) {
      const auto& want = e.flag(f);
      if (want) ok = ok && current[std::string(alu::to_string(f))] == *want;
    }
    verdicts.push_back(ok);
  }
  return verdicts;
}

std::string emit_testbench(const std::vector<TestCase>& cases, std::string_view dut_name) {
  if (cases.empty()) throw std::invalid_argument("testbench needs at least one case");
  const unsigned w = common_width(cases);
  const std::string dut = dut_name.empty() ? std::string(kDefaultDutName)
                                           : std::string(dut_name);
  const std::string ww = std::to_string(w);
  auto lit = [&](alu::Word v) { return ww + "'d" + std::to_string(v); };

  std::ostringstream v;
  v << "// Generated by gherkin-hdl: " << cases.size() << " case(s), width " << w << ".\n"
    << "`timescale 1ns/1ps\n\n"
    << "module " << dut << "_tb;\n"
    << "  reg [3:0] op;\n"
    << "  reg [" << w - 1 << ":0] a, b;\n"
    << "  wire [" << w - 1 << ":0] result;\n"
    << "  wire carry, zero, overflow, negative;\n"
    << "  integer failures;\n\n"
    << "  " << dut << " dut (\n"
    << "    .op(op),\n"
    << "    .a(a),\n"
    << "    .b(b),\n"
    << "    .result(result),\n"
    << "    .carry(carry),\n"
    << "    .zero(zero),\n"
    << "    .overflow(overflow),\n"
    << "    .negative(negative)\n"
    << "  );\n\n"
    << "  initial begin\n"
    << "    $dumpfile(\"trace.vcd\");\n"
    << "    $dumpvars;\n"
    << "    failures = 0;\n";

  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& tc = cases[k];
    const std::string name = verilog_string(tc.name);
    v << "\n    // stimulus " << k << ": " << name << "\n"
      << "    op = 4'd" << alu::encoding(tc.stimulus.op) << "; a = " << lit(tc.stimulus.a)
      << "; b = " << lit(tc.stimulus.b) << ";\n"
      << "    #" << kSettleNs << ";\n";

    std::vector<std::string> terms;
    if (tc.expect.result) terms.push_back("result !== " + lit(*tc.expect.result));
    for (alu::Flag f : kFlagOrder) {
      const auto& want = tc.expect.flag(f);
      if (want)
        terms.push_back(std::string(alu::to_string(f)) + " !== 1'b" + (*want ? "1" : "0"));
    }
    v << "    // check " << k << "\n"
      << "    if (";
    for (std::size_t i = 0; i < terms.size(); ++i) v << (i ? " || " : "") << terms[i];
    v << ") begin\n"
      << "      $display(\"FAIL: " << name << "\");\n"
      << "      failures = failures + 1;\n"
      << "    end else begin\n"
      << "      $display(\"PASS: " << name << "\");\n"
      << "    end\n"
      << "    #" << kCasePeriodNs - kSettleNs << ";\n";
  }
  v << "\n    $display(\"%0d passed, %0d failed\", " << cases.size()
    << " - failures, failures);\n"
    << "    $finish;\n"
    << "  end\n"
    << "endmodule\n";
  return v.str();
}

std::string render_report(const TestReport& report, ReportFormat format) {
  if (format == ReportFormat::Machine) {
    nlohmann::ordered_json doc;
    doc["feature"] = report.feature_name;
    doc["passed"] = report.passed;
    doc["failed"] = report.failed;
    doc["cases"] = nlohmann::ordered_json::array();
    for (const auto& r : report.results) {
      nlohmann::ordered_json c;
      c["name"] = r.name;
      c["passed"] = r.passed;
      c["checks"] = nlohmann::ordered_json::array();
      for (const auto& ch : r.checks) {
        nlohmann::ordered_json j;
        j["field"] = ch.field;
        j["expected"] = ch.expected;
        j["actual"] = ch.actual;
        j["ok"] = ch.ok;
        c["checks"].push_back(std::move(j));
      }
      doc["cases"].push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  if (!report.feature_name.empty()) out << "Feature: " << report.feature_name << '\n';
  for (const auto& r : report.results) {
    out << "  " << (r.passed ? "✓ " : "✗ ") << r.name << '\n';
    for (const auto& ch : r.checks) {
      if (ch.ok) continue;
      out << "      " << ch.field << ": expected " << ch.expected << ", got " << ch.actual
          << '\n';
    }
  }
  out << report.passed << " passed, " << report.failed << " failed\n";
  return out.str();
}

}  // namespace hwbdd::sim
