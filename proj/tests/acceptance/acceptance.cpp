// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../support/alu_oracle.hpp"
#include "../support/corpus.hpp"
#include "hwbdd/alu.hpp"
#include "hwbdd/cli.hpp"
#include "hwbdd/gherkin.hpp"
#include "hwbdd/harness.hpp"
#include "hwbdd/scenario_forge.hpp"
#include "hwbdd/step_compiler.hpp"
#include "hwbdd/vcd.hpp"

namespace fs = std::filesystem;
using namespace hwbdd;

namespace {

constexpr const char* kReferencePrompt = "Create ADD scenario with A = B, 3 examples.";

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hwbdd_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t checked = 0;
  for (alu::AluOp op : alu::kAllOps) {
    for (alu::Word a = 0; a < 256; ++a) {
      for (alu::Word b = 0; b < 256; ++b) {
        const auto r = alu::evaluate({op, a, b, 8});
        const auto ref = testing::oracle_evaluate(op, a, b, 8);
        const bool same = r.result == ref.result && r.flags.carry == ref.carry &&
                          r.flags.zero == ref.zero && r.flags.overflow == ref.overflow &&
                          r.flags.negative == ref.negative;
        o.require(same, std::string(alu::to_string(op)) + "(" + std::to_string(a) + ", " +
                            std::to_string(b) + ") disagrees with the reference");
        ++checked;
      }
    }
  }
  const double t = seconds_since(start);
  o.require(t < 10.0, "took " + fmt_seconds(t));
  if (o.ok) o.detail = std::to_string(checked) + " vectors agree in " + fmt_seconds(t);
  return o;
}

Outcome edge_cases() {
  Outcome o;
  auto r = alu::evaluate({alu::AluOp::ADD, 0xFFFF, 0x0001, 16});
  o.require(r.result == 0 && r.flags.carry && r.flags.zero, "ADD(0xFFFF, 0x0001)");
  r = alu::evaluate({alu::AluOp::ADD, 0x7FFF, 0x7FFF, 16});
  o.require(r.result == 0xFFFE && r.flags.overflow, "ADD(0x7FFF, 0x7FFF)");
  std::mt19937_64 rng(1000);
  for (int i = 0; i < 1000; ++i) {
    const alu::Word x = rng() & 0xFFFF;
    r = alu::evaluate({alu::AluOp::SUB, x, x, 16});
    o.require(r.result == 0 && r.flags.zero, "SUB(x, x) for x = " + std::to_string(x));
  }
  if (o.ok) o.detail = "2 fixed cases and 1000 SUB(x, x) exact";
  return o;
}

Outcome reference_flow() {
  Outcome o;
  const auto start = Clock::now();
  const auto spec = forge::parse_prompt(kReferencePrompt);
  const auto text = gherkin::print_feature(forge::generate_with_templates(spec, 0, 16));
  const auto ast = gherkin::parse_feature(text);
  const auto cases = compiler::compile_feature(ast, 16);
  o.require(cases.size() == 3, std::to_string(cases.size()) + " cases compiled");
  for (const auto& c : cases) o.require(c.stimulus.a == c.stimulus.b, c.name + " has A != B");
  const auto run = sim::run_cases(cases, ast.name);
  o.require(run.report.passed == 3 && run.report.failed == 0,
            std::to_string(run.report.passed) + "/3 passed");
  const auto doc = vcd::write_vcd(run.trace, sim::kDefaultDutName);
  const auto back = vcd::read_vcd_minimal(doc);
  o.require(back == run.trace, "VCD read does not reproduce the trace");
  o.require(vcd::write_vcd(back, sim::kDefaultDutName) == doc, "VCD rewrite differs");
  const double t = seconds_since(start);
  o.require(t < 1.0, "took " + fmt_seconds(t));
  if (o.ok) o.detail = "3/3 passed, VCD byte-stable, " + fmt_seconds(t);
  return o;
}

Outcome gherkin_round_trip() {
  Outcome o;
  const auto corpus = testing::full_corpus();
  o.require(corpus.size() >= 20, "corpus has only " + std::to_string(corpus.size()) + " features");
  bool has_login = false;
  for (const auto& [label, src] : corpus) {
    const auto first = gherkin::parse_feature(src);
    has_login = has_login || first.name == "User Login";
    o.require(gherkin::parse_feature(gherkin::print_feature(first)) == first,
              label + " changes on round trip");
  }
  o.require(has_login, "corpus lacks the User Login feature");
  if (o.ok) o.detail = std::to_string(corpus.size()) + " features";
  return o;
}

Outcome generation_determinism() {
  Outcome o;
  const char* prompts[] = {
      kReferencePrompt,
      "Create SUB scenario with zero, 2 examples",
      "Create ADD scenario with overflow, 4 examples",
      "Create SHL scenario with carry, 3 examples",
  };
  std::size_t features = 0;
  for (const char* p : prompts) {
    const auto spec = forge::parse_prompt(p);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto text = gherkin::print_feature(forge::generate_with_templates(spec, seed, 16));
      const auto again = gherkin::print_feature(forge::generate_with_templates(spec, seed, 16));
      o.require(text == again, std::string(p) + " seed " + std::to_string(seed) + " differs");
      const auto report = forge::validate_against_oracle(gherkin::parse_feature(text), 16);
      o.require(report.clean() && report.total_rows == spec.count,
                std::string(p) + " seed " + std::to_string(seed) + " has mismatches");
      ++features;
    }
  }
  if (o.ok) o.detail = std::to_string(features) + " features clean and repeatable";
  return o;
}

Outcome failure_injection() {
  Outcome o;
  const auto dir = scratch("mutation");
  const char* prompts[] = {kReferencePrompt, "Create SUB scenario with zero, 2 examples",
                           "Create SHR scenario with carry, 2 examples"};
  std::size_t mutants = 0;
  std::uint64_t seed = 17;
  for (const char* p : prompts) {
    const auto clean = forge::generate_with_templates(forge::parse_prompt(p), seed++, 16);
    const auto& table = *clean.scenarios.at(0).examples;
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
      for (std::size_t col = 2; col < table.columns.size(); ++col) {
        auto mutant = clean;
        auto& cell = mutant.scenarios[0].examples->rows[row][col];
        const auto value = compiler::parse_int_literal(cell, 16);
        cell = table.columns[col] == "result" ? std::to_string((value + 1) & 0xFFFF)
                                              : std::to_string(value ^ 1U);
        const std::string where = std::string(p) + " row " + std::to_string(row) + " column " +
                                  table.columns[col];

        const auto run = sim::run_cases(compiler::compile_feature(mutant, 16));
        std::size_t failing = 0;
        for (const auto& r : run.report.results)
          for (const auto& c : r.checks) failing += c.ok ? 0 : 1;
        o.require(failing == 1, where + ": " + std::to_string(failing) + " failing checks");

        const auto feature = dir / "mutant.feature";
        write_text(feature, gherkin::print_feature(mutant));
        std::ostringstream out, err;
        const int code = cli::run({"run", feature.string()}, out, err);
        o.require(code == cli::kExitFailed, where + ": exit code " + std::to_string(code));
        const auto trace = vcd::read_vcd_minimal(testing::read_text(dir / "mutant.vcd"));
        o.require(!vcd::check(trace), where + ": VCD invalid");
        ++mutants;
      }
    }
  }
  fs::remove_all(dir);
  if (o.ok) o.detail = std::to_string(mutants) + " single-cell mutants each fail exactly once";
  return o;
}

Outcome provider_robustness() {
  Outcome o;
  const auto dir = scratch("stub");
  const auto spec = forge::parse_prompt(kReferencePrompt);
  const auto stub_path = dir / forge::stub_file_name(forge::render_prompt(spec));
  auto serve = [&](const std::string& text) {
    write_text(stub_path, nlohmann::json{{"feature", text}}.dump());
  };
  forge::StubProvider stub(dir.string());

  serve("Certainly! Here are three ADD scenarios where A equals B.");
  try {
    forge::generate_with_provider(spec, stub, forge::Mode::Strict, 16);
    o.require(false, "prose accepted");
  } catch (const forge::NonParseableOutput&) {
  }

  auto ast = forge::generate_with_templates(spec, 8, 16);
  auto& cell = ast.scenarios[0].examples->rows[1][2];
  cell = std::to_string((std::stoul(cell) + 7) & 0xFFFF);
  serve(gherkin::print_feature(ast));

  const auto repaired = forge::generate_with_provider(spec, stub, forge::Mode::Repair, 16);
  o.require(repaired.record.corrections == 1,
            "corrections = " + std::to_string(repaired.record.corrections));
  const auto run = sim::run_cases(compiler::compile_feature(repaired.ast, 16));
  o.require(run.report.failed == 0 && run.report.passed == 3, "repaired feature fails");

  try {
    forge::generate_with_provider(spec, stub, forge::Mode::Strict, 16);
    o.require(false, "strict mode accepted a wrong cell");
  } catch (const forge::OracleMismatch& e) {
    o.require(e.report().mismatches.size() == 1, "strict mode reported the wrong mismatches");
  }
  fs::remove_all(dir);
  if (o.ok) o.detail = "prose rejected, 1 correction in Repair, Strict rejects";
  return o;
}

Outcome vcd_property() {
  Outcome o;
  std::mt19937_64 rng(500);
  for (int i = 0; i < 500 && o.ok; ++i) {
    vcd::Trace t;
    const std::size_t nsig = 1 + rng() % 150;
    for (std::size_t s = 0; s < nsig; ++s)
      vcd::declare(t, "sig" + std::to_string(s), static_cast<unsigned>(1 + rng() % 64));
    std::uint64_t time = rng() % 100;
    const std::size_t nchg = rng() % 300;
    for (std::size_t c = 0; c < nchg; ++c) {
      if (rng() % 4 == 0) time += 1 + rng() % 10000;
      const auto& s = t.signals[rng() % nsig];
      const alu::Word m = alu::mask(s.width);
      t.changes.push_back({time, s.id, rng() & m});
    }
    if (rng() % 2) t.end_time = time + 1 + rng() % 100;

    const auto back = vcd::read_vcd_minimal(vcd::write_vcd(t, "top"));
    o.require(back == t, "trace " + std::to_string(i) + " differs after round trip");
    for (std::size_t c = 1; c < back.changes.size(); ++c)
      o.require(back.changes[c - 1].time <= back.changes[c].time,
                "trace " + std::to_string(i) + " has decreasing timestamps");
  }
  if (o.ok) o.detail = "500 traces round-trip";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 golden model matches reference (width 8, exhaustive)", oracle_equivalence},
      {"2 edge cases at width 16", edge_cases},
      {"3 prompt to passing run and stable VCD", reference_flow},
      {"4 gherkin parse/print round trip", gherkin_round_trip},
      {"5 generation determinism and cleanliness", generation_determinism},
      {"6 single-cell failure injection", failure_injection},
      {"7 provider robustness with stub", provider_robustness},
      {"8 VCD randomized round trip", vcd_property},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  criterion %s: %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    failures += o.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
