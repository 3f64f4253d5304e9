#include "hwbdd/cli.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hwbdd/gherkin.hpp"
#include "hwbdd/harness.hpp"
#include "hwbdd/scenario_forge.hpp"
#include "hwbdd/step_compiler.hpp"
#include "hwbdd/vcd.hpp"

namespace hwbdd::cli {
namespace {

namespace fs = std::filesystem;

struct Config {
  unsigned width = alu::kDefaultWidth;
  std::uint64_t seed = 0;
  forge::Mode mode = forge::Mode::Strict;
  forge::ProviderKind provider = forge::ProviderKind::Template;
  std::string stub_dir;
  std::string out;
  std::string dut{sim::kDefaultDutName};
  std::string input;
};

// Reported with exit code 2.
struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << bytes;
  if (!out) throw UsageError("failed writing '" + path.string() + "'");
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

int cmd_generate(const Config& cfg, const std::string& prompt, std::ostream& out) {
  const auto spec = forge::parse_prompt(prompt);
  forge::GenerationRecord record;
  if (cfg.provider == forge::ProviderKind::Template) {
    const auto ast = forge::generate_with_templates(spec, cfg.seed, cfg.width);
    record.prompt_text = forge::render_prompt(spec);
    record.seed = cfg.seed;
    record.provider = forge::ProviderKind::Template;
    record.feature_text = gherkin::print_feature(ast);
  } else {
    std::unique_ptr<forge::GenerationProvider> provider;
    if (!cfg.stub_dir.empty())
      provider = std::make_unique<forge::StubProvider>(cfg.stub_dir);
    else
      provider = std::make_unique<forge::RemoteProvider>(
          forge::RemoteProvider::from_environment());
    record = forge::generate_with_provider(spec, *provider, cfg.mode, cfg.width, cfg.seed)
                 .record;
  }

  const fs::path path =
      cfg.out.empty() ? fs::path(lower(std::string(alu::to_string(spec.op))) + ".feature")
                      : fs::path(cfg.out);
  write_file(path, record.feature_text);
  out << "provider: " << forge::to_string(record.provider) << "\n"
      << "seed: " << record.seed << "\n"
      << "corrections: " << record.corrections << "\n"
      << "wrote " << path.string() << "\n";
  return kExitOk;
}

std::vector<compiler::TestCase> load_cases(const Config& cfg, gherkin::FeatureAst& ast) {
  ast = gherkin::parse_feature(read_file(cfg.input));
  return compiler::compile_feature(ast, cfg.width);
}

int cmd_run(const Config& cfg, std::ostream& out) {
  gherkin::FeatureAst ast;
  const auto cases = load_cases(cfg, ast);
  const auto result = sim::run_cases(cases, ast.name);

  const fs::path input(cfg.input);
  const fs::path dir = cfg.out.empty() ? input.parent_path() : fs::path(cfg.out);
  const std::string stem = input.stem().string();
  write_file(dir / (stem + ".vcd"), vcd::write_vcd(result.trace, sim::kDefaultDutName));
  write_file(dir / (stem + ".report.json"),
             sim::render_report(result.report, sim::ReportFormat::Machine));
  out << sim::render_report(result.report, sim::ReportFormat::Human);
  return result.report.failed > 0 ? kExitFailed : kExitOk;
}

int cmd_emit_tb(const Config& cfg, std::ostream& out) {
  gherkin::FeatureAst ast;
  const auto cases = load_cases(cfg, ast);
  if (cases.empty()) throw UsageError("no cases in '" + cfg.input + "'");
  const fs::path input(cfg.input);
  const fs::path path = cfg.out.empty()
                            ? input.parent_path() / (input.stem().string() + "_tb.v")
                            : fs::path(cfg.out);
  write_file(path, sim::emit_testbench(cases, cfg.dut));
  out << cases.size() << " case(s) written to " << path.string() << "\n";
  return kExitOk;
}

int cmd_validate(const Config& cfg, std::ostream& out) {
  const auto ast = gherkin::parse_feature(read_file(cfg.input));
  const auto report = forge::validate_against_oracle(ast, cfg.width);
  for (const auto& m : report.mismatches) {
    out << "mismatch: " << m.case_name << " (scenario '" << m.scenario << "', row "
        << m.row + 1 << "): " << forge::to_string(m.field) << " found " << m.found
        << ", oracle " << m.oracle << "\n";
  }
  out << report.total_rows << " row(s) checked, " << report.mismatches.size()
      << " mismatch(es)\n";
  return report.clean() ? kExitOk : kExitFailed;
}

void add_common(CLI::App& cmd, Config& cfg) {
  cmd.add_option("--width", cfg.width, "Datapath width in bits")
      ->check(CLI::Range(alu::kMinWidth, alu::kMaxWidth));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  std::string prompt;
  std::string mode = "Strict";
  std::string provider = "Template";

  CLI::App app{"Gherkin scenarios for ALU hardware: generate, run, emit testbenches"};
  app.name("gherkin-hdl");
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Generate a .feature file from a prompt");
  gen->add_option("prompt", prompt, "e.g. \"Create ADD scenario with A = B, 3 examples.\"")
      ->required();
  add_common(*gen, cfg);
  gen->add_option("--seed", cfg.seed, "Seed of the operand generator");
  gen->add_option("--mode", mode, "Strict or Repair (provider output handling)")
      ->transform(CLI::IsMember({"Strict", "Repair"}, CLI::ignore_case));
  gen->add_option("--provider", provider, "Template or Remote")
      ->transform(CLI::IsMember({"Template", "Remote"}, CLI::ignore_case));
  gen->add_option("--stub-dir", cfg.stub_dir,
                  "Serve Remote responses from canned files in this directory");
  gen->add_option("--out", cfg.out, "Output .feature path (default <op>.feature)");

  auto* run_cmd = app.add_subcommand("run", "Run a feature against the golden model");
  run_cmd->add_option("feature", cfg.input, "Feature file")->required();
  add_common(*run_cmd, cfg);
  run_cmd->add_option("--out", cfg.out, "Directory for the .vcd and .report.json");

  auto* tb = app.add_subcommand("emit-tb", "Emit a Verilog testbench for a feature");
  tb->add_option("feature", cfg.input, "Feature file")->required();
  add_common(*tb, cfg);
  tb->add_option("--dut", cfg.dut, "DUT module name");
  tb->add_option("--out", cfg.out, "Output .v path (default <stem>_tb.v)");

  auto* val = app.add_subcommand("validate", "Check feature expectations against the model");
  val->add_option("feature", cfg.input, "Feature file")->required();
  add_common(*val, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  cfg.mode = lower(mode) == "repair" ? forge::Mode::Repair : forge::Mode::Strict;
  cfg.provider = lower(provider) == "remote" ? forge::ProviderKind::Remote
                                             : forge::ProviderKind::Template;

  try {
    if (gen->parsed()) return cmd_generate(cfg, prompt, out);
    if (run_cmd->parsed()) return cmd_run(cfg, out);
    if (tb->parsed()) return cmd_emit_tb(cfg, out);
    if (val->parsed()) return cmd_validate(cfg, out);
  } catch (const forge::OracleMismatch& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& m : e.report().mismatches)
      err << "  " << m.case_name << ": " << forge::to_string(m.field) << " found "
          << m.found << ", oracle " << m.oracle << "\n";
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"gherkin-hdl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hwbdd::cli
