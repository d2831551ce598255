#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "omv/harness.hpp"

namespace {

struct Flags {
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::string sizes = "8x8x4";
  std::string density = "1/2";
  std::string targets;
  std::string undo_mode = "undo";
  std::string epsilon = "1";
  std::string delta = "1/2";
  std::string out;
  bool incremental = false;
  bool inject_faults = false;
};

void add_campaign_flags(CLI::App* cmd, Flags& f, bool with_targets) {
  cmd->add_option("--seed", f.seed, "campaign seed");
  cmd->add_option("--trials", f.trials, "trials per size")->check(CLI::PositiveNumber);
  cmd->add_option("--sizes", f.sizes, "size grid n1xn2xn3[,...]");
  cmd->add_option("--density", f.density, "bit density p/q");
  if (with_targets) cmd->add_option("--targets", f.targets, "gadget names and engine specs, or 'gadgets' / 'engines'");
  cmd->add_option("--undo-mode", f.undo_mode, "undo | snapshot");
  cmd->add_option("--epsilon", f.epsilon, "epsilon p/q for the (3-eps) gadget");
  cmd->add_option("--delta", f.delta, "trade-off delta p/q in (0,1)");
  cmd->add_flag("--incremental", f.incremental, "run partially dynamic gadgets in their insertion-only form");
}

omv::Campaign to_campaign(const Flags& f) {
  omv::Campaign c;
  c.seed = f.seed;
  c.trials = f.trials;
  c.sizes = omv::parse_sizes(f.sizes);
  c.density = omv::Rational::parse(f.density);
  c.targets = omv::parse_targets(f.targets);
  c.mode = omv::parse_undo_mode(f.undo_mode);
  c.epsilon = omv::Rational::parse(f.epsilon);
  c.delta = omv::Rational::parse(f.delta);
  c.incremental = f.incremental;
  c.inject_faults = f.inject_faults;
  return c;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw omv::io_error("cannot write '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OMv reductions: generate instances, verify gadgets and engines, benchmark, summarize"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("gen", "write random matrix and vector-pair files");
  add_campaign_flags(gen, f, false);
  gen->add_option("--out", f.out, "output directory")->required();

  auto* verify = app.add_subcommand("verify", "check decodes, budgets and gaps over a campaign");
  add_campaign_flags(verify, f, true);
  verify->add_flag("--inject-fault", f.inject_faults, "flip one oracle answer per trial and require detection");
  verify->add_option("--out", f.out, "report path (default stdout)");

  auto* bench = app.add_subcommand("bench", "time engines and gadgets, CSV output");
  add_campaign_flags(bench, f, true);
  bench->add_option("--out", f.out, "CSV path (default stdout)");

  std::string csv_in, long_out;
  auto* report = app.add_subcommand("report", "summarize a bench CSV");
  report->add_option("csv", csv_in, "bench CSV")->required();
  report->add_option("--out", f.out, "summary path (default stdout)");
  report->add_option("--long", long_out, "also write long-format CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      auto files = omv::cmd_gen(to_campaign(f), f.out);
      std::cout << "wrote " << files.size() << " instances to " << f.out << '\n';
      return 0;
    }
    if (verify->parsed()) {
      auto rep = omv::cmd_verify(to_campaign(f));
      emit(rep.text, f.out);
      return rep.pass ? 0 : 1;
    }
    if (bench->parsed()) {
      emit(omv::to_csv(omv::cmd_bench(to_campaign(f))), f.out);
      return 0;
    }
    if (report->parsed()) {
      std::ifstream in(csv_in, std::ios::binary);
      if (!in) throw omv::io_error("cannot read '" + csv_in + "'");
      auto rows = omv::parse_bench_csv(in);
      emit(omv::cmd_report(rows), f.out);
      if (!long_out.empty()) emit(omv::report_long_csv(rows), long_out);
      return 0;
    }
  } catch (const omv::usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
