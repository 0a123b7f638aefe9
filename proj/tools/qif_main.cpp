#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qif/errors.hpp"
#include "qif/leakage.hpp"
#include "qif/oracle.hpp"
#include "qif/parser.hpp"
#include "qif/pks.hpp"
#include "qif/sched.hpp"

namespace {

constexpr int kExitParse = 1;
constexpr int kExitSemantic = 2;
constexpr int kExitScheduler = 3;

struct Options {
  std::string program_path;
  std::string scheduler = "uniform";
  std::string format = "text";
  std::string out_path;
  int budget = qif::kDefaultBudget;
};

int default_budget() {
  if (const char* env = std::getenv("QIF_BUDGET")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed QIF_BUDGET='" << env << "'\n";
    }
  }
  return qif::kDefaultBudget;
}

void add_common_options(CLI::App* cmd, Options& opts) {
  cmd->add_option("program", opts.program_path, "program file to analyze")
      ->required();
  cmd->add_option("--scheduler", opts.scheduler,
                  "uniform | priority:left | priority:right | "
                  "priority:1,0,... | table:PATH");
  cmd->add_option("--budget", opts.budget, "maximum steps per trace");
  cmd->add_option("--out", opts.out_path, "write output to a file");
}

void emit(const Options& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path);
  if (!out) {
    throw qif::Error("cannot open output file: " + opts.out_path);
  }
  out << text;
}

int run_analyze(const Options& opts) {
  const qif::ProgramDecl prog = qif::parse_file(opts.program_path);
  const qif::SchedulerPtr policy = qif::make_scheduler(opts.scheduler);
  const qif::Pks pks = qif::build_pks(prog, *policy, opts.budget);
  const qif::LeakageReport report = qif::analyze(pks);
  if (opts.format == "json") {
    emit(opts, qif::report_json(report).dump(2) + "\n");
  } else {
    emit(opts, qif::report_text(report));
  }
  return 0;
}

int run_traces(const Options& opts) {
  const qif::ProgramDecl prog = qif::parse_file(opts.program_path);
  const qif::SchedulerPtr policy = qif::make_scheduler(opts.scheduler);
  const qif::Pks pks = qif::build_pks(prog, *policy, opts.budget);
  const auto traces = qif::enumerate_traces(pks);
  if (opts.format == "json") {
    auto j = nlohmann::ordered_json::array();
    for (const qif::Trace& t : traces) {
      j.push_back(
          {{"id", t.id},
           {"probability", qif::frac_string(t.probability)},
           {"o_sequence", t.o_sequence},
           {"final_posterior",
            qif::dist_to_json(pks.states[t.final_state()].config.posterior)},
           {"path", qif::trace_path_key(pks, t)}});
    }
    emit(opts, j.dump(2) + "\n");
    return 0;
  }
  std::string text;
  for (const qif::Trace& t : traces) {
    text += "trace " + std::to_string(t.id) + ": p=" +
            qif::frac_string(t.probability) +
            " o_seq=" + qif::o_sequence_key(t.o_sequence) + " posterior=" +
            pks.states[t.final_state()].config.posterior.to_string() + "\n";
  }
  emit(opts, text);
  return 0;
}

int run_export_dot(const Options& opts) {
  const qif::ProgramDecl prog = qif::parse_file(opts.program_path);
  const qif::SchedulerPtr policy = qif::make_scheduler(opts.scheduler);
  const qif::Pks pks = qif::build_pks(prog, *policy, opts.budget);
  if (opts.format == "json") {
    emit(opts, qif::pks_to_json(pks).dump(2) + "\n");
  } else {
    emit(opts, qif::to_dot(pks));
  }
  return 0;
}

int run_oracle_check(const Options& opts) {
  const qif::ProgramDecl prog = qif::parse_file(opts.program_path);
  const qif::SchedulerPtr policy = qif::make_scheduler(opts.scheduler);
  const qif::Pks pks = qif::build_pks(prog, *policy, opts.budget);
  const auto traces = qif::enumerate_traces(pks);
  const auto runs =
      qif::oracle_enumerate(prog, *policy, pks.prior(), opts.budget);
  const auto diff = qif::compare_with_oracle(pks, traces, runs);
  if (diff) {
    std::cerr << "oracle mismatch:\n" << *diff << "\n";
    return kExitSemantic;
  }
  emit(opts, "ok: pipeline and oracle agree on " +
                 std::to_string(traces.size()) + " trace(s), " +
                 std::to_string(runs.size()) + " concrete run(s)\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-leakage analyzer for small concurrent programs"};
  app.require_subcommand(1);

  Options opts;
  opts.budget = default_budget();

  CLI::App* analyze =
      app.add_subcommand("analyze", "full leakage report for a program");
  add_common_options(analyze, opts);
  analyze->add_option("--format", opts.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* traces =
      app.add_subcommand("traces", "list all traces with exact probabilities");
  add_common_options(traces, opts);
  traces->add_option("--format", opts.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* export_dot = app.add_subcommand(
      "export-dot", "emit the execution model (DOT; --format json for JSON)");
  add_common_options(export_dot, opts);
  export_dot->add_option("--format", opts.format, "dot | json")
      ->check(CLI::IsMember({"text", "dot", "json"}));

  CLI::App* oracle_check = app.add_subcommand(
      "oracle-check", "compare the pipeline against the brute-force oracle");
  add_common_options(oracle_check, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      return run_analyze(opts);
    }
    if (traces->parsed()) {
      return run_traces(opts);
    }
    if (export_dot->parsed()) {
      return run_export_dot(opts);
    }
    if (oracle_check->parsed()) {
      return run_oracle_check(opts);
    }
  } catch (const qif::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const qif::SchedulerError& e) {
    std::cerr << "scheduler error: " << e.what() << "\n";
    return kExitScheduler;
  } catch (const qif::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
  return 0;
}
