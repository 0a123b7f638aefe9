// Benchmark of the data-parallel kernels against their serial references:
// oracle enumeration (parallel over secrets) and the per-trace uncertainty
// rows (parallel over traces). Both must produce identical results.

#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "qif/leakage.hpp"
#include "qif/oracle.hpp"
#include "qif/parser.hpp"
#include "qif/pks.hpp"
#include "qif/sched.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_of(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(end - start).count();
}

std::string oracle_workload(int bits, int iters) {
  // Per secret: a public counting loop (cheap steps, many of them), then one
  // secret-dependent write. Embarrassingly parallel across secrets.
  return "secret S : " + std::to_string(bits) +
         ";\n"
         "public O := 0;\n"
         "while (O < " +
         std::to_string(iters) +
         ") do {\n"
         "  O := O + 1;\n"
         "}\n"
         "O := S mod 64;\n";
}

std::string trace_workload(int bits) {
  // Two racing writes produce a wide, shallow tree with many traces.
  const std::uint64_t half = std::uint64_t{1} << (bits / 2);
  return "secret S : " + std::to_string(bits) +
         ";\n"
         "public O := 0;\n"
         "O := S mod " +
         std::to_string(half) + " || O := S / " + std::to_string(half) +
         ";\n";
}

void print_row(const char* kernel, std::size_t items, double serial_s,
               double parallel_s, bool identical) {
  std::printf("%-22s %10zu %12.3f %12.3f %9.2fx   %s\n", kernel, items,
              serial_s * 1e3, parallel_s * 1e3,
              parallel_s > 0 ? serial_s / parallel_s : 0.0,
              identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel kernel benchmark"};
  int bits = 12;
  int iters = 300;
  app.add_option("--bits", bits, "secret width for the workloads");
  app.add_option("--iters", iters, "loop iterations in the oracle workload");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP: %d thread(s)\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both runs are serial\n");
#endif
  std::printf("%-22s %10s %12s %12s %10s\n", "kernel", "items", "serial ms",
              "parallel ms", "speedup");

  const auto policy = qif::uniform_scheduler();

  {
    const qif::ProgramDecl prog = qif::parse(oracle_workload(bits, iters));
    const auto prior = qif::SecretDist::uniform(prog.domain());
    const int budget = iters + 8;
    std::vector<qif::ConcreteRun> serial, parallel;
    const double ts = seconds_of([&] {
      serial = qif::oracle_enumerate(prog, *policy, prior, budget,
                                     qif::Exec::Serial);
    });
    const double tp = seconds_of([&] {
      parallel = qif::oracle_enumerate(prog, *policy, prior, budget,
                                       qif::Exec::Parallel);
    });
    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i) {
      identical = serial[i].secret == parallel[i].secret &&
                  serial[i].path_key == parallel[i].path_key &&
                  serial[i].probability_given_secret ==
                      parallel[i].probability_given_secret;
    }
    print_row("oracle_enumerate", serial.size(), ts, tp, identical);
  }

  {
    const qif::ProgramDecl prog = qif::parse(trace_workload(bits));
    const qif::Pks pks = qif::build_pks(prog, *policy);
    const auto traces = qif::enumerate_traces(pks);
    std::vector<qif::TraceRow> serial, parallel;
    const double ts = seconds_of(
        [&] { serial = qif::trace_rows(pks, traces, qif::Exec::Serial); });
    const double tp = seconds_of(
        [&] { parallel = qif::trace_rows(pks, traces, qif::Exec::Parallel); });
    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i) {
      identical = serial[i].id == parallel[i].id &&
                  serial[i].probability == parallel[i].probability &&
                  serial[i].final_uncertainty == parallel[i].final_uncertainty &&
                  serial[i].leakage == parallel[i].leakage;
    }
    print_row("trace_rows", traces.size(), ts, tp, identical);
  }

  return 0;
}
