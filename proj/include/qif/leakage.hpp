#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qif/measures.hpp"
#include "qif/pks.hpp"

namespace qif {

enum class EntropyKind { Shannon, Min };

// Kernels run OpenMP-parallel by default; Serial is the reference used by
// tests and the benchmark.
enum class Exec { Serial, Parallel };

struct TraceRow {
  int id = 0;
  Rational probability;
  Bits final_uncertainty = 0;
  Bits leakage = 0;
};

struct LeakageReport {
  std::string program;
  std::string scheduler;
  Bits initial_uncertainty = 0;
  std::vector<TraceRow> per_trace;
  Bits expected_leakage = 0;
  // io_shannon, io_min, trace_obs_shannon, trace_obs_min
  std::vector<std::pair<std::string, Bits>> comparisons;
};

// Difference of min-entropies between the trace's first and last state.
Bits trace_leakage(const Trace& trace, const Pks& pks);

// Expected value of the per-trace leakages (direct sum route).
Bits program_leakage(const Pks& pks);

// Per-trace uncertainties and leakages; the data-parallel kernel.
std::vector<TraceRow> trace_rows(const Pks& pks, const std::vector<Trace>& traces,
                                 Exec mode = Exec::Parallel);

enum class ObsKind { FinalValue, ValueSequence };

// Channel from the prior to the chosen observable, built from the traces
// with exact conditional masses.
Channel make_channel(const Pks& pks, const std::vector<Trace>& traces,
                     ObsKind kind);

// Classical input/output leakage H(S) - H(S|final O).
Bits io_leakage(const Pks& pks, const std::vector<Trace>& traces,
                EntropyKind kind);

// Value-only observer: H(S) - H(S | O-value sequence). The observer sees the
// public values along the trace but not which command produced them.
Bits trace_obs_leakage(const Pks& pks, const std::vector<Trace>& traces,
                       EntropyKind kind);

// Full report: the per-trace measure plus all comparison measures.
LeakageReport analyze(const Pks& pks, Exec mode = Exec::Parallel);

std::string report_text(const LeakageReport& report);
nlohmann::ordered_json report_json(const LeakageReport& report);

std::string format_bits(Bits value);  // fixed six decimals

}  // namespace qif
