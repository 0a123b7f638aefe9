#include "qif/leakage.hpp"

#include <cstdio>
#include <sstream>

#include "qif/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qif {

Bits trace_leakage(const Trace& trace, const Pks& pks) {
  const SecretDist& initial = pks.states[trace.states.front()].config.posterior;
  const SecretDist& final = pks.states[trace.final_state()].config.posterior;
  return min_entropy(initial) - min_entropy(final);
}

std::vector<TraceRow> trace_rows(const Pks& pks,
                                 const std::vector<Trace>& traces, Exec mode) {
  std::vector<TraceRow> rows(traces.size());
  const Bits initial = min_entropy(pks.prior());
  // Each row is independent; the aggregation below stays serial so results
  // do not depend on the thread count.
  const bool parallel = mode == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(traces.size());
       ++i) {
    const Trace& trace = traces[i];
    TraceRow row;
    row.id = trace.id;
    row.probability = trace.probability;
    row.final_uncertainty =
        min_entropy(pks.states[trace.final_state()].config.posterior);
    row.leakage = initial - row.final_uncertainty;
    rows[i] = std::move(row);
  }
  (void)parallel;
  return rows;
}

Bits program_leakage(const Pks& pks) {
  const std::vector<Trace> traces = enumerate_traces(pks);
  const std::vector<TraceRow> rows = trace_rows(pks, traces);
  Bits total = 0;
  for (const TraceRow& row : rows) {
    total += to_double(row.probability) * row.leakage;
  }
  return total;
}

Channel make_channel(const Pks& pks, const std::vector<Trace>& traces,
                     ObsKind kind) {
  const SecretDist& prior = pks.prior();
  Channel channel{prior, {}};
  for (const Trace& trace : traces) {
    const std::string key =
        kind == ObsKind::FinalValue
            ? std::to_string(trace.o_sequence.back())
            : o_sequence_key(trace.o_sequence);
    const SecretDist& posterior =
        pks.states[trace.final_state()].config.posterior;
    auto& row = channel.rows[key];
    for (const auto& [secret, q] : posterior.entries()) {
      // p(obs | s) accumulates the trace's scheduler mass for this secret:
      // p(T) * posterior(s) / prior(s), exactly.
      row[secret] += trace.probability * q / prior.prob(secret);
    }
  }
  return channel;
}

namespace {

Bits prior_entropy(const SecretDist& prior, EntropyKind kind) {
  return kind == EntropyKind::Shannon ? shannon_entropy(prior)
                                      : min_entropy(prior);
}

Bits conditional_entropy(const Channel& channel, EntropyKind kind) {
  return kind == EntropyKind::Shannon ? conditional_shannon(channel)
                                      : conditional_min_smith(channel);
}

}  // namespace

Bits io_leakage(const Pks& pks, const std::vector<Trace>& traces,
                EntropyKind kind) {
  const Channel channel = make_channel(pks, traces, ObsKind::FinalValue);
  return prior_entropy(pks.prior(), kind) - conditional_entropy(channel, kind);
}

Bits trace_obs_leakage(const Pks& pks, const std::vector<Trace>& traces,
                       EntropyKind kind) {
  const Channel channel = make_channel(pks, traces, ObsKind::ValueSequence);
  return prior_entropy(pks.prior(), kind) - conditional_entropy(channel, kind);
}

LeakageReport analyze(const Pks& pks, Exec mode) {
  const std::vector<Trace> traces = enumerate_traces(pks);

  LeakageReport report;
  report.program = pks.program_name;
  report.scheduler = pks.scheduler_name;
  report.initial_uncertainty = min_entropy(pks.prior());
  report.per_trace = trace_rows(pks, traces, mode);

  Bits expected_final = 0;
  for (const TraceRow& row : report.per_trace) {
    expected_final += to_double(row.probability) * row.final_uncertainty;
  }
  report.expected_leakage = report.initial_uncertainty - expected_final;

  report.comparisons = {
      {"io_shannon", io_leakage(pks, traces, EntropyKind::Shannon)},
      {"io_min", io_leakage(pks, traces, EntropyKind::Min)},
      {"trace_obs_shannon", trace_obs_leakage(pks, traces, EntropyKind::Shannon)},
      {"trace_obs_min", trace_obs_leakage(pks, traces, EntropyKind::Min)},
  };
  return report;
}

std::string format_bits(Bits value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

std::string report_text(const LeakageReport& report) {
  std::ostringstream out;
  out << "program: " << report.program << "\n";
  out << "scheduler: " << report.scheduler << "\n";
  out << "initial_uncertainty: " << format_bits(report.initial_uncertainty)
      << "\n";
  out << "traces: " << report.per_trace.size() << "\n";
  for (const TraceRow& row : report.per_trace) {
    out << "  trace " << row.id << ": p=" << frac_string(row.probability)
        << " final_uncertainty=" << format_bits(row.final_uncertainty)
        << " leakage=" << format_bits(row.leakage) << "\n";
  }
  out << "expected_leakage: " << format_bits(report.expected_leakage) << "\n";
  out << "comparisons:\n";
  for (const auto& [name, value] : report.comparisons) {
    out << "  " << name << ": " << format_bits(value) << "\n";
  }
  return out.str();
}

nlohmann::ordered_json report_json(const LeakageReport& report) {
  nlohmann::ordered_json j;
  j["program"] = report.program;
  j["scheduler"] = report.scheduler;
  j["initial_uncertainty"] = report.initial_uncertainty;
  auto traces = nlohmann::ordered_json::array();
  for (const TraceRow& row : report.per_trace) {
    traces.push_back({{"id", row.id},
                      {"probability", frac_string(row.probability)},
                      {"final_uncertainty", row.final_uncertainty},
                      {"leakage", row.leakage}});
  }
  j["traces"] = std::move(traces);
  j["expected_leakage"] = report.expected_leakage;
  auto comparisons = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.comparisons) {
    comparisons[name] = value;
  }
  j["comparisons"] = std::move(comparisons);
  return j;
}

}  // namespace qif
