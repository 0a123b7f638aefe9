#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qif/ast.hpp"
#include "qif/sched.hpp"
#include "qif/semantics.hpp"

namespace qif {

inline constexpr int kDefaultBudget = 10000;

struct PksState {
  Config config;
  int parent = -1;     // -1 for the initial state
  int in_thread = -1;  // thread choice that produced this state
  int depth = 0;
  bool terminal = false;
};

struct PksEdge {
  int from = 0;
  Rational probability;  // scheduler weight times branch mass
  int to = 0;
  int thread = 0;
  std::string command;
  std::string observation;
};

// The fully probabilistic execution tree of a program under a fixed policy.
// State 0 carries the prior and the declared initial O; outgoing edge
// probabilities of every non-terminal state sum to exactly 1.
struct Pks {
  std::string program_name;
  std::string scheduler_name;
  std::vector<PksState> states;
  std::vector<PksEdge> edges;

  const SecretDist& prior() const { return states.front().config.posterior; }
};

// A root-to-terminal path with its exact probability and the sequence of
// public values at its states (initial state included).
struct Trace {
  int id = 0;
  std::vector<int> states;
  Rational probability;
  std::vector<std::uint64_t> o_sequence;

  int final_state() const { return states.back(); }
};

// Exhaustive breadth-first construction. Children are created in scheduler
// decision order, then ascending branch outcome, so numbering is reproducible
// run to run. Throws BudgetError when some trace exceeds `budget` steps.
Pks build_pks(const ProgramDecl& prog, const Scheduler& policy,
              int budget = kDefaultBudget);

// All traces, depth-first in edge order; probabilities sum to exactly 1.
std::vector<Trace> enumerate_traces(const Pks& pks);

// Path key of a trace: its step labels joined with "; ". Identifies what the
// path-aware observer saw.
std::string trace_path_key(const Pks& pks, const Trace& trace);

// Comma-joined O values, e.g. "0,1,0,0".
std::string o_sequence_key(const std::vector<std::uint64_t>& o_sequence);

// Graphviz rendering: nodes show index, O value and posterior; edges show
// the exact probability and the executed command.
std::string to_dot(const Pks& pks);

// Full structure with exact fraction strings.
nlohmann::ordered_json pks_to_json(const Pks& pks);

}  // namespace qif
