#include "qif/pks.hpp"

#include <algorithm>
#include <sstream>

#include "qif/errors.hpp"

namespace qif {

namespace {

SchedHistory history_of(const Pks& pks, int state) {
  SchedHistory history;
  for (int i = state; i != -1; i = pks.states[i].parent) {
    history.o_values.push_back(pks.states[i].config.o_value);
    if (pks.states[i].in_thread != -1) {
      history.threads.push_back(pks.states[i].in_thread);
    }
  }
  std::reverse(history.threads.begin(), history.threads.end());
  std::reverse(history.o_values.begin(), history.o_values.end());
  return history;
}

std::string trace_prefix(const Pks& pks, int state) {
  const SchedHistory history = history_of(pks, state);
  return "o-sequence " + o_sequence_key(history.o_values);
}

std::string escape_dot(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out;
}

std::string posterior_label(const SecretDist& d) {
  constexpr std::size_t kMaxShown = 8;
  std::ostringstream out;
  out << "{";
  std::size_t shown = 0;
  for (const auto& [value, p] : d.entries()) {
    if (shown == kMaxShown) {
      out << ", ...";
      break;
    }
    if (shown > 0) {
      out << ", ";
    }
    out << value << ":" << frac_string(p);
    ++shown;
  }
  out << "}";
  return out.str();
}

}  // namespace

Pks build_pks(const ProgramDecl& prog, const Scheduler& policy, int budget) {
  if (budget < 1) {
    throw BudgetError("step budget must be at least 1");
  }
  Pks pks;
  pks.program_name = prog.name;
  pks.scheduler_name = policy.name();
  pks.states.push_back({initial_config(prog), -1, -1, 0, false});

  // The states vector doubles as the BFS queue.
  for (std::size_t i = 0; i < pks.states.size(); ++i) {
    const Config config = pks.states[i].config;  // copy: the vector grows
    const int depth = pks.states[i].depth;
    const std::vector<int> enabled = enabled_threads(config);
    if (enabled.empty()) {
      pks.states[i].terminal = true;
      continue;
    }
    if (depth >= budget) {
      throw BudgetError("step budget (" + std::to_string(budget) +
                        ") exhausted; offending trace prefix: " +
                        trace_prefix(pks, static_cast<int>(i)));
    }
    const SchedHistory history = history_of(pks, static_cast<int>(i));
    const std::vector<SchedDecision> decisions =
        checked_decide(policy, history, enabled);
    for (const SchedDecision& decision : decisions) {
      if (decision.weight == 0) {
        continue;  // unreachable under this policy
      }
      StepOutcome outcome;
      try {
        outcome = step(config, decision.thread);
      } catch (const EvalError& e) {
        throw EvalError(std::string(e.what()) + "; trace prefix: " +
                        trace_prefix(pks, static_cast<int>(i)));
      }
      for (Branch& branch : outcome.branches) {
        const int child = static_cast<int>(pks.states.size());
        pks.states.push_back({std::move(branch.next), static_cast<int>(i),
                              decision.thread, depth + 1, false});
        pks.edges.push_back({static_cast<int>(i),
                             decision.weight * branch.probability, child,
                             decision.thread, outcome.command,
                             branch.observation});
      }
    }
  }
  return pks;
}

std::vector<Trace> enumerate_traces(const Pks& pks) {
  // Outgoing edges per state, in creation order.
  std::vector<std::vector<int>> out_edges(pks.states.size());
  for (std::size_t e = 0; e < pks.edges.size(); ++e) {
    out_edges[pks.edges[e].from].push_back(static_cast<int>(e));
  }

  std::vector<Trace> traces;
  struct Frame {
    int state;
    std::size_t next_edge;
  };
  std::vector<Frame> stack{{0, 0}};
  std::vector<int> path{0};
  Rational probability = 1;
  std::vector<Rational> edge_probs;

  while (!stack.empty()) {
    Frame& frame = stack.back();
    const auto& edges = out_edges[frame.state];
    if (pks.states[frame.state].terminal) {
      Trace trace;
      trace.id = static_cast<int>(traces.size());
      trace.states = path;
      trace.probability = probability;
      trace.o_sequence.reserve(path.size());
      for (const int s : path) {
        trace.o_sequence.push_back(pks.states[s].config.o_value);
      }
      traces.push_back(std::move(trace));
    }
    if (frame.next_edge < edges.size()) {
      const PksEdge& edge = pks.edges[edges[frame.next_edge]];
      ++frame.next_edge;
      stack.push_back({edge.to, 0});
      path.push_back(edge.to);
      probability *= edge.probability;
      edge_probs.push_back(edge.probability);
    } else {
      stack.pop_back();
      path.pop_back();
      if (!edge_probs.empty()) {
        probability /= edge_probs.back();
        edge_probs.pop_back();
      }
    }
  }
  return traces;
}

std::string trace_path_key(const Pks& pks, const Trace& trace) {
  // Incoming edge of each non-root state; edges are created in state order,
  // so edge (to == state) is unique in the tree.
  std::vector<int> in_edge(pks.states.size(), -1);
  for (std::size_t e = 0; e < pks.edges.size(); ++e) {
    in_edge[pks.edges[e].to] = static_cast<int>(e);
  }
  std::string key;
  for (std::size_t i = 1; i < trace.states.size(); ++i) {
    const PksEdge& edge = pks.edges[in_edge[trace.states[i]]];
    if (!key.empty()) {
      key += "; ";
    }
    key += step_label(edge.thread, edge.command, edge.observation);
  }
  return key;
}

std::string o_sequence_key(const std::vector<std::uint64_t>& o_sequence) {
  std::string key;
  for (std::size_t i = 0; i < o_sequence.size(); ++i) {
    if (i > 0) {
      key += ',';
    }
    key += std::to_string(o_sequence[i]);
  }
  return key;
}

std::string to_dot(const Pks& pks) {
  std::ostringstream out;
  out << "digraph pks {\n";
  out << "  rankdir=TB;\n";
  out << "  node [fontsize=10];\n";
  out << "  edge [fontsize=9];\n";
  for (std::size_t i = 0; i < pks.states.size(); ++i) {
    const PksState& state = pks.states[i];
    out << "  n" << i << " [label=\"" << i << "\\nO=" << state.config.o_value
        << "\\n" << escape_dot(posterior_label(state.config.posterior))
        << "\", shape=" << (state.terminal ? "doublecircle" : "circle")
        << "];\n";
  }
  for (const PksEdge& edge : pks.edges) {
    out << "  n" << edge.from << " -> n" << edge.to << " [label=\""
        << frac_string(edge.probability) << "\\n"
        << escape_dot(step_label(edge.thread, edge.command, edge.observation))
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

nlohmann::ordered_json pks_to_json(const Pks& pks) {
  nlohmann::ordered_json j;
  j["program"] = pks.program_name;
  j["scheduler"] = pks.scheduler_name;
  auto states = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < pks.states.size(); ++i) {
    const PksState& state = pks.states[i];
    states.push_back({{"id", i},
                      {"o", state.config.o_value},
                      {"posterior", dist_to_json(state.config.posterior)},
                      {"terminal", state.terminal}});
  }
  j["states"] = std::move(states);
  auto edges = nlohmann::ordered_json::array();
  for (const PksEdge& edge : pks.edges) {
    edges.push_back({{"from", edge.from},
                     {"to", edge.to},
                     {"probability", frac_string(edge.probability)},
                     {"thread", edge.thread},
                     {"command", edge.command},
                     {"observation", edge.observation}});
  }
  j["edges"] = std::move(edges);
  return j;
}

}  // namespace qif
