#include "qif/oracle.hpp"

#include <exception>
#include <map>
#include <sstream>
#include <utility>

#include "qif/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qif {

namespace {

// The oracle runs programs concretely: one secret, one public value, no
// distributions. It re-implements evaluation and the step discipline on its
// own so the pipeline has an independent reference to disagree with.

constexpr int kMaxSilentResolutions = 4096;

std::uint64_t concrete_eval(const Expr& e, std::uint64_t o, std::uint64_t s) {
  if (e.kind == Expr::Kind::Const) {
    return e.value;
  }
  if (e.kind == Expr::Kind::Var) {
    return e.var == Var::S ? s : o;
  }
  const std::uint64_t l = concrete_eval(*e.lhs, o, s);
  const std::uint64_t r = concrete_eval(*e.rhs, o, s);
  switch (e.op) {
    case BinOp::Add:
      return l + r;
    case BinOp::Sub:
      return l < r ? 0 : l - r;
    case BinOp::Mul:
      return l * r;
    case BinOp::Div:
    case BinOp::Mod:
      if (r == 0) {
        throw EvalError("oracle: division or modulo by zero in '" +
                        to_string(e) + "'");
      }
      return e.op == BinOp::Div ? l / r : l % r;
    case BinOp::BitAnd:
      return l & r;
    case BinOp::BitOr:
      return l | r;
    case BinOp::BitXor:
      return l ^ r;
    case BinOp::Shl:
      return r > 63 ? 0 : l << r;
    case BinOp::Shr:
      return r > 63 ? 0 : l >> r;
    case BinOp::Eq:
      return l == r;
    case BinOp::Ne:
      return l != r;
    case BinOp::Lt:
      return l < r;
    case BinOp::Le:
      return l <= r;
    case BinOp::Gt:
      return l > r;
    case BinOp::Ge:
      return l >= r;
  }
  throw EvalError("oracle: unknown operator");
}

int concrete_threads(const Stmt& s) {
  if (s.kind == Stmt::Kind::Terminated) {
    return 0;
  }
  if (s.kind == Stmt::Kind::Par) {
    return concrete_threads(*s.a) + concrete_threads(*s.b);
  }
  if (s.kind == Stmt::Kind::Seq) {
    return concrete_threads(*s.a);
  }
  return 1;
}

struct TurnResult {
  StmtPtr program;
  std::uint64_t o;
  std::string command;
  std::string observation;
};

// Joins a rewritten first child back into its parent, dropping it entirely
// once finished.
StmtPtr rejoin_seq(const StmtPtr& rest, const StmtPtr& second) {
  return is_terminated(*rest) ? second : Stmt::seq(rest, second);
}

StmtPtr rejoin_par_left(const StmtPtr& rest, const StmtPtr& right) {
  return is_terminated(*rest) ? right : Stmt::par(rest, right);
}

StmtPtr rejoin_par_right(const StmtPtr& left, const StmtPtr& rest) {
  return is_terminated(*rest) ? left : Stmt::par(left, rest);
}

// Executes one atomic command of a thread whose turn starts at `stmt`
// (no Par below this point on the chosen path when entering).
TurnResult run_atom(StmtPtr stmt, std::uint64_t o, std::uint64_t s) {
  int resolutions = 0;
  // Peel Seq spines and freely resolve guards over the public state.
  std::vector<StmtPtr> continuations;  // Seq second components, outermost first
  std::string last_guard;
  std::string last_obs;
  auto rejoin_all = [&continuations](StmtPtr rest) {
    for (auto it = continuations.rbegin(); it != continuations.rend(); ++it) {
      rest = rejoin_seq(rest, *it);
    }
    return rest;
  };
  for (;;) {
    if (stmt->kind == Stmt::Kind::Seq) {
      continuations.push_back(stmt->b);
      stmt = stmt->a;
      continue;
    }
    if (stmt->kind == Stmt::Kind::Par) {
      // A resolution uncovered new threads; the turn ends without running a
      // command. Only reachable after at least one resolution.
      return {rejoin_all(stmt), o, last_guard, last_obs};
    }
    if ((stmt->kind == Stmt::Kind::If || stmt->kind == Stmt::Kind::While) &&
        !reads_secret(*stmt->expr)) {
      if (++resolutions > kMaxSilentResolutions) {
        throw BudgetError("oracle: guard '" + to_string(*stmt->expr) +
                          "' keeps resolving without reaching an executable "
                          "command");
      }
      const bool taken = concrete_eval(*stmt->expr, o, 0) != 0;
      last_guard = (stmt->kind == Stmt::Kind::If ? "if (" : "while (") +
                   to_string(*stmt->expr) + ")";
      last_obs = taken ? "true" : "false";
      StmtPtr next;
      if (stmt->kind == Stmt::Kind::If) {
        next = taken ? stmt->a : stmt->b;
      } else {
        next = taken ? Stmt::seq(stmt->a, stmt) : Stmt::terminated();
      }
      if (is_terminated(*next)) {
        // The thread ran out of work without consuming its turn.
        return {rejoin_all(next), o, last_guard, last_obs};
      }
      stmt = next;
      continue;
    }
    break;
  }

  TurnResult result;
  switch (stmt->kind) {
    case Stmt::Kind::Skip:
      result = {Stmt::terminated(), o, "skip", ""};
      break;
    case Stmt::Kind::Assign: {
      const std::uint64_t written = concrete_eval(*stmt->expr, o, s);
      result = {Stmt::terminated(), written, "O := " + to_string(*stmt->expr),
                std::to_string(written)};
      break;
    }
    case Stmt::Kind::If: {
      const bool taken = concrete_eval(*stmt->expr, o, s) != 0;
      result = {taken ? stmt->a : stmt->b, o,
                "if (" + to_string(*stmt->expr) + ")",
                taken ? "true" : "false"};
      break;
    }
    case Stmt::Kind::While: {
      const bool taken = concrete_eval(*stmt->expr, o, s) != 0;
      result = {taken ? Stmt::seq(stmt->a, stmt) : Stmt::terminated(), o,
                "while (" + to_string(*stmt->expr) + ")",
                taken ? "true" : "false"};
      break;
    }
    default:
      throw Error("oracle: unexpected statement kind");
  }
  result.program = rejoin_all(result.program);
  return result;
}

// Runs the `thread`-th redex, rebuilding the surrounding Par structure.
TurnResult run_turn(const StmtPtr& program, int thread, std::uint64_t o,
                    std::uint64_t s) {
  if (program->kind == Stmt::Kind::Par) {
    const int left = concrete_threads(*program->a);
    if (thread < left) {
      TurnResult r = run_turn(program->a, thread, o, s);
      r.program = rejoin_par_left(r.program, program->b);
      return r;
    }
    TurnResult r = run_turn(program->b, thread - left, o, s);
    r.program = rejoin_par_right(program->a, r.program);
    return r;
  }
  if (program->kind == Stmt::Kind::Seq) {
    // The thread may sit under further Par nodes inside the first component.
    if (program->a->kind == Stmt::Kind::Par ||
        program->a->kind == Stmt::Kind::Seq) {
      TurnResult r = run_turn(program->a, thread, o, s);
      r.program = rejoin_seq(r.program, program->b);
      return r;
    }
    TurnResult r = run_atom(program, o, s);
    return r;
  }
  return run_atom(program, o, s);
}

struct RunState {
  StmtPtr program;
  std::uint64_t o;
  std::vector<int> choices;
  std::vector<std::uint64_t> o_seq;
  Rational weight = 1;
  std::string key;
  int steps = 0;
};

void apply_turn(const Scheduler& policy, std::uint64_t secret,
                const SchedDecision& d, RunState& state);

void enumerate_resolutions(const Scheduler& policy, std::uint64_t secret,
                           int budget, RunState state,
                           std::vector<ConcreteRun>& out) {
  for (;;) {
    const int threads = concrete_threads(*state.program);
    if (threads == 0) {
      out.push_back({secret, state.choices, state.o_seq, state.weight,
                     state.key});
      return;
    }
    if (state.steps >= budget) {
      throw BudgetError("oracle: step budget (" + std::to_string(budget) +
                        ") exhausted for secret " + std::to_string(secret));
    }
    std::vector<int> enabled(static_cast<std::size_t>(threads));
    for (std::size_t i = 0; i < enabled.size(); ++i) {
      enabled[i] = static_cast<int>(i);
    }
    const SchedHistory history{state.choices, state.o_seq};
    const std::vector<SchedDecision> decisions =
        checked_decide(policy, history, enabled);

    // Tail-run the last positive decision; recurse for the others.
    std::vector<const SchedDecision*> live;
    for (const SchedDecision& d : decisions) {
      if (d.weight != 0) {
        live.push_back(&d);
      }
    }
    for (std::size_t i = 0; i + 1 < live.size(); ++i) {
      RunState next = state;
      apply_turn(policy, secret, *live[i], next);
      enumerate_resolutions(policy, secret, budget, std::move(next), out);
    }
    apply_turn(policy, secret, *live.back(), state);
  }
}

void apply_turn(const Scheduler&, std::uint64_t secret, const SchedDecision& d,
                RunState& state) {
  const TurnResult turn = run_turn(state.program, d.thread, state.o, secret);
  state.program = turn.program;
  state.o = turn.o;
  state.choices.push_back(d.thread);
  state.o_seq.push_back(turn.o);
  state.weight *= d.weight;
  if (!state.key.empty()) {
    state.key += "; ";
  }
  state.key += step_label(d.thread, turn.command, turn.observation);
  ++state.steps;
}

std::vector<ConcreteRun> enumerate_for_secret(const ProgramDecl& prog,
                                              const Scheduler& policy,
                                              std::uint64_t secret,
                                              int budget) {
  std::vector<ConcreteRun> runs;
  RunState initial;
  initial.program = prog.body;
  initial.o = prog.initial_o;
  initial.o_seq = {prog.initial_o};
  enumerate_resolutions(policy, secret, budget, std::move(initial), runs);
  return runs;
}

}  // namespace

std::vector<ConcreteRun> oracle_enumerate_serial(const ProgramDecl& prog,
                                                 const Scheduler& policy,
                                                 const SecretDist& prior,
                                                 int budget) {
  return oracle_enumerate(prog, policy, prior, budget, Exec::Serial);
}

std::vector<ConcreteRun> oracle_enumerate(const ProgramDecl& prog,
                                          const Scheduler& policy,
                                          const SecretDist& prior, int budget,
                                          Exec mode) {
  std::vector<std::uint64_t> secrets;
  secrets.reserve(prior.support_size());
  for (const auto& [secret, p] : prior.entries()) {
    secrets.push_back(secret);
  }

  // Independent per secret; results are concatenated in secret order so the
  // parallel and serial paths produce identical output.
  std::vector<std::vector<ConcreteRun>> per_secret(secrets.size());
  std::exception_ptr failure;
  const bool parallel = mode == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(secrets.size());
       ++i) {
    try {
      per_secret[i] = enumerate_for_secret(prog, policy, secrets[i], budget);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  }
  (void)parallel;
  if (failure) {
    std::rethrow_exception(failure);
  }

  std::vector<ConcreteRun> runs;
  for (std::vector<ConcreteRun>& chunk : per_secret) {
    for (ConcreteRun& run : chunk) {
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

SecretDist oracle_posterior(const std::vector<ConcreteRun>& runs,
                            const SecretDist& prior, const std::string& key,
                            ObsKey kind) {
  SecretDist::Map mass;
  Rational total = 0;
  for (const ConcreteRun& run : runs) {
    const std::string run_key = kind == ObsKey::Path
                                    ? run.path_key
                                    : o_sequence_key(run.o_sequence);
    if (run_key != key) {
      continue;
    }
    const Rational m = prior.prob(run.secret) * run.probability_given_secret;
    mass[run.secret] += m;
    total += m;
  }
  if (total == 0) {
    throw DomainError("observation '" + key + "' has zero mass");
  }
  for (auto& [secret, m] : mass) {
    m /= total;
  }
  return SecretDist(std::move(mass));
}

Channel oracle_channel(const std::vector<ConcreteRun>& runs,
                       const SecretDist& prior, ObsKind kind) {
  Channel channel{prior, {}};
  for (const ConcreteRun& run : runs) {
    const std::string key = kind == ObsKind::FinalValue
                                ? std::to_string(run.o_sequence.back())
                                : o_sequence_key(run.o_sequence);
    channel.rows[key][run.secret] += run.probability_given_secret;
  }
  return channel;
}

std::optional<std::string> compare_with_oracle(
    const Pks& pks, const std::vector<Trace>& traces,
    const std::vector<ConcreteRun>& runs) {
  const SecretDist& prior = pks.prior();

  struct Group {
    Rational probability;
    SecretDist::Map mass;
  };
  std::map<std::string, Group> oracle_groups;
  for (const ConcreteRun& run : runs) {
    const Rational m = prior.prob(run.secret) * run.probability_given_secret;
    Group& g = oracle_groups[run.path_key];
    g.probability += m;
    g.mass[run.secret] += m;
  }

  std::ostringstream diff;
  int mismatches = 0;
  auto report = [&](const std::string& line) {
    if (mismatches < 5) {
      diff << line << "\n";
    }
    ++mismatches;
  };

  std::map<std::string, const Trace*> pipeline_groups;
  for (const Trace& trace : traces) {
    pipeline_groups.emplace(trace_path_key(pks, trace), &trace);
  }

  for (const auto& [key, trace] : pipeline_groups) {
    const auto it = oracle_groups.find(key);
    if (it == oracle_groups.end()) {
      report("pipeline trace has no oracle counterpart: " + key);
      continue;
    }
    if (it->second.probability != trace->probability) {
      report("probability mismatch on '" + key + "': pipeline " +
             frac_string(trace->probability) + ", oracle " +
             frac_string(it->second.probability));
    }
    SecretDist::Map normalized = it->second.mass;
    for (auto& [secret, m] : normalized) {
      m /= it->second.probability;
    }
    const SecretDist& pipeline_posterior =
        pks.states[trace->final_state()].config.posterior;
    if (!(SecretDist(std::move(normalized)) == pipeline_posterior)) {
      report("posterior mismatch on '" + key + "'");
    }
  }
  for (const auto& [key, group] : oracle_groups) {
    if (pipeline_groups.find(key) == pipeline_groups.end()) {
      report("oracle run has no pipeline counterpart: " + key);
    }
  }

  if (mismatches == 0) {
    return std::nullopt;
  }
  diff << mismatches << " mismatch(es) total";
  return diff.str();
}

}  // namespace qif
