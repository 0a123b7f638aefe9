#include "qif/semantics.hpp"

#include <map>
#include <set>
#include <utility>

#include "qif/errors.hpp"

namespace qif {

namespace {

// Guard resolutions within a single turn are silent; a loop that never
// reaches an executable command would spin here forever.
constexpr int kMaxSilentResolutions = 4096;

enum class Dir { SeqA, ParA, ParB };

struct PathEntry {
  StmtPtr node;
  Dir dir;
};

using Path = std::vector<PathEntry>;

// Descends to the index-th redex (left-to-right across Par), recording the
// spine so the tree can be rebuilt around a replacement.
StmtPtr find_redex(StmtPtr cur, int index, Path& path) {
  for (;;) {
    switch (cur->kind) {
      case Stmt::Kind::Seq:
        path.push_back({cur, Dir::SeqA});
        cur = cur->a;
        break;
      case Stmt::Kind::Par: {
        const int left = thread_count(*cur->a);
        if (index < left) {
          path.push_back({cur, Dir::ParA});
          cur = cur->a;
        } else {
          index -= left;
          path.push_back({cur, Dir::ParB});
          cur = cur->b;
        }
        break;
      }
      default:
        return cur;
    }
  }
}

// Puts `replacement` where the recorded spine ends and rebuilds upwards,
// eliding finished children so Terminated never survives inside Seq or Par.
StmtPtr rebuild(const Path& path, StmtPtr replacement) {
  StmtPtr cur = std::move(replacement);
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const StmtPtr& parent = it->node;
    switch (it->dir) {
      case Dir::SeqA:
        cur = is_terminated(*cur) ? parent->b : Stmt::seq(cur, parent->b);
        break;
      case Dir::ParA:
        cur = is_terminated(*cur) ? parent->b : Stmt::par(cur, parent->b);
        break;
      case Dir::ParB:
        cur = is_terminated(*cur) ? parent->a : Stmt::par(parent->a, cur);
        break;
    }
  }
  return cur;
}

// First statement of a fragment, following Seq spines.
StmtPtr descend_first(StmtPtr s, Path& path) {
  while (s->kind == Stmt::Kind::Seq) {
    path.push_back({s, Dir::SeqA});
    s = s->a;
  }
  return s;
}

std::string command_text(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Skip:
      return "skip";
    case Stmt::Kind::Assign:
      return "O := " + to_string(*s.expr);
    case Stmt::Kind::If:
      return "if (" + to_string(*s.expr) + ")";
    case Stmt::Kind::While:
      return "while (" + to_string(*s.expr) + ")";
    default:
      return "?";
  }
}

StepOutcome single_branch(StmtPtr program, const Config& c, int thread,
                          std::string command, std::string observation) {
  StepOutcome out;
  out.thread = thread;
  out.command = std::move(command);
  out.branches.push_back(
      {Rational(1), Config{std::move(program), c.o_value, c.posterior},
       std::move(observation)});
  return out;
}

}  // namespace

int thread_count(const Stmt& program) {
  switch (program.kind) {
    case Stmt::Kind::Terminated:
      return 0;
    case Stmt::Kind::Par:
      return thread_count(*program.a) + thread_count(*program.b);
    case Stmt::Kind::Seq:
      return thread_count(*program.a);
    default:
      return 1;
  }
}

std::vector<int> enabled_threads(const Config& c) {
  std::vector<int> threads(static_cast<std::size_t>(thread_count(*c.program)));
  for (std::size_t i = 0; i < threads.size(); ++i) {
    threads[i] = static_cast<int>(i);
  }
  return threads;
}

bool same_state(const Config& a, const Config& b) {
  return a.o_value == b.o_value && a.posterior == b.posterior &&
         equal(*a.program, *b.program);
}

std::uint64_t eval_expr(const Expr& e, std::uint64_t o, std::uint64_t s) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value;
    case Expr::Kind::Var:
      return e.var == Var::S ? s : o;
    case Expr::Kind::Bin:
      break;
  }
  const std::uint64_t l = eval_expr(*e.lhs, o, s);
  const std::uint64_t r = eval_expr(*e.rhs, o, s);
  switch (e.op) {
    case BinOp::Add:
      return l + r;
    case BinOp::Sub:
      return l >= r ? l - r : 0;  // truncated at zero
    case BinOp::Mul:
      return l * r;
    case BinOp::Div:
      if (r == 0) {
        throw EvalError("division by zero in '" + to_string(e) + "'");
      }
      return l / r;
    case BinOp::Mod:
      if (r == 0) {
        throw EvalError("modulo by zero in '" + to_string(e) + "'");
      }
      return l % r;
    case BinOp::BitAnd:
      return l & r;
    case BinOp::BitOr:
      return l | r;
    case BinOp::BitXor:
      return l ^ r;
    case BinOp::Shl:
      return r >= 64 ? 0 : l << r;
    case BinOp::Shr:
      return r >= 64 ? 0 : l >> r;
    case BinOp::Eq:
      return l == r ? 1 : 0;
    case BinOp::Ne:
      return l != r ? 1 : 0;
    case BinOp::Lt:
      return l < r ? 1 : 0;
    case BinOp::Le:
      return l <= r ? 1 : 0;
    case BinOp::Gt:
      return l > r ? 1 : 0;
    case BinOp::Ge:
      return l >= r ? 1 : 0;
  }
  throw EvalError("unknown operator");
}

StepOutcome step(const Config& c, int thread) {
  const int threads = thread_count(*c.program);
  if (thread < 0 || thread >= threads) {
    throw SchedulerError("thread " + std::to_string(thread) +
                         " is not enabled (" + std::to_string(threads) +
                         " thread(s) runnable)");
  }

  Path path;
  StmtPtr redex = find_redex(c.program, thread, path);

  // Guards over the public state alone resolve for free: the chosen branch's
  // first command runs in this same turn. Stop early when the resolution
  // changes the thread structure (a Par appears or the thread finishes).
  int resolutions = 0;
  while ((redex->kind == Stmt::Kind::If || redex->kind == Stmt::Kind::While) &&
         !reads_secret(*redex->expr)) {
    if (++resolutions > kMaxSilentResolutions) {
      throw BudgetError("guard '" + to_string(*redex->expr) +
                        "' keeps resolving without reaching an executable "
                        "command; the loop cannot terminate");
    }
    const bool taken = eval_expr(*redex->expr, c.o_value, 0) != 0;
    const std::string observation = taken ? "true" : "false";
    const std::string guard = command_text(*redex);
    StmtPtr replacement;
    if (redex->kind == Stmt::Kind::If) {
      replacement = taken ? redex->a : redex->b;
    } else {
      replacement = taken ? Stmt::seq(redex->a, redex) : Stmt::terminated();
    }
    if (is_terminated(*replacement)) {
      // The thread ran out of work; rescheduling is needed.
      return single_branch(rebuild(path, replacement), c, thread, guard,
                           observation);
    }
    StmtPtr next = descend_first(replacement, path);
    if (next->kind == Stmt::Kind::Par) {
      // New threads appeared; the scheduler must pick again.
      return single_branch(rebuild(path, next), c, thread, guard, observation);
    }
    redex = next;
  }

  StepOutcome out;
  out.thread = thread;
  out.command = command_text(*redex);

  switch (redex->kind) {
    case Stmt::Kind::Skip: {
      out.branches.push_back({Rational(1),
                              Config{rebuild(path, Stmt::terminated()),
                                     c.o_value, c.posterior},
                              ""});
      break;
    }
    case Stmt::Kind::Assign: {
      // Partition the belief by the written (observable) value.
      std::map<std::uint64_t, std::set<std::uint64_t>> classes;
      for (const auto& [s, p] : c.posterior.entries()) {
        classes[eval_expr(*redex->expr, c.o_value, s)].insert(s);
      }
      const StmtPtr rest = rebuild(path, Stmt::terminated());
      for (const auto& [written, members] : classes) {
        auto [posterior, mass] = c.posterior.condition(
            [&members](std::uint64_t s) { return members.count(s) != 0; });
        out.branches.push_back({mass,
                                Config{rest, written, std::move(posterior)},
                                std::to_string(written)});
      }
      break;
    }
    case Stmt::Kind::If:
    case Stmt::Kind::While: {
      // Secret-reading guard: a silent step that splits the belief by the
      // guard's truth value. O does not change.
      bool any_true = false;
      bool any_false = false;
      for (const auto& [s, p] : c.posterior.entries()) {
        (eval_expr(*redex->expr, c.o_value, s) != 0 ? any_true : any_false) =
            true;
      }
      auto truth = [&](std::uint64_t s) {
        return eval_expr(*redex->expr, c.o_value, s) != 0;
      };
      if (any_false) {
        StmtPtr branch_stmt = redex->kind == Stmt::Kind::If
                                  ? redex->b
                                  : Stmt::terminated();
        auto [posterior, mass] = c.posterior.condition(
            [&truth](std::uint64_t s) { return !truth(s); });
        out.branches.push_back({mass,
                                Config{rebuild(path, branch_stmt), c.o_value,
                                       std::move(posterior)},
                                "false"});
      }
      if (any_true) {
        StmtPtr branch_stmt = redex->kind == Stmt::Kind::If
                                  ? redex->a
                                  : Stmt::seq(redex->a, redex);
        auto [posterior, mass] = c.posterior.condition(truth);
        out.branches.push_back({mass,
                                Config{rebuild(path, branch_stmt), c.o_value,
                                       std::move(posterior)},
                                "true"});
      }
      break;
    }
    default:
      throw Error("internal: unexpected redex kind");
  }
  return out;
}

Config initial_config(const ProgramDecl& prog) {
  return initial_config(prog, SecretDist::uniform(prog.domain()));
}

Config initial_config(const ProgramDecl& prog, SecretDist prior) {
  return Config{prog.body, prog.initial_o, std::move(prior)};
}

std::string step_label(int thread, const std::string& command,
                       const std::string& observation) {
  std::string label = "t" + std::to_string(thread) + ": " + command;
  if (!observation.empty()) {
    label += " -> " + observation;
  }
  return label;
}

}  // namespace qif
