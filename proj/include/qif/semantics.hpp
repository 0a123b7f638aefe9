#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qif/ast.hpp"
#include "qif/dist.hpp"

namespace qif {

// One state of the execution model: remaining program, current public value,
// and the attacker's posterior over the secret. Structural equality on all
// three fields is state identity.
struct Config {
  StmtPtr program;
  std::uint64_t o_value = 0;
  SecretDist posterior;
};

bool same_state(const Config& a, const Config& b);

struct Branch {
  Rational probability;  // mass of this observable outcome, exact
  Config next;
  // What distinguishes the branch: the written value for assignments,
  // "true"/"false" for guards. Empty for skip.
  std::string observation;
};

// Result of one scheduled atomic step: a distribution over successor
// configurations, split by observable outcome. Branch masses sum to 1.
struct StepOutcome {
  std::vector<Branch> branches;
  int thread = 0;
  std::string command;  // the executed atomic command, pretty-printed
};

// Number of runnable threads (redexes) of the remaining program.
int thread_count(const Stmt& program);

// Indices of the runnable threads, left to right across the Par structure:
// {0, ..., thread_count-1}. Empty exactly when the program is Terminated.
std::vector<int> enabled_threads(const Config& c);

// Arithmetic over non-negative integers: subtraction truncates at zero,
// add/mul wrap modulo 2^64, shifts of 64 or more yield 0, comparisons give
// 0/1. Throws EvalError on division or modulo by zero.
std::uint64_t eval_expr(const Expr& e, std::uint64_t o, std::uint64_t s);

// Executes one atomic command of the chosen thread. Guards that read only O
// resolve without consuming the turn; the uncovered command runs in the same
// step (this is what folds an if over the public state into its branch's
// assignment). Guards that read S are their own silent step and split the
// posterior by truth value. Assignments split it by written value.
StepOutcome step(const Config& c, int thread);

// Initial state: full body, declared initial O, uniform prior (or the given
// one via the overload).
Config initial_config(const ProgramDecl& prog);
Config initial_config(const ProgramDecl& prog, SecretDist prior);

// "t<i>: <command> -> <observation>"; shared label format for edges and for
// the oracle's path keys.
std::string step_label(int thread, const std::string& command,
                       const std::string& observation);

}  // namespace qif
