#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qif {

enum class Var { S, O };

enum class BinOp {
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  BitAnd,
  BitOr,
  BitXor,
  Shl,
  Shr,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expressions evaluate over non-negative integers; comparisons yield 0/1.
struct Expr {
  enum class Kind { Const, Var, Bin };

  Kind kind;
  std::uint64_t value = 0;  // Const
  Var var = Var::S;         // Var
  BinOp op = BinOp::Add;    // Bin
  ExprPtr lhs, rhs;

  static ExprPtr constant(std::uint64_t v);
  static ExprPtr variable(Var v);
  static ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
};

bool equal(const Expr& a, const Expr& b);
bool reads_secret(const Expr& e);

// Minimal-parenthesis rendering, reparseable.
std::string to_string(const Expr& e);

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

// Statements of the analyzed language. Terminated marks fully executed code;
// it never appears in parsed programs and never as a child of Seq or Par.
struct Stmt {
  enum class Kind { Skip, Assign, Seq, If, While, Par, Terminated };

  Kind kind;
  ExprPtr expr;  // Assign rhs; If/While guard
  StmtPtr a, b;  // Seq first/second; If then/else; While body in a; Par left/right

  static StmtPtr skip();
  static StmtPtr assign(ExprPtr rhs);
  static StmtPtr seq(StmtPtr first, StmtPtr second);
  static StmtPtr if_(ExprPtr guard, StmtPtr then_branch, StmtPtr else_branch);
  static StmtPtr while_(ExprPtr guard, StmtPtr body);
  static StmtPtr par(StmtPtr left, StmtPtr right);
  static StmtPtr terminated();
};

bool equal(const Stmt& a, const Stmt& b);

inline bool is_terminated(const Stmt& s) {
  return s.kind == Stmt::Kind::Terminated;
}

// A parsed program: secret domain declaration, known initial public value,
// and the body.
struct ProgramDecl {
  std::string name = "program";
  unsigned secret_bits = 0;  // unused when an explicit domain is given
  std::optional<std::vector<std::uint64_t>> explicit_domain;
  std::uint64_t initial_o = 0;
  StmtPtr body;

  // Materialized secret domain, ascending. Throws DomainError when the
  // declared width is too large to enumerate.
  std::vector<std::uint64_t> domain() const;
};

bool equal(const ProgramDecl& a, const ProgramDecl& b);

}  // namespace qif
