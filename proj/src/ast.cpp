#include "qif/ast.hpp"

#include <utility>

#include "qif/errors.hpp"

namespace qif {

ExprPtr Expr::constant(std::uint64_t v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->value = v;
  return e;
}

ExprPtr Expr::variable(Var v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->var = v;
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Bin;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) {
    return false;
  }
  switch (a.kind) {
    case Expr::Kind::Const:
      return a.value == b.value;
    case Expr::Kind::Var:
      return a.var == b.var;
    case Expr::Kind::Bin:
      return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool reads_secret(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return false;
    case Expr::Kind::Var:
      return e.var == Var::S;
    case Expr::Kind::Bin:
      return reads_secret(*e.lhs) || reads_secret(*e.rhs);
  }
  return false;
}

namespace {

struct OpInfo {
  int prec;
  const char* text;
};

OpInfo op_info(BinOp op) {
  switch (op) {
    case BinOp::BitOr:
      return {1, "|"};
    case BinOp::BitXor:
      return {2, "^"};
    case BinOp::BitAnd:
      return {3, "&"};
    case BinOp::Eq:
      return {4, "="};
    case BinOp::Ne:
      return {4, "!="};
    case BinOp::Lt:
      return {5, "<"};
    case BinOp::Le:
      return {5, "<="};
    case BinOp::Gt:
      return {5, ">"};
    case BinOp::Ge:
      return {5, ">="};
    case BinOp::Shl:
      return {6, "<<"};
    case BinOp::Shr:
      return {6, ">>"};
    case BinOp::Add:
      return {7, "+"};
    case BinOp::Sub:
      return {7, "-"};
    case BinOp::Mul:
      return {8, "*"};
    case BinOp::Div:
      return {8, "/"};
    case BinOp::Mod:
      return {8, "mod"};
  }
  return {0, "?"};
}

void print_expr(std::string& out, const Expr& e, int parent_prec,
                bool right_side) {
  switch (e.kind) {
    case Expr::Kind::Const:
      out += std::to_string(e.value);
      return;
    case Expr::Kind::Var:
      out += (e.var == Var::S) ? 'S' : 'O';
      return;
    case Expr::Kind::Bin: {
      const OpInfo info = op_info(e.op);
      const bool parens =
          info.prec < parent_prec || (info.prec == parent_prec && right_side);
      if (parens) {
        out += '(';
      }
      print_expr(out, *e.lhs, info.prec, false);
      out += ' ';
      out += info.text;
      out += ' ';
      print_expr(out, *e.rhs, info.prec, true);
      if (parens) {
        out += ')';
      }
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print_expr(out, e, 0, false);
  return out;
}

StmtPtr Stmt::skip() {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Skip;
  return s;
}

StmtPtr Stmt::assign(ExprPtr rhs) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Assign;
  s->expr = std::move(rhs);
  return s;
}

StmtPtr Stmt::seq(StmtPtr first, StmtPtr second) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Seq;
  s->a = std::move(first);
  s->b = std::move(second);
  return s;
}

StmtPtr Stmt::if_(ExprPtr guard, StmtPtr then_branch, StmtPtr else_branch) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::If;
  s->expr = std::move(guard);
  s->a = std::move(then_branch);
  s->b = std::move(else_branch);
  return s;
}

StmtPtr Stmt::while_(ExprPtr guard, StmtPtr body) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::While;
  s->expr = std::move(guard);
  s->a = std::move(body);
  return s;
}

StmtPtr Stmt::par(StmtPtr left, StmtPtr right) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Par;
  s->a = std::move(left);
  s->b = std::move(right);
  return s;
}

StmtPtr Stmt::terminated() {
  static const StmtPtr instance = [] {
    auto s = std::make_shared<Stmt>();
    s->kind = Kind::Terminated;
    return s;
  }();
  return instance;
}

bool equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) {
    return false;
  }
  switch (a.kind) {
    case Stmt::Kind::Skip:
    case Stmt::Kind::Terminated:
      return true;
    case Stmt::Kind::Assign:
      return equal(*a.expr, *b.expr);
    case Stmt::Kind::Seq:
    case Stmt::Kind::Par:
      return equal(*a.a, *b.a) && equal(*a.b, *b.b);
    case Stmt::Kind::If:
      return equal(*a.expr, *b.expr) && equal(*a.a, *b.a) && equal(*a.b, *b.b);
    case Stmt::Kind::While:
      return equal(*a.expr, *b.expr) && equal(*a.a, *b.a);
  }
  return false;
}

namespace {

// 2^20 values is already a million map entries per distribution; anything
// wider is not enumerable with this exact representation.
constexpr unsigned kMaxEnumBits = 20;

}  // namespace

std::vector<std::uint64_t> ProgramDecl::domain() const {
  if (explicit_domain) {
    return *explicit_domain;
  }
  if (secret_bits == 0) {
    throw DomainError("program declares no secret domain");
  }
  if (secret_bits > kMaxEnumBits) {
    throw DomainError("secret domain of 2^" + std::to_string(secret_bits) +
                      " values is too large to enumerate (limit 2^" +
                      std::to_string(kMaxEnumBits) + ")");
  }
  std::vector<std::uint64_t> values(std::uint64_t{1} << secret_bits);
  for (std::uint64_t i = 0; i < values.size(); ++i) {
    values[i] = i;
  }
  return values;
}

bool equal(const ProgramDecl& a, const ProgramDecl& b) {
  return a.secret_bits == b.secret_bits &&
         a.explicit_domain == b.explicit_domain && a.initial_o == b.initial_o &&
         equal(*a.body, *b.body);
}

}  // namespace qif
