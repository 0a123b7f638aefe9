#include "qif/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "qif/errors.hpp"

namespace qif {

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  // keywords
  KwSecret,
  KwPublic,
  KwIn,
  KwIf,
  KwThen,
  KwElse,
  KwWhile,
  KwDo,
  KwSkip,
  KwMod,
  // punctuation and operators
  Semi,
  Colon,
  Comma,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Assign,  // :=
  ParOp,   // ||
  Plus,
  Minus,
  Star,
  Slash,
  Amp,
  Pipe,
  Caret,
  Shl,
  Shr,
  Eq,  // = or ==
  Ne,  // !=
  Lt,
  Le,
  Gt,
  Ge,
};

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t value = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      skip_blank();
      if (pos_ >= src_.size()) {
        tokens.push_back({Tok::End, "", 0, line_, column_});
        return tokens;
      }
      tokens.push_back(next());
    }
  }

 private:
  void skip_blank() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          advance();
        }
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  Token make(Tok kind, std::string text) {
    Token t{kind, std::move(text), 0, line_, column_};
    for (std::size_t i = 0; i < t.text.size(); ++i) {
      advance();
    }
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, column_);
  }

  Token next() {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return word();
    }
    switch (c) {
      case ';':
        return make(Tok::Semi, ";");
      case ',':
        return make(Tok::Comma, ",");
      case '{':
        return make(Tok::LBrace, "{");
      case '}':
        return make(Tok::RBrace, "}");
      case '(':
        return make(Tok::LParen, "(");
      case ')':
        return make(Tok::RParen, ")");
      case '+':
        return make(Tok::Plus, "+");
      case '-':
        return make(Tok::Minus, "-");
      case '*':
        return make(Tok::Star, "*");
      case '/':
        return make(Tok::Slash, "/");
      case '%':
        return make(Tok::KwMod, "%");
      case '&':
        return make(Tok::Amp, "&");
      case '^':
        return make(Tok::Caret, "^");
      case '|':
        return peek(1) == '|' ? make(Tok::ParOp, "||") : make(Tok::Pipe, "|");
      case ':':
        return peek(1) == '=' ? make(Tok::Assign, ":=") : make(Tok::Colon, ":");
      case '=':
        return peek(1) == '=' ? make(Tok::Eq, "==") : make(Tok::Eq, "=");
      case '!':
        if (peek(1) == '=') {
          return make(Tok::Ne, "!=");
        }
        fail("unexpected character '!'");
      case '<':
        if (peek(1) == '<') {
          return make(Tok::Shl, "<<");
        }
        return peek(1) == '=' ? make(Tok::Le, "<=") : make(Tok::Lt, "<");
      case '>':
        if (peek(1) == '>') {
          return make(Tok::Shr, ">>");
        }
        return peek(1) == '=' ? make(Tok::Ge, ">=") : make(Tok::Gt, ">");
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  Token word() {
    std::size_t end = pos_;
    while (end < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[end])) ||
            src_[end] == '_')) {
      ++end;
    }
    std::string text(src_.substr(pos_, end - pos_));
    Tok kind = Tok::Ident;
    if (text == "secret") {
      kind = Tok::KwSecret;
    } else if (text == "public") {
      kind = Tok::KwPublic;
    } else if (text == "in") {
      kind = Tok::KwIn;
    } else if (text == "if") {
      kind = Tok::KwIf;
    } else if (text == "then") {
      kind = Tok::KwThen;
    } else if (text == "else") {
      kind = Tok::KwElse;
    } else if (text == "while") {
      kind = Tok::KwWhile;
    } else if (text == "do") {
      kind = Tok::KwDo;
    } else if (text == "skip") {
      kind = Tok::KwSkip;
    } else if (text == "mod") {
      kind = Tok::KwMod;
    }
    return make(kind, std::move(text));
  }

  Token number() {
    int base = 10;
    std::size_t start = pos_;
    std::size_t end = pos_;
    if (peek() == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
      base = 2;
      end += 2;
    } else if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      base = 16;
      end += 2;
    }
    const std::size_t digits_start = end;
    auto is_digit = [&](char c) {
      if (base == 2) {
        return c == '0' || c == '1';
      }
      if (base == 16) {
        return std::isxdigit(static_cast<unsigned char>(c)) != 0;
      }
      return std::isdigit(static_cast<unsigned char>(c)) != 0;
    };
    while (end < src_.size() && is_digit(src_[end])) {
      ++end;
    }
    if (end == digits_start) {
      fail("malformed number literal");
    }
    std::uint64_t value = 0;
    for (std::size_t i = digits_start; i < end; ++i) {
      const char c = src_[i];
      const int digit = std::isdigit(static_cast<unsigned char>(c))
                            ? c - '0'
                            : std::tolower(c) - 'a' + 10;
      if (value > (UINT64_MAX - digit) / base) {
        fail("integer literal does not fit in 64 bits");
      }
      value = value * base + digit;
    }
    Token t = make(Tok::Number, std::string(src_.substr(start, end - start)));
    t.value = value;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(Lexer(src).run()) {}

  ProgramDecl run() {
    ProgramDecl prog;
    parse_secret_decl(prog);
    parse_public_decl(prog);
    prog.body = parse_stmts(/*inside_block=*/false);
    expect(Tok::End, "expected end of input");
    return prog;
  }

 private:
  const Token& cur() const { return tokens_[index_]; }

  bool at(Tok kind) const { return cur().kind == kind; }

  Token take() { return tokens_[index_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().column);
  }

  Token expect(Tok kind, const std::string& msg) {
    if (!at(kind)) {
      fail(msg + ", got '" + (at(Tok::End) ? "end of input" : cur().text) + "'");
    }
    return take();
  }

  void expect_variable(char name) {
    const Token t = expect(Tok::Ident, std::string("expected variable ") + name);
    if (t.text != std::string(1, name)) {
      throw ParseError("expected variable " + std::string(1, name) + ", got '" +
                           t.text + "'",
                       t.line, t.column);
    }
  }

  void parse_secret_decl(ProgramDecl& prog) {
    expect(Tok::KwSecret, "expected 'secret' declaration");
    expect_variable('S');
    if (at(Tok::Colon)) {
      take();
      const Token bits = expect(Tok::Number, "expected secret bit width");
      if (bits.value < 1 || bits.value > 63) {
        throw ParseError("secret bit width must be between 1 and 63",
                         bits.line, bits.column);
      }
      prog.secret_bits = static_cast<unsigned>(bits.value);
    } else if (at(Tok::KwIn)) {
      take();
      expect(Tok::LBrace, "expected '{' after 'in'");
      std::vector<std::uint64_t> values;
      for (;;) {
        const Token v = expect(Tok::Number, "expected a secret domain value");
        values.push_back(v.value);
        if (at(Tok::Comma)) {
          take();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "expected '}' after secret domain");
      std::sort(values.begin(), values.end());
      for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] == values[i - 1]) {
          fail("duplicate value " + std::to_string(values[i]) +
               " in secret domain");
        }
      }
      prog.explicit_domain = std::move(values);
    } else {
      fail("expected ':' or 'in' in the secret declaration");
    }
    expect(Tok::Semi, "expected ';' after the secret declaration");
  }

  void parse_public_decl(ProgramDecl& prog) {
    expect(Tok::KwPublic, "expected 'public' declaration");
    expect_variable('O');
    expect(Tok::Assign, "expected ':=' in the public declaration");
    const Token v = expect(Tok::Number, "expected the initial public value");
    prog.initial_o = v.value;
    expect(Tok::Semi, "expected ';' after the public declaration");
  }

  struct Parsed {
    StmtPtr stmt;
    bool braced_end;  // last token consumed was '}', so ';' is optional
  };

  StmtPtr parse_stmts(bool inside_block) {
    std::vector<StmtPtr> elements;
    while (!at(Tok::End) && !at(Tok::RBrace)) {
      Parsed p = parse_par();
      if (p.braced_end) {
        if (at(Tok::Semi)) {
          take();
        }
      } else {
        expect(Tok::Semi, "expected ';' after statement");
      }
      elements.push_back(std::move(p.stmt));
    }
    if (elements.empty()) {
      fail(inside_block ? "expected a statement inside '{ }'"
                        : "expected at least one statement");
    }
    StmtPtr result = elements.back();
    for (auto it = elements.rbegin() + 1; it != elements.rend(); ++it) {
      result = Stmt::seq(*it, std::move(result));
    }
    return result;
  }

  Parsed parse_par() {
    Parsed left = parse_unit();
    while (at(Tok::ParOp)) {
      take();
      Parsed right = parse_unit();
      left.stmt = Stmt::par(std::move(left.stmt), std::move(right.stmt));
      left.braced_end = right.braced_end;
    }
    return left;
  }

  Parsed parse_unit() {
    switch (cur().kind) {
      case Tok::KwSkip:
        take();
        return {Stmt::skip(), false};
      case Tok::Ident: {
        const Token name = take();
        if (name.text == "O") {
          expect(Tok::Assign, "expected ':=' after O");
          ExprPtr rhs = parse_expr();
          return {Stmt::assign(std::move(rhs)), false};
        }
        if (name.text == "S") {
          throw ParseError("cannot assign to the secret variable S", name.line,
                           name.column);
        }
        throw ParseError("undeclared variable " + name.text, name.line,
                         name.column);
      }
      case Tok::KwIf: {
        take();
        expect(Tok::LParen, "expected '(' after 'if'");
        ExprPtr guard = parse_expr();
        expect(Tok::RParen, "expected ')' after the guard");
        expect(Tok::KwThen, "expected 'then'");
        Parsed then_branch = parse_unit();
        expect(Tok::KwElse, "expected 'else'");
        Parsed else_branch = parse_unit();
        return {Stmt::if_(std::move(guard), std::move(then_branch.stmt),
                          std::move(else_branch.stmt)),
                else_branch.braced_end};
      }
      case Tok::KwWhile: {
        take();
        expect(Tok::LParen, "expected '(' after 'while'");
        ExprPtr guard = parse_expr();
        expect(Tok::RParen, "expected ')' after the guard");
        expect(Tok::KwDo, "expected 'do'");
        Parsed body = parse_unit();
        return {Stmt::while_(std::move(guard), std::move(body.stmt)),
                body.braced_end};
      }
      case Tok::LBrace: {
        take();
        StmtPtr body = parse_stmts(/*inside_block=*/true);
        expect(Tok::RBrace, "expected '}'");
        return {std::move(body), true};
      }
      default:
        fail("expected a statement");
    }
  }

  ExprPtr parse_expr() { return parse_bitor(); }

  ExprPtr parse_bitor() {
    ExprPtr e = parse_bitxor();
    while (at(Tok::Pipe)) {
      take();
      e = Expr::binary(BinOp::BitOr, std::move(e), parse_bitxor());
    }
    return e;
  }

  ExprPtr parse_bitxor() {
    ExprPtr e = parse_bitand();
    while (at(Tok::Caret)) {
      take();
      e = Expr::binary(BinOp::BitXor, std::move(e), parse_bitand());
    }
    return e;
  }

  ExprPtr parse_bitand() {
    ExprPtr e = parse_equality();
    while (at(Tok::Amp)) {
      take();
      e = Expr::binary(BinOp::BitAnd, std::move(e), parse_equality());
    }
    return e;
  }

  ExprPtr parse_equality() {
    ExprPtr e = parse_relational();
    while (at(Tok::Eq) || at(Tok::Ne)) {
      const BinOp op = at(Tok::Eq) ? BinOp::Eq : BinOp::Ne;
      take();
      e = Expr::binary(op, std::move(e), parse_relational());
    }
    return e;
  }

  ExprPtr parse_relational() {
    ExprPtr e = parse_shift();
    for (;;) {
      BinOp op;
      if (at(Tok::Lt)) {
        op = BinOp::Lt;
      } else if (at(Tok::Le)) {
        op = BinOp::Le;
      } else if (at(Tok::Gt)) {
        op = BinOp::Gt;
      } else if (at(Tok::Ge)) {
        op = BinOp::Ge;
      } else {
        return e;
      }
      take();
      e = Expr::binary(op, std::move(e), parse_shift());
    }
  }

  ExprPtr parse_shift() {
    ExprPtr e = parse_additive();
    for (;;) {
      if (at(Tok::Shl)) {
        take();
        e = Expr::binary(BinOp::Shl, std::move(e), parse_additive());
      } else if (at(Tok::Shr)) {
        take();
        e = Expr::binary(BinOp::Shr, std::move(e), parse_additive());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_additive() {
    ExprPtr e = parse_multiplicative();
    for (;;) {
      if (at(Tok::Plus)) {
        take();
        e = Expr::binary(BinOp::Add, std::move(e), parse_multiplicative());
      } else if (at(Tok::Minus)) {
        take();
        e = Expr::binary(BinOp::Sub, std::move(e), parse_multiplicative());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr e = parse_primary();
    for (;;) {
      if (at(Tok::Star)) {
        take();
        e = Expr::binary(BinOp::Mul, std::move(e), parse_primary());
      } else if (at(Tok::Slash)) {
        take();
        e = Expr::binary(BinOp::Div, std::move(e), parse_primary());
      } else if (at(Tok::KwMod)) {
        take();
        e = Expr::binary(BinOp::Mod, std::move(e), parse_primary());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_primary() {
    switch (cur().kind) {
      case Tok::Number:
        return Expr::constant(take().value);
      case Tok::Ident: {
        const Token name = take();
        if (name.text == "S") {
          return Expr::variable(Var::S);
        }
        if (name.text == "O") {
          return Expr::variable(Var::O);
        }
        throw ParseError("undeclared variable " + name.text, name.line,
                         name.column);
      }
      case Tok::LParen: {
        take();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      default:
        fail("expected an expression");
    }
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

// --- pretty printing ---------------------------------------------------

void flatten_seq(const Stmt& s, std::vector<const Stmt*>& out) {
  if (s.kind == Stmt::Kind::Seq) {
    flatten_seq(*s.a, out);
    flatten_seq(*s.b, out);
  } else {
    out.push_back(&s);
  }
}

void print_inline_seq(std::string& out, const Stmt& stmt);
void print_par_chain(std::string& out, const Stmt& par);

// One statement without its terminator, single line.
void print_inline_stmt(std::string& out, const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Skip:
      out += "skip";
      return;
    case Stmt::Kind::Assign:
      out += "O := ";
      out += to_string(*s.expr);
      return;
    case Stmt::Kind::If:
      out += "if (";
      out += to_string(*s.expr);
      out += ") then { ";
      print_inline_seq(out, *s.a);
      out += " } else { ";
      print_inline_seq(out, *s.b);
      out += " }";
      return;
    case Stmt::Kind::While:
      out += "while (";
      out += to_string(*s.expr);
      out += ") do { ";
      print_inline_seq(out, *s.a);
      out += " }";
      return;
    case Stmt::Kind::Par:
      print_par_chain(out, s);
      return;
    case Stmt::Kind::Seq:
      out += "{ ";
      print_inline_seq(out, s);
      out += " }";
      return;
    case Stmt::Kind::Terminated:
      out += "skip";  // never reached for parsed programs
      return;
  }
}

// Statements of a block rendered on one line: "O := 1; skip;".
void print_inline_seq(std::string& out, const Stmt& stmt) {
  std::vector<const Stmt*> elements;
  flatten_seq(stmt, elements);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    print_inline_stmt(out, *elements[i]);
    const Stmt::Kind k = elements[i]->kind;
    if (k == Stmt::Kind::Assign || k == Stmt::Kind::Skip ||
        k == Stmt::Kind::Par) {
      out += ';';
    }
  }
}

void print_par_operand(std::string& out, const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Assign:
    case Stmt::Kind::Skip:
      print_inline_stmt(out, s);
      return;
    case Stmt::Kind::Par:
      // A Par on the right of '||' must be braced to survive reparsing
      // (the operator associates to the left).
      out += "{ ";
      print_par_chain(out, s);
      out += "; }";
      return;
    default:
      out += "{ ";
      print_inline_seq(out, s);
      out += " }";
      return;
  }
}

void print_par_chain(std::string& out, const Stmt& par) {
  // Left-nested chains flatten without braces.
  if (par.a->kind == Stmt::Kind::Par) {
    print_par_chain(out, *par.a);
  } else {
    print_par_operand(out, *par.a);
  }
  out += " || ";
  print_par_operand(out, *par.b);
}

void print_element(std::string& out, const Stmt& s, int indent);

void print_block(std::string& out, const Stmt& body, int indent) {
  std::vector<const Stmt*> elements;
  flatten_seq(body, elements);
  for (const Stmt* e : elements) {
    print_element(out, *e, indent);
  }
}

void indent_by(std::string& out, int indent) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
}

void print_element(std::string& out, const Stmt& s, int indent) {
  indent_by(out, indent);
  switch (s.kind) {
    case Stmt::Kind::Skip:
      out += "skip;\n";
      return;
    case Stmt::Kind::Assign:
      out += "O := ";
      out += to_string(*s.expr);
      out += ";\n";
      return;
    case Stmt::Kind::Par: {
      print_par_chain(out, s);
      // The chain may end with '}' already; the ';' is harmless either way.
      out += ";\n";
      return;
    }
    case Stmt::Kind::If:
      out += "if (";
      out += to_string(*s.expr);
      out += ") then {\n";
      print_block(out, *s.a, indent + 1);
      indent_by(out, indent);
      out += "} else {\n";
      print_block(out, *s.b, indent + 1);
      indent_by(out, indent);
      out += "}\n";
      return;
    case Stmt::Kind::While:
      out += "while (";
      out += to_string(*s.expr);
      out += ") do {\n";
      print_block(out, *s.a, indent + 1);
      indent_by(out, indent);
      out += "}\n";
      return;
    case Stmt::Kind::Seq:
      // flatten_seq never yields a Seq element
      return;
    case Stmt::Kind::Terminated:
      return;
  }
}

}  // namespace

ProgramDecl parse(std::string_view source) {
  return Parser(source).run();
}

ProgramDecl parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open program file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ProgramDecl prog = parse(buffer.str());
  prog.name = std::filesystem::path(path).stem().string();
  return prog;
}

std::string pretty_print(const ProgramDecl& prog) {
  std::string out = "secret S ";
  if (prog.explicit_domain) {
    out += "in {";
    for (std::size_t i = 0; i < prog.explicit_domain->size(); ++i) {
      if (i > 0) {
        out += ", ";
      }
      out += std::to_string((*prog.explicit_domain)[i]);
    }
    out += "};\n";
  } else {
    out += ": " + std::to_string(prog.secret_bits) + ";\n";
  }
  out += "public O := " + std::to_string(prog.initial_o) + ";\n";
  print_block(out, *prog.body, 0);
  return out;
}

}  // namespace qif
