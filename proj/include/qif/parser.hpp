#pragma once

#include <string>
#include <string_view>

#include "qif/ast.hpp"

namespace qif {

// Grammar (comments run from '#' to end of line):
//
//   program  :=  secret-decl public-decl stmt+
//   secret-decl := "secret" "S" (":" INT | "in" "{" INT ("," INT)* "}") ";"
//   public-decl := "public" "O" ":=" INT ";"
//   stmt     :=  par ";"            (";" optional when par ends with "}")
//   par      :=  unit ("||" unit)*
//   unit     :=  "skip" | "O" ":=" expr
//              | "if" "(" expr ")" "then" unit "else" unit
//              | "while" "(" expr ")" "do" unit
//              | "{" stmt+ "}"
//
// Expressions use C-like precedence ( | ^ & , = !=, < <= > >=, << >>, + -,
// * / mod ). Comparisons yield 0/1. Literals: decimal, 0b…, 0x….
ProgramDecl parse(std::string_view source);

// Reads and parses a program file; the program name is the file stem.
ProgramDecl parse_file(const std::string& path);

// Emits parseable source; parse(pretty_print(p)) is structurally equal to p.
std::string pretty_print(const ProgramDecl& prog);

}  // namespace qif
