// TPTP TFF1/TFF0/FOF reading and bit-stable writing.

#ifndef POLYENC_TPTP_HPP
#define POLYENC_TPTP_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "polyenc/ast.hpp"

namespace polyenc {

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, std::size_t col, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
        line(line), col(col) {}
  std::size_t line;
  std::size_t col;
};

enum class StatementKind { type_decl, formula };

// Per-statement metadata as read from the file (before conjecture negation
// the role field says what the file said).
struct AnnotatedFormula {
  std::string name;
  Role role = Role::axiom;
  StatementKind kind = StatementKind::formula;
};

struct ParseOptions {
  Level level = Level::polymorphic;
  // Encoder-reserved names ($$-symbols, A__-variables) are rejected unless
  // this is set; re-parsing encoder output sets it.
  bool allow_reserved = false;
  // Directory against which include() is resolved; empty disables includes.
  std::string include_dir;
};

struct ParseResult {
  Problem problem;
  std::vector<AnnotatedFormula> statements;
};

ParseResult parse(const std::string& text, const ParseOptions& opts);

// Canonical text form. The level must match the problem's level.
std::string print(const Problem& p, Level level);

} // namespace polyenc

#endif
