#pragma once

#include <string_view>

namespace divgen {

// Recursive-descent validator for the arithmetic-expression grammar, written
// independently of the generator so it can serve as a round-trip oracle.
//
//   expression -> operand operator operand
//   operand    -> number | '(' expression ')'
//   number     -> ['-'] digit+
namespace parser_detail {

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
};

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool parse_number(Cursor& c) {
  c.eat('-');
  if (!is_digit(c.peek())) return false;
  while (is_digit(c.peek())) ++c.pos;
  return true;
}

bool parse_expression(Cursor& c);

inline bool parse_operand(Cursor& c) {
  if (c.peek() == '(') {
    ++c.pos;
    if (!parse_expression(c)) return false;
    return c.eat(')');
  }
  return parse_number(c);
}

inline bool parse_expression(Cursor& c) {
  if (!parse_operand(c)) return false;
  const char op = c.peek();
  if (op != '+' && op != '-' && op != '*' && op != '/') return false;
  ++c.pos;
  return parse_operand(c);
}

}  // namespace parser_detail

/// True iff s is a sentence of the arithmetic-expression grammar.
inline bool validate_expression(std::string_view s) {
  parser_detail::Cursor c{s};
  return parser_detail::parse_expression(c) && c.done();
}

}  // namespace divgen
