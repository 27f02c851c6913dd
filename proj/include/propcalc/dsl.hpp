#pragma once

// Text syntax for prop elements.
//
//   expr    := ["-"] prod (("+" | "-") prod)*
//   prod    := scalar? chain ("." chain)*        composition, g . f applies f first
//   chain   := atom ("*" atom)*                  tensor; binds tighter than "."
//   atom    := NAME ["^{" INT ("," INT)* "}"] | PERM | "(" expr ")"
//   scalar  := [INT ["/" INT]] ["h" ["^" ["-"] INT]]
//   PERM    := "(" DIGITS ")" or "(" INT ("," INT)* ")"
//
// A tensor chain whose factors all carry superscripts is the labeled tensor
// x_1^{I_1} ⋯ x_p^{I_p}. "id" is the one-strand identity; "h" is ħ.

#include <stdexcept>
#include <string>
#include <vector>

#include "propcalc/diagram.hpp"
#include "propcalc/lincomb.hpp"

namespace propcalc {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

struct ExprScalar {
  Rational c{1};
  int h = 0;
  bool operator==(const ExprScalar&) const = default;
};

struct Expr {
  enum class Kind { Leaf, Perm, Compose, Tensor, Labeled, Sum };
  Kind kind = Kind::Leaf;
  std::string text;                // Leaf: name; Perm: literal
  std::vector<int> labels;         // Leaf inside Labeled
  std::vector<Expr> kids;          // Compose/Tensor/Labeled/Sum operands
  std::vector<ExprScalar> coeffs;  // Sum only, one per kid
  int line = 1, column = 1;        // ignored by ==

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.kind == b.kind && a.text == b.text && a.labels == b.labels && a.kids == b.kids && a.coeffs == b.coeffs;
  }
};

Expr parse_expr(const std::string& text);
std::string print_expr(const Expr& e);

/// Lowers against `sig`; arity errors carry the position of the offending node.
/// With S = Rational, powers of h are rejected.
template <typename S>
LinComb<S> lower(const Expr& e, const Signature& sig);

template <typename S>
LinComb<S> parse_lincomb(const std::string& text, const Signature& sig) {
  return lower<S>(parse_expr(text), sig);
}

}  // namespace propcalc
