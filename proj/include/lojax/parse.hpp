#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "lojax/polynomial.hpp"

namespace lojax {

/// Recursive-descent parser for the expression grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := ('-'|'+')* base ('^' uint)*
///   base   := identifier | literal | 'i' | '(' expr ')'
///   literal:= uint ('/' uint)?
/// Identifiers must be declared in `vars`; "i" is always the imaginary unit
/// and is rejected as a variable name.
class ExprParser {
public:
  ExprParser(std::string text, std::vector<std::string> vars)
      : text_(std::move(text)), vars_(std::move(vars)) {
    for (const auto& v : vars_)
      if (v == "i") throw ParseError(0, "'i' is reserved for the imaginary unit");
  }

  Polynomial parse() {
    pos_ = 0;
    Polynomial p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
    return p;
  }

private:
  Polynomial parse_expr() {
    Polynomial acc = parse_term();
    for (;;) {
      skip_ws();
      if (eat('+'))
        acc += parse_term();
      else if (eat('-'))
        acc -= parse_term();
      else
        return acc;
    }
  }

  Polynomial parse_term() {
    Polynomial acc = parse_factor();
    for (;;) {
      skip_ws();
      if (eat('*'))
        acc *= parse_factor();
      else
        return acc;
    }
  }

  Polynomial parse_factor() {
    skip_ws();
    bool neg = false;
    while (peek() == '-' || peek() == '+') {
      if (text_[pos_] == '-') neg = !neg;
      ++pos_;
      skip_ws();
    }
    Polynomial base = parse_base();
    for (;;) {
      skip_ws();
      if (!eat('^')) break;
      base = base.pow(parse_uint("exponent"));
    }
    return neg ? -base : base;
  }

  Polynomial parse_base() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial p = parse_expr();
      skip_ws();
      if (!eat(')')) throw ParseError(pos_, "expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_literal();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      std::string name = parse_ident();
      if (name == "i") return Polynomial::constant(vars_, GaussianRational::unit_i());
      for (std::size_t k = 0; k < vars_.size(); ++k)
        if (vars_[k] == name) return Polynomial::variable(vars_, k);
      throw ParseError(start, "unknown identifier '" + name + "'");
    }
    throw ParseError(pos_, c == '\0' ? std::string("unexpected end of input")
                                     : "unexpected character '" + std::string(1, c) + "'");
  }

  Polynomial parse_literal() {
    BigInt num = parse_bigint("integer literal");
    skip_ws();
    if (eat('/')) {
      skip_ws();
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw ParseError(pos_, "expected denominator after '/'");
      BigInt den = parse_bigint("denominator");
      if (den == 0) throw ParseError(pos_, "zero denominator");
      return Polynomial::constant(vars_, GaussianRational(Rational(num, den)));
    }
    return Polynomial::constant(vars_, GaussianRational(Rational(num)));
  }

  unsigned parse_uint(const char* what) {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError(pos_, std::string("expected non-negative integer ") + what);
    BigInt v = parse_bigint(what);
    if (v > 1000) throw ParseError(pos_, std::string(what) + " too large");
    return v.convert_to<unsigned>();
  }

  BigInt parse_bigint(const char* what) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError(start, std::string("expected ") + what);
    return BigInt(text_.substr(start, pos_ - start));
  }

  std::string parse_ident() {
    std::size_t start = pos_;
    ++pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string text_;
  std::vector<std::string> vars_;
  std::size_t pos_ = 0;
};

inline Polynomial parse_poly(const std::string& text, std::vector<std::string> vars) {
  return ExprParser(text, std::move(vars)).parse();
}

}  // namespace lojax
