#pragma once

#include <cctype>
#include <string>

#include "cbbc/polynomial.hpp"

namespace cbbc {

// Shared expression grammar for every input file:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' uint)?
//   base   := number | identifier | '(' expr ')'
// Numbers are integers, fractions "3/4", or decimals "0.33" (parsed exactly).
// Whitespace-insensitive; there is no implicit multiplication and no division
// operator outside numeric literals.
class ExprParser {
 public:
  explicit ExprParser(std::string text) : text_(std::move(text)) {}

  Polynomial parse() {
    Polynomial p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("expression error at position " + std::to_string(pos_) +
                     " in \"" + text_ + "\": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Polynomial parse_expr() {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    Polynomial acc = parse_term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+'))
        acc += parse_term();
      else if (eat('-'))
        acc -= parse_term();
      else
        break;
    }
    return acc;
  }

  Polynomial parse_term() {
    Polynomial acc = parse_factor();
    while (eat('*')) acc = acc * parse_factor();
    return acc;
  }

  Polynomial parse_factor() {
    Polynomial base = parse_base();
    if (eat('^')) {
      skip_ws();
      size_t start = pos_;
      while (pos_ < text_.size() && isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (pos_ == start) fail("expected integer exponent after '^'");
      unsigned e = static_cast<unsigned>(std::stoul(text_.substr(start, pos_ - start)));
      return base.pow(e);
    }
    return base;
  }

  Polynomial parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_' || text_[pos_] == '\''))
        ++pos_;
      return Polynomial::variable(text_.substr(start, pos_ - start));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Polynomial parse_number() {
    size_t start = pos_;
    while (pos_ < text_.size() && (isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '.'))
      ++pos_;
    // fraction literal: digits '/' digits, with no intervening space
    if (pos_ < text_.size() && text_[pos_] == '/' && pos_ + 1 < text_.size() &&
        isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      while (pos_ < text_.size() && isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    return Polynomial::constant(parse_rat(text_.substr(start, pos_ - start)));
  }

  std::string text_;
  size_t pos_ = 0;
};

inline Polynomial parse_polynomial(const std::string& text) {
  return ExprParser(text).parse();
}

}  // namespace cbbc
