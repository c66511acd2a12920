#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "totalimage/polynomial.hpp"

namespace totalimage {

// Recursive-descent parser for the polynomial text syntax:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*      '/' only by a nonzero number
//   factor := atom ['^' integer]
//   atom   := integer | identifier | '(' expr ')'
// Juxtaposition is rejected. Positions in errors are 1-based and offset by
// (line, col0) so callers can report file positions.
class PolyParser {
public:
  PolyParser(std::string_view text, RingPtr ring, int line = 1, int col0 = 0)
      : s_(text), ring_(std::move(ring)), line_(line), col0_(col0) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

private:
  std::string_view s_;
  RingPtr ring_;
  int line_, col0_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError(line_, col0_ + int(pos_) + 1, msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool at_atom_start() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
  }

  Polynomial expr() {
    skip();
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    Polynomial acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else break;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      if (eat('*')) {
        acc = acc * factor();
      } else if (eat('/')) {
        std::size_t at = pos_;
        Polynomial d = factor();
        if (!d.is_constant() || d.is_zero()) {
          pos_ = at;
          fail("division only by a nonzero constant");
        }
        acc = Rational(1 / d.constant_term()) * acc;
      } else if (at_atom_start()) {
        fail("implicit multiplication is not allowed");
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial factor() {
    Polynomial base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (e > 10000) fail("exponent too large");
      base = base.pow(unsigned(e));
    }
    return base;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        fail("implicit multiplication is not allowed");
      Integer v(std::string(s_.substr(start, pos_ - start)));
      return Polynomial::constant(ring_, Rational(v));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      int idx = ring_->index(name);
      if (idx < 0) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return Polynomial::variable(ring_, std::size_t(idx));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

inline Polynomial parse_polynomial(std::string_view text, const RingPtr &ring) {
  return PolyParser(text, ring).parse();
}

} // namespace totalimage
