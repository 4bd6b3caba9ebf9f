#pragma once

// Recursive-descent parser for polynomial expressions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' digits)?
//   primary := digits ('/' digits)? | identifier | '(' expr ')'
//
// Multiplication is always explicit; identifiers must be declared variables.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ratsos/multipoly.hpp"
#include "ratsos/rational.hpp"

namespace ratsos {

struct ParseDiagnostic {
  std::size_t position = 0;
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(ParseDiagnostic d)
      : std::runtime_error("parse error at offset " + std::to_string(d.position) + ": " + d.message),
        diag_(std::move(d)) {}
  const ParseDiagnostic& diagnostic() const { return diag_; }

 private:
  ParseDiagnostic diag_;
};

namespace detail {

class PolyParser {
 public:
  static constexpr std::uint32_t kMaxExponent = 100000;
  static constexpr int kMaxDepth = 500;

  PolyParser(std::string_view text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  MultiPoly parse() {
    skip_space();
    if (at_end()) fail(pos_, "empty expression");
    MultiPoly p = expr();
    skip_space();
    if (!at_end()) fail(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(std::size_t at, std::string msg) const {
    throw ParseError(ParseDiagnostic{std::min(at, text_.size()), std::move(msg)});
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  MultiPoly constant(const Rational& c) const { return MultiPoly(vars_, c); }

  MultiPoly expr() {
    enter();
    MultiPoly acc = term();
    while (true) {
      skip_space();
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      MultiPoly rhs = term();
      if (c == '+')
        acc += rhs;
      else
        acc -= rhs;
    }
    --depth_;
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = unary();
    while (true) {
      skip_space();
      if (peek() != '*') break;
      ++pos_;
      acc *= unary();
    }
    return acc;
  }

  MultiPoly unary() {
    skip_space();
    const char c = peek();
    if (c == '+' || c == '-') {
      ++pos_;
      enter();
      MultiPoly inner = unary();
      --depth_;
      return c == '-' ? -inner : inner;
    }
    return power();
  }

  MultiPoly power() {
    MultiPoly base = primary();
    skip_space();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    const std::size_t start = pos_;
    if (peek() == '-') fail(start, "negative exponent");
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(start, "expected exponent digits");
    std::string digits = read_digits();
    if (peek() == '.' || peek() == '/') fail(pos_, "fractional exponent");
    if (digits.size() > 6 || std::stoul(digits) > kMaxExponent) fail(start, "exponent too large");
    const std::uint64_t e = std::stoul(digits);
    if (e * std::max<std::uint64_t>(base.total_degree(), 1) > kMaxExponent && base.total_degree() > 0)
      fail(start, "exponent too large");
    return pow(base, e);
  }

  MultiPoly primary() {
    skip_space();
    const std::size_t start = pos_;
    const char c = peek();
    if (at_end()) fail(start, "unexpected end of input");
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = read_digits();
      if (peek() == '.') fail(pos_, "decimal literals are not supported");
      std::size_t save = pos_;
      skip_space();
      if (peek() == '/') {
        ++pos_;
        skip_space();
        const std::size_t den_at = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek())))
          fail(den_at, "expected denominator digits");
        std::string den = read_digits();
        if (peek() == '.') fail(pos_, "decimal literals are not supported");
        mpz_class d(den, 10);
        if (d == 0) fail(den_at, "zero denominator");
        return constant(Rational(mpz_class(num, 10), d));
      }
      pos_ = save;
      return constant(Rational(mpz_class(num, 10)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
        name += text_[pos_++];
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return MultiPoly::variable(vars_, i);
      fail(start, "unknown variable '" + name + "'");
    }
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      skip_space();
      if (peek() != ')') fail(pos_, "expected ')'");
      ++pos_;
      return inner;
    }
    fail(start, std::string("unexpected character '") + c + "'");
  }

  std::string read_digits() {
    std::string out;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) out += text_[pos_++];
    return out;
  }

  void enter() {
    if (++depth_ > kMaxDepth) fail(pos_, "expression nested too deeply");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace detail

/// Parses text over the given ordered variable list. Throws ParseError.
inline MultiPoly parse_poly(std::string_view text, const std::vector<std::string>& variables) {
  return detail::PolyParser(text, variables).parse();
}

/// Parses a polynomial in a single variable.
inline UniPoly parse_unipoly(std::string_view text, const std::string& variable = "x") {
  return to_unipoly(parse_poly(text, {variable}));
}

/// Splits "x,y,z" into names; rejects empty or duplicate names.
inline std::vector<std::string> parse_variable_list(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto push = [&] {
    if (cur.empty()) throw std::invalid_argument("empty variable name");
    if (!(std::isalpha(static_cast<unsigned char>(cur[0])) || cur[0] == '_'))
      throw std::invalid_argument("invalid variable name '" + cur + "'");
    for (char ch : cur)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
        throw std::invalid_argument("invalid variable name '" + cur + "'");
    for (const auto& v : out)
      if (v == cur) throw std::invalid_argument("duplicate variable '" + cur + "'");
    out.push_back(cur);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',')
      push();
    else if (!std::isspace(static_cast<unsigned char>(ch)))
      cur += ch;
  }
  push();
  return out;
}

}  // namespace ratsos
