#include "hpmc/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace hpmc {

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression error at position " + std::to_string(pos) +
                      ": " + what + " in '" + s + "'");
  }

  Expr parse() {
    Expr e = sum();
    skip();
    if (pos != s.size()) fail("trailing input");
    return e;
  }

  Expr sum() {
    Expr lhs = product();
    for (;;) {
      if (eat('+')) {
        Expr rhs = product();
        lhs = [lhs, rhs](double x, double y) { return lhs(x, y) + rhs(x, y); };
      } else if (eat('-')) {
        Expr rhs = product();
        lhs = [lhs, rhs](double x, double y) { return lhs(x, y) - rhs(x, y); };
      } else {
        return lhs;
      }
    }
  }

  Expr product() {
    Expr lhs = unary();
    for (;;) {
      if (eat('*')) {
        Expr rhs = unary();
        lhs = [lhs, rhs](double x, double y) { return lhs(x, y) * rhs(x, y); };
      } else if (eat('/')) {
        Expr rhs = unary();
        lhs = [lhs, rhs](double x, double y) { return lhs(x, y) / rhs(x, y); };
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (eat('-')) {
      Expr e = unary();
      return [e](double x, double y) { return -e(x, y); };
    }
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (eat('^')) {
      Expr exp = unary();
      return [base, exp](double x, double y) {
        return std::pow(base(x, y), exp(x, y));
      };
    }
    return base;
  }

  Expr atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end");
    const char c = s[pos];
    if (c == '(') {
      ++pos;
      Expr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(s.c_str() + pos, &end);
      if (end == s.c_str() + pos) fail("bad number");
      pos = end - s.c_str();
      return [v](double, double) { return v; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t q = pos;
      while (q < s.size() && std::isalpha(static_cast<unsigned char>(s[q])))
        ++q;
      const std::string name = s.substr(pos, q - pos);
      pos = q;
      if (name == "x") return [](double x, double) { return x; };
      if (name == "y") return [](double, double y) { return y; };
      if (name == "r")
        return [](double x, double y) { return std::hypot(x, y); };
      if (!eat('(')) fail("expected '(' after '" + name + "'");
      Expr arg = sum();
      if (!eat(')')) fail("expected ')'");
      if (name == "sin")
        return [arg](double x, double y) { return std::sin(arg(x, y)); };
      if (name == "cos")
        return [arg](double x, double y) { return std::cos(arg(x, y)); };
      if (name == "exp")
        return [arg](double x, double y) { return std::exp(arg(x, y)); };
      if (name == "sqrt")
        return [arg](double x, double y) { return std::sqrt(arg(x, y)); };
      fail("unknown function '" + name + "'");
    }
    fail("unexpected character");
  }
};

}  // namespace

Expr parse_expression(const std::string& text) {
  if (text.empty()) throw ConfigError("empty expression");
  Parser p(text);
  return p.parse();
}

}  // namespace hpmc
