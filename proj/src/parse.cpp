#include "soscert/parse.hpp"

#include <cctype>

namespace soscert {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars, int line)
      : s_(text), vars_(vars), line_(line) {}

  Polynomial run() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial constant(const Rational& c) const { return Polynomial(vars_.size(), c); }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        skip();
        const std::size_t at = pos_;
        Polynomial d = unary();
        if (!d.is_constant() || d.is_zero()) {
          pos_ = at;
          fail("division only by a nonzero constant");
        }
        acc *= Rational(1) / d.constant_term();
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      if (pos_ - start > 6) fail("exponent too large");
      return base.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
    }
    return base;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return Polynomial::variable(vars_.size(), i);
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Rational number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits = s_.substr(start, pos_ - start);
    Integer den = 1;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      const std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      digits += s_.substr(fs, pos_ - fs);
      for (std::size_t k = fs; k < pos_; ++k) den *= 10;
    }
    if (digits.empty()) fail("malformed number");
    Rational q(Integer(digits, 10), den);
    q.canonicalize();
    return q;
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars,
                            int line) {
  if (vars.empty()) throw ParseError("no variables declared", line);
  return Parser(text, vars, line).run();
}

Rational parse_rational(const std::string& text, int line) {
  // Reuse the expression grammar with a dummy variable set so "-3/4" and "0.5" both work.
  static const std::vector<std::string> none = {"_"};
  Polynomial p = parse_polynomial(text, none, line);
  if (!p.is_constant()) throw ParseError("expected a rational number", line);
  return p.constant_term();
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace soscert
