#include "hypercalc/parse.hpp"

#include <cctype>

namespace hypercalc {

namespace {

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool peek_digit() const {
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  long integer() {
    skip();
    if (!peek_digit()) fail("expected integer");
    long v = 0;
    while (peek_digit()) {
      v = v * 10 + (text_[pos_++] - '0');
      if (v > 1'000'000'000L) fail("integer too large");
    }
    return v;
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr expr() {
    Expr acc = term();
    while (true) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Expr term() {
    Expr acc = unary();
    while (true) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Expr d = unary();
        try {
          acc = acc / d;
        } catch (const std::domain_error& e) {
          throw ParseError(e.what(), at);
        }
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return factor();
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) {
      const bool neg = accept('-');
      const std::size_t at = pos_;
      const long k = integer();
      if (k > 64) fail("exponent too large");
      try {
        return b.pow(neg ? -static_cast<int>(k) : static_cast<int>(k));
      } catch (const std::domain_error& e) {
        throw ParseError(e.what(), at);
      }
    }
    return b;
  }

  Expr base() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (peek_digit()) return Expr(dim_, Rational(integer()));
    const std::size_t start = pos_;
    const std::string name = ident();
    if (name == "t") return Expr::t(dim_);
    if (name == "s") return Expr::s(dim_);
    if (name == "r2") return Expr::r2(dim_);
    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int a = std::stoi(name.substr(1));
      return Expr::x(a, dim_);  // throws "index out of range" for a > dim
    }
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') {
      pos_ = start;
      fail("expected identifier");
    }
    return atom(name);
  }

  int partial_index() {
    const std::string p = ident();
    if (p == "dt") return 0;
    if (p.size() > 1 && p[0] == 'd' && p.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int a = std::stoi(p.substr(1));
      if (a > dim_) throw std::out_of_range("index out of range");
      return a;
    }
    fail("expected partial (dt, d1, ...)");
  }

  int boost_index() {
    const std::string p = ident();
    if (p.size() > 1 && p[0] == 'L' && p.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int a = std::stoi(p.substr(1));
      if (a < 1 || a > dim_) throw std::out_of_range("index out of range");
      return a;
    }
    fail("expected boost (L1, L2, ...)");
  }

  Expr atom(const std::string& name) {
    skip();
    if (accept('<')) {
      const long k = integer();
      expect('>');
      expect('(');
      const std::string inner = ident();
      expect(')');
      return Expr::atom(Atom::composition(name, static_cast<int>(k), inner), dim_);
    }
    if (!accept('[')) return Expr::function(name, dim_);
    std::vector<int> partials;
    std::vector<int> boosts;
    skip();
    if (pos_ < text_.size() && text_[pos_] != ';' && text_[pos_] != ']') {
      do partials.push_back(partial_index());
      while (accept(','));
    }
    if (accept(';')) {
      skip();
      if (pos_ < text_.size() && text_[pos_] != ']') {
        do boosts.push_back(boost_index());
        while (accept(','));
      }
    }
    expect(']');
    return Expr::atom(Atom::derivative(name, std::move(partials), std::move(boosts)), dim_);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, int dim) { return Parser(text, dim).run(); }

}  // namespace hypercalc
