#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pipct/error.hpp"

namespace pipct {

/// Raised for malformed expression text.
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InvalidArgument(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Real expression in one variable `x`.
///
/// Grammar (recursive descent, `^` binds tighter than unary minus and is
/// right associative):
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | 'x' | 'pi' | 'e' | name '(' expr ')' | '(' expr ')'
///
/// Functions: abs exp log sqrt sin cos tan sign. Powers with a negative base
/// and a non-integer exponent evaluate to NaN.
class Expression {
 public:
  static Expression parse(std::string_view text) {
    Parser p{text, 0};
    auto root = p.expr();
    p.skip_space();
    if (p.pos != text.size()) p.fail("unexpected trailing input");
    return Expression(std::string(text), std::move(root));
  }

  double operator()(double x) const { return root_->eval(x); }
  const std::string& source() const noexcept { return source_; }

 private:
  struct Node {
    virtual ~Node() = default;
    virtual double eval(double x) const = 0;
  };
  using NodePtr = std::shared_ptr<const Node>;

  struct Constant final : Node {
    double value;
    explicit Constant(double v) : value(v) {}
    double eval(double) const override { return value; }
  };
  struct Variable final : Node {
    double eval(double x) const override { return x; }
  };
  struct Negate final : Node {
    NodePtr arg;
    explicit Negate(NodePtr a) : arg(std::move(a)) {}
    double eval(double x) const override { return -arg->eval(x); }
  };
  struct Binary final : Node {
    char op;
    NodePtr lhs, rhs;
    Binary(char o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
    double eval(double x) const override {
      const double l = lhs->eval(x);
      const double r = rhs->eval(x);
      switch (op) {
        case '+': return l + r;
        case '-': return l - r;
        case '*': return l * r;
        case '/': return l / r;
        default: return std::pow(l, r);
      }
    }
  };
  struct Call final : Node {
    double (*fn)(double);
    NodePtr arg;
    Call(double (*f)(double), NodePtr a) : fn(f), arg(std::move(a)) {}
    double eval(double x) const override { return fn(arg->eval(x)); }
  };

  static double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

  struct Parser {
    std::string_view text;
    std::size_t pos;

    [[noreturn]] void fail(const std::string& msg) const {
      std::ostringstream os;
      os << "expression error at position " << pos << ": " << msg << " in \""
         << text << "\"";
      throw ParseError(os.str(), pos);
    }
    void skip_space() {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool accept(char c) {
      skip_space();
      if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    NodePtr expr() {
      auto lhs = term();
      for (;;) {
        if (accept('+')) lhs = std::make_shared<Binary>('+', lhs, term());
        else if (accept('-')) lhs = std::make_shared<Binary>('-', lhs, term());
        else return lhs;
      }
    }
    NodePtr term() {
      auto lhs = unary();
      for (;;) {
        if (accept('*')) lhs = std::make_shared<Binary>('*', lhs, unary());
        else if (accept('/')) lhs = std::make_shared<Binary>('/', lhs, unary());
        else return lhs;
      }
    }
    NodePtr unary() {
      if (accept('-')) return std::make_shared<Negate>(unary());
      if (accept('+')) return unary();
      return power();
    }
    NodePtr power() {
      auto base = primary();
      if (accept('^')) return std::make_shared<Binary>('^', base, unary());
      return base;
    }
    NodePtr primary() {
      skip_space();
      if (pos >= text.size()) fail("unexpected end of input");
      const char c = text[pos];
      if (c == '(') {
        ++pos;
        auto inner = expr();
        if (!accept(')')) fail("expected ')'");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
      if (std::isalpha(static_cast<unsigned char>(c))) return name();
      fail(std::string("unexpected character '") + c + "'");
    }
    NodePtr number() {
      const std::string rest(text.substr(pos));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("malformed number");
      pos += static_cast<std::size_t>(end - rest.c_str());
      return std::make_shared<Constant>(v);
    }
    NodePtr name() {
      const std::size_t start = pos;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
        ++pos;
      }
      const std::string_view id = text.substr(start, pos - start);
      if (id == "x") return std::make_shared<Variable>();
      if (id == "pi") return std::make_shared<Constant>(3.14159265358979323846);
      if (id == "e") return std::make_shared<Constant>(2.71828182845904523536);
      double (*fn)(double) = nullptr;
      if (id == "abs") fn = [](double v) { return std::abs(v); };
      else if (id == "exp") fn = [](double v) { return std::exp(v); };
      else if (id == "log") fn = [](double v) { return std::log(v); };
      else if (id == "sqrt") fn = [](double v) { return std::sqrt(v); };
      else if (id == "sin") fn = [](double v) { return std::sin(v); };
      else if (id == "cos") fn = [](double v) { return std::cos(v); };
      else if (id == "tan") fn = [](double v) { return std::tan(v); };
      else if (id == "sign") fn = &Expression::sign_of;
      else {
        pos = start;
        fail("unknown identifier '" + std::string(id) + "'");
      }
      if (!accept('(')) fail("expected '(' after function name");
      auto arg = expr();
      if (!accept(')')) fail("expected ')'");
      return std::make_shared<Call>(fn, arg);
    }
  };

  Expression(std::string source, NodePtr root)
      : source_(std::move(source)), root_(std::move(root)) {}

  std::string source_;
  NodePtr root_;
};

}  // namespace pipct
