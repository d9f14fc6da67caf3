#include "szego/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace szego {

enum class Op { Const, Coord, Add, Sub, Mul, Div, Neg, Pow, Conj, Re, Im, Abs2, Exp, Log };

struct Expr::Node {
  Op op;
  Complex value;  // Const
  int index = 0;  // Coord / Pow exponent
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(const std::string& s, int n) : s_(s), n_(n) {}

  NodePtr run() {
    auto e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("recipe parse error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = make(Op::Add, lhs, term());
      else if (eat('-'))
        lhs = make(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = factor();
    for (;;) {
      if (eat('*'))
        lhs = make(Op::Mul, lhs, factor());
      else if (eat('/'))
        lhs = make(Op::Div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    if (eat('-')) return make(Op::Neg, factor());
    auto p = primary();
    if (eat('^')) {
      skip_ws();
      bool neg = eat('-');
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start) fail("expected integer exponent");
      int k = std::stoi(s_.substr(start, pos_ - start));
      auto node = make(Op::Pow, p);
      const_cast<Expr::Node*>(node.get())->index = neg ? -k : k;
      return node;
    }
    return p;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      double v = std::strtod(s_.c_str() + pos_, &end);
      pos_ = end - s_.c_str();
      auto node = make(Op::Const);
      const_cast<Expr::Node*>(node.get())->value = v;
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string word = s_.substr(start, pos_ - start);
      if (word == "pi") {
        auto node = make(Op::Const);
        const_cast<Expr::Node*>(node.get())->value = kPi;
        return node;
      }
      if (word == "i") {
        auto node = make(Op::Const);
        const_cast<Expr::Node*>(node.get())->value = Complex(0.0, 1.0);
        return node;
      }
      if (word.size() >= 2 && word[0] == 'z') {
        int k = std::atoi(word.c_str() + 1);
        if (k < 1 || k > n_) fail("coordinate " + word + " out of range for dimension " +
                                  std::to_string(n_));
        auto node = make(Op::Coord);
        const_cast<Expr::Node*>(node.get())->index = k - 1;
        return node;
      }
      Op op;
      if (word == "conj")
        op = Op::Conj;
      else if (word == "re")
        op = Op::Re;
      else if (word == "im")
        op = Op::Im;
      else if (word == "abs2")
        op = Op::Abs2;
      else if (word == "exp")
        op = Op::Exp;
      else if (word == "log")
        op = Op::Log;
      else
        fail("unknown identifier '" + word + "'");
      if (!eat('(')) fail("expected '(' after " + word);
      auto arg = expr();
      if (!eat(')')) fail("expected ')'");
      return make(op, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  int n_;
  size_t pos_ = 0;
};

template <class T, class MakeConst, class MakeCoord, class ConjFn>
T eval_node(const Expr::Node& node, const MakeConst& cst, const MakeCoord& coord,
            const ConjFn& conj_of) {
  auto rec = [&](const Expr::Node& n) { return eval_node<T>(n, cst, coord, conj_of); };
  switch (node.op) {
    case Op::Const:
      return cst(node.value);
    case Op::Coord:
      return coord(node.index);
    case Op::Add:
      return rec(*node.a) + rec(*node.b);
    case Op::Sub:
      return rec(*node.a) - rec(*node.b);
    case Op::Mul:
      return rec(*node.a) * rec(*node.b);
    case Op::Div:
      return rec(*node.a) / rec(*node.b);
    case Op::Neg:
      return -rec(*node.a);
    case Op::Pow: {
      T base = rec(*node.a);
      if constexpr (std::is_same_v<T, Jet>) {
        return base.pow_int(node.index);
      } else {
        return std::pow(base, node.index);
      }
    }
    case Op::Conj:
      return conj_of(rec(*node.a));
    case Op::Re: {
      T a = rec(*node.a);
      return (a + conj_of(a)) * Complex(0.5);
    }
    case Op::Im: {
      T a = rec(*node.a);
      return (a - conj_of(a)) * Complex(0.0, -0.5);
    }
    case Op::Abs2: {
      T a = rec(*node.a);
      return a * conj_of(a);
    }
    case Op::Exp: {
      T a = rec(*node.a);
      if constexpr (std::is_same_v<T, Jet>)
        return a.exp();
      else
        return std::exp(a);
    }
    case Op::Log: {
      T a = rec(*node.a);
      if constexpr (std::is_same_v<T, Jet>)
        return a.log();
      else
        return std::log(a);
    }
  }
  throw Error("unreachable expression op");
}

}  // namespace

Expr Expr::parse(const std::string& text, int n) {
  if (n < 1) throw PreconditionError("expression dimension must be >= 1");
  Expr e;
  e.n_ = n;
  e.text_ = text;
  e.root_ = Parser(text, n).run();
  return e;
}

Complex Expr::eval(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != n_) throw PreconditionError("point dimension mismatch");
  return eval_node<Complex>(
      *root_, [](Complex c) { return c; }, [&](int k) { return z[k]; },
      [](Complex c) { return std::conj(c); });
}

Jet Expr::eval_jet(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != n_) throw PreconditionError("point dimension mismatch");
  const int m = 2 * n_;
  return eval_node<Jet>(
      *root_, [&](Complex c) { return Jet::constant(m, c); },
      [&](int k) { return Jet::variable(m, k, z[k]); },
      [](const Jet& j) { return j.wirt_conj(); });
}

}  // namespace szego
