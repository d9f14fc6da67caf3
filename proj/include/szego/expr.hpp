#pragma once

#include <memory>
#include <span>

#include "szego/common.hpp"
#include "szego/jet.hpp"

namespace szego {

// Scalar recipe over the coordinates z1..zn. Supported grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')? primary ('^' integer)?
//   primary:= number | 'pi' | 'z'<k> | fn '(' expr ')' | '(' expr ')'
//   fn     := conj | re | im | abs2 | exp | log
// abs2(e) = e * conj(e). Recipes evaluate either to plain complex values or
// to Wirtinger jets of order 3, so all derivatives are exact.
class Expr {
 public:
  static Expr parse(const std::string& text, int n);

  Complex eval(std::span<const Complex> z) const;
  Jet eval_jet(std::span<const Complex> z) const;

  int dim() const { return n_; }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expr() = default;
  int n_ = 0;
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace szego
