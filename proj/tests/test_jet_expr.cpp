#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "szego/expr.hpp"

using namespace szego;

namespace {

// central-difference Wirtinger derivative of a callable C^n -> C
template <typename F>
Complex fd_wirt(F f, CVector z, int var, int n, double h = 1e-5) {
  // d/dz_j = (d/dx - i d/dy)/2, d/dzbar_j = (d/dx + i d/dy)/2
  bool bar = var >= n;
  int j = bar ? var - n : var;
  auto shift = [&](double dx, double dy) {
    CVector w = z;
    w[j] += Complex(dx, dy);
    return f(w);
  };
  Complex dx = (shift(h, 0) - shift(-h, 0)) / (2 * h);
  Complex dy = (shift(0, h) - shift(0, -h)) / (2 * h);
  return bar ? 0.5 * (dx + Complex(0, 1) * dy) : 0.5 * (dx - Complex(0, 1) * dy);
}

}  // namespace

TEST_CASE("jet product differentiates polynomials exactly") {
  // f = z1^2 * conj(z2), built from variables; all third derivatives explicit
  Complex a(0.4, 0.3), b(-0.2, 0.7);
  Jet z1 = Jet::variable(4, 0, a);
  Jet z2b = Jet::variable(4, 3, std::conj(b));
  Jet f = z1 * z1 * z2b;

  CHECK(std::abs(f.value() - a * a * std::conj(b)) < 1e-15);
  CHECK(std::abs(f.derivative({0}) - 2.0 * a * std::conj(b)) < 1e-15);
  CHECK(std::abs(f.derivative({0, 0}) - 2.0 * std::conj(b)) < 1e-15);
  CHECK(std::abs(f.derivative({0, 0, 3}) - 2.0) < 1e-15);
  CHECK(std::abs(f.derivative({3}) - a * a) < 1e-15);
  CHECK(std::abs(f.derivative({1})) < 1e-15);
  CHECK(std::abs(f.derivative({0, 3}) - 2.0 * a) < 1e-15);
}

TEST_CASE("jet exp/log/inverse against scalar calculus") {
  Complex a(0.2, -0.4);
  Jet z = Jet::variable(2, 0, a);
  Jet f = (z * z + Complex(1.5)).exp();
  Complex v = std::exp(a * a + 1.5);
  CHECK(std::abs(f.value() - v) < 1e-13);
  CHECK(std::abs(f.derivative({0}) - 2.0 * a * v) < 1e-13);
  CHECK(std::abs(f.derivative({0, 0}) - (2.0 + 4.0 * a * a) * v) < 1e-12);
  CHECK(std::abs(f.derivative({0, 0, 0}) - (12.0 * a + 8.0 * a * a * a) * v) < 1e-12);

  Jet g = f.log();
  CHECK(std::abs(g.derivative({0}) - 2.0 * a) < 1e-13);
  CHECK(std::abs(g.derivative({0, 0}) - 2.0) < 1e-12);
  CHECK(std::abs(g.derivative({0, 0, 0})) < 1e-11);

  Jet inv = f.inverse() * f;
  CHECK(std::abs(inv.value() - 1.0) < 1e-13);
  CHECK(std::abs(inv.derivative({0})) < 1e-12);
  CHECK(std::abs(inv.derivative({0, 0})) < 1e-11);
}

TEST_CASE("wirtinger conjugate swaps variable blocks") {
  Complex a(0.4, 0.3);
  Jet z = Jet::variable(2, 0, a);
  Jet zb = Jet::variable(2, 1, std::conj(a));
  Jet f = z * z * zb + Complex(0, 2) * z;
  Jet fc = f.wirt_conj();
  CHECK(std::abs(fc.value() - std::conj(f.value())) < 1e-15);
  CHECK(std::abs(fc.derivative({1}) - std::conj(f.derivative({0}))) < 1e-15);
  CHECK(std::abs(fc.derivative({1, 1, 0}) - std::conj(f.derivative({0, 0, 1}))) < 1e-15);
}

TEST_CASE("expression parser: values") {
  Expr e = Expr::parse("2*z1^2 - conj(z2)/(1+abs2(z1)) + im(z2)*i", 2);
  CVector z = {Complex(0.3, -0.2), Complex(1.0, 2.0)};
  Complex expect = 2.0 * z[0] * z[0] - std::conj(z[1]) / (1.0 + std::norm(z[0])) +
                   Complex(0, 1) * z[1].imag();
  CHECK(std::abs(e.eval(z) - expect) < 1e-14);

  CHECK(std::abs(Expr::parse("pi", 1).eval(CVector{Complex(0.0)}) - Complex(kPi)) < 1e-15);
  CHECK(std::abs(Expr::parse("-z1^3", 1).eval(CVector{Complex(2.0)}) - Complex(-8.0)) < 1e-13);
  CHECK(std::abs(Expr::parse("exp(log(z1))", 1).eval(CVector{Complex(0.5, 0.25)}) -
                 Complex(0.5, 0.25)) < 1e-14);
}

TEST_CASE("expression parser: rejects malformed input") {
  CHECK_THROWS_AS(Expr::parse("z3", 2), ParseError);
  CHECK_THROWS_AS(Expr::parse("1 +", 2), ParseError);
  CHECK_THROWS_AS(Expr::parse("foo(z1)", 2), ParseError);
  CHECK_THROWS_AS(Expr::parse("z1^z2", 2), ParseError);
  CHECK_THROWS_AS(Expr::parse("(z1", 2), ParseError);
  CHECK_THROWS_AS(Expr::parse("", 2), ParseError);
}

TEST_CASE("expression jets match finite differences") {
  Expr e = Expr::parse("abs2(z1)*re(z2) + exp(re(z1))*im(z2)^2 - 1", 2);
  CVector z = {Complex(0.3, -0.1), Complex(-0.2, 0.4)};
  Jet jet = e.eval_jet(z);
  auto f = [&](const CVector& w) { return e.eval(w); };

  CHECK(std::abs(jet.value() - f(z)) < 1e-14);
  for (int var = 0; var < 4; ++var)
    CHECK(std::abs(jet.derivative({var}) - fd_wirt(f, z, var, 2)) < 1e-9);

  // second derivatives: differentiate the jet-based first derivative
  for (int v1 = 0; v1 < 4; ++v1)
    for (int v2 = 0; v2 < 4; ++v2) {
      auto df = [&](const CVector& w) { return e.eval_jet(w).derivative({v1}); };
      CHECK(std::abs(jet.derivative({v1, v2}) - fd_wirt(df, z, v2, 2)) < 1e-8);
    }

  // a third derivative spot check
  auto d2f = [&](const CVector& w) { return e.eval_jet(w).derivative({0, 2}); };
  CHECK(std::abs(jet.derivative({0, 2, 1}) - fd_wirt(d2f, z, 1, 2)) < 1e-7);
}
