#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "szego/wp.hpp"

using namespace szego;

TEST_CASE("wp periodicity and evenness") {
  WpParameters p = WpParameters::for_annulus(0.5);  // omega1 = log 2
  Complex v(0.31, 0.47);
  Complex base = weierstrass_p(v, p);
  CHECK(std::abs(weierstrass_p(v + 2.0 * p.omega1, p) - base) < 1e-10 * std::abs(base));
  CHECK(std::abs(weierstrass_p(v + Complex(0, 2.0 * p.omega3_im), p) - base) <
        1e-10 * std::abs(base));
  CHECK(std::abs(weierstrass_p(-v, p) - base) < 1e-12 * std::abs(base));
  CHECK(std::abs(weierstrass_p_prime(-v, p) + weierstrass_p_prime(v, p)) <
        1e-10 * std::abs(weierstrass_p_prime(v, p)));
}

TEST_CASE("wp Laurent behaviour near the pole") {
  WpParameters p = WpParameters::for_annulus(0.4);
  double g2, g3;
  wp_invariants(p, g2, g3);
  Complex v(1e-3, 5e-4);
  Complex expect = 1.0 / (v * v) + g2 / 20.0 * v * v + g3 / 28.0 * v * v * v * v;
  CHECK(std::abs(weierstrass_p(v, p) - expect) < 1e-6);
  CHECK_THROWS_AS(weierstrass_p(Complex(0.0), p), NumericalError);
  CHECK_THROWS_AS(weierstrass_p(2.0 * p.omega1 + Complex(1e-14, 0), p), NumericalError);
}

TEST_CASE("wp satisfies its differential equation away from construction points") {
  // the ODE residual ties together the Laurent series, the duplication map and
  // the derivative propagation at points reached through different chains
  for (double r : {0.25, 0.5, 0.75}) {
    WpParameters p = WpParameters::for_annulus(r);
    double g2, g3;
    wp_invariants(p, g2, g3);
    for (Complex v : {Complex(0.9 * p.omega1, 0.2), Complex(0.3, 2.5), Complex(1.1, -1.9)}) {
      Complex x = weierstrass_p(v, p);
      Complex dx = weierstrass_p_prime(v, p);
      Complex residual = dx * dx - (4.0 * x * x * x - g2 * x - g3);
      double scale = std::max(1.0, std::abs(4.0 * x * x * x));
      CHECK(std::abs(residual) < 1e-9 * scale);
    }
  }
}

TEST_CASE("wp half-period values are the cubic roots") {
  WpParameters p = WpParameters::for_annulus(0.5);
  double g2, g3;
  wp_invariants(p, g2, g3);
  Complex e1 = weierstrass_p(Complex(p.omega1, 0), p);
  Complex e2 = weierstrass_p(Complex(p.omega1, p.omega3_im), p);
  Complex e3 = weierstrass_p(Complex(0, p.omega3_im), p);
  // roots of 4x^3 - g2 x - g3: each half-period value must annihilate it
  for (Complex e : {e1, e2, e3}) {
    CHECK(std::abs(e.imag()) < 1e-10);
    CHECK(std::abs(4.0 * e * e * e - g2 * e - g3) < 1e-9);
  }
  CHECK(std::abs(e1 + e2 + e3) < 1e-9);
  // rectangular lattice ordering e1 > e2 > e3
  CHECK(e1.real() > e2.real());
  CHECK(e2.real() > e3.real());
}

TEST_CASE("wp against a slow direct lattice sum") {
  // Eisenstein-summed reference: wp(v) = 1/v^2 + sum' [1/(v-w)^2 - 1/w^2]
  // over a large symmetric block of lattice points
  WpParameters p = WpParameters::for_annulus(0.35);
  Complex v(0.8, 0.9);
  Complex ref = 1.0 / (v * v);
  const int N = 400;
  for (int m = -N; m <= N; ++m)
    for (int k = -N; k <= N; ++k) {
      if (m == 0 && k == 0) continue;
      Complex w(2.0 * p.omega1 * m, 2.0 * p.omega3_im * k);
      Complex d = v - w;
      ref += 1.0 / (d * d) - 1.0 / (w * w);
    }
  // symmetric truncation of the conditionally convergent tail leaves ~1/N
  // error in general but the quadratic tail cancels pairwise here; accept 1e-4
  CHECK(std::abs(weierstrass_p(v, p) - ref) < 1e-4 * std::abs(ref));
}
