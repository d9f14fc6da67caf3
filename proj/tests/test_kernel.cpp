#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "szego/kernel.hpp"

using namespace szego;

namespace {

// brute-force bilateral sum with a fixed huge symmetric cutoff
Complex annulus_reference(Complex z, Complex w, double r) {
  Complex q = z * std::conj(w);
  Complex sum = 0.0;
  for (int m = 0; m <= 1000; ++m) sum += std::pow(q, m) / (1.0 + std::pow(r, 2 * m + 1));
  // negative tail rewritten as (q/r^2)^m / (r (r^{-2m-1} + 1)) to stay finite
  for (int m = -1; m >= -1000; --m)
    sum += std::pow(q / (r * r), m) / (r * (std::pow(r, -2 * m - 1) + 1.0));
  return sum / (2.0 * kPi);
}

}  // namespace

TEST_CASE("ball kernel closed form and hermitian symmetry") {
  CVector z = {Complex(0.4, 0.2), Complex(-0.1, 0.3)};
  CVector w = {Complex(0.1, -0.5), Complex(0.2, 0.2)};
  KernelValue k = szego_ball(z, w, 2);
  Complex pairing = z[0] * std::conj(w[0]) + z[1] * std::conj(w[1]);
  Complex expect = 1.0 / (2.0 * kPi * kPi) * std::pow(1.0 - pairing, -2.0);
  CHECK(std::abs(k.value - expect) < 1e-15 * std::abs(expect));
  CHECK(k.truncation_error_bound == 0.0);

  KernelValue kr = szego_ball(w, z, 2);
  CHECK(std::abs(k.value - std::conj(kr.value)) < 1e-15 * std::abs(k.value));

  // diagonal positivity
  KernelValue kd = szego_ball(z, z, 2);
  CHECK(kd.value.real() > 0.0);
  CHECK(std::abs(kd.value.imag()) < 1e-18);

  // degenerate pairing (1 - z.wbar -> 0) must be rejected
  CVector zs = {Complex(0.999999999, 0.0)};
  CVector ws = {Complex(1.0 / 0.999999999 - 1e-16, 0.0)};
  CHECK_THROWS_AS(szego_ball(zs, ws, 1), PreconditionError);
}

TEST_CASE("disk kernel specializes the ball formula") {
  CVector z = {Complex(0.3, 0.4)};
  KernelValue k = szego_ball(z, z, 1);
  double expect = 1.0 / (2.0 * kPi * (1.0 - 0.25));
  CHECK(std::abs(k.value.real() - expect) < 1e-15);
}

TEST_CASE("annulus kernel against a brute-force reference") {
  for (double r : {0.3, 0.5, 0.7}) {
    for (auto [z, w] : {std::pair{Complex(0.8, 0.1), Complex(0.6, -0.3)},
                        std::pair{Complex(-0.55, 0.4), Complex(0.3, 0.62)},
                        std::pair{Complex(0.9, 0.0), Complex(0.9, 0.05)}}) {
      if (std::abs(z) <= r || std::abs(w) <= r) continue;
      KernelValue k = szego_annulus(z, w, r, 1e-13);
      Complex ref = annulus_reference(z, w, r);
      CHECK(std::abs(k.value - ref) < 1e-12 * std::abs(ref) + 1e-15);
    }
  }
}

TEST_CASE("annulus truncation bound is honest") {
  double r = 0.5;
  Complex z(0.8, 0.2), w(0.75, -0.1);
  KernelValue loose = szego_annulus(z, w, r, 1e-6);
  KernelValue tight = szego_annulus(z, w, r, 1e-14);
  CHECK(std::abs(loose.value - tight.value) <= loose.truncation_error_bound);
  CHECK(tight.terms_used >= loose.terms_used);
  // pairing outside the validity strip r^2 < |z wbar| < 1
  CHECK_THROWS_AS(szego_annulus(Complex(0.51, 0), Complex(0.49, 0), r, 1e-10),
                  PreconditionError);
}

TEST_CASE("annulus series derivatives match finite differences") {
  double r = 0.5, t = 0.6;
  AnnulusSeries s = annulus_series(t, r, 1e-13, 3);
  double h = 1e-5;
  AnnulusSeries sp = annulus_series(t + h, r, 1e-13, 2);
  AnnulusSeries sm = annulus_series(t - h, r, 1e-13, 2);
  CHECK(std::abs((sp.f[0] - sm.f[0]) / (2 * h) - s.f[1]) < 1e-7);
  CHECK(std::abs((sp.f[1] - sm.f[1]) / (2 * h) - s.f[2]) < 1e-6);
  CHECK(std::abs((sp.f[2] - sm.f[2]) / (2 * h) - s.f[3]) < 1e-5);
}

TEST_CASE("model kernel reproduces the ball and flags invalid numerators") {
  Domain model = Domain::fefferman(2, "abs2(z1)+abs2(z2)-1", "1/(2*pi^2)", "0");
  Domain ball = Domain::ball(2);
  CVector z = {Complex(0.7, 0.1), Complex(0.2, -0.4)};
  KernelValue a = kernel_diagonal(model, z);
  KernelValue b = kernel_diagonal(ball, z);
  CHECK(std::abs(a.value - b.value) < 1e-13 * std::abs(b.value));
  CHECK(std::abs(log_kernel_diagonal(model, z) - std::log(b.value.real())) < 1e-12);

  // Psi chosen so Phi + Psi |rho|^n log|rho| < 0 near the boundary
  Domain bad = Domain::fefferman(2, "abs2(z1)+abs2(z2)-1", "1/(2*pi^2)", "100", 0.05);
  CVector zb = {Complex(0.9899, 0.0), Complex(0.0, 0.0)};
  CHECK_THROWS_AS(kernel_diagonal(bad, zb), ModelValidityError);
}

TEST_CASE("annulus diagonal kernel is positive across the ring") {
  for (double s : {0.55, 0.7, 0.9, 0.99}) {
    KernelValue k = szego_annulus(Complex(s, 0), Complex(s, 0), 0.5, 1e-12);
    CHECK(k.value.real() > 0.0);
    CHECK(std::abs(k.value.imag()) < 1e-16 * k.value.real());
  }
}
