#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "szego/metric.hpp"

using namespace szego;

namespace {

CVector random_ball_point(std::mt19937_64& rng, int n, double max_radius = 0.9) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.05, max_radius);
  CVector z(n);
  double nrm = 0.0;
  for (auto& c : z) {
    c = Complex(g(rng), g(rng));
    nrm += std::norm(c);
  }
  double scale = u(rng) / std::sqrt(nrm);
  for (auto& c : z) c *= scale;
  return z;
}

void check_form_close(const HermitianForm& a, const HermitianForm& b, double tol) {
  REQUIRE(a.g.rows() == b.g.rows());
  for (Eigen::Index j = 0; j < a.g.rows(); ++j)
    for (Eigen::Index k = 0; k < a.g.cols(); ++k) {
      double scale = std::max(1.0, std::abs(b.g(j, k)));
      CHECK(std::abs(a.g(j, k) - b.g(j, k)) < tol * scale);
    }
}

}  // namespace

TEST_CASE("ball metric matches the finite-difference oracle") {
  std::mt19937_64 rng(7701);
  for (int n : {1, 2, 3}) {
    Domain b = Domain::ball(n);
    for (int trial = 0; trial < 4; ++trial) {
      CVector z = random_ball_point(rng, n, 0.8);
      check_form_close(szego_metric(b, z), metric_fd_oracle(b, z), 1e-8);
    }
  }
}

TEST_CASE("ball metric is hermitian positive definite") {
  std::mt19937_64 rng(42);
  Domain b = Domain::ball(3);
  for (int trial = 0; trial < 8; ++trial) {
    CVector z = random_ball_point(rng, 3);
    HermitianForm f = szego_metric(b, z);
    CHECK((f.g - f.g.adjoint()).norm() < 1e-12 * f.g.norm());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(f.g);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    // dg really is the holomorphic derivative of g (finite differences)
    double h = 1e-6;
    for (int a = 0; a < 3; ++a) {
      CVector zp = z, zm = z;
      zp[a] += h;
      zm[a] -= h;
      CMatrix gp = szego_metric(b, zp).g;
      CMatrix gm = szego_metric(b, zm).g;
      CVector zpi = z, zmi = z;
      zpi[a] += Complex(0, h);
      zmi[a] -= Complex(0, h);
      CMatrix gpi = szego_metric(b, zpi).g;
      CMatrix gmi = szego_metric(b, zmi).g;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          Complex dx = (gp(j, k) - gm(j, k)) / (2 * h);
          Complex dy = (gpi(j, k) - gmi(j, k)) / (2 * h);
          Complex dga = 0.5 * (dx - Complex(0, 1) * dy);
          CHECK(std::abs(f.dg(a, j, k) - dga) < 1e-5 * std::max(1.0, std::abs(dga)));
        }
    }
  }
}

TEST_CASE("annulus metric: series and wp routes agree") {
  for (double r : {0.25, 0.5, 0.75}) {
    for (int i = 0; i < 12; ++i) {
      double s = r + (1.0 - r) * (i + 0.5) / 12.0;
      double a = annulus_lambda2(s, r, AnnulusMethod::Series);
      double b = annulus_lambda2(s, r, AnnulusMethod::Wp);
      CHECK(std::abs(a - b) < 1e-9 * std::abs(a));
    }
  }
}

TEST_CASE("annulus metric against the finite-difference oracle") {
  Domain a = Domain::annulus(0.5);
  for (double s : {0.55, 0.7, 0.85}) {
    for (double arg : {0.0, 1.1}) {
      CVector z = {std::polar(s, arg)};
      check_form_close(szego_metric(a, z), metric_fd_oracle(a, z), 1e-7);
    }
  }
}

TEST_CASE("annulus metric conformal symmetry under s -> r/s") {
  // lambda(r/s) r / s^2 = lambda(s), stated in squared form
  for (double r : {0.3, 0.5}) {
    for (int i = 0; i < 10; ++i) {
      double s = r + (1.0 - r) * (i + 0.5) / 10.0;
      double lhs = annulus_lambda2(r / s, r, AnnulusMethod::Series) *
                   (r / (s * s)) * (r / (s * s));
      double rhs = annulus_lambda2(s, r, AnnulusMethod::Series);
      CHECK(std::abs(lhs - rhs) < 1e-9 * rhs);
    }
  }
}

TEST_CASE("annulus metric is rotation invariant") {
  Domain a = Domain::annulus(0.4);
  CVector z1 = {Complex(0.7, 0.0)};
  CVector z2 = {std::polar(0.7, 2.3)};
  CHECK(std::abs(szego_metric(a, z1).g(0, 0) - szego_metric(a, z2).g(0, 0)) < 1e-12);
}

TEST_CASE("ball-as-model metric reproduces the closed form") {
  Domain model = Domain::fefferman(2, "abs2(z1)+abs2(z2)-1", "1/(2*pi^2)", "0");
  Domain ball = Domain::ball(2);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    CVector z = random_ball_point(rng, 2, 0.95);
    HermitianForm a = metric_model(model, z);
    HermitianForm b = szego_metric(ball, z);
    check_form_close(a, b, 1e-11);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          CHECK(std::abs(a.dg(i, j, k) - b.dg(i, j, k)) <
                1e-9 * std::max(1.0, std::abs(b.dg(i, j, k))));
  }
}

TEST_CASE("synthetic model metric matches the finite-difference oracle") {
  Domain model = Domain::fefferman(2, "abs2(z1)+abs2(z2)-1", "1+re(z1)/4", "1");
  CVector z = {Complex(0.8, 0.2), Complex(0.3, -0.35)};
  check_form_close(szego_metric(model, z), metric_fd_oracle(model, z), 1e-7);
}

TEST_CASE("levi quantities on the ball model") {
  Domain model = Domain::fefferman(2, "abs2(z1)+abs2(z2)-1", "1/(2*pi^2)", "0");
  for (double s : {0.9, 0.95, 0.99}) {
    CVector z = {Complex(s, 0.0), Complex(0.0, 0.0)};
    LeviQuantities lq = levi_quantities(model, z);
    double rho = s * s - 1.0;
    // calQ = |z|^2 for the sphere defining function
    CHECK(std::abs(lq.calQ - s * s) < 1e-12);
    // Levi deficit identity for log-free models:
    // q - 1/n = -|rho| / (n (|rho| + calQ))
    double expect = -(-rho) / (2.0 * ((-rho) + lq.calQ));
    CHECK(std::abs((lq.q_scalar - 0.5) - expect) < 1e-10);
  }
}

TEST_CASE("caratheodory comparison on the ball") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {1, 2, 3}) {
    Domain b = Domain::ball(n);
    for (int trial = 0; trial < 10; ++trial) {
      CVector z = random_ball_point(rng, n);
      CVector v(n);
      for (auto& c : v) c = Complex(g(rng), g(rng));
      double szego_len = szego_metric(b, z).length(v);
      double cara_len = caratheodory_ball(z, v, n);
      CHECK(std::abs(szego_len - std::sqrt(double(n)) * cara_len) < 1e-11 * szego_len);
    }
  }
}

TEST_CASE("schwarz-pick oracle for the disk caratheodory metric") {
  // on the disk the caratheodory metric is |v| / (1 - |z|^2)
  CVector z = {Complex(0.3, -0.5)};
  CVector v = {Complex(0.7, 0.2)};
  double expect = std::abs(v[0]) / (1.0 - std::norm(z[0]));
  CHECK(std::abs(caratheodory_ball(z, v, 1) - expect) < 1e-14 * expect);
}

TEST_CASE("guarded solve rejects ill-conditioned systems") {
  CMatrix a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0 + 1e-15;
  CVec b(2);
  b << 1.0, 2.0;
  CHECK_THROWS_AS(hermitian_solve_guarded(a, b), NumericalError);
  CMatrix neg(1, 1);
  neg << -1.0;
  CVec one = CVec::Ones(1);
  CHECK_THROWS_AS(hermitian_solve_guarded(neg, one), NumericalError);
}
