#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "szego/geodesic.hpp"

using namespace szego;

TEST_CASE("christoffel symbols are symmetric and consistent with the metric") {
  Domain b = Domain::ball(2);
  CVector z = {Complex(0.4, 0.2), Complex(-0.1, 0.3)};
  HermitianForm form = szego_metric(b, z);
  CTensor3 gamma = christoffel(form);
  for (int l = 0; l < 2; ++l)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(gamma(l, j, k) - gamma(l, k, j)) < 1e-12);
        // contract back: sum_l gbar_{l m} ... reproduce dg
        Complex lhs = 0.0;
        for (int m = 0; m < 2; ++m) lhs += std::conj(form.g(l, m)) * gamma(m, j, k);
        CHECK(std::abs(lhs - form.dg(j, k, l)) < 1e-10);
      }
}

TEST_CASE("disk geodesic matches the tanh closed form") {
  Domain d = Domain::ball(1);
  GeodesicState s0{{Complex(0.0)}, {Complex(1.0)}};
  GeodesicTrace tr = integrate_geodesic(d, s0, 3.0, 1e-9);
  REQUIRE(!tr.samples.empty());
  for (auto& s : tr.samples) {
    CHECK(std::abs(s.state.z[0] - std::tanh(s.t)) < 1e-7);
    CHECK(std::abs(s.speed - 1.0) < 1e-9);
  }
  CHECK(std::abs(tr.samples.back().t - 3.0) < 1e-12);
}

TEST_CASE("radial ball geodesic stays on its complex line") {
  // from the center the geodesic is radial: z1(t) = tanh(t / sqrt(n))
  Domain b = Domain::ball(2);
  GeodesicState s0{{Complex(0.0), Complex(0.0)}, {Complex(1.0 / std::sqrt(2.0)), Complex(0.0)}};
  for (double t : {0.5, 1.5, 2.5}) {
    GeodesicState st = geodesic_state_at(b, s0, t, 1e-10);
    CHECK(std::abs(st.z[0] - std::tanh(t / std::sqrt(2.0))) < 1e-8);
    CHECK(std::abs(st.z[1]) < 1e-10);
  }
}

TEST_CASE("speed is conserved on ball and annulus traces") {
  std::mt19937_64 rng(5150);
  std::normal_distribution<double> g(0.0, 1.0);
  Domain ball = Domain::ball(2);
  for (int trial = 0; trial < 3; ++trial) {
    CVector z = {Complex(0.3 * g(rng), 0.3 * g(rng)), Complex(0.2 * g(rng), 0.2 * g(rng))};
    while (std::norm(z[0]) + std::norm(z[1]) > 0.5) {
      z[0] *= 0.5;
      z[1] *= 0.5;
    }
    CVector v = {Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
    double len = szego_metric(ball, z).length(v);
    for (auto& c : v) c *= 0.25 / len;
    GeodesicTrace tr = integrate_geodesic(ball, {z, v}, 10.0, 1e-8);
    double s0 = tr.samples.front().speed;
    for (auto& s : tr.samples) CHECK(std::abs(s.speed - s0) < 1e-7);
  }

  Domain ann = Domain::annulus(0.5);
  GeodesicTrace tr = integrate_geodesic(ann, {{Complex(0.7, 0.0)}, {Complex(0.01, 0.02)}},
                                        15.0, 1e-8);
  double s0 = tr.samples.front().speed;
  for (auto& s : tr.samples) CHECK(std::abs(s.speed - s0) < 1e-7);
}

TEST_CASE("boundary guard halts runaway geodesics with a valid final state") {
  Domain d = Domain::ball(1);
  GeodesicState s0{{Complex(0.0)}, {Complex(1.0)}};
  GeodesicTrace tr = integrate_geodesic(d, s0, 50.0, 1e-8);
  CHECK(tr.halted_near_boundary);
  CHECK(std::abs(tr.samples.back().state.z[0]) < 1.0);
  CHECK_THROWS_AS(geodesic_state_at(d, s0, 50.0, 1e-8), NumericalError);
}

TEST_CASE("integrator rejects bad input") {
  Domain d = Domain::ball(1);
  GeodesicState out{{Complex(1.5)}, {Complex(1.0)}};
  CHECK_THROWS_AS(integrate_geodesic(d, out, 1.0, 1e-8), PreconditionError);
  GeodesicState ok{{Complex(0.0)}, {Complex(1.0)}};
  CHECK_THROWS_AS(integrate_geodesic(d, ok, 1.0, -1.0), PreconditionError);
  CHECK_THROWS_AS(integrate_geodesic(d, ok, -1.0, 1e-8), PreconditionError);
}

TEST_CASE("rho second derivative closed form: sphere spot values") {
  Domain model = Domain::fefferman(2, "abs2(z1)+abs2(z2)-1", "1/(2*pi^2)", "0");
  // tangential but not complex-tangential at z=(0.9,0):
  // value = 4*0.81/0.19 + 2
  GeodesicState s1{{Complex(0.9), Complex(0.0)}, {Complex(0, 1), Complex(0.0)}};
  CHECK(rho_second_derivative(model, s1) ==
        doctest::Approx(4.0 * 0.81 / 0.19 + 2.0).epsilon(1e-10));
  // complex tangential: exactly 2
  GeodesicState s2{{Complex(0.9), Complex(0.0)}, {Complex(0.0), Complex(1.0)}};
  CHECK(rho_second_derivative(model, s2) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("rho second derivative matches finite differences along geodesics") {
  Domain model = Domain::fefferman(2, "abs2(z1)+abs2(z2)-1", "1", "1");
  std::mt19937_64 rng(808);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    // point in the collar, unit direction
    CVector z(2), v(2);
    double nz = 0.0;
    for (auto& c : z) {
      c = Complex(g(rng), g(rng));
      nz += std::norm(c);
    }
    double target = std::sqrt(0.88 + 0.02 * trial);
    for (auto& c : z) c *= target / std::sqrt(nz);
    for (auto& c : v) c = Complex(g(rng), g(rng));
    double nv = 0.0;
    for (auto& c : v) nv += std::norm(c);
    for (auto& c : v) c /= std::sqrt(nv);

    double formula = rho_second_derivative(model, {z, v});
    auto rho_at = [&](double t) {
      if (t == 0.0) return model.rho(z);
      CVector dir = v;
      if (t < 0.0)
        for (auto& c : dir) c = -c;
      GeodesicState st = geodesic_state_at(model, {z, dir}, std::abs(t), 1e-12);
      return model.rho(st.z);
    };
    double h = 8e-3;
    auto second = [&](double hh) {
      return (rho_at(hh) - 2.0 * rho_at(0.0) + rho_at(-hh)) / (hh * hh);
    };
    // two Richardson levels on the O(h^2) central difference -> O(h^6)
    auto rich = [&](double hh) { return (4.0 * second(hh / 2) - second(hh)) / 3.0; };
    double fd = (16.0 * rich(h / 2) - rich(h)) / 15.0;
    CHECK(std::abs(formula - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
  }
}
