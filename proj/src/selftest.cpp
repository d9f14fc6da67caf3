#include "szego/selftest.hpp"

#include <cmath>

namespace szego {

namespace {

struct Suite {
  Json checks = Json::array();
  int failed = 0;

  void run(const char* name, const std::function<bool()>& body) {
    bool ok = false;
    std::string error;
    try {
      ok = body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (!ok) ++failed;
    Json entry{{"name", name}, {"pass", ok}};
    if (!error.empty()) entry["error"] = error;
    checks.push_back(entry);
  }
};

}  // namespace

Json run_selftest() {
  Suite s;

  s.run("ball_kernel_origin", [] {
    Domain b = Domain::ball(2);
    CVector z(2, Complex(0.0));
    double expect = 1.0 / (2.0 * kPi * kPi);  // (n-1)!/(2 pi^n), n=2
    return std::abs(kernel_diagonal(b, z).value.real() - expect) < 1e-15;
  });

  s.run("annulus_kernel_hermitian", [] {
    Complex z(0.7, 0.1), w(0.6, -0.2);
    Complex a = szego_annulus(z, w, 0.5, 1e-13).value;
    Complex b = szego_annulus(w, z, 0.5, 1e-13).value;
    return std::abs(a - std::conj(b)) < 1e-12 * std::abs(a);
  });

  s.run("disk_metric_origin", [] {
    Domain d = Domain::ball(1);
    CVector z(1, Complex(0.0));
    return std::abs(szego_metric(d, z).g(0, 0).real() - 1.0) < 1e-14;
  });

  s.run("square_loop_winding", [] {
    LoopPath loop;
    loop.points = {Complex(0.7, 0), Complex(0, 0.7), Complex(-0.7, 0), Complex(0, -0.7)};
    return loop_winding(loop) == 1;
  });

  s.run("expr_eval", [] {
    Expr e = Expr::parse("z1*conj(z1) + re(z2)", 2);
    CVector z = {Complex(2, 1), Complex(3, -4)};
    return std::abs(e.eval(z) - Complex(8.0)) < 1e-14;
  });

  s.run("domain_spec_shorthand", [] {
    Domain a = Domain::from_spec("annulus:r=0.5");
    return a.kind() == Domain::Kind::Annulus && a.inner_radius() == 0.5;
  });

  s.run("metric_grid_rows", [] {
    Domain a = Domain::annulus(0.5);
    std::string csv = metric_grid_csv(a, 20);
    int rows = -1;  // discount the header
    for (char c : csv)
      if (c == '\n') ++rows;
    return rows == 20;
  });

  s.run("svg_deterministic", [] {
    Domain a = Domain::annulus(0.5);
    std::vector<Complex> path = {Complex(0.7, 0), Complex(0, 0.7), Complex(-0.7, 0)};
    return render_svg(a, path, true) == render_svg(a, path, true);
  });

  s.run("svg_empty_path_rejected", [] {
    Domain a = Domain::annulus(0.5);
    try {
      render_svg(a, {}, false);
    } catch (const PreconditionError&) {
      return true;
    }
    return false;
  });

  s.run("rate_fit_power_two", [] {
    std::vector<double> deltas, values;
    for (int i = 0; i < 24; ++i) {
      double d = std::pow(10.0, -5.0 + 3.0 * i / 23.0);
      deltas.push_back(d);
      values.push_back(7.0 * d * d);
    }
    RateFit f = rate_fit(deltas, values);
    return !f.log_factor && std::abs(f.exponent - 2.0) < 1e-10 && f.r_squared > 0.999;
  });

  s.run("jet_exp_log_roundtrip", [] {
    Jet z = Jet::variable(2, 0, Complex(0.3, 0.1));
    Jet f = (z + Complex(2.0)).log().exp();
    bool ok = std::abs(f.value() - Complex(2.3, 0.1)) < 1e-13;
    ok = ok && std::abs(f.derivative({0}) - Complex(1.0)) < 1e-13;
    ok = ok && std::abs(f.derivative({0, 0})) < 1e-13;
    return ok;
  });

  s.run("integrator_short_disk", [] {
    Domain d = Domain::ball(1);
    GeodesicState st{{Complex(0.0)}, {Complex(1.0)}};
    GeodesicState out = geodesic_state_at(d, st, 0.5, 1e-10);
    return std::abs(out.z[0] - std::tanh(0.5)) < 1e-8;
  });

  Json report{{"passed", static_cast<int>(s.checks.size()) - s.failed},
              {"failed", s.failed},
              {"checks", s.checks}};
  return report;
}

}  // namespace szego
