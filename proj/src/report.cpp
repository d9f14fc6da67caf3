#include "szego/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace szego {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json json_complex(Complex c) { return Json::array({c.real(), c.imag()}); }

Json json_cvector(std::span<const Complex> v) {
  Json arr = Json::array();
  for (auto& c : v) arr.push_back(json_complex(c));
  return arr;
}

Json json_matrix(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_complex(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const KernelValue& kv) {
  return Json{{"value", json_complex(kv.value)},
              {"truncation_error_bound", kv.truncation_error_bound},
              {"terms_used", kv.terms_used}};
}

Json to_json(const HermitianForm& form) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(form.g);
  Json eig = Json::array();
  for (Eigen::Index i = 0; i < form.g.rows(); ++i) eig.push_back(es.eigenvalues()(i));
  return Json{{"g", json_matrix(form.g)}, {"eigenvalues", eig}};
}

Json to_json(const LeviQuantities& lq) {
  Json qv = Json::array();
  for (Eigen::Index i = 0; i < lq.q_vector.size(); ++i) qv.push_back(json_complex(lq.q_vector(i)));
  return Json{{"q_vector", qv}, {"q_scalar", lq.q_scalar}, {"calQ", lq.calQ}};
}

Json to_json(const RateFit& fit) {
  Json j{{"exponent", fit.exact_vanishing ? Json("inf") : Json(fit.exponent)},
         {"log_factor", fit.log_factor},
         {"r_squared", fit.r_squared},
         {"delta_min", fit.delta_min},
         {"delta_max", fit.delta_max},
         {"exact_vanishing", fit.exact_vanishing}};
  return j;
}

Json to_json(const RepulsionReport& report) {
  Json grid = Json::array();
  for (auto& e : report.grid)
    grid.push_back(Json{{"point", json_cvector(e.point)},
                        {"direction", json_cvector(e.direction)},
                        {"rho", e.rho_value},
                        {"second_derivative", e.second_derivative},
                        {"complex_tangential", e.complex_tangential}});
  return Json{{"min_second_derivative", report.min_second_derivative},
              {"empirical_epsilon", report.empirical_epsilon},
              {"skipped_points", report.skipped_points},
              {"grid", grid}};
}

Json to_json(const ShortenResult& result) {
  return Json{{"iterations", result.iterations},
              {"converged", result.converged},
              {"degenerated", result.degenerated},
              {"winding", result.loop.winding},
              {"energies", result.energies},
              {"vertices", json_cvector(result.loop.points)}};
}

Json to_json(const ClassifyReport& report) {
  const char* verdict = report.verdict == GeodesicVerdict::Closed            ? "closed"
                        : report.verdict == GeodesicVerdict::BoundarySeeking ? "boundary-seeking"
                                                                             : "spiral-candidate";
  Json crossings = Json::array();
  for (auto& c : report.crossings)
    crossings.push_back(Json{{"t", c.t},
                             {"angle", c.angle},
                             {"crossing_angle", c.crossing_angle},
                             {"radial_sign", c.radial_sign}});
  return Json{{"verdict", verdict},
              {"min_clearance", report.min_clearance},
              {"recurrence_distance", report.recurrence_distance},
              {"crossings", crossings}};
}

Json trace_summary(const GeodesicTrace& trace) {
  if (trace.samples.empty()) throw PreconditionError("empty trace");
  const auto& last = trace.samples.back();
  double drift = 0.0;
  for (auto& s : trace.samples) drift = std::max(drift, std::abs(s.speed - trace.samples[0].speed));
  return Json{{"duration", trace.duration()},
              {"accepted_steps", trace.accepted_steps},
              {"rejected_steps", trace.rejected_steps},
              {"halted_near_boundary", trace.halted_near_boundary},
              {"speed_drift", drift},
              {"end_position", json_cvector(last.state.z)},
              {"end_velocity", json_cvector(last.state.v)}};
}

Json make_report(const Json& config, const Json& payload) {
  return Json{{"tool_version", kVersion}, {"config", config}, {"result", payload}};
}

std::string trace_csv(const GeodesicTrace& trace, int n) {
  std::ostringstream os;
  os << "t";
  for (int j = 0; j < n; ++j) os << ",re_z" << j + 1 << ",im_z" << j + 1;
  os << ",speed\n";
  for (auto& s : trace.samples) {
    os << fmt17(s.t);
    for (int j = 0; j < n; ++j)
      os << ',' << fmt17(s.state.z[j].real()) << ',' << fmt17(s.state.z[j].imag());
    os << ',' << fmt17(s.speed) << '\n';
  }
  return os.str();
}

std::string metric_grid_csv(const Domain& domain, int grid_points) {
  if (grid_points < 1) throw PreconditionError("grid needs at least one point");
  std::ostringstream os;
  os << "s,lambda2,eig_min,eig_max\n";
  double lo, hi;
  if (domain.kind() == Domain::Kind::Annulus) {
    double r = domain.inner_radius();
    lo = r + 0.05 * (1.0 - r);
    hi = 1.0 - 0.05 * (1.0 - r);
  } else {
    lo = 0.0;
    hi = 0.95;
  }
  for (int i = 0; i < grid_points; ++i) {
    double s = grid_points == 1 ? lo : lo + (hi - lo) * i / (grid_points - 1);
    CVector z(domain.dim(), Complex(0.0));
    z[0] = s;
    HermitianForm f = szego_metric(domain, z);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(f.g);
    os << fmt17(s) << ',' << fmt17(f.g(0, 0).real()) << ','
       << fmt17(es.eigenvalues().minCoeff()) << ',' << fmt17(es.eigenvalues().maxCoeff())
       << '\n';
  }
  return os.str();
}

namespace {

std::string svg_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::string render_svg(const Domain& domain, std::span<const Complex> path, bool closed,
                       double section_radius) {
  if (path.empty()) throw PreconditionError("cannot render an empty path");
  // viewport: [-1.1, 1.1]^2 mapped to a 600x600 canvas, y up
  const double scale = 600.0 / 2.2;
  auto px = [&](Complex z) { return svg_num((z.real() + 1.1) * scale); };
  auto py = [&](Complex z) { return svg_num((1.1 - z.imag()) * scale); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" "
        "viewBox=\"0 0 600 600\">\n";
  os << "<circle cx=\"300\" cy=\"300\" r=\"" << svg_num(scale)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  if (domain.kind() == Domain::Kind::Annulus)
    os << "<circle cx=\"300\" cy=\"300\" r=\"" << svg_num(scale * domain.inner_radius())
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  if (section_radius > 0.0)
    os << "<circle cx=\"300\" cy=\"300\" r=\"" << svg_num(scale * section_radius)
       << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.5\" "
          "stroke-dasharray=\"4 4\"/>\n";
  os << (closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"#c00000\" "
     << "stroke-width=\"1.2\" points=\"";
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) os << ' ';
    os << px(path[i]) << ',' << py(path[i]);
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::string render_svg_trace(const Domain& domain, const GeodesicTrace& trace,
                             double section_radius) {
  if (trace.samples.empty()) throw PreconditionError("cannot render an empty trace");
  std::vector<Complex> path;
  path.reserve(trace.samples.size());
  for (auto& s : trace.samples) path.push_back(s.state.z[0]);
  return render_svg(domain, path, false, section_radius);
}

}  // namespace szego
