#include "szego/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace szego {

// ---------------------------------------------------------------- parallel map

namespace {
std::atomic<int> g_threads{0};

int default_threads() {
  if (const char* env = std::getenv("SZEGO_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}
}  // namespace

void set_worker_threads(int count) { g_threads = count; }

int worker_threads() {
  int v = g_threads.load();
  return v > 0 ? v : default_threads();
}

void parallel_for(int count, const std::function<void(int)>& body) {
  int nthreads = std::min(worker_threads(), count);
  if (nthreads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ----------------------------------------------------------------- loop basics

int loop_winding(const LoopPath& loop) {
  double total = 0.0;
  const size_t n = loop.points.size();
  for (size_t i = 0; i < n; ++i) {
    Complex a = loop.points[i];
    Complex b = loop.points[(i + 1) % n];
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

namespace {

Complex loop_geodesic_midpoint(const Domain& domain, Complex a, Complex b);

}  // namespace

double loop_energy(const Domain& domain, const LoopPath& loop) {
  const size_t n = loop.points.size();
  auto lam = [&](Complex p) {
    return std::sqrt(szego_metric(domain, std::vector<Complex>{p}).g(0, 0).real());
  };
  // Birkhoff energy N * sum L_i^2 of the piecewise-geodesic interpolant, with
  // each arc length L_i from Simpson through the geodesic midpoint. Sampling
  // the arc (not the chord) keeps the discrete minimizer aligned with the
  // midpoint relaxation's fixed point to O(|d|^4), so the energy ledger stays
  // monotone all the way down to convergence.
  std::vector<double> at_vertex(n);
  for (size_t i = 0; i < n; ++i) at_vertex[i] = lam(loop.points[i]);
  double e = 0.0;
  for (size_t i = 0; i < n; ++i) {
    Complex a = loop.points[i];
    Complex b = loop.points[(i + 1) % n];
    Complex m = loop_geodesic_midpoint(domain, a, b);
    double len = std::abs(b - a) * (at_vertex[i] + 4.0 * lam(m) + at_vertex[(i + 1) % n]) / 6.0;
    e += len * len;
  }
  return e * static_cast<double>(n);
}

// ------------------------------------------------------- circle geodesic radius

double circle_geodesic_radius(double r, double tol) {
  if (!(r > 0.0 && r < 1.0)) throw PreconditionError("annulus radius must lie in (0,1)");
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  auto objective = [&](double s) { return s * std::sqrt(annulus_lambda2(s, r, AnnulusMethod::Wp)); };
  // golden section on (r, 1) with a margin to stay strictly inside
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = r + 1e-6 * (1.0 - r), hi = 1.0 - 1e-6 * (1.0 - r);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = objective(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// ----------------------------------------------------------- Birkhoff shortening

namespace {

// Geodesic midpoint of nearby points: fixed-point iteration on the symmetric
// Taylor expansion m = (a+b)/2 + (1/8) Gamma(m) d^2 (error O(|d|^4)).
Complex loop_geodesic_midpoint(const Domain& domain, Complex a, Complex b) {
  Complex d = b - a;
  Complex m = 0.5 * (a + b);
  for (int it = 0; it < 3; ++it) {
    HermitianForm f = szego_metric(domain, std::vector<Complex>{m});
    Complex gamma = f.dg(0, 0, 0) / f.g(0, 0);
    m = 0.5 * (a + b) + 0.125 * gamma * d * d;
  }
  return m;
}

}  // namespace

LoopPath random_loop(const Domain& annulus, int winding, int vertices, uint64_t seed) {
  if (annulus.kind() != Domain::Kind::Annulus)
    throw PreconditionError("random_loop expects an annulus");
  if (vertices < 8) throw PreconditionError("loop needs at least 8 vertices");
  double r = annulus.inner_radius();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  LoopPath loop;
  loop.winding = winding;
  loop.points.resize(vertices);
  if (winding == 0) {
    // small circle around a random interior center
    double rad = 0.15 * (1.0 - r);
    double rc = r + (0.5 + 0.2 * (unif(rng) - 0.5)) * (1.0 - r);
    double th = 2.0 * kPi * unif(rng);
    Complex center = std::polar(rc, th);
    for (int i = 0; i < vertices; ++i)
      loop.points[i] = center + std::polar(rad, 2.0 * kPi * i / vertices);
    return loop;
  }
  // winding-w spiral angles with jitter small enough to preserve the class
  double spacing = 2.0 * kPi * std::abs(winding) / vertices;
  for (int i = 0; i < vertices; ++i) {
    double th = 2.0 * kPi * winding * i / vertices + 0.3 * spacing * (unif(rng) - 0.5);
    double rad = r + (0.25 + 0.5 * unif(rng)) * (1.0 - r);
    loop.points[i] = std::polar(rad, th);
  }
  return loop;
}

ShortenResult birkhoff_shorten(const Domain& domain, const LoopPath& loop, int max_iter,
                               double tol) {
  if (domain.kind() != Domain::Kind::Annulus)
    throw PreconditionError("birkhoff_shorten currently supports the annulus");
  const int n = static_cast<int>(loop.points.size());
  if (n < 8) throw PreconditionError("loop needs at least 8 vertices");
  for (auto& p : loop.points)
    if (!domain.contains(std::vector<Complex>{p}))
      throw PreconditionError("loop vertex outside the domain");
  int declared = loop.winding;
  int computed = loop_winding(loop);
  if (declared != computed)
    throw PreconditionError("declared winding does not match the polygon winding");

  ShortenResult out;
  out.loop = loop;
  out.energies.push_back(loop_energy(domain, out.loop));

  const double degeneration_length = 1e-2;
  for (int iter = 0; iter < max_iter; ++iter) {
    double moved = 0.0;
    for (int parity = 0; parity < 2; ++parity) {
      std::vector<Complex> next = out.loop.points;
      parallel_for(n, [&](int i) {
        if (i % 2 != parity) return;
        Complex a = out.loop.points[(i + n - 1) % n];
        Complex b = out.loop.points[(i + 1) % n];
        next[i] = loop_geodesic_midpoint(domain, a, b);
      });
      for (int i = 0; i < n; ++i) moved = std::max(moved, std::abs(next[i] - out.loop.points[i]));
      out.loop.points = std::move(next);
    }
    ++out.iterations;
    double e = loop_energy(domain, out.loop);
    if (e > out.energies.back()) {
      // converged to numerical noise; keep the monotone ledger honest
      out.converged = true;
      break;
    }
    out.energies.push_back(e);

    double length = 0.0;
    for (int i = 0; i < n; ++i)
      length += std::abs(out.loop.points[(i + 1) % n] - out.loop.points[i]);
    if (declared == 0 && length < degeneration_length) {
      out.degenerated = true;
      return out;
    }
    if (moved < tol) {
      out.converged = true;
      break;
    }
  }
  out.loop.winding = loop_winding(out.loop);
  return out;
}

// -------------------------------------------------------- boundary repulsion scan

RepulsionReport boundary_repulsion_scan(const Domain& model, std::span<const double> rho_levels,
                                        const RepulsionScanOptions& opts) {
  if (model.kind() != Domain::Kind::Fefferman)
    throw PreconditionError("boundary_repulsion_scan needs a Fefferman model (n >= 2)");
  const int n = model.dim();
  for (double lv : rho_levels)
    if (!(lv < 0.0 && lv > -model.collar_width()))
      throw PreconditionError("rho levels must lie in (-collar, 0)");

  RepulsionReport report;
  report.min_second_derivative = std::numeric_limits<double>::infinity();
  std::vector<double> sorted_levels(rho_levels.begin(), rho_levels.end());
  std::sort(sorted_levels.begin(), sorted_levels.end());  // most negative first

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double empirical = 0.0;
  for (double level : sorted_levels) {
    bool all_positive = true;
    for (int pt = 0; pt < opts.points_per_level; ++pt) {
      // random direction from the origin, projected onto the level set by
      // bisection on the ray (model domains here are star shaped in practice)
      CVector dir(n);
      double nrm = 0.0;
      for (auto& c : dir) {
        c = Complex(gauss(rng), gauss(rng));
        nrm += std::norm(c);
      }
      nrm = std::sqrt(nrm);
      for (auto& c : dir) c /= nrm;
      double lo = 0.0, hi = 1.0;
      CVector z(n);
      auto at = [&](double s) {
        for (int j = 0; j < n; ++j) z[j] = s * dir[j];
        return model.rho(z);
      };
      while (at(hi) < level && hi < 64.0) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (at(mid) < level ? lo : hi) = mid;
      }
      at(0.5 * (lo + hi));

      DerivativeJet rj = model.rho_jet(z);
      double gradnorm = 0.0;
      for (auto& g : rj.d1) gradnorm += std::norm(g);
      if (gradnorm < 1e-20) {
        ++report.skipped_points;
        continue;
      }

      // real-orthonormal basis of the tangent space of the level set:
      // complement of the real gradient direction 2*conj(rho_j)
      std::vector<std::vector<double>> basis;
      std::vector<double> gvec(2 * n);
      for (int j = 0; j < n; ++j) {
        gvec[2 * j] = 2.0 * rj.d1[j].real();
        gvec[2 * j + 1] = -2.0 * rj.d1[j].imag();
      }
      {
        double gn = 0.0;
        for (double x : gvec) gn += x * x;
        gn = std::sqrt(gn);
        for (double& x : gvec) x /= gn;
      }
      for (int e = 0; e < 2 * n && static_cast<int>(basis.size()) < 2 * n - 1; ++e) {
        std::vector<double> cand(2 * n, 0.0);
        cand[e] = 1.0;
        double dp = 0.0;
        for (int i = 0; i < 2 * n; ++i) dp += cand[i] * gvec[i];
        for (int i = 0; i < 2 * n; ++i) cand[i] -= dp * gvec[i];
        for (auto& bvec : basis) {
          double d2 = 0.0;
          for (int i = 0; i < 2 * n; ++i) d2 += cand[i] * bvec[i];
          for (int i = 0; i < 2 * n; ++i) cand[i] -= d2 * bvec[i];
        }
        double norm = 0.0;
        for (double x : cand) norm += x * x;
        if (norm < 1e-12) continue;
        norm = std::sqrt(norm);
        for (double& x : cand) x /= norm;
        basis.push_back(cand);
      }

      // complex-tangential subspace: Hermitian complement of w_j = conj(rho_j)
      CVector wvec(n);
      for (int j = 0; j < n; ++j) wvec[j] = std::conj(rj.d1[j]);
      std::vector<CVector> cbasis;
      for (int e = 0; e < n && static_cast<int>(cbasis.size()) < n - 1; ++e) {
        CVector cand(n, Complex(0.0));
        cand[e] = 1.0;
        Complex dp = 0.0;
        for (int j = 0; j < n; ++j) dp += std::conj(wvec[j]) * cand[j] / gradnorm;
        for (int j = 0; j < n; ++j) cand[j] -= dp * wvec[j] / gradnorm;
        for (auto& bvec : cbasis) {
          Complex d2 = 0.0;
          for (int j = 0; j < n; ++j) d2 += std::conj(bvec[j]) * cand[j];
          for (int j = 0; j < n; ++j) cand[j] -= d2 * bvec[j];
        }
        double norm = 0.0;
        for (auto& c : cand) norm += std::norm(c);
        if (norm < 1e-12) continue;
        norm = std::sqrt(norm);
        for (auto& c : cand) c /= norm;
        cbasis.push_back(cand);
      }

      int dirs = opts.directions_per_point;
      std::vector<RepulsionEntry> entries(dirs);
      parallel_for(dirs, [&](int d) {
        // deterministic directions spread over the tangent sphere; even indices
        // draw from the complex-tangential subspace so that stratum is covered
        std::mt19937_64 dir_rng(opts.seed ^ (0x9e3779b97f4a7c15ull * (d + 1)) ^
                                std::hash<double>{}(level));
        std::normal_distribution<double> g01(0.0, 1.0);
        CVector v(n, Complex(0.0));
        bool want_ct = (d % 2 == 0) && !cbasis.empty();
        if (want_ct) {
          for (auto& bvec : cbasis) {
            Complex c(g01(dir_rng), g01(dir_rng));
            for (int j = 0; j < n; ++j) v[j] += c * bvec[j];
          }
        } else {
          std::vector<double> vre(2 * n, 0.0);
          for (auto& bvec : basis) {
            double c = g01(dir_rng);
            for (int i = 0; i < 2 * n; ++i) vre[i] += c * bvec[i];
          }
          for (int j = 0; j < n; ++j) v[j] = Complex(vre[2 * j], vre[2 * j + 1]);
        }
        double vn = 0.0;
        for (auto& c : v) vn += std::norm(c);
        vn = std::sqrt(vn);
        for (auto& c : v) c /= vn;

        Complex pair = 0.0;
        for (int j = 0; j < n; ++j) pair += rj.d1[j] * v[j];
        GeodesicState st{z, v};
        RepulsionEntry entry;
        entry.point = z;
        entry.direction = v;
        entry.rho_value = rj.value;
        entry.second_derivative = rho_second_derivative(model, st);
        entry.complex_tangential = std::abs(pair) < 1e-10;
        entries[d] = entry;
      });
      for (auto& entry : entries) {
        report.grid.push_back(entry);
        report.min_second_derivative =
            std::min(report.min_second_derivative, entry.second_derivative);
        if (!(entry.second_derivative > 0.0)) all_positive = false;
      }
    }
    if (all_positive) empirical = std::max(empirical, -level);
  }
  report.empirical_epsilon = empirical;
  return report;
}

// -------------------------------------------------------------------- rate fits

namespace {

struct LinFit {
  double slope, intercept, ss_res, r2;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  LinFit f{};
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ybar = sy / n, sstot = 0.0;
  f.ss_res = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double resid = y[i] - (f.intercept + f.slope * x[i]);
    f.ss_res += resid * resid;
    sstot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = sstot > 0.0 ? 1.0 - f.ss_res / sstot : 1.0;
  return f;
}

}  // namespace

RateFit rate_fit(std::span<const double> deltas, std::span<const double> values) {
  if (deltas.size() != values.size()) throw PreconditionError("sample size mismatch");
  if (deltas.size() < 8) throw PreconditionError("rate_fit needs at least 8 samples");
  double dmin = *std::min_element(deltas.begin(), deltas.end());
  double dmax = *std::max_element(deltas.begin(), deltas.end());
  if (!(dmin > 0.0)) throw PreconditionError("deltas must be positive");
  if (dmax / dmin < 99.0) throw PreconditionError("delta samples must span at least 2 decades");

  RateFit out;
  out.delta_min = dmin;
  out.delta_max = dmax;

  bool all_zero = true;
  for (double v : values)
    if (std::abs(v) > 1e-300) all_zero = false;
  if (all_zero) {
    out.exact_vanishing = true;
    out.exponent = std::numeric_limits<double>::infinity();
    out.r_squared = 1.0;
    return out;
  }

  std::vector<double> x, y_pow, y_log;
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (std::abs(values[i]) < 1e-300) continue;
    double ld = std::log(deltas[i]);
    x.push_back(ld);
    double lv = std::log(std::abs(values[i]));
    y_pow.push_back(lv);
    y_log.push_back(lv - std::log(std::abs(std::log(deltas[i]))));
  }
  LinFit fp = linear_fit(x, y_pow);
  LinFit fl = linear_fit(x, y_log);
  if (fl.ss_res < fp.ss_res) {
    out.log_factor = true;
    out.exponent = fl.slope;
    out.r_squared = fl.r2;
  } else {
    out.log_factor = false;
    out.exponent = fp.slope;
    out.r_squared = fp.r2;
  }
  return out;
}

// ---------------------------------------------------------------- classification

ClassifyReport classify_geodesic(const Domain& annulus, const GeodesicTrace& trace,
                                 const ClassifyOptions& opts) {
  if (annulus.kind() != Domain::Kind::Annulus)
    throw PreconditionError("classify_geodesic expects an annulus trace");
  if (trace.samples.size() < 3) throw PreconditionError("trace too short to classify");
  double r = annulus.inner_radius();
  double section = opts.section_radius > 0.0 ? opts.section_radius : std::sqrt(r);

  ClassifyReport report;
  report.min_clearance = std::numeric_limits<double>::infinity();
  report.recurrence_distance = std::numeric_limits<double>::infinity();

  // arc-length limited horizon so the verdict only depends on the
  // unparametrized geodesic
  double arc = 0.0;
  size_t limit = trace.samples.size();
  for (size_t i = 1; i < trace.samples.size(); ++i) {
    arc += trace.samples[i].speed * (trace.samples[i].t - trace.samples[i - 1].t);
    if (arc > opts.horizon) {
      limit = i + 1;
      break;
    }
  }

  for (size_t i = 0; i < limit; ++i)
    report.min_clearance =
        std::min(report.min_clearance, annulus.clearance(trace.samples[i].state.z));

  // section crossings of |z| = section
  for (size_t i = 1; i < limit; ++i) {
    double f0 = std::abs(trace.samples[i - 1].state.z[0]) - section;
    double f1 = std::abs(trace.samples[i].state.z[0]) - section;
    if (f0 == 0.0 || f0 * f1 >= 0.0) continue;
    // linear interpolation in t for the crossing
    double w = f0 / (f0 - f1);
    const auto& s0 = trace.samples[i - 1];
    const auto& s1 = trace.samples[i];
    double tc = s0.t + w * (s1.t - s0.t);
    Complex zc = s0.state.z[0] + w * (s1.state.z[0] - s0.state.z[0]);
    Complex vc = s0.state.v[0] + w * (s1.state.v[0] - s0.state.v[0]);
    SectionCrossing c;
    c.t = tc;
    c.angle = std::arg(zc);
    Complex tangent = Complex(0, 1) * zc / std::abs(zc);
    c.crossing_angle = std::arg(vc / tangent);
    c.radial_sign = f1 > f0 ? 1 : -1;
    report.crossings.push_back(c);
  }

  // closed: recurrence of the normalized state (covers the tangent circle
  // geodesic, which never crosses the section transversally)
  const auto& first = trace.samples.front();
  double v0n = 0.0;
  for (auto& c : first.state.v) v0n += std::norm(c);
  v0n = std::sqrt(v0n);
  double min_return_arc = 0.05 * opts.horizon;
  arc = 0.0;
  for (size_t i = 1; i < limit; ++i) {
    arc += trace.samples[i].speed * (trace.samples[i].t - trace.samples[i - 1].t);
    if (arc < min_return_arc) continue;
    double dz = std::abs(trace.samples[i].state.z[0] - first.state.z[0]);
    double vn = 0.0;
    for (auto& c : trace.samples[i].state.v) vn += std::norm(c);
    vn = std::sqrt(vn);
    double dv = std::abs(trace.samples[i].state.v[0] / vn - first.state.v[0] / v0n);
    report.recurrence_distance = std::min(report.recurrence_distance, dz + dv);
  }
  // also compare crossings pairwise in section coordinates
  for (size_t i = 0; i < report.crossings.size(); ++i)
    for (size_t j = i + 1; j < report.crossings.size(); ++j) {
      const auto& a = report.crossings[i];
      const auto& b = report.crossings[j];
      if (a.radial_sign != b.radial_sign) continue;
      double da = std::remainder(a.angle - b.angle, 2.0 * kPi);
      double dc = std::remainder(a.crossing_angle - b.crossing_angle, 2.0 * kPi);
      report.recurrence_distance =
          std::min(report.recurrence_distance, std::abs(da) + std::abs(dc));
    }

  if (report.recurrence_distance < opts.tol) {
    report.verdict = GeodesicVerdict::Closed;
    return report;
  }

  // boundary-seeking: clearance decreasing monotonically into the guard zone
  double guard = 1e-6;
  bool near_boundary = trace.halted_near_boundary || report.min_clearance < 10.0 * guard;
  if (near_boundary) {
    // check monotone decrease over the final quarter of the usable trace
    size_t start = limit - std::max<size_t>(2, limit / 4);
    bool monotone = true;
    double prev = annulus.clearance(trace.samples[start].state.z);
    for (size_t i = start + 1; i < limit; ++i) {
      double cl = annulus.clearance(trace.samples[i].state.z);
      if (cl > prev + 1e-12) monotone = false;
      prev = cl;
    }
    if (monotone) {
      report.verdict = GeodesicVerdict::BoundarySeeking;
      return report;
    }
  }
  report.verdict = GeodesicVerdict::SpiralCandidate;
  return report;
}

}  // namespace szego
