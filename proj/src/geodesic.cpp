#include "szego/geodesic.hpp"

#include <cmath>

namespace szego {

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using RVec = std::vector<double>;

void axpy(RVec& y, double a, const RVec& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

CTensor3 christoffel(const HermitianForm& form) {
  const int n = static_cast<int>(form.g.rows());
  if (form.dg.dim() != n) throw PreconditionError("christoffel needs metric derivatives");
  CTensor3 gamma(n);
  // Euler-Lagrange form: sum_j g_{j lbar} c''_j = -sum_{jk} u_{jk lbar} c'_j c'_k,
  // so Gamma^._{jk} solves conj(L_g) x = w with w_m = d_j g_{k mbar}. Solve the
  // conjugated system through the Hermitian solver.
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      CVec w(n);
      for (int m = 0; m < n; ++m) w(m) = std::conj(form.dg(j, k, m));
      CVec x = hermitian_solve_guarded(form.g, w);
      for (int l = 0; l < n; ++l) gamma(l, j, k) = std::conj(x(l));
    }
  return gamma;
}

CTensor3 christoffel(const Domain& domain, std::span<const Complex> z) {
  return christoffel(szego_metric(domain, z));
}

namespace {

struct Flow {
  const Domain& domain;
  int n;

  void rhs(const RVec& y, RVec& dy) const {
    CVector z(n), v(n);
    for (int j = 0; j < n; ++j) {
      z[j] = Complex(y[2 * j], y[2 * j + 1]);
      v[j] = Complex(y[2 * n + 2 * j], y[2 * n + 2 * j + 1]);
    }
    CTensor3 gamma = christoffel(domain, z);
    for (int j = 0; j < n; ++j) {
      dy[2 * j] = v[j].real();
      dy[2 * j + 1] = v[j].imag();
      Complex acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc -= gamma(j, a, b) * v[a] * v[b];
      dy[2 * n + 2 * j] = acc.real();
      dy[2 * n + 2 * j + 1] = acc.imag();
    }
  }

  GeodesicState unpack(const RVec& y) const {
    GeodesicState s;
    s.z.resize(n);
    s.v.resize(n);
    for (int j = 0; j < n; ++j) {
      s.z[j] = Complex(y[2 * j], y[2 * j + 1]);
      s.v[j] = Complex(y[2 * n + 2 * j], y[2 * n + 2 * j + 1]);
    }
    return s;
  }
};

}  // namespace

GeodesicTrace integrate_geodesic(const Domain& domain, const GeodesicState& s0, double T,
                                 double tol, const IntegrateOptions& opts) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  if (!(T > 0.0)) throw PreconditionError("duration must be positive");
  const int n = domain.dim();
  if (static_cast<int>(s0.z.size()) != n || static_cast<int>(s0.v.size()) != n)
    throw PreconditionError("state dimension mismatch");
  if (!domain.contains(s0.z)) throw PreconditionError("initial position is not interior");

  Flow flow{domain, n};
  const int dim = 4 * n;
  RVec y(dim);
  for (int j = 0; j < n; ++j) {
    y[2 * j] = s0.z[j].real();
    y[2 * j + 1] = s0.z[j].imag();
    y[2 * n + 2 * j] = s0.v[j].real();
    y[2 * n + 2 * j + 1] = s0.v[j].imag();
  }

  // Local tolerance well below the requested global speed-drift budget.
  double atol = std::max(tol * 5e-4, 5e-15);
  double rtol = atol;

  GeodesicTrace trace;
  auto record = [&](double t, const RVec& yy) {
    GeodesicState s = flow.unpack(yy);
    double speed = szego_metric(domain, s.z).length(s.v);
    trace.samples.push_back({t, std::move(s), speed});
  };
  record(0.0, y);

  RVec k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ytmp(dim), y5(dim);
  flow.rhs(y, k1);
  double t = 0.0;
  double h = 1e-4;
  double err_prev = 1.0;

  while (t < T && trace.accepted_steps + trace.rejected_steps < opts.max_steps) {
    if (h > T - t) h = T - t;
    auto stage = [&](RVec& k, double /*c*/, std::initializer_list<std::pair<double, const RVec*>> terms) {
      ytmp = y;
      for (auto& [a, kv] : terms) axpy(ytmp, a * h, *kv);
      flow.rhs(ytmp, k);
    };
    bool stage_failed = false;
    try {
      stage(k2, c2, {{a21, &k1}});
      stage(k3, c3, {{a31, &k1}, {a32, &k2}});
      stage(k4, c4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
      stage(k5, c5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
      stage(k6, 1.0, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
      y5 = y;
      axpy(y5, b1 * h, k1);
      axpy(y5, b3 * h, k3);
      axpy(y5, b4 * h, k4);
      axpy(y5, b5 * h, k5);
      axpy(y5, b6 * h, k6);
      flow.rhs(y5, k7);
    } catch (const Error&) {
      stage_failed = true;  // stage left the domain; retry with a smaller step
    }

    if (!stage_failed) {
      double err = 0.0;
      for (int i = 0; i < dim; ++i) {
        double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                        e7 * k7[i]);
        double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / dim);

      if (err <= 1.0) {
        t += h;
        y = y5;
        k1 = k7;  // FSAL
        ++trace.accepted_steps;
        if (opts.record_samples || t >= T) record(t, y);
        GeodesicState s = flow.unpack(y);
        if (domain.clearance(s.z) < opts.boundary_guard) {
          trace.halted_near_boundary = true;
          break;
        }
        // PI controller
        double fac = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.7 / 5.0) *
                     std::pow(err_prev, 0.4 / 5.0);
        fac = std::min(5.0, std::max(0.2, fac));
        h *= fac;
        err_prev = err > 0 ? err : 1e-10;
      } else {
        ++trace.rejected_steps;
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    } else {
      ++trace.rejected_steps;
      h *= 0.25;
    }

    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      trace.halted_near_boundary = true;
      break;
    }
  }
  if (!opts.record_samples && (trace.samples.empty() || trace.samples.back().t < t))
    record(t, y);
  return trace;
}

GeodesicState geodesic_state_at(const Domain& domain, const GeodesicState& s0, double t,
                                double tol) {
  IntegrateOptions opts;
  opts.record_samples = false;
  GeodesicTrace tr = integrate_geodesic(domain, s0, t, tol, opts);
  if (tr.halted_near_boundary)
    throw NumericalError("geodesic reached the numerical boundary guard before the target time");
  return tr.samples.back().state;
}

double rho_second_derivative(const Domain& model, const GeodesicState& s) {
  if (model.kind() != Domain::Kind::Fefferman)
    throw PreconditionError("rho_second_derivative needs a Fefferman model");
  const int n = model.dim();
  DerivativeJet rj = model.rho_jet(s.z);
  double rho = rj.value;
  LeviQuantities lq = levi_quantities(model, s.z);

  const CVector& v = s.v;
  Complex grad_pair = 0.0;  // grad rho . c'^t
  for (int a = 0; a < n; ++a) grad_pair += rj.d1[a] * v[a];

  Complex pure_pair = 0.0;  // sum rho_ab c'_a c'_b
  Complex levi_pair = 0.0;  // c' L_rho conj(c')^t
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      pure_pair += rj.pure(a, b) * v[a] * v[b];
      levi_pair += rj.mixed(a, b) * v[a] * std::conj(v[b]);
    }

  // term 1: -2 Re sum (h_{ab jbar} - (n/rho) rho_{ab jbar}) [L_g^{-1} grad]_j c'_a c'_b
  Complex t1 = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex coeff = 0.0;
      for (int j = 0; j < n; ++j)
        coeff += (lq.hjet.abj(a, b, j) - (static_cast<double>(n) / rho) * rj.d3(a, b, j)) *
                 lq.lg_inv_grad(j);
      t1 += coeff * v[a] * v[b];
    }
  double term1 = -2.0 * t1.real();

  // term 2: -(4/rho) Re[ (c' . L_h L_g^{-1} grad) (grad rho . c'^t) ]
  CVec lh_p = lq.hjet.levi * lq.lg_inv_grad;
  Complex cross = 0.0;
  for (int a = 0; a < n; ++a) cross += v[a] * lh_p(a);
  double term2 = -(4.0 / rho) * (cross * grad_pair).real();

  // term 3: 2 (1 - n q_scalar) Re sum rho_ab c'_a c'_b
  double term3 = 2.0 * (1.0 - n * lq.q_scalar) * pure_pair.real();

  // term 4: (4/rho) Re (grad rho . c'^t)^2 + 2 c' L_rho conj(c')^t
  double term4 = (4.0 / rho) * (grad_pair * grad_pair).real() + 2.0 * levi_pair.real();

  return term1 + term2 + term3 + term4;
}

}  // namespace szego
