#include "szego/metric.hpp"

#include <cmath>

#include "szego/wp.hpp"

namespace szego {

namespace {

// Scalar derivatives of w(s) = (-s)^n log(-s) for s < 0, orders 0..3.
std::array<Complex, 4> w_rho_derivs(double s, int n) {
  double m = -s;
  double lm = std::log(m);
  // w    = m^n lm
  // w'   = -(n m^{n-1} lm + m^{n-1})
  // w''  = n(n-1) m^{n-2} lm + (2n-1) m^{n-2}
  // w''' = -(n(n-1)(n-2) m^{n-3} lm + (3n^2 - 6n + 2) m^{n-3})
  std::array<Complex, 4> d;
  d[0] = std::pow(m, n) * lm;
  d[1] = -(n * std::pow(m, n - 1) * lm + std::pow(m, n - 1));
  d[2] = n * (n - 1.0) * std::pow(m, n - 2) * lm + (2.0 * n - 1.0) * std::pow(m, n - 2);
  d[3] = -(n * (n - 1.0) * (n - 2.0) * std::pow(m, n - 3) * lm +
           (3.0 * n * n - 6.0 * n + 2.0) * std::pow(m, n - 3));
  return d;
}

Jet log_h_jet(const Domain& model, std::span<const Complex> z, double rho_value) {
  Jet rho = model.rho_expr().eval_jet(z);
  Jet phi = model.phi_expr().eval_jet(z);
  Jet psi = model.psi_expr().eval_jet(z);
  Jet w = rho.compose(w_rho_derivs(rho_value, model.dim()));
  Jet h = phi + psi * w;
  if (!(h.value().real() > 0.0))
    throw ModelValidityError("kernel numerator h is non-positive at this point");
  return h.log();
}

// Wirtinger jet of the metric potential log S = h-frak + n * g-frak.
Jet potential_jet(const Domain& model, std::span<const Complex> z) {
  Jet rho = model.rho_expr().eval_jet(z);
  double rv = rho.value().real();
  if (!(rv < 0.0)) throw PreconditionError("point is not interior (rho >= 0)");
  Jet gfrak = -((-rho).log());  // -log|rho|
  return log_h_jet(model, z, rv) + Complex(model.dim()) * gfrak;
}

HermitianForm form_from_potential(const Jet& u, int n) {
  HermitianForm out;
  out.g = CMatrix(n, n);
  out.dg = CTensor3(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      out.g(j, k) = u.derivative({j, k + n});
      for (int a = 0; a < n; ++a) out.dg(a, j, k) = u.derivative({a, j, k + n});
    }
  return out;
}

}  // namespace

double HermitianForm::quadratic(std::span<const Complex> v) const {
  const int n = static_cast<int>(g.rows());
  Complex s = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) s += g(j, k) * v[j] * std::conj(v[k]);
  return s.real();
}

HermitianForm metric_ball(std::span<const Complex> z, int n) {
  if (static_cast<int>(z.size()) != n) throw PreconditionError("point dimension mismatch");
  double t = 0.0;
  for (auto& c : z) t += std::norm(c);
  if (!(t < 1.0)) throw PreconditionError("point is not inside the unit ball");
  double d = 1.0 - t;
  HermitianForm out;
  out.g = CMatrix(n, n);
  out.dg = CTensor3(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double delta = (j == k) ? 1.0 : 0.0;
      out.g(j, k) = double(n) * (delta * d + std::conj(z[j]) * z[k]) / (d * d);
      for (int a = 0; a < n; ++a) {
        double djk = delta, dak = (a == k) ? 1.0 : 0.0;
        out.dg(a, j, k) =
            double(n) *
            ((djk * std::conj(z[a]) + std::conj(z[j]) * dak) * d +
             2.0 * std::conj(z[a]) * std::conj(z[j]) * z[k]) /
            (d * d * d);
      }
    }
  return out;
}

double annulus_lambda2(double s, double r, AnnulusMethod method) {
  if (!(s > r && s < 1.0)) throw PreconditionError("radius outside the annulus");
  if (method == AnnulusMethod::Series) {
    double t = s * s;
    auto ser = annulus_series(t, r, 1e-14, 2);
    double F = ser.f[0], F1 = ser.f[1], F2 = ser.f[2];
    return F1 / F + t * (F2 * F - F1 * F1) / (F * F);
  }
  auto par = WpParameters::for_annulus(r);
  double u = 2.0 * std::log(s);
  Complex shift(par.omega1, par.omega3_im);
  Complex val = weierstrass_p(u, par) - weierstrass_p(u + shift, par);
  return val.real() / (s * s);
}

HermitianForm metric_annulus(Complex z, double r, AnnulusMethod method) {
  double s = std::abs(z);
  if (!(s > r && s < 1.0)) throw PreconditionError("point outside the annulus");
  HermitianForm out;
  out.g = CMatrix(1, 1);
  out.dg = CTensor3(1);
  double t = s * s;
  if (method == AnnulusMethod::Series) {
    auto ser = annulus_series(t, r, 1e-14, 3);
    double F = ser.f[0], F1 = ser.f[1], F2 = ser.f[2], F3 = ser.f[3];
    double lam2 = F1 / F + t * (F2 * F - F1 * F1) / (F * F);
    // d lambda^2 / dt
    double dlam2 = (F2 * F - F1 * F1) / (F * F) + (F2 * F - F1 * F1) / (F * F) +
                   t * (F3 * F * F - F1 * F2 * F - 2.0 * F * F2 * F1 + 2.0 * F1 * F1 * F1) /
                       (F * F * F);
    out.g(0, 0) = lam2;
    out.dg(0, 0, 0) = dlam2 * std::conj(z);
  } else {
    auto par = WpParameters::for_annulus(r);
    double u = std::log(t);
    Complex shift(par.omega1, par.omega3_im);
    Complex a = weierstrass_p(u, par) - weierstrass_p(u + shift, par);
    Complex da = weierstrass_p_prime(u, par) - weierstrass_p_prime(u + shift, par);
    out.g(0, 0) = a.real() / t;
    // d/dz [A(log t) / t] = (A'(u) - A(u)) e^{-u} / z
    out.dg(0, 0, 0) = (da.real() - a.real()) / t / z;
  }
  return out;
}

HermitianForm metric_model(const Domain& model, std::span<const Complex> z) {
  if (model.kind() != Domain::Kind::Fefferman)
    throw PreconditionError("metric_model needs a Fefferman model");
  return form_from_potential(potential_jet(model, z), model.dim());
}

HermitianForm szego_metric(const Domain& domain, std::span<const Complex> z) {
  switch (domain.kind()) {
    case Domain::Kind::Ball:
      return metric_ball(z, domain.dim());
    case Domain::Kind::Annulus:
      return metric_annulus(z[0], domain.inner_radius(), AnnulusMethod::Wp);
    case Domain::Kind::Fefferman:
      return metric_model(domain, z);
  }
  throw Error("unreachable domain kind");
}

HermitianForm metric_fd_oracle(const Domain& domain, std::span<const Complex> z, double step) {
  const int n = static_cast<int>(z.size());
  double clear = domain.clearance(z);
  if (step <= 0.0) step = std::pow(2.22e-16, 1.0 / 6.0) * clear;
  if (!(clear > 2.0 * step)) throw PreconditionError("insufficient boundary clearance for stencil");

  // real coordinates x_0..x_{2n-1}: x_{2j} = Re z_j, x_{2j+1} = Im z_j
  auto eval = [&](std::span<const double> x) {
    CVector p(n);
    for (int j = 0; j < n; ++j) p[j] = Complex(x[2 * j], x[2 * j + 1]);
    return log_kernel_diagonal(domain, p);
  };
  const int m = 2 * n;
  std::vector<double> x0(m);
  for (int j = 0; j < n; ++j) {
    x0[2 * j] = z[j].real();
    x0[2 * j + 1] = z[j].imag();
  }

  // 4th-order mixed second partial with step h
  auto mixed = [&](int a, int b, double h) {
    auto f = [&](double da, double db) {
      std::vector<double> x = x0;
      x[a] += da;
      x[b] += db;
      return eval(x);
    };
    if (a == b) {
      return (-f(2 * h, 0) + 16.0 * f(h, 0) - 30.0 * f(0, 0) + 16.0 * f(-h, 0) - f(-2 * h, 0)) /
             (12.0 * h * h);
    }
    // 4th-order cross stencil as a product of two 4-point first-derivative stencils
    auto d1b = [&](double da) {
      std::vector<double> x = x0;
      x[a] += da;
      auto g = [&](double db) {
        std::vector<double> y = x;
        y[b] += db;
        return eval(y);
      };
      return (-g(2 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2 * h)) / (12.0 * h);
    };
    return (-d1b(2 * h) + 8.0 * d1b(h) - 8.0 * d1b(-h) + d1b(-2 * h)) / (12.0 * h);
  };
  auto mixed_richardson = [&](int a, int b) {
    double c1 = mixed(a, b, step);
    double c2 = mixed(a, b, step / 2.0);
    return (16.0 * c2 - c1) / 15.0;
  };

  HermitianForm out;
  out.g = CMatrix(n, n);
  out.dg = CTensor3(0);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      double xx = mixed_richardson(2 * j, 2 * k);
      double yy = mixed_richardson(2 * j + 1, 2 * k + 1);
      double xy = mixed_richardson(2 * j, 2 * k + 1);
      double yx = mixed_richardson(2 * j + 1, 2 * k);
      Complex val = 0.25 * Complex(xx + yy, xy - yx);
      out.g(j, k) = val;
      out.g(k, j) = std::conj(val);
    }
  return out;
}

LeviQuantities levi_quantities(const Domain& model, std::span<const Complex> z) {
  const int n = model.dim();
  DerivativeJet rj = model.rho_jet(z);
  double rho = rj.value;
  if (!(rho < 0.0)) throw PreconditionError("point is not interior (rho >= 0)");

  CMatrix lrho(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) lrho(j, k) = rj.mixed(j, k);
  CVec grad(n);
  for (int j = 0; j < n; ++j) grad(j) = rj.d1[j];

  LeviQuantities out;
  out.calQ = grad.dot(hermitian_solve_guarded(lrho, grad)).real();  // grad^H L^{-1} grad

  Jet hj = log_h_jet(model, z, rho);
  out.hjet.b = CVec(n);
  out.hjet.levi = CMatrix(n, n);
  out.hjet.abj = CTensor3(n);
  for (int b = 0; b < n; ++b) {
    out.hjet.b(b) = hj.derivative({b});
    for (int j = 0; j < n; ++j) {
      out.hjet.levi(b, j) = hj.derivative({b, j + n});
      for (int a = 0; a < n; ++a) out.hjet.abj(a, b, j) = hj.derivative({a, b, j + n});
    }
  }

  HermitianForm form = metric_model(model, z);
  out.lg_inv_grad = hermitian_solve_guarded(form.g, grad);
  out.q_vector = out.lg_inv_grad / (rho * rho);
  out.q_scalar = grad.dot(out.lg_inv_grad).real() / (rho * rho);
  return out;
}

// Explicit inversion is avoided; collar conditioning degrades as rho -> 0.
CVec hermitian_solve_guarded(const CMatrix& a, const CVec& b) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > 1e12)
    throw NumericalError("Levi matrix is numerically singular or indefinite");
  return es.eigenvectors() *
         (es.eigenvectors().adjoint() * b).cwiseQuotient(es.eigenvalues().cast<Complex>());
}

CMatrix hermitian_solve_guarded(const CMatrix& a, const CMatrix& b) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > 1e12)
    throw NumericalError("Levi matrix is numerically singular or indefinite");
  CMatrix y = es.eigenvectors().adjoint() * b;
  for (int i = 0; i < y.rows(); ++i) y.row(i) /= es.eigenvalues()(i);
  return es.eigenvectors() * y;
}

double caratheodory_ball(std::span<const Complex> z, std::span<const Complex> v, int n) {
  if (static_cast<int>(z.size()) != n || static_cast<int>(v.size()) != n)
    throw PreconditionError("dimension mismatch");
  double t = 0.0, nv = 0.0;
  Complex pair = 0.0;
  for (int j = 0; j < n; ++j) {
    t += std::norm(z[j]);
    nv += std::norm(v[j]);
    pair += v[j] * std::conj(z[j]);
  }
  if (!(t < 1.0)) throw PreconditionError("point is not inside the unit ball");
  double d = 1.0 - t;
  return std::sqrt((d * nv + std::norm(pair)) / (d * d));
}

}  // namespace szego
