#include "szego/kernel.hpp"

#include <cmath>

namespace szego {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

KernelValue szego_ball(std::span<const Complex> z, std::span<const Complex> w, int n) {
  if (n < 1) throw PreconditionError("ball dimension must be >= 1");
  if (z.size() != w.size() || static_cast<int>(z.size()) != n)
    throw PreconditionError("point dimension mismatch");
  Complex pairing = 0.0;
  for (int j = 0; j < n; ++j) pairing += z[j] * std::conj(w[j]);
  Complex denom = 1.0 - pairing;
  if (denom == 0.0) throw PreconditionError("degenerate pairing: 1 - z.conj(w) = 0");
  double c = factorial(n - 1) / (2.0 * std::pow(kPi, n));
  KernelValue kv;
  kv.value = c * std::pow(denom, -n);
  return kv;
}

KernelValue szego_annulus(Complex z, Complex w, double r, double tol) {
  if (!(r > 0.0 && r < 1.0)) throw PreconditionError("annulus radius must lie in (0,1)");
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  Complex q = z * std::conj(w);
  double aq = std::abs(q);
  if (aq >= 1.0 || aq <= r * r)
    throw PreconditionError("non-convergent pairing: need r^2 < |z conj(w)| < 1");

  // positive direction ratio ~ |q|, negative direction ratio ~ r^2/|q|
  double ratio_p = aq;
  double ratio_m = r * r / aq;
  Complex sum = 1.0 / (1.0 + r);  // m = 0 term
  int terms = 1;
  // negative direction as (q/r^2)^{-m} / (r (r^{2m-1} + 1)) to avoid overflow
  Complex qp = 1.0, qm = 1.0;
  Complex qinv = r * r / q;
  double rp = r, rs = 1.0 / r;  // r^{2m+1} and r^{2m-1}
  double tail = 0.0;
  for (int m = 1; m < 100000; ++m) {
    qp *= q;
    qm *= qinv;
    rp *= r * r;
    rs *= r * r;
    Complex tp = qp / (1.0 + rp);
    Complex tm = qm / (r * (rs + 1.0));
    sum += tp + tm;
    terms += 2;
    double bp = std::pow(ratio_p, m + 1) / (1.0 - ratio_p);
    double bm = std::pow(ratio_m, m + 1) / ((1.0 - ratio_m) * r);
    tail = (bp + bm) / (2.0 * kPi);
    if (tail < tol && m > 4) break;
  }
  KernelValue kv;
  kv.value = sum / (2.0 * kPi);
  kv.truncation_error_bound = tail;
  kv.terms_used = terms;
  return kv;
}

AnnulusSeries annulus_series(double t, double r, double tol, int nder) {
  if (!(t > r * r && t < 1.0)) throw PreconditionError("need r^2 < t < 1 for the annulus series");
  AnnulusSeries out;
  auto add_term = [&](double m) {
    // negative m rewritten as (t/r^2)^m / (r (r^{-2m-1} + 1)) to avoid overflow
    double base = m >= 0.0
                      ? std::pow(t, m) / (1.0 + std::pow(r, 2.0 * m + 1.0))
                      : std::pow(t / (r * r), m) / (r * (std::pow(r, -2.0 * m - 1.0) + 1.0));
    double fall = 1.0;
    for (int d = 0; d <= nder; ++d) {
      out.f[d] += base * fall;
      fall *= (m - d) / t;
    }
  };
  add_term(0.0);
  out.terms_used = 1;
  double ratio_p = t, ratio_m = r * r / t;
  for (int m = 1; m < 200000; ++m) {
    add_term(m);
    add_term(-m);
    out.terms_used += 2;
    // conservative polynomial-times-geometric tail bound
    double poly = std::pow(static_cast<double>(m + 1) / std::max(1, m + 1 - nder), 3);
    double bp = poly * std::pow(ratio_p, m + 1) / (1.0 - ratio_p);
    double bm = poly * std::pow(ratio_m, m + 1) / ((1.0 - ratio_m) * r);
    double deriv_scale = std::pow(static_cast<double>(m + 1) / t, nder);
    out.tail_bound = (bp + bm) * std::max(1.0, deriv_scale);
    if (out.tail_bound < tol && m > 8) break;
  }
  return out;
}

KernelValue kernel_diagonal_model(const Domain& model, std::span<const Complex> z) {
  if (model.kind() != Domain::Kind::Fefferman)
    throw PreconditionError("kernel_diagonal_model needs a Fefferman model");
  double rho = model.rho(z);
  if (!(rho < 0.0)) throw PreconditionError("point is not interior (rho >= 0)");
  double phi = model.phi_expr().eval(z).real();
  double psi = model.psi_expr().eval(z).real();
  int n = model.dim();
  double absr = -rho;
  double pw = std::pow(absr, n);
  double numer = phi + psi * pw * std::log(absr);
  if (!(numer > 0.0))
    throw ModelValidityError("kernel numerator is non-positive: model left its valid collar");
  KernelValue kv;
  kv.value = numer / pw;
  return kv;
}

KernelValue kernel_diagonal(const Domain& domain, std::span<const Complex> z, double tol) {
  switch (domain.kind()) {
    case Domain::Kind::Ball:
      return szego_ball(z, z, domain.dim());
    case Domain::Kind::Annulus:
      return szego_annulus(z[0], z[0], domain.inner_radius(), tol);
    case Domain::Kind::Fefferman:
      return kernel_diagonal_model(domain, z);
  }
  throw Error("unreachable domain kind");
}

double log_kernel_diagonal(const Domain& domain, std::span<const Complex> z) {
  return std::log(kernel_diagonal(domain, z).value.real());
}

}  // namespace szego
