#include "szego/wp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace szego {

namespace {

// sigma_k(n) = sum of k-th powers of divisors
double sigma_pow(int n, int k) {
  double s = 0.0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) s += std::pow(static_cast<double>(d), k);
  return s;
}

struct Invariants {
  double g2, g3;
};

Invariants invariants(const WpParameters& p) {
  if (!(p.omega1 > 0.0)) throw PreconditionError("omega1 must be positive");
  if (!(p.omega3_im > 0.0)) throw PreconditionError("omega3 must have positive imaginary part");
  // nome q = exp(2*pi*i*tau), tau = i*omega3_im/omega1; q real in (0,1)
  double q = std::exp(-2.0 * kPi * p.omega3_im / p.omega1);
  double e4 = 1.0, e6 = 1.0, qn = 1.0;
  for (int n = 1; n < 400; ++n) {
    qn *= q;
    double t4 = 240.0 * sigma_pow(n, 3) * qn;
    double t6 = 504.0 * sigma_pow(n, 5) * qn;
    e4 += t4;
    e6 -= t6;
    if (t4 < 1e-18 * std::abs(e4) && t6 < 1e-18 * std::abs(e6)) break;
  }
  double w4 = std::pow(p.omega1, 4);
  Invariants inv;
  inv.g2 = kPi * kPi * kPi * kPi * e4 / (12.0 * w4);
  inv.g3 = std::pow(kPi, 6) * e6 / (216.0 * w4 * p.omega1 * p.omega1);
  return inv;
}

// Laurent coefficients a_k of wp(v) = 1/v^2 + sum a_k v^{2k}
std::vector<double> laurent_coeffs(double g2, double g3, int kmax) {
  std::vector<double> a(kmax + 1, 0.0);
  if (kmax >= 1) a[1] = g2 / 20.0;
  if (kmax >= 2) a[2] = g3 / 28.0;
  for (int k = 3; k <= kmax; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k - 2; ++i) s += a[i] * a[k - 1 - i];
    a[k] = 3.0 * s / ((2.0 * k + 3.0) * (k - 2.0));
  }
  return a;
}

struct WpEval {
  Complex p;       // wp(u)
  Complex pprime;  // wp'(u)
};

// real roots of 4x^3 - g2 x - g3 in decreasing order (rectangular lattice)
std::array<double, 3> half_period_values(double g2, double g3) {
  // depressed cubic x^3 + p x + q with p = -g2/4, q = -g3/4
  double p = -g2 / 4.0, q = -g3 / 4.0;
  double m = 2.0 * std::sqrt(-p / 3.0);
  double arg = 3.0 * q / (p * m);
  arg = std::min(1.0, std::max(-1.0, arg));
  double phi = std::acos(arg) / 3.0;
  std::array<double, 3> e{m * std::cos(phi), m * std::cos(phi - 2.0 * kPi / 3.0),
                          m * std::cos(phi + 2.0 * kPi / 3.0)};
  std::sort(e.begin(), e.end(), std::greater<double>());
  return e;
}

WpEval eval_small(Complex v, double g2, double g3, double rconv, double tol);

WpEval eval_reduced(Complex u, const WpParameters& par, double tol) {
  auto inv = invariants(par);
  const double g2 = inv.g2, g3 = inv.g3;

  // reduce modulo the period lattice (2*omega1) Z + (2i*omega3_im) Z
  double px = 2.0 * par.omega1, py = 2.0 * par.omega3_im;
  double x = u.real() - px * std::round(u.real() / px);
  double y = u.imag() - py * std::round(u.imag() / py);
  Complex v(x, y);
  if (std::abs(v) < 1e-12)
    throw NumericalError("weierstrass_p evaluated on the period lattice");

  double rconv = 2.0 * std::min(par.omega1, par.omega3_im);

  // near a half-period the duplication denominator wp'^2 degenerates; switch
  // to the half-period addition formula, which is well conditioned there
  const Complex halves[3] = {Complex(par.omega1, 0.0), Complex(par.omega1, par.omega3_im),
                             Complex(0.0, par.omega3_im)};
  auto e = half_period_values(g2, g3);  // e[j] = wp(halves[j])
  for (int j = 0; j < 3; ++j) {
    Complex d = v - halves[j];
    d = Complex(d.real() - px * std::round(d.real() / px),
                d.imag() - py * std::round(d.imag() / py));
    if (std::abs(d) > 0.35 * rconv) continue;
    double ej = e[j], ek = e[(j + 1) % 3], el = e[(j + 2) % 3];
    double c = (ej - ek) * (ej - el);
    if (std::abs(d) < 1e-12) return {Complex(ej), Complex(0.0)};
    WpEval w = eval_small(d, g2, g3, rconv, tol);
    Complex denom = w.p - ej;
    return {ej + c / denom, -c * w.pprime / (denom * denom)};
  }
  return eval_small(v, g2, g3, rconv, tol);
}

WpEval eval_small(Complex v, double g2, double g3, double rconv, double tol) {
  // halve until the Laurent series converges fast
  int halvings = 0;
  while (std::abs(v) > 0.3 * rconv) {
    v *= 0.5;
    ++halvings;
  }

  int kmax = 16;
  double ratio = std::norm(v) / (rconv * rconv);  // (|v|/R)^2 < 0.09
  while (kmax < 60 && std::pow(ratio, kmax) > tol * 1e-3) ++kmax;
  auto a = laurent_coeffs(g2, g3, kmax);

  Complex v2 = v * v;
  Complex p = 1.0 / v2, dp = -2.0 / (v2 * v);
  Complex vpow = v2;  // v^{2k}
  for (int k = 1; k <= kmax; ++k) {
    p += a[k] * vpow;
    dp += a[k] * (2.0 * k) * vpow / v;
    vpow *= v2;
  }

  // duplication: x2 = ((x^2 + g2/4)^2 + 2 g3 x) / (4x^3 - g2 x - g3),
  // wp'(2v) = d(x2)/dx * wp'(v) / 2
  for (int h = 0; h < halvings; ++h) {
    Complex x1 = p;
    Complex num = (x1 * x1 + g2 / 4.0) * (x1 * x1 + g2 / 4.0) + 2.0 * g3 * x1;
    Complex den = 4.0 * x1 * x1 * x1 - g2 * x1 - g3;
    if (std::abs(den) < 1e-300)
      throw NumericalError("weierstrass duplication hit a half-period degeneracy");
    Complex dnum = 4.0 * x1 * (x1 * x1 + g2 / 4.0) + 2.0 * g3;
    Complex dden = 12.0 * x1 * x1 - g2;
    Complex x2 = num / den;
    Complex dx2 = (dnum - x2 * dden) / den;
    p = x2;
    dp = dx2 * dp / 2.0;
  }
  return {p, dp};
}

}  // namespace

WpParameters WpParameters::for_annulus(double r) {
  if (!(r > 0.0 && r < 1.0)) throw PreconditionError("annulus radius must lie in (0,1)");
  return WpParameters{-std::log(r), kPi};
}

void wp_invariants(const WpParameters& p, double& g2, double& g3) {
  auto inv = invariants(p);
  g2 = inv.g2;
  g3 = inv.g3;
}

Complex weierstrass_p(Complex u, const WpParameters& p, double tol) {
  return eval_reduced(u, p, tol).p;
}

Complex weierstrass_p_prime(Complex u, const WpParameters& p, double tol) {
  return eval_reduced(u, p, tol).pprime;
}

}  // namespace szego
