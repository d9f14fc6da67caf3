#pragma once

#include <span>

#include "szego/domain.hpp"
#include "szego/wp.hpp"

namespace szego {

struct KernelValue {
  Complex value;
  double truncation_error_bound = 0.0;
  int terms_used = 0;
};

/// Szego kernel of the unit ball: (n-1)!/(2 pi^n) (1 - z.wbar)^{-n}.
KernelValue szego_ball(std::span<const Complex> z, std::span<const Complex> w, int n);

/// Szego kernel of the annulus A_r as a bilateral series in z*conj(w),
/// truncated with a certified geometric tail bound below tol.
KernelValue szego_annulus(Complex z, Complex w, double r, double tol);

/// Diagonal Szego kernel of a Fefferman model:
/// (Phi + Psi |rho|^n log|rho|) / |rho|^n.
KernelValue kernel_diagonal_model(const Domain& model, std::span<const Complex> z);

/// Diagonal kernel for any domain model (dispatch).
KernelValue kernel_diagonal(const Domain& domain, std::span<const Complex> z, double tol = 1e-14);

/// log S(z,z) for finite-difference oracles.
double log_kernel_diagonal(const Domain& domain, std::span<const Complex> z);

/// F(t) = sum_{m=-inf}^{inf} t^m / (1 + r^{2m+1}) and its first `nder`
/// derivatives, truncated so each tail is below tol. Valid for r^2 < t < 1.
struct AnnulusSeries {
  double f[4] = {0, 0, 0, 0};
  int terms_used = 0;
  double tail_bound = 0.0;
};
AnnulusSeries annulus_series(double t, double r, double tol, int nder);

}  // namespace szego
