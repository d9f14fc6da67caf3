#pragma once

#include <span>

#include <Eigen/Dense>

#include "szego/domain.hpp"
#include "szego/kernel.hpp"

namespace szego {

using CMatrix = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

enum class AnnulusMethod { Series, Wp };

/// Metric tensor g_{j kbar} at a point together with its holomorphic
/// derivatives d_a g_{j kbar} (needed for Christoffel symbols).
struct HermitianForm {
  CMatrix g;
  CTensor3 dg;  // dg(a, j, k) = d_a g_{j kbar}

  double quadratic(std::span<const Complex> v) const;  // v^t g conj(v), real
  double length(std::span<const Complex> v) const { return std::sqrt(quadratic(v)); }
};

/// Jets of h-frak = log h needed by the boundary-asymptotics machinery.
struct HJet {
  CVec b;        // h_b (holomorphic first derivatives)
  CMatrix levi;  // h_{b jbar} = Levi matrix of h-frak
  CTensor3 abj;  // h_{a b jbar}
};

struct LeviQuantities {
  CVec q_vector;     // [L_g^{-1} (grad rho)^t] / rho^2
  double q_scalar;   // conj-grad . L_g^{-1} . grad^t / rho^2
  double calQ;       // conj-grad . L_rho^{-1} . grad^t
  HJet hjet;
  CVec lg_inv_grad;  // L_g^{-1} (grad rho)^t (un-normalized)
};

HermitianForm metric_ball(std::span<const Complex> z, int n);
HermitianForm metric_annulus(Complex z, double r, AnnulusMethod method);
HermitianForm metric_model(const Domain& model, std::span<const Complex> z);

/// Dispatch to the closed form / series for the domain kind.
HermitianForm szego_metric(const Domain& domain, std::span<const Complex> z);

/// 4th-order central-difference mixed Hessian of log S(z,z), with one
/// Richardson step. Step defaults to eps^{1/6} * clearance when <= 0.
HermitianForm metric_fd_oracle(const Domain& domain, std::span<const Complex> z,
                               double step = 0.0);

LeviQuantities levi_quantities(const Domain& model, std::span<const Complex> z);

/// Carathéodory length of v at z in the unit ball (closed form).
double caratheodory_ball(std::span<const Complex> z, std::span<const Complex> v, int n);

/// Conformal factor lambda^2 on the annulus.
double annulus_lambda2(double s, double r, AnnulusMethod method);

/// Hermitian positive definite solve with a conditioning guard
/// (NumericalError when the condition number exceeds 1e12).
CVec hermitian_solve_guarded(const CMatrix& a, const CVec& b);
CMatrix hermitian_solve_guarded(const CMatrix& a, const CMatrix& b);

}  // namespace szego
