#pragma once

#include <optional>
#include <span>

#include "szego/common.hpp"
#include "szego/expr.hpp"

namespace szego {

/// Value of a real scalar field and its Wirtinger derivatives to order 3.
struct DerivativeJet {
  double value = 0.0;
  CVector d1;           // f_j
  CTensor3 d3;          // f_{ab jbar}: holomorphic a,b then one antiholomorphic
  // second derivatives
  std::vector<Complex> d2_mixed;  // f_{j kbar}, row-major n x n
  std::vector<Complex> d2_pure;   // f_{jk}, row-major n x n

  Complex mixed(int j, int k) const { return d2_mixed[static_cast<size_t>(j) * d1.size() + k]; }
  Complex pure(int j, int k) const { return d2_pure[static_cast<size_t>(j) * d1.size() + k]; }
};

/// Immutable domain model: unit ball, annulus, or a Fefferman-expansion model
/// with scalar recipes for rho, Phi, Psi.
class Domain {
 public:
  enum class Kind { Ball, Annulus, Fefferman };

  static Domain ball(int n);
  static Domain annulus(double inner_radius);
  static Domain fefferman(int n, const std::string& rho, const std::string& phi,
                          const std::string& psi, double collar_width = 0.2,
                          double box_halfwidth = 2.0);

  /// Shorthand forms "ball:n=2", "annulus:r=0.5",
  /// "fefferman:n=2,rho=...,phi=...,psi=..." or a JSON object string.
  static Domain from_spec(const std::string& spec);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  double inner_radius() const { return r_; }
  double collar_width() const { return collar_; }
  const std::string& label() const { return label_; }

  bool contains(std::span<const Complex> z) const;
  double rho(std::span<const Complex> z) const;
  DerivativeJet rho_jet(std::span<const Complex> z) const;

  // Fefferman recipes (Fefferman kind only)
  const Expr& phi_expr() const;
  const Expr& psi_expr() const;
  const Expr& rho_expr() const;

  /// Euclidean distance-like clearance to the boundary used by integrator
  /// guards: -rho for ball/model, min(|z|-r, 1-|z|) for the annulus.
  double clearance(std::span<const Complex> z) const;

 private:
  Domain() = default;
  void validate_collar() const;

  Kind kind_ = Kind::Ball;
  int n_ = 1;
  double r_ = 0.0;       // annulus inner radius
  double collar_ = 0.2;  // Fefferman collar width
  double box_ = 2.0;     // ambient box half-width
  std::string label_;
  std::optional<Expr> rho_expr_, phi_expr_, psi_expr_;
};

/// Converts a Wirtinger jet (2n variables) of a real scalar into DerivativeJet.
DerivativeJet derivative_jet_from_wirtinger(const Jet& jet, int n);

}  // namespace szego
