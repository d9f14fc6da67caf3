#pragma once

#include "szego/common.hpp"

namespace szego {

/// Rectangular lattice with half-periods omega1 > 0 (real) and i*omega3_im.
/// The annulus kernel uses omega1 = -log r, omega3 = i*pi.
struct WpParameters {
  double omega1;
  double omega3_im = kPi;

  static WpParameters for_annulus(double r);
};

/// Lattice invariants g2, g3 (Eisenstein q-series; q is real and small for
/// every annulus parameter).
void wp_invariants(const WpParameters& p, double& g2, double& g3);

/// Weierstrass elliptic function with periods (2*omega1, 2i*omega3_im),
/// evaluated by lattice reduction, Laurent series and the duplication map.
Complex weierstrass_p(Complex u, const WpParameters& p, double tol = 1e-12);

/// Derivative of weierstrass_p, propagated analytically through the same
/// duplication chain.
Complex weierstrass_p_prime(Complex u, const WpParameters& p, double tol = 1e-12);

}  // namespace szego
