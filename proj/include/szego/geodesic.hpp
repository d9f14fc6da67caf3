#pragma once

#include "szego/metric.hpp"

namespace szego {

struct GeodesicState {
  CVector z;  // position
  CVector v;  // velocity c' in holomorphic coordinates
};

struct TraceSample {
  double t;
  GeodesicState state;
  double speed;  // |c'(t)|_g
};

struct GeodesicTrace {
  std::vector<TraceSample> samples;
  int accepted_steps = 0;
  int rejected_steps = 0;
  bool halted_near_boundary = false;  // guard triggered; samples end at last valid state
  double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
};

/// Kähler Christoffel symbols Gamma^l_{jk} = g^{l mbar} d_j g_{k mbar},
/// symmetric in (j,k).
CTensor3 christoffel(const Domain& domain, std::span<const Complex> z);
CTensor3 christoffel(const HermitianForm& form);

struct IntegrateOptions {
  int max_steps = 2'000'000;
  double boundary_guard = 1e-6;  // halt when clearance drops below this
  bool record_samples = true;
};

/// Integrates c''_l + Gamma^l_{jk} c'_j c'_k = 0 with an embedded
/// Dormand-Prince 4(5) pair and PI step control. Speed drift stays below
/// 10*tol over the integration span.
GeodesicTrace integrate_geodesic(const Domain& domain, const GeodesicState& s0, double T,
                                 double tol, const IntegrateOptions& opts = {});

/// State at a single time, integrating with exact endpoint hit.
GeodesicState geodesic_state_at(const Domain& domain, const GeodesicState& s0, double t,
                                double tol);

/// Second derivative (rho o c)'' along a Szego-metric geodesic through the
/// given state, evaluated from the closed-form boundary-asymptotics formula.
double rho_second_derivative(const Domain& model, const GeodesicState& s);

}  // namespace szego
