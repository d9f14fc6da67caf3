#pragma once

#include <cstdint>
#include <functional>

#include "szego/geodesic.hpp"

namespace szego {

/// Closed polygonal loop in the annulus (last vertex connects to the first).
struct LoopPath {
  CVector points;
  int winding = 0;
};

/// Computed winding number of the polygon about the origin.
int loop_winding(const LoopPath& loop);

/// Discrete loop energy sum_i |d_i|^2 lambda^2(midpoint_i) * N.
double loop_energy(const Domain& domain, const LoopPath& loop);

struct RateFit {
  double exponent = 0.0;     // +inf sentinel for exact vanishing
  bool log_factor = false;
  double r_squared = 0.0;
  double delta_min = 0.0, delta_max = 0.0;
  bool exact_vanishing = false;
};

struct RepulsionEntry {
  CVector point;
  CVector direction;
  double rho_value;
  double second_derivative;
  bool complex_tangential;  // grad rho . v == 0 over C, not just Re
};

struct RepulsionReport {
  std::vector<RepulsionEntry> grid;
  double min_second_derivative = 0.0;
  double empirical_epsilon = 0.0;  // largest tested |level| with all-positive values
  int skipped_points = 0;          // grad rho vanished
};

enum class GeodesicVerdict { Closed, SpiralCandidate, BoundarySeeking };

struct SectionCrossing {
  double t;
  double angle;           // position angle on the section circle
  double crossing_angle;  // velocity direction relative to the tangent
  int radial_sign;        // +1 outward, -1 inward
};

struct ClassifyReport {
  GeodesicVerdict verdict = GeodesicVerdict::SpiralCandidate;
  std::vector<SectionCrossing> crossings;
  double min_clearance = 0.0;
  double recurrence_distance = 0.0;  // best return distance in section coordinates
};

/// Radius of the circle |z| = s minimizing circle length s*lambda(s) over
/// (r, 1); this circle is the closed geodesic of winding class +-1.
double circle_geodesic_radius(double r, double tol);

struct ShortenResult {
  LoopPath loop;
  int iterations = 0;
  bool converged = false;
  bool degenerated = false;  // nullhomotopic loop contracted below threshold
  std::vector<double> energies;  // energy after each iteration (index 0 = input)
};

/// Random polygonal loop in the annulus with the requested winding number.
LoopPath random_loop(const Domain& annulus, int winding, int vertices, uint64_t seed);

/// Alternating midpoint-replacement Birkhoff curve shortening.
ShortenResult birkhoff_shorten(const Domain& domain, const LoopPath& loop, int max_iter,
                               double tol);

struct RepulsionScanOptions {
  int points_per_level = 8;
  int directions_per_point = 16;
  uint64_t seed = 2024;
};

RepulsionReport boundary_repulsion_scan(const Domain& model, std::span<const double> rho_levels,
                                        const RepulsionScanOptions& opts = {});

RateFit rate_fit(std::span<const double> deltas, std::span<const double> values);

struct ClassifyOptions {
  double section_radius = 0.0;  // default sqrt(r)
  double horizon = 100.0;       // arc-length horizon
  double tol = 1e-4;
  double integrator_tol = 1e-10;
};

ClassifyReport classify_geodesic(const Domain& annulus, const GeodesicTrace& trace,
                                 const ClassifyOptions& opts);

/// Worker-pool parallel map with deterministic, index-ordered results.
void parallel_for(int count, const std::function<void(int)>& body);
void set_worker_threads(int count);  // <= 0 restores the default
int worker_threads();

}  // namespace szego
