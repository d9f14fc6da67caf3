#pragma once

#include <string>

#include <json.hpp>

#include "szego/experiments.hpp"

namespace szego {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";

/// 17-significant-digit decimal form (round-trips exactly).
std::string fmt17(double x);

Json json_complex(Complex c);
Json json_cvector(std::span<const Complex> v);
Json json_matrix(const CMatrix& m);

Json to_json(const KernelValue& kv);
Json to_json(const HermitianForm& form);
Json to_json(const LeviQuantities& lq);
Json to_json(const RateFit& fit);
Json to_json(const RepulsionReport& report);
Json to_json(const ShortenResult& result);
Json to_json(const ClassifyReport& report);

/// Summary block (endpoint state, step counts, drift) for a trace.
Json trace_summary(const GeodesicTrace& trace);

/// Wraps a payload with the resolved config and tool version.
Json make_report(const Json& config, const Json& payload);

/// CSV table: t, Re/Im of each coordinate, speed.
std::string trace_csv(const GeodesicTrace& trace, int n);

/// CSV table for a radial metric grid: one row per point.
std::string metric_grid_csv(const Domain& domain, int grid_points);

/// Deterministic SVG: domain outline, polyline through the first coordinate
/// plane, optional section-circle markers. Throws on an empty path.
std::string render_svg(const Domain& domain, std::span<const Complex> path, bool closed,
                       double section_radius = 0.0);

std::string render_svg_trace(const Domain& domain, const GeodesicTrace& trace,
                             double section_radius = 0.0);

}  // namespace szego
