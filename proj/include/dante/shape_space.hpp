#pragma once

// The shape triangle x = (a+b)/c, y = (b-a)/c with vertices A = (0,0),
// B = (2,0), C = (1,1), flow lines across it, and the Ricci-ratio map
// rho = R22/R33, tau = R11/R33.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dante/flow.hpp"
#include "dante/geometry.hpp"

namespace dante {

struct ShapePoint {
    double x;
    double y;
};

struct RicciRatios {
    double rho;
    double tau;
};

struct FlowLine {
    std::vector<ShapePoint> points;
    /// Flow time of each point; the start is t = 0, backward points are negative.
    std::vector<double> times;
    ShapePoint apex;
    /// False when the maximum of y sits at an end of the polyline, so the apex
    /// was not bracketed and is only the largest sample.
    bool apex_bracketed = false;
};

struct TraceOptions {
    /// Also integrate backward in time from the start.
    bool backward = false;
    /// Backward integration stops once min(u, v, w) exceeds this.
    double growth_cap = 1e6;
    /// Step cap used while tracing; finer than the plain integrator default so
    /// the polyline resolves the apex.
    double max_step_fraction = 0.005;
};

/// Requires a <= b <= c.
ShapePoint to_xy(const StretchFactors& f);

/// Projection of metric coefficients with w >= v >= u: x = (u+v)/w, y = (v-u)/w.
ShapePoint to_xy(const MetricCoeffs& m);

/// a = c(x-y)/2, b = c(x+y)/2. Throws DegenerateShape for y >= x.
StretchFactors from_xy(const ShapePoint& p, double c = 1.0,
                       double r_squared = kDefaultRSquared);

/// dy/dx = y(x^2+y^2-2) / (y^2(2x-1) + x(x-2)); nullopt when the denominator
/// is below 1e-14 in magnitude.
std::optional<double> slope(const ShapePoint& p);

/// Lifts the start with scale c0, integrates the full flow, and projects back.
FlowLine trace_flowline(const ShapePoint& start, double c0 = 1.0, const FlowParams& p = {},
                        const TraceOptions& opts = {});

/// rho = (x-1)/(1-y), tau = (x-1)/(1+y). Throws SingularMap at y = 1.
RicciRatios to_rho_tau(const ShapePoint& p);

enum class BoundaryKind {
    ScalarZero,       // CE
    MinCurvatureZero, // CF
    RicciPairZero,    // CD, x = 1
};

struct RegionBoundary {
    BoundaryKind kind;
    std::string label;
    /// From the x-axis up to C = (1, 1).
    std::vector<ShapePoint> points;
};

/// Boundary quantity in normalized units (c = 1, R^2 = 4) at a triangle point.
double boundary_quantity(BoundaryKind kind, const ShapePoint& p);

/// The CE, CF and CD loci, each sampled at `resolution` vertical segments.
/// Throws DomainError for resolution < 16.
std::vector<RegionBoundary> region_boundaries(std::size_t resolution);

}  // namespace dante
