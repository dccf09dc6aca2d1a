#include "dante/shape_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dante/errors.hpp"

namespace dante {

namespace {

ShapePoint vertex_of_parabola(const ShapePoint& p0, const ShapePoint& p1, const ShapePoint& p2) {
    // Newton form y = y0 + d01 (x - x0) + d012 (x - x0)(x - x1).
    const double d01 = (p1.y - p0.y) / (p1.x - p0.x);
    const double d12 = (p2.y - p1.y) / (p2.x - p1.x);
    const double d012 = (d12 - d01) / (p2.x - p0.x);
    if (!(d012 < 0.0)) return p1;
    const double x = 0.5 * (p0.x + p1.x) - 0.5 * d01 / d012;
    if (!(x >= p0.x && x <= p2.x)) return p1;
    return {x, p0.y + d01 * (x - p0.x) + d012 * (x - p0.x) * (x - p1.x)};
}

std::vector<ShapePoint> project(const Trajectory& traj, std::vector<double>& times,
                                bool skip_last) {
    std::vector<ShapePoint> points;
    const std::size_t n = traj.samples.size() - (skip_last ? 1 : 0);
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        points.push_back(to_xy(traj.samples[i].m));
        times.push_back(traj.samples[i].t);
    }
    return points;
}

// Bisection for the sign change of `q` along the segment from `from` to `to`.
template <class Quantity>
ShapePoint bisect_segment(const Quantity& q, ShapePoint from, ShapePoint to) {
    double q_from = q(from);
    for (int iter = 0; iter < 200; ++iter) {
        const ShapePoint mid{0.5 * (from.x + to.x), 0.5 * (from.y + to.y)};
        if ((mid.x == from.x || mid.x == to.x) && (mid.y == from.y || mid.y == to.y)) break;
        const double q_mid = q(mid);
        if (q_mid == 0.0) return mid;
        if ((q_mid > 0.0) == (q_from > 0.0)) {
            from = mid;
            q_from = q_mid;
        } else {
            to = mid;
        }
    }
    return std::abs(q(from)) <= std::abs(q(to)) ? from : to;
}

}  // namespace

ShapePoint to_xy(const StretchFactors& f) {
    if (!f.is_ordered()) throw DomainError("to_xy requires a <= b <= c");
    return {(f.a() + f.b()) / f.c(), (f.b() - f.a()) / f.c()};
}

ShapePoint to_xy(const MetricCoeffs& m) {
    return {(m.u() + m.v()) / m.w(), (m.v() - m.u()) / m.w()};
}

StretchFactors from_xy(const ShapePoint& p, double c, double r_squared) {
    if (!(std::isfinite(p.x) && std::isfinite(p.y))) throw DomainError("non-finite shape point");
    if (!(std::isfinite(c) && c > 0.0)) throw DomainError("lift scale c must be positive");
    if (p.y >= p.x) throw DegenerateShape("shape point on or beyond the degenerate edge y = x");
    if (p.y < 0.0) throw DomainError("shape point below the snake edge y = 0");
    if (p.y > 2.0 - p.x + 1e-12) throw DomainError("shape point beyond the turtle edge y = 2 - x");
    const double a = 0.5 * c * (p.x - p.y);
    const double b = std::min(0.5 * c * (p.x + p.y), c);
    return StretchFactors::ordered(a, b, c, r_squared);
}

std::optional<double> slope(const ShapePoint& p) {
    const double x = p.x;
    const double y = p.y;
    const double den = y * y * (2.0 * x - 1.0) + x * (x - 2.0);
    if (std::abs(den) < 1e-14) return std::nullopt;
    return y * (x * x + y * y - 2.0) / den;
}

FlowLine trace_flowline(const ShapePoint& start, double c0, const FlowParams& p,
                        const TraceOptions& opts) {
    const auto m0 = metric_coeffs(from_xy(start, c0, p.r_squared));
    FlowParams q = p;
    q.max_step_fraction = std::min(p.max_step_fraction, opts.max_step_fraction);

    FlowLine line;
    std::vector<ShapePoint> raw;
    std::vector<double> raw_times;
    if (opts.backward) {
        Trajectory back;
        try {
            back = integrate_backward(m0, q, opts.growth_cap);
        } catch (const IntegrationError& e) {
            back = e.partial();
        }
        raw = project(back, raw_times, /*skip_last=*/true);  // t = 0 repeats below
    }
    const auto forward = integrate(m0, q);
    auto fwd_points = project(forward, raw_times, false);
    raw.insert(raw.end(), fwd_points.begin(), fwd_points.end());

    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!line.points.empty() && !(raw[i].x > line.points.back().x)) continue;
        line.points.push_back(raw[i]);
        line.times.push_back(raw_times[i]);
    }

    const auto& pts = line.points;
    const auto top = std::max_element(pts.begin(), pts.end(), [](const auto& l, const auto& r) {
        return l.y < r.y;
    });
    const auto i = static_cast<std::size_t>(top - pts.begin());
    if (i > 0 && i + 1 < pts.size() && pts[i].y > 0.0) {
        line.apex = vertex_of_parabola(pts[i - 1], pts[i], pts[i + 1]);
        line.apex_bracketed = true;
    } else {
        line.apex = pts[i];
    }
    return line;
}

RicciRatios to_rho_tau(const ShapePoint& p) {
    if (p.y == 1.0) throw SingularMap("the (rho, tau) map is singular at y = 1");
    return {(p.x - 1.0) / (1.0 - p.y), (p.x - 1.0) / (1.0 + p.y)};
}

double boundary_quantity(BoundaryKind kind, const ShapePoint& p) {
    // On the edge y = x the factor a vanishes; clamp it to the smallest
    // normal double, which moves the quantities by O(1e-308).
    const double a = std::max(0.5 * (p.x - p.y), std::numeric_limits<double>::min());
    const double b = 0.5 * (p.x + p.y);
    const StretchFactors f(a, b, 1.0, kDefaultRSquared);
    switch (kind) {
        case BoundaryKind::ScalarZero: return scalar_curvature(f);
        case BoundaryKind::MinCurvatureZero: {
            const auto k = principal_curvatures(f);
            return std::min({k[0], k[1], k[2]});
        }
        case BoundaryKind::RicciPairZero: return ricci_eigenvalues(f)[0];
    }
    return 0.0;
}

std::vector<RegionBoundary> region_boundaries(std::size_t resolution) {
    if (resolution < 16) throw DomainError("region resolution must be at least 16");
    const ShapePoint C{1.0, 1.0};
    const auto n = static_cast<double>(resolution - 1);

    auto locus = [&](BoundaryKind kind, std::string label, ShapePoint axis_lo,
                     ShapePoint axis_hi) {
        auto q = [kind](const ShapePoint& p) { return boundary_quantity(kind, p); };
        const ShapePoint foot = bisect_segment(q, axis_lo, axis_hi);
        RegionBoundary out{kind, std::move(label), {foot}};
        for (std::size_t k = 1; k + 1 < resolution; ++k) {
            const double x = foot.x + (C.x - foot.x) * static_cast<double>(k) / n;
            const ShapePoint bottom{x, 0.0};
            const ShapePoint top{x, std::min(x, 2.0 - x)};
            out.points.push_back(bisect_segment(q, bottom, top));
        }
        out.points.push_back(C);
        return out;
    };

    std::vector<RegionBoundary> out;
    out.push_back(locus(BoundaryKind::ScalarZero, "CE", {1e-3, 0.0}, {2.0, 0.0}));
    out.push_back(locus(BoundaryKind::MinCurvatureZero, "CF", {1.0, 0.0}, {2.0, 0.0}));

    RegionBoundary cd{BoundaryKind::RicciPairZero, "CD", {}};
    for (std::size_t k = 0; k < resolution; ++k) {
        cd.points.push_back({1.0, static_cast<double>(k) / n});
    }
    out.push_back(std::move(cd));
    return out;
}

}  // namespace dante
