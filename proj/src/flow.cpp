#include "dante/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dante/errors.hpp"
#include "dormand_prince.hpp"

namespace dante {

namespace {

using detail::DenseSegment;
using detail::State;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// sigma-product form; NaN outside the positive octant so trial stages that
// leave it are rejected by the step controller.
State flow_kernel(const State& m, double r_squared) {
    const double u = m[0];
    const double v = m[1];
    const double w = m[2];
    if (!(u > 0.0 && v > 0.0 && w > 0.0)) return {kNaN, kNaN, kNaN};
    const double sigma = 0.5 * (u + v + w);
    const double k = -16.0 / r_squared;
    return {k * (sigma - v) * (sigma - w) / (v * w),
            k * (sigma - u) * (sigma - w) / (u * w),
            k * (sigma - u) * (sigma - v) / (u * v)};
}

double initial_step(const State& y, const State& f, double rel_tol, double abs_tol) {
    double dny = 0.0;
    double dnf = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double sk = abs_tol + rel_tol * std::abs(y[i]);
        dny += (y[i] / sk) * (y[i] / sk);
        dnf += (f[i] / sk) * (f[i] / sk);
    }
    if (dnf <= 1e-30 || dny <= 1e-30) return 1e-6;
    return 0.01 * std::sqrt(dny / dnf);
}

double min_of(const State& y) { return std::min({y[0], y[1], y[2]}); }

// Shortest time scale m_i / |dm_i/dt| over the coefficients; bounds the
// relative change of every coefficient (and hence of the shape) per step.
double rate_time_scale(const State& y, const State& f) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 3; ++i) {
        if (f[i] != 0.0) best = std::min(best, y[i] / std::abs(f[i]));
    }
    return best;
}

struct RawSample {
    double t;
    State y;
};

Trajectory to_trajectory(std::vector<RawSample> raw, const std::vector<DenseSegment>& segments,
                         std::size_t grid_points, Termination termination,
                         std::optional<double> collapse_time) {
    if (grid_points >= 2 && raw.size() >= 2) {
        const double t_first = raw.front().t;
        const double t_last = raw.back().t;
        std::vector<RawSample> grid;
        grid.reserve(grid_points);
        std::size_t seg = 0;
        const double direction = t_last >= t_first ? 1.0 : -1.0;
        for (std::size_t k = 1; k + 1 < grid_points; ++k) {
            const double t = t_first + (t_last - t_first) * static_cast<double>(k) /
                                           static_cast<double>(grid_points - 1);
            while (seg + 1 < segments.size() &&
                   direction * (t - (segments[seg].t0 + segments[seg].h)) > 0.0) {
                ++seg;
            }
            grid.push_back({t, segments[seg](t)});
        }
        std::vector<RawSample> merged;
        merged.reserve(raw.size() + grid.size());
        auto before = [direction](const RawSample& x, const RawSample& y) {
            return direction * (x.t - y.t) < 0.0;
        };
        std::merge(raw.begin(), raw.end(), grid.begin(), grid.end(), std::back_inserter(merged),
                   before);
        raw.swap(merged);
    }

    if (!raw.empty() && raw.front().t > raw.back().t) std::reverse(raw.begin(), raw.end());

    Trajectory out;
    out.samples.reserve(raw.size());
    for (const auto& s : raw) {
        if (!out.samples.empty() && !(s.t > out.samples.back().t)) continue;
        out.samples.push_back({s.t, MetricCoeffs(s.y[0], s.y[1], s.y[2])});
    }
    out.terminated = termination;
    out.collapse_time = collapse_time;
    return out;
}

enum class Direction { Forward, Backward };

Trajectory run_flow(const MetricCoeffs& m0, const FlowParams& p, Direction dir,
                    double growth_cap) {
    p.validate();
    if (dir == Direction::Forward && !(p.collapse_eps < m0.min())) {
        throw DomainError("collapse_eps must be below the initial min(u, v, w)");
    }
    if (dir == Direction::Backward && !(growth_cap > m0.min())) {
        throw DomainError("growth cap must exceed the initial min(u, v, w)");
    }

    const double direction = dir == Direction::Forward ? 1.0 : -1.0;
    const double r2 = p.r_squared;
    auto f_of = [r2](const State& y) { return flow_kernel(y, r2); };

    State y = m0.as_array();
    State f = f_of(y);
    double t = 0.0;
    double h = std::min(initial_step(y, f, p.rel_tol, p.abs_tol),
                        p.max_step_fraction * rate_time_scale(y, f));

    std::vector<RawSample> raw{{t, y}};
    std::vector<DenseSegment> segments;
    auto finish = [&](Termination term, std::optional<double> collapse) {
        return to_trajectory(raw, segments, p.grid_points, term, collapse);
    };

    std::size_t accepted = 0;
    bool last_rejected = false;
    while (accepted < p.max_steps) {
        h = std::min(h, p.max_step_fraction * rate_time_scale(y, f));
        if (!(h > 1e-14 * std::max(1.0, std::abs(t)))) {
            throw IntegrationError("step size underflow at t = " + std::to_string(t),
                                   finish(Termination::MaxSteps, std::nullopt));
        }

        auto step = detail::dopri5_step(f_of, t, y, f, direction * h, p.rel_tol, p.abs_tol);
        if (!step.finite || min_of(step.y) <= 0.0) {
            h *= 0.25;
            last_rejected = true;
            continue;
        }
        if (step.err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(step.err, -0.2));
            last_rejected = true;
            continue;
        }

        t += direction * h;
        y = step.y;
        f = step.f;
        raw.push_back({t, y});
        segments.push_back(step.dense);
        ++accepted;

        if (dir == Direction::Forward && min_of(y) <= p.collapse_eps) {
            const auto& prev = raw[raw.size() - 2];
            const double m1 = min_of(prev.y);
            const double m2 = min_of(y);
            const double collapse = t + m2 * (t - prev.t) / (m1 - m2);
            return finish(Termination::Collapsed, collapse);
        }
        if (dir == Direction::Backward && min_of(y) >= growth_cap) {
            return finish(Termination::GrowthCap, std::nullopt);
        }

        const double grow = step.err > 0.0 ? 0.9 * std::pow(step.err, -0.2) : 5.0;
        h *= last_rejected ? std::min(1.0, grow) : std::clamp(grow, 0.2, 5.0);
        last_rejected = false;
    }
    return finish(Termination::MaxSteps, std::nullopt);
}

}  // namespace

void FlowParams::validate() const {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(r_squared)) throw DomainError("r_squared must be positive");
    if (!positive(rel_tol) || !positive(abs_tol)) {
        throw DomainError("integration tolerances must be positive");
    }
    if (!positive(collapse_eps)) throw DomainError("collapse_eps must be positive");
    if (max_steps == 0) throw DomainError("max_steps must be positive");
    if (!positive(max_step_fraction) || max_step_fraction > 1.0) {
        throw DomainError("max_step_fraction must lie in (0, 1]");
    }
}

const char* to_string(Termination termination) {
    switch (termination) {
        case Termination::Collapsed: return "collapsed";
        case Termination::MaxSteps: return "max_steps";
        case Termination::GrowthCap: return "growth_cap";
    }
    return "unknown";
}

MetricRates rhs(const MetricCoeffs& m, double r_squared) {
    if (!(std::isfinite(r_squared) && r_squared > 0.0)) {
        throw DomainError("r_squared must be positive");
    }
    const auto d = flow_kernel(m.as_array(), r_squared);
    return {d[0], d[1], d[2]};
}

Trajectory integrate(const MetricCoeffs& m0, const FlowParams& p) {
    return run_flow(m0, p, Direction::Forward, 0.0);
}

Trajectory integrate_backward(const MetricCoeffs& m0, const FlowParams& p, double growth_cap) {
    return run_flow(m0, p, Direction::Backward, growth_cap);
}

double isotropic_lambda(double t, double r_squared) {
    if (!(std::isfinite(r_squared) && r_squared > 0.0)) {
        throw DomainError("r_squared must be positive");
    }
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
    if (t >= r_squared / 4.0) {
        throw CollapseReached("the round sphere has collapsed at t = R^2/4");
    }
    return std::sqrt(1.0 - 4.0 * t / r_squared);
}

double x_rate(const MetricCoeffs& m, double r_squared) {
    if (!(std::isfinite(r_squared) && r_squared > 0.0)) {
        throw DomainError("r_squared must be positive");
    }
    const double u = m.u();
    const double v = m.v();
    const double w = m.w();
    if (!(u <= v && v <= w)) throw DomainError("x_rate requires w >= v >= u");
    const double bracket = u * (w - v) * (w - v) + u * u * (v - u) + v * (w * w - v * v);
    return (4.0 / r_squared) * 2.0 * bracket / (u * v * w * w);
}

}  // namespace dante
