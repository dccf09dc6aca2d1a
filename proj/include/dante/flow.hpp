#pragma once

// Unnormalized Ricci flow dg/dt = -2 Ric(g) restricted to the diagonal
// Bianchi IX metrics, which reduces it to three ODEs in (u, v, w).

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dante/geometry.hpp"

namespace dante {

struct MetricRates {
    double du;
    double dv;
    double dw;
};

struct FlowParams {
    double r_squared = kDefaultRSquared;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Integration stops once min(u, v, w) <= collapse_eps.
    double collapse_eps = 1e-9;
    std::size_t max_steps = 200000;
    /// Number of uniform time samples merged into the step samples (0 = none).
    std::size_t grid_points = 0;
    /// Upper bound on a step, as a fraction of the shortest time scale
    /// m_i / |dm_i/dt|. Keeps steps from overshooting the collapse.
    double max_step_fraction = 0.5;

    /// Throws DomainError on non-positive tolerances or an empty step budget.
    void validate() const;
};

struct FlowSample {
    double t;
    MetricCoeffs m;
};

enum class Termination { Collapsed, MaxSteps, GrowthCap };

const char* to_string(Termination termination);

struct Trajectory {
    std::vector<FlowSample> samples;
    std::optional<double> collapse_time;
    Termination terminated = Termination::MaxSteps;
};

/// Step-size underflow or a non-finite state. Carries what was integrated
/// before the failure.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, Trajectory partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}

    const Trajectory& partial() const { return partial_; }

private:
    Trajectory partial_;
};

/// du/dt = -16 (sigma - v)(sigma - w) / (R^2 v w), and cyclic.
MetricRates rhs(const MetricCoeffs& m, double r_squared = kDefaultRSquared);

/// Adaptive Dormand-Prince 5(4) integration forward in time until
/// min(u, v, w) <= p.collapse_eps or p.max_steps. The collapse time is the
/// zero of the line through the smallest coefficient at the last two steps.
Trajectory integrate(const MetricCoeffs& m0, const FlowParams& p = {});

/// Integrates toward negative times until min(u, v, w) >= growth_cap.
/// Samples are returned in increasing time order, ending at t = 0.
Trajectory integrate_backward(const MetricCoeffs& m0, const FlowParams& p = {},
                              double growth_cap = 1e6);

/// Linear stretch factor sqrt(1 - 4t/R^2) of the round sphere started at lambda = 1.
/// Throws CollapseReached for t >= R^2/4.
double isotropic_lambda(double t, double r_squared = kDefaultRSquared);

/// Time derivative of x = (u + v) / w. Requires w >= v >= u.
double x_rate(const MetricCoeffs& m, double r_squared = kDefaultRSquared);

}  // namespace dante
