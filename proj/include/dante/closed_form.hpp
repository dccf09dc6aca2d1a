#pragma once

// Exact solutions of the flow on the two invariant symmetric families.
//
// Snake (a = b, so u = v): initial (V, V, W) with W/V = 1 + alpha^2.
// Turtle (b = c, so v = w): initial (U, V, V) with U/V = 1 - beta^2.
// All times scale with R^2 / 4.

#include "dante/geometry.hpp"

namespace dante {

/// Closed-form times are evaluated with removable-singularity series below this.
inline constexpr double kSeriesThreshold = 1e-6;
/// Largest accepted turtle non-sphericity.
inline constexpr double kMaxBeta = 1.0 - 1e-12;

class SnakeSolution {
public:
    SnakeSolution(double W, double alpha, double r_squared = kDefaultRSquared);

    /// From initial w = W and u = v = V; requires W >= V > 0.
    static SnakeSolution from_initial(double W, double V, double r_squared = kDefaultRSquared);

    double W() const { return W_; }
    double alpha() const { return alpha_; }
    double r_squared() const { return r_squared_; }
    double V() const { return W_ / (1.0 + alpha_ * alpha_); }
    double collapse_time() const { return collapse_T_; }
    MetricCoeffs initial_metric() const { return {V(), V(), W_}; }

private:
    double W_;
    double alpha_;
    double r_squared_;
    double collapse_T_;
};

class TurtleSolution {
public:
    /// beta must lie in [0, kMaxBeta]; precision degrades beyond beta ~ 0.999.
    TurtleSolution(double U, double beta, double r_squared = kDefaultRSquared);

    /// From initial u = U and v = w = V; requires 0 < U <= V.
    static TurtleSolution from_initial(double U, double V, double r_squared = kDefaultRSquared);

    double U() const { return U_; }
    double beta() const { return beta_; }
    double r_squared() const { return r_squared_; }
    double V() const { return U_ / (1.0 - beta_ * beta_); }
    double collapse_time() const { return collapse_T_; }
    MetricCoeffs initial_metric() const { return {U_, V(), V()}; }

private:
    double U_;
    double beta_;
    double r_squared_;
    double collapse_T_;
};

struct SnakeProfile {
    double w;
    double v;  // also u
};

struct TurtleProfile {
    double u;
    double v;  // also w
};

/// Flow time at which w = lambda W, for lambda in [0, 1].
double snake_time_of_lambda(const SnakeSolution& s, double lambda);

/// (w, v) at lambda in (0, 1].
SnakeProfile snake_profile(const SnakeSolution& s, double lambda);

/// Bisection inverse of snake_time_of_lambda to |d lambda| <= tol.
double snake_lambda_of_time(const SnakeSolution& s, double t, double tol = 1e-14);

/// Flow time at which u = mu U, for mu in [0, 1].
double turtle_time_of_mu(const TurtleSolution& s, double mu);

/// (u, v) at mu in (0, 1].
TurtleProfile turtle_profile(const TurtleSolution& s, double mu);

/// Bisection inverse of turtle_time_of_mu to |d mu| <= tol.
double turtle_mu_of_time(const TurtleSolution& s, double t, double tol = 1e-14);

}  // namespace dante
