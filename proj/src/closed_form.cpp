#include "dante/closed_form.hpp"

#include <cmath>

#include "dante/errors.hpp"

namespace dante {

namespace {

// atan(z)/z and atanh(z)/z with the removable singularity at z = 0.
double atan_over(double z) {
    if (std::abs(z) < kSeriesThreshold) return 1.0 - z * z / 3.0;
    return std::atan(z) / z;
}

double atanh_over(double z) {
    if (std::abs(z) < kSeriesThreshold) return 1.0 + z * z / 3.0;
    return std::atanh(z) / z;
}

void require_r_squared(double r_squared) {
    if (!(std::isfinite(r_squared) && r_squared > 0.0)) {
        throw DomainError("r_squared must be positive");
    }
}

// Unit-W snake time at lambda, in units where R^2 = 4:
// (1-l)(1-l a^2) / ((1+a^2)(1+a^2 l^2)) + atan((1-l) a / (1 + a^2 l)) / a.
double snake_reduced_time(double alpha, double lambda) {
    const double a2 = alpha * alpha;
    const double rational =
        (1.0 - lambda) * (1.0 - lambda * a2) / ((1.0 + a2) * (1.0 + a2 * lambda * lambda));
    const double ratio = (1.0 - lambda) / (1.0 + a2 * lambda);
    return rational + atan_over(alpha * ratio) * ratio;
}

// Unit-U turtle time at mu, R^2 = 4, using
// log((1+b)(1-bm)/((1-b)(1+bm))) / (4b) = atanh(b(1-m)/(1-b^2 m)) / (2b).
double turtle_reduced_time(double beta, double mu) {
    const double b2 = beta * beta;
    const double rational =
        (1.0 - mu) * (1.0 + b2 * mu) / ((1.0 - b2) * (1.0 - b2 * mu * mu));
    const double ratio = (1.0 - mu) / (1.0 - b2 * mu);
    return rational + atanh_over(beta * ratio) * ratio;
}

template <class TimeOf>
double invert_decreasing(TimeOf time_of, double t, double tol) {
    if (!(tol > 0.0)) throw DomainError("inversion tolerance must be positive");
    double lo = 0.0;  // time_of(lo) = collapse time
    double hi = 1.0;  // time_of(hi) = 0
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (time_of(mid) > t) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SnakeSolution::SnakeSolution(double W, double alpha, double r_squared)
    : W_(W), alpha_(alpha), r_squared_(r_squared) {
    if (!(std::isfinite(W) && W > 0.0)) throw DomainError("snake W must be positive");
    if (!(std::isfinite(alpha) && alpha >= 0.0)) {
        throw DomainError("snake alpha must be non-negative");
    }
    require_r_squared(r_squared);
    collapse_T_ = 0.25 * r_squared_ * 0.5 * W_ * snake_reduced_time(alpha_, 0.0);
}

SnakeSolution SnakeSolution::from_initial(double W, double V, double r_squared) {
    if (!(V > 0.0 && W >= V)) throw DomainError("snake requires W >= V > 0");
    return {W, std::sqrt(W / V - 1.0), r_squared};
}

TurtleSolution::TurtleSolution(double U, double beta, double r_squared)
    : U_(U), beta_(beta), r_squared_(r_squared) {
    if (!(std::isfinite(U) && U > 0.0)) throw DomainError("turtle U must be positive");
    if (!(beta >= 0.0 && beta <= kMaxBeta)) {
        throw DomainError("turtle beta must lie in [0, 1 - 1e-12]");
    }
    require_r_squared(r_squared);
    collapse_T_ = 0.25 * r_squared_ * 0.5 * U_ * turtle_reduced_time(beta_, 0.0);
}

TurtleSolution TurtleSolution::from_initial(double U, double V, double r_squared) {
    if (!(U > 0.0 && V >= U)) throw DomainError("turtle requires 0 < U <= V");
    return {U, std::sqrt(1.0 - U / V), r_squared};
}

double snake_time_of_lambda(const SnakeSolution& s, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
    return 0.25 * s.r_squared() * 0.5 * s.W() * snake_reduced_time(s.alpha(), lambda);
}

SnakeProfile snake_profile(const SnakeSolution& s, double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in (0, 1]");
    const double w = s.W() * lambda;
    const double al = s.alpha() * lambda;
    return {w, w / (1.0 + al * al)};
}

double snake_lambda_of_time(const SnakeSolution& s, double t, double tol) {
    if (!(t >= 0.0 && t <= s.collapse_time())) {
        throw DomainError("time outside [0, collapse time]");
    }
    return invert_decreasing([&](double l) { return snake_time_of_lambda(s, l); }, t, tol);
}

double turtle_time_of_mu(const TurtleSolution& s, double mu) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0, 1]");
    return 0.25 * s.r_squared() * 0.5 * s.U() * turtle_reduced_time(s.beta(), mu);
}

TurtleProfile turtle_profile(const TurtleSolution& s, double mu) {
    if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("mu must lie in (0, 1]");
    const double u = s.U() * mu;
    const double bm = s.beta() * mu;
    return {u, u / (1.0 - bm * bm)};
}

double turtle_mu_of_time(const TurtleSolution& s, double t, double tol) {
    if (!(t >= 0.0 && t <= s.collapse_time())) {
        throw DomainError("time outside [0, collapse time]");
    }
    return invert_decreasing([&](double m) { return turtle_time_of_mu(s, m); }, t, tol);
}

}  // namespace dante
