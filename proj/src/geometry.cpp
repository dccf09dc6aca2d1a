#include "dante/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dante/errors.hpp"

namespace dante {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

StretchFactors::StretchFactors(double a, double b, double c, double r_squared)
    : a_(a), b_(b), c_(c), r_squared_(r_squared) {
    if (!positive_finite(a) || !positive_finite(b) || !positive_finite(c)) {
        throw DomainError("stretch factors must be positive and finite, got (" +
                          std::to_string(a) + ", " + std::to_string(b) + ", " +
                          std::to_string(c) + ")");
    }
    if (!positive_finite(r_squared)) {
        throw DomainError("r_squared must be positive and finite");
    }
}

StretchFactors StretchFactors::ordered(double a, double b, double c, double r_squared) {
    StretchFactors f(a, b, c, r_squared);
    if (!f.is_ordered()) {
        throw DomainError("stretch factors must satisfy a <= b <= c");
    }
    return f;
}

StretchFactors StretchFactors::sorted() const {
    std::array<double, 3> s{a_, b_, c_};
    std::sort(s.begin(), s.end());
    return {s[0], s[1], s[2], r_squared_};
}

StretchFactors StretchFactors::scaled(double lambda) const {
    return {lambda * a_, lambda * b_, lambda * c_, r_squared_};
}

MetricCoeffs::MetricCoeffs(double u, double v, double w) : u_(u), v_(v), w_(w) {
    if (!positive_finite(u) || !positive_finite(v) || !positive_finite(w)) {
        throw DomainError("metric coefficients must be positive and finite");
    }
}

double MetricCoeffs::min() const { return std::min({u_, v_, w_}); }

double MetricCoeffs::max() const { return std::max({u_, v_, w_}); }

const char* to_string(Shape shape) {
    switch (shape) {
        case Shape::Isotropic: return "isotropic";
        case Shape::Snake: return "snake";
        case Shape::Turtle: return "turtle";
        case Shape::Dragon: return "dragon";
        case Shape::Degenerate: return "degenerate";
    }
    return "unknown";
}

double semiperimeter(const StretchFactors& f) { return 0.5 * (f.a() + f.b() + f.c()); }

Triple principal_curvatures(const StretchFactors& f) {
    const double s = semiperimeter(f);
    const double a = f.a();
    const double b = f.b();
    const double c = f.c();
    const double k = 4.0 / f.r_squared();
    return {k * (a * (s - a) - (s - b) * (s - c)),
            k * (b * (s - b) - (s - a) * (s - c)),
            k * (c * (s - c) - (s - a) * (s - b))};
}

Triple ricci_eigenvalues(const StretchFactors& f) {
    const double s = semiperimeter(f);
    const double k = 8.0 / f.r_squared();
    return {k * (s - f.b()) * (s - f.c()),
            k * (s - f.a()) * (s - f.c()),
            k * (s - f.a()) * (s - f.b())};
}

double scalar_curvature(const StretchFactors& f) {
    const auto kappa = principal_curvatures(f);
    return 2.0 * (kappa[0] + kappa[1] + kappa[2]);
}

Triple connection_coefficients(const StretchFactors& f) {
    const double r = std::sqrt(f.r_squared());
    const double a = f.a();
    const double b = f.b();
    const double c = f.c();
    return {(a - b - c) / r, (b - a - c) / r, (c - a - b) / r};
}

CurvatureSummary curvature_summary(const StretchFactors& f) {
    const auto kappa = principal_curvatures(f);
    const auto ricci = ricci_eigenvalues(f);
    return {kappa[0], kappa[1], kappa[2], ricci[0], ricci[1], ricci[2],
            2.0 * (kappa[0] + kappa[1] + kappa[2])};
}

MetricCoeffs metric_coeffs(const StretchFactors& f) {
    return {1.0 / (f.b() * f.c()), 1.0 / (f.a() * f.c()), 1.0 / (f.a() * f.b())};
}

StretchFactors stretch_from_metric(const MetricCoeffs& m, double r_squared) {
    // abc = 1 / sqrt(uvw); factor the root to avoid overflow of the product.
    const double abc = 1.0 / (std::sqrt(m.u()) * std::sqrt(m.v()) * std::sqrt(m.w()));
    return {m.u() * abc, m.v() * abc, m.w() * abc, r_squared};
}

Sign sign_with_deadband(double value, double deadband) {
    if (std::abs(value) <= deadband) return Sign::Zero;
    return value > 0.0 ? Sign::Positive : Sign::Negative;
}

Classification classify(const StretchFactors& f, double eq_tol) {
    if (!(eq_tol >= 0.0)) throw DomainError("eq_tol must be non-negative");

    const auto s = f.sorted();
    const bool low_equal = (s.b() - s.a()) / s.c() <= eq_tol;
    const bool high_equal = (s.c() - s.b()) / s.c() <= eq_tol;

    Shape shape = Shape::Dragon;
    if (s.a() / s.c() <= eq_tol) {
        shape = Shape::Degenerate;
    } else if (low_equal && high_equal) {
        shape = Shape::Isotropic;
    } else if (low_equal) {
        shape = Shape::Snake;
    } else if (high_equal) {
        shape = Shape::Turtle;
    }

    const auto summary = curvature_summary(f);
    const double scale = std::max({std::abs(summary.kappa1), std::abs(summary.kappa2),
                                   std::abs(summary.kappa3)});
    const double deadband = eq_tol * scale;
    return {shape,
            {sign_with_deadband(summary.kappa1, deadband),
             sign_with_deadband(summary.kappa2, deadband),
             sign_with_deadband(summary.kappa3, deadband)},
            {sign_with_deadband(summary.ricci11, deadband),
             sign_with_deadband(summary.ricci22, deadband),
             sign_with_deadband(summary.ricci33, deadband)},
            sign_with_deadband(summary.scalar, deadband)};
}

}  // namespace dante
