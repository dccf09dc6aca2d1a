#pragma once

// Static geometry of a homogeneously deformed 3-sphere ("Dante").
//
// The metric is ds^2 = u w1^2 + v w2^2 + w w3^2 with u = 1/(bc), v = 1/(ac),
// w = 1/(ab), where w1..w3 are the left-invariant forms of a round S^3 of
// radius R. All curvature values are in the orthonormal left-invariant frame.

#include <array>
#include <cstdint>

namespace dante {

inline constexpr double kDefaultRSquared = 4.0;
inline constexpr double kDefaultEqTol = 1e-9;

/// Deformation parameters (a, b, c) and the squared radius of the base S^3.
class StretchFactors {
public:
    /// Throws DomainError unless a, b, c, r_squared are all positive and finite.
    StretchFactors(double a, double b, double c, double r_squared = kDefaultRSquared);

    /// As above, additionally requiring a <= b <= c.
    static StretchFactors ordered(double a, double b, double c,
                                  double r_squared = kDefaultRSquared);

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double r_squared() const { return r_squared_; }

    bool is_ordered() const { return a_ <= b_ && b_ <= c_; }

    /// Copy with (a, b, c) sorted ascending.
    StretchFactors sorted() const;

    /// Copy with (a, b, c) scaled by lambda > 0.
    StretchFactors scaled(double lambda) const;

private:
    double a_;
    double b_;
    double c_;
    double r_squared_;
};

/// Metric coefficients (u, v, w); the variables evolved by the flow.
class MetricCoeffs {
public:
    /// Throws DomainError unless u, v, w are positive and finite.
    MetricCoeffs(double u, double v, double w);

    double u() const { return u_; }
    double v() const { return v_; }
    double w() const { return w_; }

    double sigma() const { return 0.5 * (u_ + v_ + w_); }
    double min() const;
    double max() const;
    std::array<double, 3> as_array() const { return {u_, v_, w_}; }

private:
    double u_;
    double v_;
    double w_;
};

using Triple = std::array<double, 3>;

struct CurvatureSummary {
    double kappa1;
    double kappa2;
    double kappa3;
    double ricci11;
    double ricci22;
    double ricci33;
    double scalar;
};

enum class Shape : std::uint8_t { Isotropic, Snake, Turtle, Dragon, Degenerate };

enum class Sign : std::int8_t { Negative = -1, Zero = 0, Positive = 1 };

using SignTriple = std::array<Sign, 3>;

struct Classification {
    Shape shape;
    SignTriple curvature_signs;
    SignTriple ricci_signs;
    Sign scalar_sign;
};

const char* to_string(Shape shape);

double semiperimeter(const StretchFactors& f);

/// kappa_1 = 4/R^2 [a(s-a) - (s-b)(s-c)] and its cyclic images.
Triple principal_curvatures(const StretchFactors& f);

/// R_11 = 8/R^2 (s-b)(s-c) and its cyclic images.
Triple ricci_eigenvalues(const StretchFactors& f);

/// Twice the sum of the principal curvatures.
double scalar_curvature(const StretchFactors& f);

/// Diagonal coefficients ((a-b-c)/R, (b-a-c)/R, (c-a-b)/R) of the connection form.
Triple connection_coefficients(const StretchFactors& f);

CurvatureSummary curvature_summary(const StretchFactors& f);

MetricCoeffs metric_coeffs(const StretchFactors& f);

/// Inverse of metric_coeffs: a = u / sqrt(uvw), etc.
StretchFactors stretch_from_metric(const MetricCoeffs& m, double r_squared = kDefaultRSquared);

/// Shape kind uses relative differences |b-a|/c and |c-b|/c against eq_tol on
/// the sorted factors; sign triples use a deadband of eq_tol * max|kappa|.
Classification classify(const StretchFactors& f, double eq_tol = kDefaultEqTol);

Sign sign_with_deadband(double value, double deadband);

}  // namespace dante
