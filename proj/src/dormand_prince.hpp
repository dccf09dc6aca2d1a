#pragma once

// Dormand-Prince 5(4) step with the order-4 continuous extension of
// Hairer, Norsett & Wanner (DOPRI5). Fixed to three components.

#include <array>
#include <cmath>

namespace dante::detail {

using State = std::array<double, 3>;

/// Dense-output polynomial over one accepted step [t0, t0 + h].
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    std::array<State, 5> coeff{};

    State operator()(double t) const {
        const double theta = (t - t0) / h;
        const double theta1 = 1.0 - theta;
        State y;
        for (std::size_t i = 0; i < 3; ++i) {
            y[i] = coeff[0][i] +
                   theta * (coeff[1][i] +
                            theta1 * (coeff[2][i] + theta * (coeff[3][i] + theta1 * coeff[4][i])));
        }
        return y;
    }
};

struct StepResult {
    State y;
    State f;     // derivative at the new point (FSAL)
    double err;  // scaled RMS error estimate; accept when <= 1
    bool finite;
    DenseSegment dense;
};

template <class Rhs>
StepResult dopri5_step(const Rhs& rhs, double t, const State& y, const State& k1, double h,
                       double rel_tol, double abs_tol) {
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                     a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                     a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                     e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    State tmp, k2, k3, k4, k5, k6;
    auto stage = [&](auto&& combine) {
        for (std::size_t i = 0; i < 3; ++i) tmp[i] = y[i] + h * combine(i);
    };

    stage([&](std::size_t i) { return a21 * k1[i]; });
    k2 = rhs(tmp);
    stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    k3 = rhs(tmp);
    stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
    k4 = rhs(tmp);
    stage([&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; });
    k5 = rhs(tmp);
    stage([&](std::size_t i) {
        return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
    });
    k6 = rhs(tmp);

    StepResult out;
    stage([&](std::size_t i) {
        return a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i];
    });
    out.y = tmp;
    out.f = rhs(out.y);
    const State& k7 = out.f;

    double sum = 0.0;
    out.finite = true;
    for (std::size_t i = 0; i < 3; ++i) {
        const double e =
            h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sk = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(out.y[i]));
        sum += (e / sk) * (e / sk);
        out.finite = out.finite && std::isfinite(out.y[i]) && std::isfinite(k7[i]);
    }
    out.err = std::sqrt(sum / 3.0);
    out.finite = out.finite && std::isfinite(out.err);

    out.dense.t0 = t;
    out.dense.h = h;
    for (std::size_t i = 0; i < 3; ++i) {
        const double ydiff = out.y[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        out.dense.coeff[0][i] = y[i];
        out.dense.coeff[1][i] = ydiff;
        out.dense.coeff[2][i] = bspl;
        out.dense.coeff[3][i] = ydiff - h * k7[i] - bspl;
        out.dense.coeff[4][i] =
            h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    return out;
}

}  // namespace dante::detail
