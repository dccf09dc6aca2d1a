#pragma once

// Shared helpers for the unit and acceptance suites.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "dante/geometry.hpp"

namespace dante::testing {

inline double rel_diff(double x, double y, double scale) {
    return std::abs(x - y) / std::max(scale, 1e-300);
}

/// Log-uniform positive value in [lo, hi].
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    return std::exp(d(rng));
}

inline std::array<double, 3> random_triple(std::mt19937_64& rng, double lo = 0.1,
                                           double hi = 10.0) {
    return {log_uniform(rng, lo, hi), log_uniform(rng, lo, hi), log_uniform(rng, lo, hi)};
}

inline std::array<double, 3> random_ordered_triple(std::mt19937_64& rng, double lo = 0.1,
                                                   double hi = 10.0) {
    auto t = random_triple(rng, lo, hi);
    std::sort(t.begin(), t.end());
    return t;
}

/// Uniform point strictly inside the shape triangle, kept `margin` away from its edges.
struct InteriorPoint {
    double x;
    double y;
};

inline InteriorPoint random_interior_point(std::mt19937_64& rng, double margin = 1e-3) {
    std::uniform_real_distribution<double> ux(margin, 2.0 - margin);
    std::uniform_real_distribution<double> uy(0.0, 1.0);
    for (;;) {
        const double x = ux(rng);
        const double y = uy(rng);
        if (y > margin && y < std::min(x, 2.0 - x) - margin) return {x, y};
    }
}

}  // namespace dante::testing
