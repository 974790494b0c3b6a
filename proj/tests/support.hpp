#pragma once

// Independent oracles shared by the unit suites. Nothing here calls into the
// library's quadrature so the checks do not grade the code with itself.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "deltastrip/strip.hpp"

namespace testing {

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

/// Smooth field vanishing at x = +-X: a few random Gaussians with random
/// transverse cosine content.
inline deltastrip::Field random_smooth_field(const deltastrip::StripGrid& g, std::mt19937_64& rng,
                                             bool positive = false) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double X = g.x_extent();
    struct Bump {
        double a, c, w, b1, b2;
    };
    Bump bumps[3];
    for (auto& b : bumps) {
        b = {positive ? 1.0 + 0.5 * unif(rng) : unif(rng), 0.2 * X * unif(rng), 1.0 + 0.5 * (unif(rng) + 1.0),
             0.3 * unif(rng), 0.2 * unif(rng)};
    }
    deltastrip::Field u = deltastrip::Field::from_function(g, [&](double x, double y) {
        double v = 0.0;
        for (const auto& b : bumps) {
            v += b.a * std::exp(-(x - b.c) * (x - b.c) / (b.w * b.w)) *
                 (1.0 + b.b1 * std::cos(std::numbers::pi * y) + b.b2 * std::cos(2.0 * std::numbers::pi * y));
        }
        return v;
    });
    u.zero_x_boundary();
    return u;
}

}  // namespace testing
