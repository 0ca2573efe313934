#pragma once

// Test-only reference integrator: the classical Improved Euler / Heun scheme
// for dx/dt = f(t, x), coded independently of the library so it can serve as
// an oracle for the deterministic reduction of the stochastic scheme.

#include <cstddef>
#include <vector>

namespace testsupport {

template <typename F>
std::vector<double> heun_ode_trajectory(F f, double t0, double x0, double h, std::size_t n) {
    std::vector<double> xs(n + 1);
    xs[0] = x0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) * h;
        const double k1 = h * f(t, xs[k]);
        const double k2 = h * f(t + h, xs[k] + k1);
        xs[k + 1] = xs[k] + 0.5 * (k1 + k2);
    }
    return xs;
}

template <typename F>
double heun_ode_final(F f, double t0, double x0, double h, std::size_t n) {
    return heun_ode_trajectory(f, t0, x0, h, n).back();
}

}  // namespace testsupport
