#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "sderk/errors.hpp"
#include "sderk/rng.hpp"
#include "sderk/time_grid.hpp"

namespace sderk {

/// One realization of a scalar Wiener process on a uniform grid, stored as
/// per-step increments dW_k = W(t_{k+1}) - W(t_k). W(t0) = 0 by definition;
/// point values derive as prefix sums. Immutable after construction and safe
/// to share across threads.
struct WienerPath {
    TimeGrid grid;
    std::vector<double> increments;  // size grid.steps()
    std::uint64_t seed_label = 0;    // key of the stream that produced it
};

/// Draw a fresh path: each increment iid Normal(0, h). The same (grid, stream)
/// always yields the same path.
inline WienerPath sample_path(const TimeGrid& grid, RngStream stream) {
    WienerPath path{grid, {}, stream.key()};
    path.increments.resize(grid.steps());
    const double sqrt_h = std::sqrt(grid.step());
    for (double& dw : path.increments) dw = sqrt_h * stream.next_gaussian();
    return path;
}

/// Aggregate increments onto a grid `factor` times coarser. Each coarse
/// increment is the left-to-right sum of its block of fine increments, so the
/// path's displacement at every surviving grid point is preserved.
inline WienerPath coarsen(const WienerPath& path, std::size_t factor) {
    const std::size_t n = path.grid.steps();
    if (factor == 0 || n % factor != 0)
        throw AggregationError("coarsen: factor must divide the step count");
    WienerPath coarse{TimeGrid(path.grid.t0(), path.grid.t_end(), n / factor), {}, path.seed_label};
    coarse.increments.resize(n / factor);
    for (std::size_t j = 0; j < coarse.increments.size(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < factor; ++i) sum += path.increments[j * factor + i];
        coarse.increments[j] = sum;
    }
    return coarse;
}

/// Brownian-bridge interpolation to half steps with caller-supplied bridge
/// variables, one per coarse step: the step with increment dW splits into
///   dW/2 - sqrt(h)/2 * z   and   dW/2 + sqrt(h)/2 * z.
/// With z standard normal this is the exact conditional law of the half-step;
/// the pair always sums back to dW up to one rounding.
inline WienerPath bridge_refine_with(const WienerPath& path, std::span<const double> z) {
    const std::size_t n = path.grid.steps();
    if (z.size() != n)
        throw AggregationError("bridge_refine_with: need one bridge variable per step");
    WienerPath fine{TimeGrid(path.grid.t0(), path.grid.t_end(), 2 * n), {}, path.seed_label};
    fine.increments.resize(2 * n);
    const double half_sqrt_h = 0.5 * std::sqrt(path.grid.step());
    for (std::size_t k = 0; k < n; ++k) {
        const double half_dw = 0.5 * path.increments[k];
        const double spread = half_sqrt_h * z[k];
        fine.increments[2 * k] = half_dw - spread;
        fine.increments[2 * k + 1] = half_dw + spread;
    }
    return fine;
}

/// Brownian-bridge refinement with Normal(0,1) bridge variables drawn from
/// `stream`, one per coarse step in order.
inline WienerPath bridge_refine(const WienerPath& path, RngStream stream) {
    std::vector<double> z(path.grid.steps());
    for (double& zi : z) zi = stream.next_gaussian();
    return bridge_refine_with(path, z);
}

/// W at grid point k: prefix sum of the first k increments; value_at(p, 0) = 0.
inline double value_at(const WienerPath& path, std::size_t k) {
    if (k > path.grid.steps()) throw std::out_of_range("value_at: grid index out of range");
    double w = 0.0;
    for (std::size_t i = 0; i < k; ++i) w += path.increments[i];
    return w;
}

/// W(t_end) - W(t0).
inline double total_displacement(const WienerPath& path) {
    return value_at(path, path.grid.steps());
}

/// CSV dump, one row per step: k,t,dW,W with t = t_k and W = W(t_k).
inline void write_path_csv(const WienerPath& path, std::ostream& out) {
    out << "k,t,dW,W\n";
    char buf[96];
    double w = 0.0;
    for (std::size_t k = 0; k < path.grid.steps(); ++k) {
        w += path.increments[k];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", k + 1, path.grid.time(k + 1),
                      path.increments[k], w);
        out << buf;
    }
    if (!out) throw IoError("write_path_csv: stream failure");
}

}  // namespace sderk
