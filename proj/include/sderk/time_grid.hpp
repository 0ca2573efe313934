#pragma once

#include <cstddef>

#include "sderk/errors.hpp"

namespace sderk {

/// Uniform time grid t_k = t0 + k*h, k = 0..n, with h = (t_end - t0)/n.
/// Grid times are always computed from k, never accumulated, so t_k carries
/// no summation drift even for 2^16 steps.
class TimeGrid {
public:
    TimeGrid(double t0, double t_end, std::size_t n) : t0_(t0), t_end_(t_end), n_(n) {
        if (n == 0) throw GridError("TimeGrid: step count must be >= 1");
        if (!(t_end > t0)) throw GridError("TimeGrid: t_end must exceed t0");
        h_ = (t_end - t0) / static_cast<double>(n);
        if (!(h_ > 0.0)) throw GridError("TimeGrid: step size must be positive");
    }

    double t0() const noexcept { return t0_; }
    double t_end() const noexcept { return t_end_; }
    std::size_t steps() const noexcept { return n_; }
    double step() const noexcept { return h_; }

    /// Time at grid point k, 0 <= k <= steps().
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * h_; }

    bool operator==(const TimeGrid& other) const noexcept {
        return t0_ == other.t0_ && t_end_ == other.t_end_ && n_ == other.n_;
    }

private:
    double t0_;
    double t_end_;
    std::size_t n_;
    double h_;
};

}  // namespace sderk
