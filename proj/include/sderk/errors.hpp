#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sderk {

/// Invalid time grid (non-positive step count, t_end <= t0, ...).
struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid increment aggregation (coarsening factor does not divide n, ...).
struct AggregationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An operation was asked of a problem that lacks the required capability
/// (missing exact solution, unsupported dimension, ...).
struct CapabilityError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Ito/Stratonovich misuse: converting an already-Ito problem, or integrating
/// a Stratonovich problem with an Ito-only scheme.
struct InterpretationError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A drift/volatility evaluation or an integration stage produced a
/// non-finite value. Carries the time and state at the point of failure.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(std::string what, double t, std::span<const double> state)
        : std::runtime_error(std::move(what)), t_(t), state_(state.begin(), state.end()) {}

    double time() const noexcept { return t_; }
    const std::vector<double>& state() const noexcept { return state_; }

private:
    double t_;
    std::vector<double> state_;
};

/// File/stream I/O failure in report or trajectory serialization.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sderk
