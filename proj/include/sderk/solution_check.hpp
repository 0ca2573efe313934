#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "sderk/catalogue.hpp"
#include "sderk/problem.hpp"

namespace sderk {

/// Low-discrepancy points of the R2 (plastic-number) sequence mapped onto
/// [t_lo, t_hi] x [w_lo, w_hi]; deterministic.
inline std::vector<std::pair<double, double>> quasi_random_points(std::size_t count, double t_lo,
                                                                  double t_hi, double w_lo,
                                                                  double w_hi) {
    constexpr double a1 = 0.7548776662466927;  // 1/g,   g^3 = g + 1
    constexpr double a2 = 0.5698402909980532;  // 1/g^2
    std::vector<std::pair<double, double>> pts;
    pts.reserve(count);
    double u = 0.5, v = 0.5;
    for (std::size_t i = 0; i < count; ++i) {
        u += a1;
        u -= std::floor(u);
        v += a2;
        v -= std::floor(v);
        pts.emplace_back(t_lo + u * (t_hi - t_lo), w_lo + v * (w_hi - w_lo));
    }
    return pts;
}

struct SolutionCheck {
    std::string id;
    double max_drift_residual = 0.0;
    double max_vol_residual = 0.0;
    double tolerance = 0.0;
    bool analytic_derivatives = false;
    bool passed = false;
};

/// Verify one entry's closed-form solution against its SDE via the
/// Ito-formula identity at 100 quasi-random (t, w) points in
/// [0,1] x [-2,2]. Stratonovich entries are converted to their equivalent
/// Ito form first (the identity is an Ito statement). The default tolerance
/// is 1e-6 with analytic solution derivatives and 1e-4 with the
/// finite-difference fallback.
inline SolutionCheck check_solution_entry(const CatalogueEntry& entry,
                                          DerivativeMode mode = DerivativeMode::Auto,
                                          std::optional<double> tolerance = std::nullopt) {
    SolutionCheck result;
    result.id = entry.id;
    const SdeProblem problem = entry.problem.interpretation == Interpretation::Stratonovich
                                   ? stratonovich_to_ito(entry.problem)
                                   : entry.problem;
    result.analytic_derivatives =
        mode == DerivativeMode::Auto && problem.has_solution_derivatives();
    result.tolerance = tolerance.value_or(result.analytic_derivatives ? 1e-6 : 1e-4);
    for (const auto& [t, w] : quasi_random_points(100, 0.0, 1.0, -2.0, 2.0)) {
        const auto [dr, vr] = ito_residual(problem, t, w, mode);
        result.max_drift_residual = std::max(result.max_drift_residual, dr);
        result.max_vol_residual = std::max(result.max_vol_residual, vr);
    }
    result.passed = result.max_drift_residual <= result.tolerance &&
                    result.max_vol_residual <= result.tolerance;
    return result;
}

}  // namespace sderk
