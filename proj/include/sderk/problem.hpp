#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "sderk/errors.hpp"

namespace sderk {

enum class Interpretation { Ito, Stratonovich };

/// Drift or volatility field a(t,x) / b(t,x). Writes the value into `out`
/// (size dim) and returns the number of domain clamps applied during the
/// evaluation (0 for fields without domain guards). Must be pure: same
/// inputs, same outputs, callable concurrently.
using FieldFn = std::function<int(double t, std::span<const double> x, std::span<double> out)>;

/// Volatility Jacobian db_i/dx_j, written row-major into `out` (size dim*dim).
using JacobianFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

/// Closed-form solution X(t) = f(t, W(t)); writes the state into `out`.
using SolutionFn = std::function<void(double t, double w, std::span<double> out)>;

/// Analytic partial derivatives of the closed-form solution: f_t, f_w, f_ww,
/// each written componentwise into spans of size dim.
using SolutionDerivsFn = std::function<void(double t, double w, std::span<double> ft,
                                            std::span<double> fw, std::span<double> fww)>;

/// An SDE  dX = a(t,X) dt + b(t,X) dW  with one scalar noise channel, under
/// either the Ito or the Stratonovich reading. Optional extras carry what the
/// analytic test problems know about themselves.
struct SdeProblem {
    std::size_t dim = 1;
    Interpretation interpretation = Interpretation::Ito;
    FieldFn drift;
    FieldFn volatility;
    std::vector<double> x0;
    JacobianFn volatility_jacobian;          // optional analytic db/dx
    SolutionFn exact_solution;               // optional X(t, W(t))
    SolutionDerivsFn solution_derivatives;   // optional analytic f_t, f_w, f_ww

    bool has_jacobian() const { return static_cast<bool>(volatility_jacobian); }
    bool has_exact_solution() const { return static_cast<bool>(exact_solution); }
    bool has_solution_derivatives() const { return static_cast<bool>(solution_derivatives); }
};

/// Wrap a scalar field x' = f(t, x) into the span interface (dim-1 problems).
inline FieldFn scalar_field(std::function<double(double, double)> f) {
    return [f = std::move(f)](double t, std::span<const double> x, std::span<double> out) {
        out[0] = f(t, x[0]);
        return 0;
    };
}

inline SolutionFn scalar_solution(std::function<double(double, double)> f) {
    return [f = std::move(f)](double t, double w, std::span<double> out) { out[0] = f(t, w); };
}

/// r^(3/2) with the radicand clamped at zero; counts a clamp event when the
/// radicand actually went negative (an iterate overshot the solution's
/// natural domain), not when it merely touches zero.
inline double clamped_pow_3_2(double r, int& clamps) {
    if (r < 0.0) {
        ++clamps;
        return 0.0;
    }
    return r * std::sqrt(r);
}

/// sqrt(r) with the same clamping convention as clamped_pow_3_2.
inline double clamped_sqrt(double r, int& clamps) {
    if (r < 0.0) {
        ++clamps;
        return 0.0;
    }
    return std::sqrt(r);
}

/// Central-difference volatility Jacobian, step cbrt(eps)*max(1,|x_j|) per
/// component. Used wherever a problem does not carry an analytic Jacobian.
inline JacobianFn finite_difference_jacobian(FieldFn volatility, std::size_t dim) {
    return [volatility = std::move(volatility), dim](double t, std::span<const double> x,
                                                     std::span<double> out) {
        static const double delta0 = std::cbrt(std::numeric_limits<double>::epsilon());
        std::vector<double> xp(x.begin(), x.end());
        std::vector<double> bp(dim), bm(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            const double delta = delta0 * std::max(1.0, std::abs(x[j]));
            xp[j] = x[j] + delta;
            volatility(t, xp, bp);
            xp[j] = x[j] - delta;
            volatility(t, xp, bm);
            xp[j] = x[j];
            for (std::size_t i = 0; i < dim; ++i)
                out[i * dim + j] = (bp[i] - bm[i]) / (2.0 * delta);
        }
    };
}

/// The problem's analytic Jacobian when present, else the finite-difference
/// fallback.
inline JacobianFn jacobian_of(const SdeProblem& problem) {
    if (problem.has_jacobian()) return problem.volatility_jacobian;
    return finite_difference_jacobian(problem.volatility, problem.dim);
}

/// Rewrite a Stratonovich problem as the Ito problem with the same solutions:
/// drift becomes a + (1/2) b' b, volatility is unchanged. The closed-form
/// solution (if any) carries over unchanged.
inline SdeProblem stratonovich_to_ito(const SdeProblem& problem) {
    if (problem.interpretation != Interpretation::Stratonovich)
        throw InterpretationError("stratonovich_to_ito: problem is already Ito");
    SdeProblem ito = problem;
    ito.interpretation = Interpretation::Ito;
    const std::size_t dim = problem.dim;
    ito.drift = [base = problem.drift, vol = problem.volatility, jac = jacobian_of(problem), dim](
                    double t, std::span<const double> x, std::span<double> out) {
        int clamps = base(t, x, out);
        std::vector<double> b(dim), jmat(dim * dim);
        clamps += vol(t, x, b);
        jac(t, x, jmat);
        for (std::size_t i = 0; i < dim; ++i) {
            double corr = 0.0;
            for (std::size_t j = 0; j < dim; ++j) corr += jmat[i * dim + j] * b[j];
            out[i] += 0.5 * corr;
        }
        return clamps;
    };
    return ito;
}

enum class DerivativeMode { Auto, FiniteDifference };

/// Residuals of the Ito-formula identity for a problem with closed-form
/// solution X = f(t, W): for the SDE to hold,
///   a(t, f) = f_t + (1/2) f_ww   and   b(t, f) = f_w.
/// Returns (max_i |drift residual_i|, max_i |volatility residual_i|).
///
/// Derivatives of f come from the problem's analytic derivative bundle when
/// present (unless mode forces finite differences); the fallback uses central
/// differences with steps cbrt(eps)*max(1,|.|) for f_t and f_w and
/// 2*eps^(1/4)*max(1,|w|) for f_ww.
inline std::pair<double, double> ito_residual(const SdeProblem& problem, double t, double w,
                                              DerivativeMode mode = DerivativeMode::Auto) {
    if (!problem.has_exact_solution())
        throw CapabilityError("ito_residual: problem has no exact solution");
    const std::size_t dim = problem.dim;
    std::vector<double> f(dim), ft(dim), fw(dim), fww(dim);
    problem.exact_solution(t, w, f);

    const bool analytic = mode == DerivativeMode::Auto && problem.has_solution_derivatives();
    if (analytic) {
        problem.solution_derivatives(t, w, ft, fw, fww);
    } else {
        const double eps = std::numeric_limits<double>::epsilon();
        const double dt = std::cbrt(eps) * std::max(1.0, std::abs(t));
        const double dw = std::cbrt(eps) * std::max(1.0, std::abs(w));
        const double dw2 = 2.0 * std::pow(eps, 0.25) * std::max(1.0, std::abs(w));
        std::vector<double> p(dim), m(dim);
        problem.exact_solution(t + dt, w, p);
        problem.exact_solution(t - dt, w, m);
        for (std::size_t i = 0; i < dim; ++i) ft[i] = (p[i] - m[i]) / (2.0 * dt);
        problem.exact_solution(t, w + dw, p);
        problem.exact_solution(t, w - dw, m);
        for (std::size_t i = 0; i < dim; ++i) fw[i] = (p[i] - m[i]) / (2.0 * dw);
        problem.exact_solution(t, w + dw2, p);
        problem.exact_solution(t, w - dw2, m);
        for (std::size_t i = 0; i < dim; ++i)
            fww[i] = (p[i] - 2.0 * f[i] + m[i]) / (dw2 * dw2);
    }

    std::vector<double> a(dim), b(dim);
    problem.drift(t, f, a);
    problem.volatility(t, f, b);
    double drift_residual = 0.0, vol_residual = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        drift_residual = std::max(drift_residual, std::abs(ft[i] + 0.5 * fww[i] - a[i]));
        vol_residual = std::max(vol_residual, std::abs(fw[i] - b[i]));
    }
    return {drift_residual, vol_residual};
}

}  // namespace sderk
