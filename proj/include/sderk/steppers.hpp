#pragma once

#include <cmath>
#include <cstddef>
#include <iostream>
#include <span>
#include <vector>

#include "sderk/errors.hpp"
#include "sderk/problem.hpp"
#include "sderk/rng.hpp"
#include "sderk/wiener.hpp"

namespace sderk {

enum class SchemeId { RkPaper, EulerMaruyama, Milstein };

inline const char* to_string(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::RkPaper: return "rk";
        case SchemeId::EulerMaruyama: return "em";
        case SchemeId::Milstein: return "milstein";
    }
    return "?";
}

enum class SignMode { Rademacher, Zero };

/// Per-step sign source S_k for the two-stage scheme.
///
/// Rademacher mode draws +1/-1 with equal probability from its own stream,
/// which by the stream layout is independent of the Wiener stream. Zero mode
/// (S_k = 0 throughout) is the Stratonovich variant. A sequence of pre-drawn
/// values can be injected for sign-coupled bridge refinement.
class SignSequence {
public:
    static SignSequence rademacher(RngStream stream) {
        return SignSequence(SignMode::Rademacher, stream);
    }

    static SignSequence zero() {
        return SignSequence(SignMode::Zero, RngStream::from_seed(0));
    }

    /// Replays externally drawn +1/-1 values (reported as Rademacher mode).
    static SignSequence fixed(std::vector<double> values) {
        SignSequence s(SignMode::Rademacher, RngStream::from_seed(0));
        s.fixed_values_ = std::move(values);
        s.use_fixed_ = true;
        return s;
    }

    SignMode mode() const noexcept { return mode_; }

    double next() {
        if (mode_ == SignMode::Zero) return 0.0;
        if (use_fixed_) {
            if (position_ >= fixed_values_.size())
                throw AggregationError("SignSequence: fixed sign values exhausted");
            return fixed_values_[position_++];
        }
        return stream_.next_sign();
    }

private:
    SignSequence(SignMode mode, RngStream stream) : mode_(mode), stream_(stream) {}

    SignMode mode_;
    RngStream stream_;
    std::vector<double> fixed_values_;
    std::size_t position_ = 0;
    bool use_fixed_ = false;
};

/// States at every grid point of one integration run, row-major
/// (steps()+1 rows of dim entries), plus domain-clamp diagnostics.
struct Trajectory {
    TimeGrid grid;
    std::size_t dim = 1;
    std::vector<double> states;
    long clamp_count = 0;

    std::span<const double> state(std::size_t k) const {
        return {states.data() + k * dim, dim};
    }
    std::span<const double> final_state() const { return state(grid.steps()); }
};

namespace detail {

inline bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

struct StepScratch {
    explicit StepScratch(std::size_t dim) : a0(dim), a1(dim), b0(dim), b1(dim), stage(dim), jac(dim * dim) {}
    std::vector<double> a0, a1, b0, b1, stage, jac;
};

[[noreturn]] inline void throw_non_finite(const char* where, double t, std::span<const double> x) {
    throw EvaluationError(std::string("non-finite value in ") + where, t, x);
}

// One step of the two-stage scheme:
//   K1 = h a(t, x)  + (dW - S sqrt(h)) b(t, x)
//   K2 = h a(t1, x+K1) + (dW + S sqrt(h)) b(t1, x+K1)
//   x' = x + (K1 + K2)/2
// The half-sum is accumulated as
//   (h a0 + h a1)/2 + dW (b0 + b1)/2 + S sqrt(h) (b1 - b0)/2
// so the sign leg multiplies (b1 - b0): for constant volatility it vanishes
// identically (the trajectory cannot depend on the sign draws), and for
// b = 0 the step is bit-for-bit the deterministic Improved Euler/Heun step.
inline void rk_step_into(const SdeProblem& p, double t, double t1, std::span<const double> x,
                         double h, double dw, double s, StepScratch& ws, std::span<double> out,
                         long& clamps) {
    const double c = s * std::sqrt(h);
    clamps += p.drift(t, x, ws.a0);
    clamps += p.volatility(t, x, ws.b0);
    if (!all_finite(ws.a0) || !all_finite(ws.b0)) throw_non_finite("stage 1 field", t, x);
    for (std::size_t i = 0; i < p.dim; ++i) {
        const double ha0 = h * ws.a0[i];
        ws.a0[i] = ha0;
        ws.stage[i] = x[i] + (ha0 + (dw - c) * ws.b0[i]);
    }
    clamps += p.drift(t1, ws.stage, ws.a1);
    clamps += p.volatility(t1, ws.stage, ws.b1);
    if (!all_finite(ws.a1) || !all_finite(ws.b1)) throw_non_finite("stage 2 field", t1, ws.stage);
    for (std::size_t i = 0; i < p.dim; ++i) {
        const double dx = 0.5 * (ws.a0[i] + h * ws.a1[i]) + 0.5 * (dw * (ws.b0[i] + ws.b1[i])) +
                          0.5 * (c * (ws.b1[i] - ws.b0[i]));
        out[i] = x[i] + dx;
    }
    if (!all_finite(out)) throw_non_finite("state update", t1, out);
}

inline void euler_maruyama_step_into(const SdeProblem& p, double t, std::span<const double> x,
                                     double h, double dw, StepScratch& ws, std::span<double> out,
                                     long& clamps) {
    clamps += p.drift(t, x, ws.a0);
    clamps += p.volatility(t, x, ws.b0);
    if (!all_finite(ws.a0) || !all_finite(ws.b0)) throw_non_finite("field", t, x);
    for (std::size_t i = 0; i < p.dim; ++i) out[i] = x[i] + h * ws.a0[i] + dw * ws.b0[i];
    if (!all_finite(out)) throw_non_finite("state update", t, out);
}

inline void milstein_step_into(const SdeProblem& p, const JacobianFn& jac, double t,
                               std::span<const double> x, double h, double dw, StepScratch& ws,
                               std::span<double> out, long& clamps) {
    clamps += p.drift(t, x, ws.a0);
    clamps += p.volatility(t, x, ws.b0);
    jac(t, x, ws.jac);
    if (!all_finite(ws.a0) || !all_finite(ws.b0) || !all_finite(ws.jac))
        throw_non_finite("field", t, x);
    out[0] = x[0] + h * ws.a0[0] + dw * ws.b0[0] + 0.5 * ws.jac[0] * ws.b0[0] * (dw * dw - h);
    if (!all_finite(out)) throw_non_finite("state update", t, out);
}

}  // namespace detail

/// One step of the two-stage scheme; s must be -1, 0 or +1.
inline std::vector<double> rk_step(const SdeProblem& problem, double t, std::span<const double> x,
                                   double h, double dw, double s) {
    if (!(h > 0.0)) throw GridError("rk_step: h must be positive");
    if (s != -1.0 && s != 0.0 && s != 1.0) throw GridError("rk_step: sign must be -1, 0 or +1");
    detail::StepScratch ws(problem.dim);
    std::vector<double> out(problem.dim);
    long clamps = 0;
    detail::rk_step_into(problem, t, t + h, x, h, dw, s, ws, out, clamps);
    return out;
}

/// Euler-Maruyama step: x + h a + dW b.
inline std::vector<double> euler_maruyama_step(const SdeProblem& problem, double t,
                                               std::span<const double> x, double h, double dw) {
    if (!(h > 0.0)) throw GridError("euler_maruyama_step: h must be positive");
    detail::StepScratch ws(problem.dim);
    std::vector<double> out(problem.dim);
    long clamps = 0;
    detail::euler_maruyama_step_into(problem, t, x, h, dw, ws, out, clamps);
    return out;
}

/// Milstein step (scalar problems only): x + h a + dW b + (1/2) b' b (dW^2 - h).
inline std::vector<double> milstein_step(const SdeProblem& problem, double t,
                                         std::span<const double> x, double h, double dw) {
    if (!(h > 0.0)) throw GridError("milstein_step: h must be positive");
    if (problem.dim != 1) throw CapabilityError("milstein_step: scalar problems only");
    detail::StepScratch ws(problem.dim);
    std::vector<double> out(problem.dim);
    long clamps = 0;
    detail::milstein_step_into(problem, jacobian_of(problem), t, x, h, dw, ws, out, clamps);
    return out;
}

/// Drive one realization across the whole grid, consuming the path's
/// increments in order. Deterministic given (problem, path, scheme, signs).
///
/// Interpretation rules: a Stratonovich problem integrates only with the
/// two-stage scheme and zero signs (convert first for the Ito-only
/// baselines); an Ito problem under the two-stage scheme expects Rademacher
/// signs and warns if run with zero signs.
inline Trajectory integrate(const SdeProblem& problem, const WienerPath& path, SchemeId scheme,
                            SignSequence signs) {
    if (problem.x0.size() != problem.dim)
        throw CapabilityError("integrate: x0 size does not match problem dimension");
    if (problem.interpretation == Interpretation::Stratonovich) {
        if (scheme != SchemeId::RkPaper)
            throw InterpretationError(
                "integrate: Euler-Maruyama/Milstein are Ito-only; convert the problem first");
        if (signs.mode() != SignMode::Zero)
            throw InterpretationError(
                "integrate: Stratonovich problems require zero signs (S = 0)");
    } else if (scheme == SchemeId::RkPaper && signs.mode() != SignMode::Rademacher) {
        std::cerr << "sderk: warning: integrating an Ito problem with zero signs;"
                     " this computes the Stratonovich solution\n";
    }
    if (scheme == SchemeId::Milstein && problem.dim != 1)
        throw CapabilityError("integrate: Milstein is restricted to scalar problems");

    const TimeGrid& grid = path.grid;
    const std::size_t n = grid.steps();
    const std::size_t dim = problem.dim;
    const double h = grid.step();

    Trajectory traj{grid, dim, std::vector<double>((n + 1) * dim), 0};
    for (std::size_t i = 0; i < dim; ++i) traj.states[i] = problem.x0[i];

    detail::StepScratch ws(dim);
    JacobianFn jac;
    if (scheme == SchemeId::Milstein) jac = jacobian_of(problem);

    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.time(k);
        const double dw = path.increments[k];
        std::span<const double> x{traj.states.data() + k * dim, dim};
        std::span<double> out{traj.states.data() + (k + 1) * dim, dim};
        switch (scheme) {
            case SchemeId::RkPaper:
                detail::rk_step_into(problem, t, grid.time(k + 1), x, h, dw, signs.next(), ws, out,
                                     traj.clamp_count);
                break;
            case SchemeId::EulerMaruyama:
                detail::euler_maruyama_step_into(problem, t, x, h, dw, ws, out, traj.clamp_count);
                break;
            case SchemeId::Milstein:
                detail::milstein_step_into(problem, jac, t, x, h, dw, ws, out, traj.clamp_count);
                break;
        }
    }
    return traj;
}

}  // namespace sderk
