#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sderk/problem.hpp"

namespace sderk {

/// Strong order the two-stage scheme is expected to reach on a problem:
/// Second for the linear/additive-noise class with db/dt = beta*b, First
/// otherwise.
enum class ExpectedOrder { First, Second };

inline const char* to_string(ExpectedOrder order) {
    return order == ExpectedOrder::Second ? "second" : "first";
}

struct CatalogueEntry {
    std::string id;
    std::string sde_text;       // human-readable dX = ... form
    std::string solution_text;  // human-readable X(t) = f(t, W) form
    ExpectedOrder expected_order = ExpectedOrder::First;
    SdeProblem problem;
};

namespace detail {

inline CatalogueEntry make_autonomous() {
    CatalogueEntry e;
    e.id = "autonomous";
    e.sde_text = "dX = [X/2 + sqrt(1+X^2)] dt + sqrt(1+X^2) dW,  X(0) = 0";
    e.solution_text = "X = sinh(t + W)";
    e.problem.x0 = {0.0};
    e.problem.drift = scalar_field(
        [](double, double x) { return 0.5 * x + std::sqrt(1.0 + x * x); });
    e.problem.volatility = scalar_field([](double, double x) { return std::sqrt(1.0 + x * x); });
    e.problem.volatility_jacobian = [](double, std::span<const double> x, std::span<double> out) {
        out[0] = x[0] / std::sqrt(1.0 + x[0] * x[0]);
    };
    e.problem.exact_solution = scalar_solution([](double t, double w) { return std::sinh(t + w); });
    e.problem.solution_derivatives = [](double t, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        ft[0] = std::cosh(t + w);
        fw[0] = std::cosh(t + w);
        fww[0] = std::sinh(t + w);
    };
    return e;
}

inline CatalogueEntry make_nonautonomous() {
    CatalogueEntry e;
    e.id = "nonautonomous";
    e.sde_text =
        "dX = [X/(1+t) - (3/2) X (1 - X^2/(1+t)^2)^2] dt + (1+t)(1 - X^2/(1+t)^2)^(3/2) dW,  "
        "X(0) = 0";
    e.solution_text = "X = (1+t) W / sqrt(1 + W^2)";
    e.problem.x0 = {0.0};
    e.problem.drift = scalar_field([](double t, double x) {
        const double u = 1.0 + t;
        const double r = 1.0 - (x * x) / (u * u);
        return x / u - 1.5 * x * r * r;
    });
    // Iterates may overshoot |X| <= 1+t; the radicand is clamped at zero so
    // the volatility stays real (and zero) outside the solution manifold.
    e.problem.volatility = [](double t, std::span<const double> x, std::span<double> out) {
        int clamps = 0;
        const double u = 1.0 + t;
        const double r = 1.0 - (x[0] * x[0]) / (u * u);
        out[0] = u * clamped_pow_3_2(r, clamps);
        return clamps;
    };
    e.problem.volatility_jacobian = [](double t, std::span<const double> x, std::span<double> out) {
        int clamps = 0;
        const double u = 1.0 + t;
        const double r = 1.0 - (x[0] * x[0]) / (u * u);
        out[0] = -3.0 * x[0] * clamped_sqrt(r, clamps) / u;
    };
    e.problem.exact_solution = scalar_solution(
        [](double t, double w) { return (1.0 + t) * w / std::sqrt(1.0 + w * w); });
    e.problem.solution_derivatives = [](double t, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        const double q = 1.0 + w * w;
        ft[0] = w / std::sqrt(q);
        fw[0] = (1.0 + t) / (q * std::sqrt(q));
        fww[0] = -3.0 * (1.0 + t) * w / (q * q * std::sqrt(q));
    };
    return e;
}

inline CatalogueEntry make_linear2nd() {
    CatalogueEntry e;
    e.id = "linear2nd";
    e.sde_text = "dX = [2X/(1+t) + (1+t)^2] dt + (1+t)^2 dW,  X(0) = 1";
    e.solution_text = "X = (1+t)^2 (1 + t + W)";
    e.expected_order = ExpectedOrder::Second;
    e.problem.x0 = {1.0};
    e.problem.drift = scalar_field([](double t, double x) {
        const double u = 1.0 + t;
        return 2.0 * x / u + u * u;
    });
    e.problem.volatility = scalar_field([](double t, double) {
        const double u = 1.0 + t;
        return u * u;
    });
    e.problem.volatility_jacobian = [](double, std::span<const double>, std::span<double> out) {
        out[0] = 0.0;
    };
    e.problem.exact_solution = scalar_solution([](double t, double w) {
        const double u = 1.0 + t;
        return u * u * (u + w);
    });
    e.problem.solution_derivatives = [](double t, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        const double u = 1.0 + t;
        ft[0] = 2.0 * u * (u + w) + u * u;
        fw[0] = u * u;
        fww[0] = 0.0;
    };
    return e;
}

inline CatalogueEntry make_ex1() {
    CatalogueEntry e;
    e.id = "ex1";
    e.sde_text = "dX = (X - t)/2 dt + (X - t - 2) dW,  X(0) = 3";
    e.solution_text = "X = 2 + t + exp(W)";
    e.problem.x0 = {3.0};
    e.problem.drift = scalar_field([](double t, double x) { return 0.5 * (x - t); });
    e.problem.volatility = scalar_field([](double t, double x) { return x - t - 2.0; });
    e.problem.volatility_jacobian = [](double, std::span<const double>, std::span<double> out) {
        out[0] = 1.0;
    };
    e.problem.exact_solution =
        scalar_solution([](double t, double w) { return 2.0 + t + std::exp(w); });
    e.problem.solution_derivatives = [](double, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        ft[0] = 1.0;
        fw[0] = std::exp(w);
        fww[0] = std::exp(w);
    };
    return e;
}

inline CatalogueEntry make_ex2() {
    CatalogueEntry e;
    e.id = "ex2";
    e.sde_text = "dX = X dW,  X(0) = 1";
    e.solution_text = "X = exp(W - t/2)";
    e.problem.x0 = {1.0};
    e.problem.drift = scalar_field([](double, double) { return 0.0; });
    e.problem.volatility = scalar_field([](double, double x) { return x; });
    e.problem.volatility_jacobian = [](double, std::span<const double>, std::span<double> out) {
        out[0] = 1.0;
    };
    e.problem.exact_solution =
        scalar_solution([](double t, double w) { return std::exp(w - 0.5 * t); });
    e.problem.solution_derivatives = [](double t, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        const double f = std::exp(w - 0.5 * t);
        ft[0] = -0.5 * f;
        fw[0] = f;
        fww[0] = f;
    };
    return e;
}

inline CatalogueEntry make_ex3() {
    CatalogueEntry e;
    e.id = "ex3";
    e.sde_text = "dX = -X (1 - X^2) dt + (1 - X^2) dW,  X(0) = 0";
    e.solution_text = "X = tanh(W)";
    e.problem.x0 = {0.0};
    e.problem.drift = scalar_field([](double, double x) { return -x * (1.0 - x * x); });
    e.problem.volatility = scalar_field([](double, double x) { return 1.0 - x * x; });
    e.problem.volatility_jacobian = [](double, std::span<const double> x, std::span<double> out) {
        out[0] = -2.0 * x[0];
    };
    e.problem.exact_solution = scalar_solution([](double, double w) { return std::tanh(w); });
    e.problem.solution_derivatives = [](double, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        const double th = std::tanh(w);
        ft[0] = 0.0;
        fw[0] = 1.0 - th * th;
        fww[0] = -2.0 * th * (1.0 - th * th);
    };
    return e;
}

inline CatalogueEntry make_ex4() {
    CatalogueEntry e;
    e.id = "ex4";
    e.sde_text = "dX = -X dt + exp(-t) dW,  X(0) = 0";
    e.solution_text = "X = exp(-t) W";
    e.expected_order = ExpectedOrder::Second;
    e.problem.x0 = {0.0};
    e.problem.drift = scalar_field([](double, double x) { return -x; });
    e.problem.volatility = scalar_field([](double t, double) { return std::exp(-t); });
    e.problem.volatility_jacobian = [](double, std::span<const double>, std::span<double> out) {
        out[0] = 0.0;
    };
    e.problem.exact_solution =
        scalar_solution([](double t, double w) { return std::exp(-t) * w; });
    e.problem.solution_derivatives = [](double t, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        ft[0] = -std::exp(-t) * w;
        fw[0] = std::exp(-t);
        fww[0] = 0.0;
    };
    return e;
}

inline CatalogueEntry make_ex5() {
    CatalogueEntry e;
    e.id = "ex5";
    e.sde_text = "dX = -(3/2) X (1 - X^2)^2 dt + (1 - X^2)^(3/2) dW,  X(0) = 0";
    e.solution_text = "X = W / sqrt(1 + W^2)";
    e.problem.x0 = {0.0};
    e.problem.drift = scalar_field([](double, double x) {
        const double r = 1.0 - x * x;
        return -1.5 * x * r * r;
    });
    e.problem.volatility = [](double, std::span<const double> x, std::span<double> out) {
        int clamps = 0;
        out[0] = clamped_pow_3_2(1.0 - x[0] * x[0], clamps);
        return clamps;
    };
    e.problem.volatility_jacobian = [](double, std::span<const double> x, std::span<double> out) {
        int clamps = 0;
        out[0] = -3.0 * x[0] * clamped_sqrt(1.0 - x[0] * x[0], clamps);
    };
    e.problem.exact_solution =
        scalar_solution([](double, double w) { return w / std::sqrt(1.0 + w * w); });
    e.problem.solution_derivatives = [](double, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        const double q = 1.0 + w * w;
        ft[0] = 0.0;
        fw[0] = 1.0 / (q * std::sqrt(q));
        fww[0] = -3.0 * w / (q * q * std::sqrt(q));
    };
    return e;
}

inline CatalogueEntry make_pure_wiener() {
    CatalogueEntry e;
    e.id = "pure_wiener";
    e.sde_text = "dX = dW,  X(0) = 0";
    e.solution_text = "X = W";
    e.problem.x0 = {0.0};
    e.problem.drift = scalar_field([](double, double) { return 0.0; });
    e.problem.volatility = scalar_field([](double, double) { return 1.0; });
    e.problem.volatility_jacobian = [](double, std::span<const double>, std::span<double> out) {
        out[0] = 0.0;
    };
    e.problem.exact_solution = scalar_solution([](double, double w) { return w; });
    e.problem.solution_derivatives = [](double, double, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        ft[0] = 0.0;
        fw[0] = 1.0;
        fww[0] = 0.0;
    };
    return e;
}

// Two uncoupled copies of ex4 driven by the same noise channel; exercises the
// vector code paths.
inline CatalogueEntry make_vec2() {
    CatalogueEntry e;
    e.id = "vec2";
    e.sde_text = "dX_i = -X_i dt + exp(-t) dW (i = 1,2, shared W),  X(0) = (0,0)";
    e.solution_text = "X_i = exp(-t) W";
    e.expected_order = ExpectedOrder::Second;
    e.problem.dim = 2;
    e.problem.x0 = {0.0, 0.0};
    e.problem.drift = [](double, std::span<const double> x, std::span<double> out) {
        out[0] = -x[0];
        out[1] = -x[1];
        return 0;
    };
    e.problem.volatility = [](double t, std::span<const double>, std::span<double> out) {
        out[0] = std::exp(-t);
        out[1] = std::exp(-t);
        return 0;
    };
    e.problem.volatility_jacobian = [](double, std::span<const double>, std::span<double> out) {
        out[0] = out[1] = out[2] = out[3] = 0.0;
    };
    e.problem.exact_solution = [](double t, double w, std::span<double> out) {
        out[0] = std::exp(-t) * w;
        out[1] = std::exp(-t) * w;
    };
    e.problem.solution_derivatives = [](double t, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        ft[0] = ft[1] = -std::exp(-t) * w;
        fw[0] = fw[1] = std::exp(-t);
        fww[0] = fww[1] = 0.0;
    };
    return e;
}

inline CatalogueEntry make_ex2_strat() {
    CatalogueEntry e;
    e.id = "ex2_strat";
    e.sde_text = "dX = X o dW (Stratonovich),  X(0) = 1";
    e.solution_text = "X = exp(W)";
    e.problem.interpretation = Interpretation::Stratonovich;
    e.problem.x0 = {1.0};
    e.problem.drift = scalar_field([](double, double) { return 0.0; });
    e.problem.volatility = scalar_field([](double, double x) { return x; });
    e.problem.volatility_jacobian = [](double, std::span<const double>, std::span<double> out) {
        out[0] = 1.0;
    };
    e.problem.exact_solution = scalar_solution([](double, double w) { return std::exp(w); });
    e.problem.solution_derivatives = [](double, double w, std::span<double> ft,
                                        std::span<double> fw, std::span<double> fww) {
        ft[0] = 0.0;
        fw[0] = std::exp(w);
        fww[0] = std::exp(w);
    };
    return e;
}

}  // namespace detail

/// The eight analytically solvable test problems, all Ito, all dim 1.
inline const std::vector<CatalogueEntry>& catalogue() {
    static const std::vector<CatalogueEntry> entries = [] {
        std::vector<CatalogueEntry> v;
        v.push_back(detail::make_autonomous());
        v.push_back(detail::make_nonautonomous());
        v.push_back(detail::make_linear2nd());
        v.push_back(detail::make_ex1());
        v.push_back(detail::make_ex2());
        v.push_back(detail::make_ex3());
        v.push_back(detail::make_ex4());
        v.push_back(detail::make_ex5());
        return v;
    }();
    return entries;
}

/// Auxiliary problems: the trivially exact pure_wiener, a dim-2 smoke
/// problem, and the Stratonovich form of ex2.
inline const std::vector<CatalogueEntry>& auxiliary_entries() {
    static const std::vector<CatalogueEntry> entries = [] {
        std::vector<CatalogueEntry> v;
        v.push_back(detail::make_pure_wiener());
        v.push_back(detail::make_vec2());
        v.push_back(detail::make_ex2_strat());
        return v;
    }();
    return entries;
}

/// Catalogue plus auxiliaries, in listing order.
inline std::vector<CatalogueEntry> all_entries() {
    std::vector<CatalogueEntry> v = catalogue();
    const auto& aux = auxiliary_entries();
    v.insert(v.end(), aux.begin(), aux.end());
    return v;
}

/// Find an entry by id in catalogue or auxiliaries; nullptr if unknown.
inline const CatalogueEntry* find_entry(std::string_view id) {
    for (const auto& e : catalogue())
        if (e.id == id) return &e;
    for (const auto& e : auxiliary_entries())
        if (e.id == id) return &e;
    return nullptr;
}

}  // namespace sderk
