#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sderk/catalogue.hpp"
#include "sderk/problem.hpp"
#include "sderk/solution_check.hpp"

using namespace sderk;

namespace {

double solution_at(const SdeProblem& p, double t, double w) {
    std::vector<double> out(p.dim);
    p.exact_solution(t, w, out);
    return out[0];
}

double drift_at(const SdeProblem& p, double t, double x) {
    std::vector<double> xs{x}, out(1);
    p.drift(t, xs, out);
    return out[0];
}

double vol_at(const SdeProblem& p, double t, double x) {
    std::vector<double> xs{x}, out(1);
    p.volatility(t, xs, out);
    return out[0];
}

}  // namespace

TEST_CASE("catalogue shape") {
    const auto& cat = catalogue();
    REQUIRE(cat.size() == 8);
    const std::vector<std::string> ids{"autonomous", "nonautonomous", "linear2nd", "ex1",
                                       "ex2",        "ex3",           "ex4",       "ex5"};
    for (std::size_t i = 0; i < ids.size(); ++i) {
        REQUIRE(cat[i].id == ids[i]);
        REQUIRE(cat[i].problem.dim == 1);
        REQUIRE(cat[i].problem.interpretation == Interpretation::Ito);
        REQUIRE(cat[i].problem.has_exact_solution());
        REQUIRE(cat[i].problem.has_jacobian());
    }
    REQUIRE(find_entry("pure_wiener") != nullptr);
    REQUIRE(find_entry("vec2") != nullptr);
    REQUIRE(find_entry("ex2_strat") != nullptr);
    REQUIRE(find_entry("no_such_problem") == nullptr);
}

TEST_CASE("solutions start at x0") {
    for (const auto& e : all_entries()) {
        std::vector<double> out(e.problem.dim);
        e.problem.exact_solution(0.0, 0.0, out);
        for (std::size_t i = 0; i < e.problem.dim; ++i) REQUIRE(out[i] == e.problem.x0[i]);
    }
}

TEST_CASE("spot values of the closed forms") {
    REQUIRE(solution_at(find_entry("autonomous")->problem, 0.0, 0.0) == 0.0);
    // (1+1)^2 * (1 + 1 + 0.5) = 4 * 2.5
    REQUIRE(solution_at(find_entry("linear2nd")->problem, 1.0, 0.5) == 10.0);
    REQUIRE(solution_at(find_entry("ex2")->problem, 0.0, 0.0) == 1.0);
    REQUIRE_THAT(solution_at(find_entry("ex1")->problem, 0.25, 0.0),
                 Catch::Matchers::WithinAbs(3.25, 1e-15));
}

TEST_CASE("ito residuals at spot points") {
    const auto& autonomous = find_entry("autonomous")->problem;
    auto [ad, av] = ito_residual(autonomous, 0.3, 0.2);
    REQUIRE(ad < 1e-6);
    REQUIRE(av < 1e-6);

    const auto& ex3 = find_entry("ex3")->problem;
    auto [cd, cv] = ito_residual(ex3, 0.0, 0.0);
    REQUIRE(cd < 1e-6);
    REQUIRE(cv < 1e-6);

    // f = exp(-t) w: f_t + f_ww/2 = -exp(-t) w = a(f), f_w = exp(-t) = b.
    const auto& ex4 = find_entry("ex4")->problem;
    auto [dd, dv] = ito_residual(ex4, 1.0, -0.7, DerivativeMode::FiniteDifference);
    REQUIRE(dd < 1e-6);
    REQUIRE(dv < 1e-6);
    auto [dd2, dv2] = ito_residual(ex4, 1.0, -0.7);
    REQUIRE(dd2 < 1e-12);
    REQUIRE(dv2 < 1e-12);

    SdeProblem bare;
    bare.drift = scalar_field([](double, double) { return 0.0; });
    bare.volatility = scalar_field([](double, double) { return 1.0; });
    bare.x0 = {0.0};
    REQUIRE_THROWS_AS(ito_residual(bare, 0.0, 0.0), CapabilityError);
}

TEST_CASE("catalogue closure over quasi-random points") {
    for (const auto& e : all_entries()) {
        const auto analytic = check_solution_entry(e, DerivativeMode::Auto);
        INFO(e.id << " analytic: drift " << analytic.max_drift_residual << " vol "
                  << analytic.max_vol_residual);
        REQUIRE(analytic.analytic_derivatives);
        REQUIRE(analytic.max_drift_residual < 1e-6);
        REQUIRE(analytic.max_vol_residual < 1e-6);

        const auto fd = check_solution_entry(e, DerivativeMode::FiniteDifference);
        INFO(e.id << " fd: drift " << fd.max_drift_residual << " vol " << fd.max_vol_residual);
        REQUIRE(fd.max_drift_residual < 1e-4);
        REQUIRE(fd.max_vol_residual < 1e-4);
    }
}

TEST_CASE("finite-difference jacobian tracks the analytic one") {
    for (const auto& e : all_entries()) {
        if (!e.problem.has_jacobian()) continue;
        const std::size_t dim = e.problem.dim;
        auto fd = finite_difference_jacobian(e.problem.volatility, dim);
        std::vector<double> x(dim), jan(dim * dim), jfd(dim * dim);
        for (const auto& [t, w] : quasi_random_points(50, 0.0, 1.0, -2.0, 2.0)) {
            e.problem.exact_solution(t, w, x);  // a state on the solution manifold
            e.problem.volatility_jacobian(t, x, jan);
            fd(t, x, jfd);
            for (std::size_t i = 0; i < dim * dim; ++i) {
                REQUIRE_THAT(jfd[i], Catch::Matchers::WithinAbs(
                                         jan[i], 1e-6 * std::max(1.0, std::abs(jan[i]))));
            }
        }
    }
}

TEST_CASE("stratonovich conversion adds the drift correction") {
    // dX = X o dW: corrected drift is x/2.
    const auto& gbm_strat = find_entry("ex2_strat")->problem;
    const auto ito = stratonovich_to_ito(gbm_strat);
    REQUIRE(ito.interpretation == Interpretation::Ito);
    REQUIRE_THAT(drift_at(ito, 0.0, 1.0), Catch::Matchers::WithinAbs(0.5, 1e-12));
    REQUIRE_THAT(drift_at(ito, 0.3, 0.8), Catch::Matchers::WithinAbs(0.4, 1e-12));
    REQUIRE(vol_at(ito, 0.0, 0.8) == 0.8);  // volatility untouched
    REQUIRE(ito.has_exact_solution());      // solutions coincide, so it carries over

    // constant volatility: the correction vanishes, even via finite differences
    SdeProblem flat;
    flat.interpretation = Interpretation::Stratonovich;
    flat.x0 = {0.0};
    flat.drift = scalar_field([](double, double) { return 0.7; });
    flat.volatility = scalar_field([](double, double) { return 2.0; });
    REQUIRE(drift_at(stratonovich_to_ito(flat), 0.1, 3.0) == 0.7);

    // a = 0, b = 1 + x at x = 1: correction (1/2) * 1 * 2 = 1
    SdeProblem affine;
    affine.interpretation = Interpretation::Stratonovich;
    affine.x0 = {0.0};
    affine.drift = scalar_field([](double, double) { return 0.0; });
    affine.volatility = scalar_field([](double, double x) { return 1.0 + x; });
    REQUIRE_THAT(drift_at(stratonovich_to_ito(affine), 0.0, 1.0),
                 Catch::Matchers::WithinAbs(1.0, 1e-9));

    REQUIRE_THROWS_AS(stratonovich_to_ito(find_entry("ex2")->problem), InterpretationError);
}

TEST_CASE("domain clamps are counted") {
    const auto& ex5 = find_entry("ex5")->problem;
    std::vector<double> x{2.0}, out(1);
    REQUIRE(ex5.volatility(0.0, x, out) == 1);
    REQUIRE(out[0] == 0.0);
    x[0] = 0.5;
    REQUIRE(ex5.volatility(0.0, x, out) == 0);
    x[0] = 1.0;  // boundary touch is not an overshoot
    REQUIRE(ex5.volatility(0.0, x, out) == 0);
    REQUIRE(out[0] == 0.0);
}
