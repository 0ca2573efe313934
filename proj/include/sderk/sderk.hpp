#pragma once

// Umbrella header for the sderk library: strong-convergence integration of
// scalar-noise SDEs with a two-stage stochastic Runge-Kutta scheme,
// Euler-Maruyama and Milstein baselines, analytically solvable test problems,
// and a reproducible Monte-Carlo convergence harness.

#include "sderk/catalogue.hpp"
#include "sderk/convergence.hpp"
#include "sderk/errors.hpp"
#include "sderk/problem.hpp"
#include "sderk/report_io.hpp"
#include "sderk/rng.hpp"
#include "sderk/solution_check.hpp"
#include "sderk/steppers.hpp"
#include "sderk/time_grid.hpp"
#include "sderk/wiener.hpp"
