#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sderk/catalogue.hpp"
#include "sderk/errors.hpp"
#include "sderk/problem.hpp"
#include "sderk/rng.hpp"
#include "sderk/steppers.hpp"
#include "sderk/wiener.hpp"

namespace sderk {

/// A multi-resolution strong-convergence experiment: Wiener paths are sampled
/// once per realization on the fine grid and aggregated to each level's
/// coarser grid, mirroring how the reference experiments were run.
struct ExperimentConfig {
    std::string problem_id;
    SchemeId scheme = SchemeId::RkPaper;
    std::size_t n_fine = 16384;
    std::vector<std::size_t> levels;  // coarsening factors, ascending (fine to coarse)
    std::size_t realizations = 400;
    std::uint64_t master_seed = 42;
    double t0 = 0.0;
    double t_end = 1.0;
    unsigned workers = 0;              // 0 = hardware concurrency
    bool bridge_signs = false;         // experimental sign-coupled refinement
    bool convert_stratonovich = false; // integrate the converted Ito form

    /// Ladder of `count` levels whose coarsest grid has 16 steps and whose
    /// step size halves per level: n = 16, 32, ..., 16*2^(count-1).
    static std::vector<std::size_t> default_levels(std::size_t n_fine, std::size_t count) {
        if (count == 0) throw GridError("default_levels: count must be >= 1");
        std::vector<std::size_t> factors;
        for (std::size_t j = count; j-- > 0;) {
            const std::size_t n_level = std::size_t{16} << j;
            if (n_level > n_fine || n_fine % n_level != 0)
                throw GridError("default_levels: ladder does not fit the fine grid");
            factors.push_back(n_fine / n_level);
        }
        return factors;
    }

    void validate() const {
        if (realizations < 2) throw GridError("ExperimentConfig: need at least 2 realizations");
        if (!(t_end > t0)) throw GridError("ExperimentConfig: t_end must exceed t0");
        if (n_fine == 0) throw GridError("ExperimentConfig: n_fine must be >= 1");
        if (levels.empty()) throw GridError("ExperimentConfig: level list is empty");
        std::size_t previous = 0;
        for (std::size_t f : levels) {
            if (f == 0 || n_fine % f != 0)
                throw AggregationError("ExperimentConfig: level factor must divide n_fine");
            if (f <= previous) throw GridError("ExperimentConfig: level factors must ascend");
            previous = f;
        }
    }
};

struct LevelRecord {
    std::size_t level = 0;   // index into config.levels
    std::size_t factor = 1;  // coarsening factor relative to the fine grid
    double h = 0.0;
    double rms_error = std::numeric_limits<double>::quiet_NaN();
    std::size_t samples = 0;  // usable realizations
    std::size_t aborts = 0;   // realizations lost to non-finite evaluations
    long clamps = 0;          // domain clamp events summed over realizations
    double exact_scale = 1.0; // max(1, rms of the exact final state)
};

struct ConvergenceReport {
    ExperimentConfig config;
    std::vector<LevelRecord> levels;
    bool slope_defined = false;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> fit_levels;  // level indices that entered the fit
    double wall_seconds = 0.0;            // diagnostics only, never serialized

    /// True when every level kept at least one sample and no level lost more
    /// than 1% of its realizations.
    bool ok() const {
        for (const auto& r : levels) {
            if (r.samples == 0) return false;
            if (r.aborts * 100 > config.realizations) return false;
        }
        return true;
    }
};

/// Least-squares line through (ln h, ln rms). Non-positive and non-finite
/// rms values are excluded first; returns nothing when fewer than two points
/// survive.
inline std::optional<std::pair<double, double>> fit_slope(
    std::span<const std::pair<double, double>> points) {
    std::vector<std::pair<double, double>> logs;
    for (const auto& [h, rms] : points)
        if (std::isfinite(rms) && rms > 0.0 && h > 0.0) logs.emplace_back(std::log(h), std::log(rms));
    if (logs.size() < 2) return std::nullopt;
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : logs) {
        sx += x;
        sy += y;
    }
    const double mx = sx / static_cast<double>(logs.size());
    const double my = sy / static_cast<double>(logs.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : logs) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    const double slope = sxy / sxx;
    return std::make_pair(slope, my - slope * mx);
}

namespace detail {

struct ErrorSample {
    double error = 0.0;       // |X_numeric(t_end) - X_exact(t_end)|
    double exact_norm = 0.0;  // |X_exact(t_end)|
    long clamps = 0;
};

/// Integrate one realization on the given level path and measure the final
/// error against the closed-form solution evaluated at this path's endpoint
/// displacement (identical to the sum of increments the integrator consumed,
/// so exact schemes report exactly zero error).
inline ErrorSample measure_on_path(const SdeProblem& problem, SchemeId scheme,
                                   const WienerPath& level_path, SignSequence signs) {
    Trajectory traj = integrate(problem, level_path, scheme, std::move(signs));
    const double w_end = total_displacement(level_path);
    std::vector<double> exact(problem.dim);
    problem.exact_solution(level_path.grid.t_end(), w_end, exact);
    double err2 = 0.0, exact2 = 0.0;
    std::span<const double> final = traj.final_state();
    for (std::size_t i = 0; i < problem.dim; ++i) {
        const double d = final[i] - exact[i];
        err2 += d * d;
        exact2 += exact[i] * exact[i];
    }
    return {std::sqrt(err2), std::sqrt(exact2), traj.clamp_count};
}

inline SignSequence signs_for(const SdeProblem& problem, RngStream sign_stream) {
    if (problem.interpretation == Interpretation::Stratonovich) return SignSequence::zero();
    return SignSequence::rademacher(sign_stream);
}

}  // namespace detail

/// Error of one realization at one level: integrate on coarsen(path, factor)
/// and compare X(t_end) against the closed-form solution at the realized
/// W(t_end). Rademacher signs come from `sign_stream` (ignored in favour of
/// S = 0 for Stratonovich problems). Non-finite evaluations propagate as
/// EvaluationError; callers treat those realizations as aborted.
inline double strong_error(const SdeProblem& problem, SchemeId scheme, const WienerPath& fine_path,
                           std::size_t factor, RngStream sign_stream) {
    if (!problem.has_exact_solution())
        throw CapabilityError("strong_error: problem has no exact solution");
    const WienerPath level_path = coarsen(fine_path, factor);
    return detail::measure_on_path(problem, scheme, level_path,
                                   detail::signs_for(problem, sign_stream))
        .error;
}

namespace detail {

struct Cell {
    double err2 = 0.0;
    double exact2 = 0.0;
    long clamps = 0;
    bool aborted = false;
    bool filled = false;
};

// Standard protocol: sample the fine path once, aggregate per level.
inline void run_realization(const SdeProblem& problem, const ExperimentConfig& cfg,
                            const TimeGrid& fine_grid, std::size_t i, std::span<Cell> row) {
    const RngStream realization = RngStream::from_seed(cfg.master_seed).child(i);
    const WienerPath fine = sample_path(fine_grid, realization.child(kWienerChild));
    for (std::size_t level = 0; level < cfg.levels.size(); ++level) {
        Cell& cell = row[level];
        cell.filled = true;
        try {
            const WienerPath level_path = coarsen(fine, cfg.levels[level]);
            const ErrorSample s = measure_on_path(problem, cfg.scheme, level_path,
                                                  signs_for(problem, realization.child(kSignChild)));
            cell.err2 = s.error * s.error;
            cell.exact2 = s.exact_norm * s.exact_norm;
            cell.clamps = s.clamps;
        } catch (const EvaluationError&) {
            cell.aborted = true;
        }
    }
}

// Experimental sign-coupled protocol: start on the coarsest grid and refine
// towards fine levels with Brownian bridges whose bridge variables are the
// +1/-1 signs the integrator used on the coarser level.
inline void run_realization_bridge(const SdeProblem& problem, const ExperimentConfig& cfg,
                                   std::size_t i, std::span<Cell> row) {
    const RngStream realization = RngStream::from_seed(cfg.master_seed).child(i);
    const std::size_t level_count = cfg.levels.size();
    const std::size_t n_finest = cfg.n_fine / cfg.levels.front();

    RngStream sign_stream = realization.child(kSignChild);
    std::vector<double> signs(n_finest);
    for (double& s : signs) s = sign_stream.next_sign();

    WienerPath path = sample_path(TimeGrid(cfg.t0, cfg.t_end, cfg.n_fine / cfg.levels.back()),
                                  realization.child(kWienerChild));
    for (std::size_t level = level_count; level-- > 0;) {
        Cell& cell = row[level];
        cell.filled = true;
        const std::size_t n_level = path.grid.steps();
        std::span<const double> level_signs{signs.data(), n_level};
        try {
            const ErrorSample s =
                measure_on_path(problem, cfg.scheme, path,
                                SignSequence::fixed({level_signs.begin(), level_signs.end()}));
            cell.err2 = s.error * s.error;
            cell.exact2 = s.exact_norm * s.exact_norm;
            cell.clamps = s.clamps;
        } catch (const EvaluationError&) {
            cell.aborted = true;
        }
        if (level > 0) path = bridge_refine_with(path, level_signs);
    }
}

}  // namespace detail

/// Run the Monte-Carlo convergence experiment described by `config` on an
/// explicit problem (the usual entry point resolves the problem from the
/// catalogue by id; this overload serves custom problems).
///
/// Realizations are independent work units distributed over `workers`
/// threads; every per-realization quantity derives from (master_seed, i), and
/// the squared-error reduction runs in realization-index order in extended
/// precision, so the report is bit-identical for any worker count.
inline ConvergenceReport run_experiment(const ExperimentConfig& config_in,
                                        const SdeProblem& problem_in) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig cfg = config_in;
    if (cfg.levels.empty()) {
        std::size_t count = 0;
        while (count < 9 && (std::size_t{16} << count) <= cfg.n_fine &&
               cfg.n_fine % (std::size_t{16} << count) == 0)
            ++count;
        cfg.levels = ExperimentConfig::default_levels(cfg.n_fine, count);
    }
    cfg.validate();

    SdeProblem problem = problem_in;
    if (cfg.convert_stratonovich) problem = stratonovich_to_ito(problem);
    if (!problem.has_exact_solution())
        throw CapabilityError("run_experiment: problem has no exact solution");

    if (cfg.bridge_signs) {
        if (problem.interpretation != Interpretation::Ito || cfg.scheme != SchemeId::RkPaper)
            throw InterpretationError(
                "run_experiment: --bridge-signs applies to Ito problems under the rk scheme");
        for (std::size_t level = 0; level + 1 < cfg.levels.size(); ++level)
            if (cfg.levels[level] * 2 != cfg.levels[level + 1])
                throw GridError(
                    "run_experiment: --bridge-signs needs a ladder of consecutive halvings");
    }

    const std::size_t level_count = cfg.levels.size();
    const std::size_t m = cfg.realizations;
    const TimeGrid fine_grid(cfg.t0, cfg.t_end, cfg.n_fine);
    std::vector<detail::Cell> cells(m * level_count);

    unsigned workers = cfg.workers != 0 ? cfg.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(m)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= m) return;
            std::span<detail::Cell> row{cells.data() + i * level_count, level_count};
            try {
                if (cfg.bridge_signs)
                    detail::run_realization_bridge(problem, cfg, i, row);
                else
                    detail::run_realization(problem, cfg, fine_grid, i, row);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    ConvergenceReport report;
    report.config = cfg;
    report.levels.resize(level_count);
    for (std::size_t level = 0; level < level_count; ++level) {
        LevelRecord& rec = report.levels[level];
        rec.level = level;
        rec.factor = cfg.levels[level];
        rec.h = fine_grid.step() * static_cast<double>(cfg.levels[level]);
        long double err2_sum = 0.0L, exact2_sum = 0.0L;
        for (std::size_t i = 0; i < m; ++i) {  // fixed reduction order
            const detail::Cell& cell = cells[i * level_count + level];
            if (cell.aborted) {
                ++rec.aborts;
                continue;
            }
            err2_sum += cell.err2;
            exact2_sum += cell.exact2;
            rec.clamps += cell.clamps;
            ++rec.samples;
        }
        if (rec.samples > 0) {
            rec.rms_error = static_cast<double>(
                std::sqrt(err2_sum / static_cast<long double>(rec.samples)));
            rec.exact_scale = std::max(
                1.0, static_cast<double>(std::sqrt(exact2_sum / static_cast<long double>(rec.samples))));
        }
    }

    // Round-off-dominated levels would corrupt the fit; drop everything below
    // the noise floor 1e3 * eps * exact scale.
    std::vector<std::pair<double, double>> points;
    for (const auto& rec : report.levels) {
        if (rec.samples == 0) continue;
        const double floor = 1e3 * std::numeric_limits<double>::epsilon() * rec.exact_scale;
        if (!(rec.rms_error > floor)) continue;
        points.emplace_back(rec.h, rec.rms_error);
        report.fit_levels.push_back(rec.level);
    }
    if (auto fitted = fit_slope(points)) {
        report.slope_defined = true;
        report.slope = fitted->first;
        report.intercept = fitted->second;
    } else {
        report.fit_levels.clear();
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// Catalogue-backed experiment: resolves config.problem_id and runs.
inline ConvergenceReport run_experiment(const ExperimentConfig& config) {
    const CatalogueEntry* entry = find_entry(config.problem_id);
    if (entry == nullptr)
        throw CapabilityError("run_experiment: unknown problem id '" + config.problem_id + "'");
    return run_experiment(config, entry->problem);
}

}  // namespace sderk
