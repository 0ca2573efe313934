#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sderk/convergence.hpp"
#include "sderk/errors.hpp"
#include "sderk/steppers.hpp"
#include "sderk/wiener.hpp"

namespace sderk {

namespace detail {

/// Shortest exact decimal form used in all CSV output; %.17g round-trips
/// every finite double bit-for-bit.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    return std::strtod(s.c_str(), nullptr);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace detail

/// Report CSV: one row per level under the pinned header, then a comment
/// block with the config echo and the fitted line. Output is byte-stable
/// given identical report content.
inline void write_report_csv(const ConvergenceReport& report, std::ostream& out) {
    using detail::fmt;
    out << "level,h,rms_error,samples,aborts\n";
    for (const auto& r : report.levels)
        out << r.level << ',' << fmt(r.h) << ',' << fmt(r.rms_error) << ',' << r.samples << ','
            << r.aborts << '\n';
    const auto& cfg = report.config;
    out << "# problem," << cfg.problem_id << '\n';
    out << "# scheme," << to_string(cfg.scheme) << '\n';
    out << "# t0," << fmt(cfg.t0) << '\n';
    out << "# t_end," << fmt(cfg.t_end) << '\n';
    out << "# n_fine," << cfg.n_fine << '\n';
    out << "# level_factors";
    for (std::size_t f : cfg.levels) out << ',' << f;
    out << '\n';
    out << "# realizations," << cfg.realizations << '\n';
    out << "# master_seed," << cfg.master_seed << '\n';
    out << "# bridge_signs," << (cfg.bridge_signs ? 1 : 0) << '\n';
    out << "# convert_stratonovich," << (cfg.convert_stratonovich ? 1 : 0) << '\n';
    out << "# clamps";
    for (const auto& r : report.levels) out << ',' << r.clamps;
    out << '\n';
    out << "# fit_levels";
    for (std::size_t idx : report.fit_levels) out << ',' << idx;
    out << '\n';
    out << "# slope_defined," << (report.slope_defined ? 1 : 0) << '\n';
    out << "# slope," << fmt(report.slope) << '\n';
    out << "# intercept," << fmt(report.intercept) << '\n';
    if (!out) throw IoError("write_report_csv: stream failure");
}

/// Same content as the CSV form, as a single JSON object.
inline void write_report_json(const ConvergenceReport& report, std::ostream& out) {
    nlohmann::ordered_json j;
    const auto& cfg = report.config;
    j["problem"] = cfg.problem_id;
    j["scheme"] = to_string(cfg.scheme);
    j["t0"] = cfg.t0;
    j["t_end"] = cfg.t_end;
    j["n_fine"] = cfg.n_fine;
    j["level_factors"] = cfg.levels;
    j["realizations"] = cfg.realizations;
    j["master_seed"] = cfg.master_seed;
    j["bridge_signs"] = cfg.bridge_signs;
    j["convert_stratonovich"] = cfg.convert_stratonovich;
    j["levels"] = nlohmann::ordered_json::array();
    for (const auto& r : report.levels) {
        nlohmann::ordered_json row;
        row["level"] = r.level;
        row["h"] = r.h;
        row["rms_error"] = r.rms_error;  // NaN serializes as null
        row["samples"] = r.samples;
        row["aborts"] = r.aborts;
        row["clamps"] = r.clamps;
        j["levels"].push_back(row);
    }
    j["fit_levels"] = report.fit_levels;
    j["slope_defined"] = report.slope_defined;
    j["slope"] = report.slope;
    j["intercept"] = report.intercept;
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write_report_json: stream failure");
}

/// Parse a report written by write_report_csv. Only serialized content is
/// recovered (wall time and derived scales are not part of the format).
inline ConvergenceReport parse_report_csv(std::istream& in) {
    ConvergenceReport report;
    std::string line;
    if (!std::getline(in, line) || line != "level,h,rms_error,samples,aborts")
        throw IoError("parse_report_csv: missing header");
    bool in_comments = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            in_comments = true;
            const auto fields = detail::split(line.substr(2), ',');
            const std::string& key = fields.front();
            auto value = [&](std::size_t i) -> const std::string& { return fields.at(i); };
            if (key == "problem") report.config.problem_id = fields.size() > 1 ? value(1) : "";
            else if (key == "scheme") {
                const std::string& s = value(1);
                report.config.scheme = s == "em"         ? SchemeId::EulerMaruyama
                                       : s == "milstein" ? SchemeId::Milstein
                                                         : SchemeId::RkPaper;
            } else if (key == "t0") report.config.t0 = detail::parse_double(value(1));
            else if (key == "t_end") report.config.t_end = detail::parse_double(value(1));
            else if (key == "n_fine") report.config.n_fine = std::stoull(value(1));
            else if (key == "level_factors") {
                for (std::size_t i = 1; i < fields.size(); ++i)
                    report.config.levels.push_back(std::stoull(value(i)));
            } else if (key == "realizations") report.config.realizations = std::stoull(value(1));
            else if (key == "master_seed") report.config.master_seed = std::stoull(value(1));
            else if (key == "bridge_signs") report.config.bridge_signs = value(1) == "1";
            else if (key == "convert_stratonovich")
                report.config.convert_stratonovich = value(1) == "1";
            else if (key == "clamps") {
                for (std::size_t i = 1; i < fields.size() && i <= report.levels.size(); ++i)
                    report.levels[i - 1].clamps = std::stol(value(i));
            } else if (key == "fit_levels") {
                for (std::size_t i = 1; i < fields.size(); ++i)
                    report.fit_levels.push_back(std::stoull(value(i)));
            } else if (key == "slope_defined") report.slope_defined = value(1) == "1";
            else if (key == "slope") report.slope = detail::parse_double(value(1));
            else if (key == "intercept") report.intercept = detail::parse_double(value(1));
            continue;
        }
        if (in_comments) throw IoError("parse_report_csv: data row after comment block");
        const auto fields = detail::split(line, ',');
        if (fields.size() != 5) throw IoError("parse_report_csv: malformed row");
        LevelRecord r;
        r.level = std::stoull(fields[0]);
        r.h = detail::parse_double(fields[1]);
        r.rms_error = detail::parse_double(fields[2]);
        r.samples = std::stoull(fields[3]);
        r.aborts = std::stoull(fields[4]);
        report.levels.push_back(r);
    }
    for (std::size_t i = 0; i < report.levels.size() && i < report.config.levels.size(); ++i)
        report.levels[i].factor = report.config.levels[i];
    return report;
}

inline ConvergenceReport parse_report_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("parse_report_json: ") + e.what());
    }
    ConvergenceReport report;
    report.config.problem_id = j.at("problem").get<std::string>();
    const std::string scheme = j.at("scheme").get<std::string>();
    report.config.scheme = scheme == "em"         ? SchemeId::EulerMaruyama
                           : scheme == "milstein" ? SchemeId::Milstein
                                                  : SchemeId::RkPaper;
    report.config.t0 = j.at("t0").get<double>();
    report.config.t_end = j.at("t_end").get<double>();
    report.config.n_fine = j.at("n_fine").get<std::size_t>();
    report.config.levels = j.at("level_factors").get<std::vector<std::size_t>>();
    report.config.realizations = j.at("realizations").get<std::size_t>();
    report.config.master_seed = j.at("master_seed").get<std::uint64_t>();
    report.config.bridge_signs = j.at("bridge_signs").get<bool>();
    report.config.convert_stratonovich = j.at("convert_stratonovich").get<bool>();
    auto as_double = [](const nlohmann::json& v) {
        return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    for (const auto& row : j.at("levels")) {
        LevelRecord r;
        r.level = row.at("level").get<std::size_t>();
        r.h = row.at("h").get<double>();
        r.rms_error = as_double(row.at("rms_error"));
        r.samples = row.at("samples").get<std::size_t>();
        r.aborts = row.at("aborts").get<std::size_t>();
        r.clamps = row.at("clamps").get<long>();
        if (r.level < report.config.levels.size()) r.factor = report.config.levels[r.level];
        report.levels.push_back(r);
    }
    report.fit_levels = j.at("fit_levels").get<std::vector<std::size_t>>();
    report.slope_defined = j.at("slope_defined").get<bool>();
    report.slope = as_double(j.at("slope"));
    report.intercept = as_double(j.at("intercept"));
    return report;
}

/// Trajectory CSV for overlay plots: t, the state components, and the driving
/// path's W(t). `path` must live on the trajectory's grid.
inline void write_trajectory_csv(const Trajectory& traj, const WienerPath& path,
                                 std::ostream& out) {
    if (!(path.grid == traj.grid))
        throw AggregationError("write_trajectory_csv: path grid does not match trajectory");
    out << 't';
    if (traj.dim == 1) {
        out << ",X";
    } else {
        for (std::size_t i = 0; i < traj.dim; ++i) out << ",X" << i;
    }
    out << ",W\n";
    double w = 0.0;
    for (std::size_t k = 0; k <= traj.grid.steps(); ++k) {
        if (k > 0) w += path.increments[k - 1];
        out << detail::fmt(traj.grid.time(k));
        for (double xi : traj.state(k)) out << ',' << detail::fmt(xi);
        out << ',' << detail::fmt(w) << '\n';
    }
    if (!out) throw IoError("write_trajectory_csv: stream failure");
}

/// JSON twin of write_trajectory_csv.
inline void write_trajectory_json(const Trajectory& traj, const WienerPath& path,
                                  std::ostream& out) {
    if (!(path.grid == traj.grid))
        throw AggregationError("write_trajectory_json: path grid does not match trajectory");
    nlohmann::ordered_json j;
    std::vector<double> t, w;
    std::vector<std::vector<double>> x;
    double wk = 0.0;
    for (std::size_t k = 0; k <= traj.grid.steps(); ++k) {
        if (k > 0) wk += path.increments[k - 1];
        t.push_back(traj.grid.time(k));
        w.push_back(wk);
        auto s = traj.state(k);
        x.emplace_back(s.begin(), s.end());
    }
    j["t"] = t;
    j["x"] = x;
    j["w"] = w;
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write_trajectory_json: stream failure");
}

}  // namespace sderk
