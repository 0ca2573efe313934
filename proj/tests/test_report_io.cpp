#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "sderk/report_io.hpp"

using namespace sderk;

namespace {

ConvergenceReport small_report() {
    ExperimentConfig cfg;
    cfg.problem_id = "autonomous";
    cfg.n_fine = 256;
    cfg.levels = {4, 8, 16};
    cfg.realizations = 10;
    cfg.master_seed = 2027;
    cfg.workers = 1;
    return run_experiment(cfg);
}

void require_same_content(const ConvergenceReport& a, const ConvergenceReport& b) {
    REQUIRE(a.config.problem_id == b.config.problem_id);
    REQUIRE(a.config.scheme == b.config.scheme);
    REQUIRE(a.config.t0 == b.config.t0);
    REQUIRE(a.config.t_end == b.config.t_end);
    REQUIRE(a.config.n_fine == b.config.n_fine);
    REQUIRE(a.config.levels == b.config.levels);
    REQUIRE(a.config.realizations == b.config.realizations);
    REQUIRE(a.config.master_seed == b.config.master_seed);
    REQUIRE(a.config.bridge_signs == b.config.bridge_signs);
    REQUIRE(a.config.convert_stratonovich == b.config.convert_stratonovich);
    REQUIRE(a.levels.size() == b.levels.size());
    for (std::size_t i = 0; i < a.levels.size(); ++i) {
        REQUIRE(a.levels[i].level == b.levels[i].level);
        REQUIRE(a.levels[i].h == b.levels[i].h);
        if (std::isnan(a.levels[i].rms_error)) {
            REQUIRE(std::isnan(b.levels[i].rms_error));
        } else {
            REQUIRE(a.levels[i].rms_error == b.levels[i].rms_error);
        }
        REQUIRE(a.levels[i].samples == b.levels[i].samples);
        REQUIRE(a.levels[i].aborts == b.levels[i].aborts);
    }
    REQUIRE(a.fit_levels == b.fit_levels);
    REQUIRE(a.slope_defined == b.slope_defined);
    if (a.slope_defined) {
        REQUIRE(a.slope == b.slope);
        REQUIRE(a.intercept == b.intercept);
    }
}

}  // namespace

TEST_CASE("csv and json forms carry identical content") {
    const auto report = small_report();
    REQUIRE(report.slope_defined);

    std::ostringstream csv, json;
    write_report_csv(report, csv);
    write_report_json(report, json);

    std::istringstream csv_in(csv.str()), json_in(json.str());
    const auto from_csv = parse_report_csv(csv_in);
    const auto from_json = parse_report_json(json_in);

    require_same_content(from_csv, report);
    require_same_content(from_json, report);
    require_same_content(from_csv, from_json);

    // clamps ride in the comment block / json rows
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
        REQUIRE(from_csv.levels[i].clamps == report.levels[i].clamps);
        REQUIRE(from_json.levels[i].clamps == report.levels[i].clamps);
    }
}

TEST_CASE("serialization is byte-stable") {
    const auto report = small_report();
    std::ostringstream a, b;
    write_report_csv(report, a);
    write_report_csv(report, b);
    REQUIRE(a.str() == b.str());
    std::ostringstream ja, jb;
    write_report_json(report, ja);
    write_report_json(report, jb);
    REQUIRE(ja.str() == jb.str());
}

TEST_CASE("undefined slopes survive the round trip") {
    ExperimentConfig cfg;
    cfg.problem_id = "pure_wiener";
    cfg.n_fine = 32;
    cfg.levels = {1, 2};
    cfg.realizations = 2;
    cfg.workers = 1;
    const auto report = run_experiment(cfg);
    REQUIRE(!report.slope_defined);

    std::ostringstream csv, json;
    write_report_csv(report, csv);
    write_report_json(report, json);
    REQUIRE(csv.str().find("# slope_defined,0") != std::string::npos);

    std::istringstream csv_in(csv.str()), json_in(json.str());
    const auto from_csv = parse_report_csv(csv_in);
    const auto from_json = parse_report_json(json_in);
    REQUIRE(!from_csv.slope_defined);
    REQUIRE(std::isnan(from_csv.slope));
    REQUIRE(!from_json.slope_defined);
    REQUIRE(std::isnan(from_json.slope));
}

TEST_CASE("trajectory files") {
    const auto& pw = find_entry("pure_wiener")->problem;
    const auto path = sample_path(TimeGrid(0.0, 1.0, 4), RngStream::from_seed(3).child(0));
    const auto traj = integrate(pw, path, SchemeId::RkPaper, SignSequence::zero());

    std::ostringstream csv;
    write_trajectory_csv(traj, path, csv);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "t,X,W");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        // for dX = dW from 0, the X and W columns are the same numbers
        const auto first_comma = line.find(',');
        const auto second_comma = line.find(',', first_comma + 1);
        REQUIRE(line.substr(first_comma + 1, second_comma - first_comma - 1) ==
                line.substr(second_comma + 1));
        ++rows;
    }
    REQUIRE(rows == 5);

    std::ostringstream json;
    write_trajectory_json(traj, path, json);
    const auto j = nlohmann::json::parse(json.str());
    REQUIRE(j.at("t").size() == 5);
    REQUIRE(j.at("x").size() == 5);
    REQUIRE(j.at("w").size() == 5);
    REQUIRE(j.at("x")[4][0].get<double>() == j.at("w")[4].get<double>());
}
