// Copyright 2026 The qvuln Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.


#include <catch_amalgamated.hpp>

#include <fstream>

#include <json.hpp>

#include "qvuln/error.hpp"
#include "qvuln/harness.hpp"
#include "test_support.hpp"

using namespace qvuln;

namespace {

ExperimentConfig fixture_config() {
    ExperimentConfig cfg;
    cfg.coefficients = testing::nd_dir();
    cfg.include_linear = false;
    return cfg;
}

}  // namespace

TEST_CASE("config JSON round-trips", "[harness]") {
    auto cfg = fixture_config();
    cfg.k_list = {2, 4};
    cfg.lambdas = {100.0, 1000.0};
    cfg.anneal.M = 7;
    cfg.baseline.ga.population = 50;
    cfg.ue.gap_tol = 1e-7;
    cfg.seeds = {3, 5};
    cfg.top_n = 3;
    const auto again = ExperimentConfig::from_json(cfg.to_json());
    CHECK(again.coefficients == cfg.coefficients);
    CHECK(again.k_list == cfg.k_list);
    CHECK(again.lambdas == cfg.lambdas);
    CHECK(again.anneal.M == 7);
    CHECK(again.baseline.ga.population == 50);
    CHECK(again.ue.gap_tol == 1e-7);
    CHECK(again.seeds == cfg.seeds);
    CHECK(again.top_n == 3);
    CHECK_FALSE(again.include_linear);
    CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("config files resolve relative paths", "[harness]") {
    const auto dir = testing::scratch_dir("harness_config");
    std::filesystem::create_directories(dir / "coeffs");
    std::filesystem::copy(testing::nd_dir() / "c.csv", dir / "coeffs" / "c.csv");
    std::filesystem::copy(testing::nd_dir() / "beta.csv", dir / "coeffs" / "beta.csv");
    std::ofstream(dir / "run.json") << R"({"coefficients": "coeffs", "k": [2], "output_dir": "out"})";
    const auto cfg = ExperimentConfig::load(dir / "run.json");
    CHECK(cfg.coefficients == dir / "coeffs");
    CHECK(cfg.output_dir == dir / "out");
    CHECK_NOTHROW(cfg.validate());

    std::ofstream(dir / "bad.json") << R"({"k": "two"})";
    CHECK_THROWS_AS(ExperimentConfig::load(dir / "bad.json"), ParseError);
}

TEST_CASE("config validation", "[harness]") {
    ExperimentConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);  // fixture ratios without coefficients
    cfg.e_sampled = true;
    CHECK_NOTHROW(cfg.validate());
    cfg.coefficients = testing::nd_dir();
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = fixture_config();
    cfg.k_list = {0};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = fixture_config();
    cfg.coefficients = "/nonexistent/qvuln";
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("k sweep on the fixture", "[harness][fixture]") {
    const auto cfg = fixture_config();
    const auto cells = sweep_k(cfg, prepare_inputs(cfg));
    const std::vector<std::vector<int>> expected{{16, 19}, {9, 16, 19}, {8, 9, 16, 19}, {7, 9, 15, 16, 19}};
    REQUIRE(cells.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        INFO(cells[i].label << " " << cells[i].error);
        REQUIRE(cells[i].report);
        CHECK(cells[i].report->ranking.front().links == expected[i]);
    }

    auto single = fixture_config();
    single.k_list = {3};
    CHECK(sweep_k(single, prepare_inputs(single)).size() == 1);
}

TEST_CASE("failing cells are isolated", "[harness]") {
    auto cfg = fixture_config();
    cfg.k_list = {2, 25};
    const auto cells = sweep_k(cfg, prepare_inputs(cfg));
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].report);
    CHECK_FALSE(cells[1].report);
    CHECK_FALSE(cells[1].error.empty());
}

TEST_CASE("residual interval sweep", "[harness][nd]") {
    ExperimentConfig cfg;
    cfg.e_sampled = true;
    cfg.k_list = {2};
    cfg.seeds = {0, 1};
    const auto net = builtin_nguyen_dupuis();
    const auto unit = sweep_e(cfg, net, {{1.0, 1.0}});
    REQUIRE(unit.size() == 1);
    for (double c : unit[0].coefficients.c) CHECK(c == 0.0);
    for (double b : unit[0].coefficients.B) CHECK(b == 0.0);

    const auto a = sweep_e(cfg, net, {{0.3, 0.7}});
    const auto b = sweep_e(cfg, net, {{0.3, 0.7}});
    REQUIRE(a[0].cells[0].report);
    REQUIRE(b[0].cells[0].report);
    CHECK(a[0].e == b[0].e);
    CHECK(a[0].coefficients.c == b[0].coefficients.c);
    CHECK(a[0].cells[0].report->ranking.front().links == b[0].cells[0].report->ranking.front().links);
    CHECK(a[0].top_tstt == b[0].top_tstt);
    CHECK_THROWS_AS(sweep_e(cfg, net, {{0.0, 0.5}}), ValidationError);
}

TEST_CASE("penalty sweep", "[harness][fixture]") {
    const auto cfg = fixture_config();
    const auto set = load_coefficients(testing::nd_dir());
    const auto one = sweep_lambda(cfg, set, {1e5});
    REQUIRE(one.cells.size() == 1);
    CHECK(one.cells[0].size() == 4);
    CHECK(one.stable);

    const auto large = sweep_lambda(cfg, set, {1e5, 3e5});
    CHECK(large.stable);
    CHECK_THROWS_AS(sweep_lambda(cfg, set, {-1.0}), ValidationError);
}

TEST_CASE("scalability run shapes", "[harness]") {
    AnnealParams p;
    p.n_iter = 10;
    const auto r = scalability_run({{30, {}}, {40, {}}}, 1, {0}, p, nullptr);
    CHECK(r.points.size() == 2);
    CHECK(r.summaries.size() == 2);
    CHECK(r.summaries[0].sqa_cv == 0.0);
    GaParams ga;
    ga.population = 20;
    ga.generations = 5;
    const auto with_ga = scalability_run({{30, {}}}, 3, {0, 1}, p, &ga);
    CHECK(with_ga.points.size() == 3);
    for (const auto& pt : with_ga.points) CHECK(pt.ga_seconds >= 0.0);
    CHECK_THROWS_AS(scalability_run({{5, {}}}, 6, {0}, p, nullptr), ValidationError);

    const auto dir = testing::scratch_dir("harness_scale");
    write_scalability_csv(with_ga, dir / "scale.csv");
    CHECK(std::filesystem::file_size(dir / "scale.csv") > 0);
}

TEST_CASE("run records", "[harness]") {
    RunRecord rec;
    rec.command = "ue solve";
    rec.add_output("flows", "out/flows.csv");
    rec.wall_times.emplace_back("solve", 0.25);
    rec.notes.push_back("hello");
    const auto j = nlohmann::json::parse(rec.to_json());
    CHECK(j["command"] == "ue solve");
    CHECK(j["outputs"]["flows"] == "out/flows.csv");
    CHECK(j["wall_times"]["solve"] == 0.25);
    CHECK(j["version"] == version());
    CHECK(j["status"] == "ok");
}
