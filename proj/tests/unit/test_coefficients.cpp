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

#include <algorithm>
#include <cmath>

#include "nd_exact_ue.hpp"
#include "qvuln/coefficients.hpp"
#include "qvuln/error.hpp"
#include "test_support.hpp"

using namespace qvuln;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace ov = qvuln::oracle_values;

namespace {

std::vector<double> fixture_ratios() { return load_coefficients(testing::nd_dir()).provenance.e; }

/// Exact quadratic response: base + sum a_s u_s + sum_{s<t} b_st u_s u_t.
struct QuadraticResponse {
    double base = 100.0;
    std::vector<double> a;
    std::vector<double> b;  // n x n

    double operator()(const DisruptionScenario& scen) const {
        const auto n = a.size();
        double v = base;
        for (std::size_t s = 0; s < n; ++s) {
            if (!scen.u[s]) continue;
            v += a[s];
            for (std::size_t t = s + 1; t < n; ++t)
                if (scen.u[t]) v += b[s * n + t];
        }
        return v;
    }
};

}  // namespace

TEST_CASE("quadratic responses are recovered exactly", "[coefficients]") {
    const std::size_t n = 6;
    QuadraticResponse f;
    f.a = {5, -2, 0, 7.5, 1, 3};
    f.b.assign(n * n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t) f.b[s * n + t] = 0.25 * static_cast<double>(s) - static_cast<double>(t);
    const std::vector<double> e(n, 0.5);

    auto set = compute_c(e, f, 2);
    CHECK(set.provenance.baseline_tstt == 100.0);
    for (std::size_t s = 0; s < n; ++s) CHECK(set.c[s] == f.a[s]);
    CHECK(compute_beta(set, f, {}, 2) == 0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t) {
            CHECK(set.B[s * n + t] == f.b[s * n + t]);
            CHECK(set.B[t * n + s] == f.b[s * n + t]);
        }
    CHECK(provenance_residual(set) <= 1e-15);
}

TEST_CASE("failed joint solves are masked", "[coefficients]") {
    const std::size_t n = 4;
    QuadraticResponse f;
    f.a.assign(n, 1.0);
    f.b.assign(n * n, 2.0);
    TsttEvaluator flaky = [&](const DisruptionScenario& scen) {
        if (scen.u[1] && scen.u[3]) throw InfeasibleError(1, 2, "cut");
        return f(scen);
    };
    auto set = compute_c(std::vector<double>(n, 0.5), flaky);
    CHECK(compute_beta(set, flaky) == 1);
    CHECK_FALSE(set.provenance.pair_valid[1 * n + 3]);
    CHECK(set.B[1 * n + 3] == 0.0);
    CHECK(std::isnan(set.provenance.joint_tstt[3 * n + 1]));
    CHECK(set.provenance.pair_valid[0 * n + 1]);

    const std::pair<int, int> only[] = {{3, 1}};
    auto partial = compute_c(std::vector<double>(n, 0.5), f);
    CHECK(compute_beta(partial, f, only) == 0);
    CHECK(partial.B[0 * n + 2] == 2.0);
    CHECK_FALSE(partial.provenance.pair_valid[0 * n + 1]);
    const std::pair<int, int> bad[] = {{2, 2}};
    CHECK_THROWS_AS(compute_beta(partial, f, bad), ValidationError);
}

TEST_CASE("infeasible single-link scenarios name the link", "[coefficients]") {
    TsttEvaluator evaluator = [](const DisruptionScenario& scen) -> double {
        if (scen.u[2]) throw InfeasibleError(4, 3, "no route");
        return 1.0;
    };
    try {
        (void)compute_c(std::vector<double>(5, 0.5), evaluator, 1);
        FAIL("expected an infeasibility error");
    } catch (const InfeasibleError& e) {
        CHECK_THAT(e.what(), ContainsSubstring("link 3"));
        CHECK(e.origin() == 4);
    }
}

TEST_CASE("ratio validation", "[coefficients]") {
    TsttEvaluator one = [](const DisruptionScenario&) { return 1.0; };
    CHECK_THROWS_AS(compute_c(std::vector<double>{0.5, 0.0}, one), ValidationError);
    CHECK_THROWS_AS(compute_c(builtin_nguyen_dupuis(), {}, std::vector<double>(3, 0.5)), ValidationError);
}

TEST_CASE("unit ratios give zero impacts", "[coefficients][nd]") {
    const auto net = builtin_nguyen_dupuis();
    auto set = compute_c(net, {}, std::vector<double>(19, 1.0));
    CHECK(std::all_of(set.c.begin(), set.c.end(), [](double c) { return c == 0.0; }));
    const std::pair<int, int> pair[] = {{16, 19}};
    compute_beta(set, net, {}, {}, pair);
    CHECK(set.B[15 * 19 + 18] == 0.0);
}

TEST_CASE("Nguyen-Dupuis impacts against the independent equilibrium", "[coefficients][nd]") {
    const auto net = builtin_nguyen_dupuis();
    const auto e = fixture_ratios();
    auto set = compute_c(net, {}, e);
    for (int s = 1; s <= 19; ++s) {
        INFO("link " << s);
        CHECK_THAT(set.c[s - 1], WithinAbs(ov::kNdSingleTstt[s - 1] - ov::kNdBaselineTstt, 0.05));
    }
    const double largest = *std::max_element(set.c.begin(), set.c.end());
    CHECK(set.c[7] < 0.01 * largest);
    CHECK(std::max_element(set.c.begin(), set.c.end()) - set.c.begin() == 18);

    CHECK(compute_beta(set, net, {}) == 0);
    CHECK(provenance_residual(set) <= 1e-9);
    const double beta_16_19 = ov::kNdJoint16_19 - ov::kNdSingleTstt[15] - ov::kNdSingleTstt[18] + ov::kNdBaselineTstt;
    const double beta_2_17 = ov::kNdJoint2_17 - ov::kNdSingleTstt[1] - ov::kNdSingleTstt[16] + ov::kNdBaselineTstt;
    CHECK_THAT(set.B[15 * 19 + 18], WithinAbs(beta_16_19, 0.05));
    CHECK_THAT(set.B[1 * 19 + 16], WithinAbs(beta_2_17, 0.05));
    CHECK(set.B[1 * 19 + 16] < 0.0);
}

TEST_CASE("settings hash tracks every knob", "[coefficients]") {
    const BprParams bpr;
    const UeSettings ue;
    const auto h = settings_hash(bpr, ue);
    CHECK(h == settings_hash(bpr, ue));
    CHECK(h != settings_hash({0.2, 4.0}, ue));
    CHECK(h != settings_hash(bpr, {500, 1e-5}));
    CHECK(h != settings_hash(bpr, {500, 1e-6, FwDirection::kClassic}));
}
