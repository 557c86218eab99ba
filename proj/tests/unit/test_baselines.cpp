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

#include <cmath>

#include "qvuln/baselines.hpp"
#include "qvuln/error.hpp"
#include "qvuln/oracle.hpp"
#include "test_support.hpp"

using namespace qvuln;
using Catch::Matchers::WithinAbs;

namespace {

QuboInstance nd_instance(int k) {
    const auto set = load_coefficients(testing::nd_dir());
    return set.instance(k, 3.0 * max_abs_coefficient(set.c, set.B, false), false);
}

constexpr Method kAll[] = {Method::kGa, Method::kPso, Method::kSa, Method::kTs};

}  // namespace

TEST_CASE("method names", "[baselines]") {
    for (auto m : kAll) CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_method("aco"), Error);
}

TEST_CASE("parameter validation", "[baselines]") {
    HeuristicParams p;
    CHECK_NOTHROW(p.validate());
    p.ga.elitism = p.ga.population;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.sa.cooling = 1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.ts.tenure_max = 1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("greedy cardinality repair", "[baselines]") {
    auto q = QuboInstance::zeros(5, 2, 1.0);
    q.c = {5.0, -1.0, 3.0, 0.5, 4.0};
    CHECK(selected_links(repair_cardinality(q, Bits{1, 1, 1, 1, 0})) == std::vector<int>{1, 3});
    CHECK(selected_links(repair_cardinality(q, Bits{0, 0, 0, 0, 0})) == std::vector<int>{1, 5});
    CHECK(selected_links(repair_cardinality(q, Bits{0, 1, 0, 0, 0})) == std::vector<int>{1, 2});
    const Bits ok{0, 0, 1, 0, 1};
    CHECK(repair_cardinality(q, ok) == ok);
}

TEST_CASE("GA finds the k = 2 fixture optimum", "[baselines][fixture]") {
    const auto q = nd_instance(2);
    HeuristicParams p;
    p.method = Method::kGa;
    const auto r = run_baseline(q, p);
    const double optimum = enumerate_exact(q, 2).optimum_energy;
    CHECK(selected_links(r.best_u) == std::vector<int>{16, 19});
    CHECK((r.best_energy - optimum) / std::abs(optimum) <= 0.03);
}

TEST_CASE("every method reports a feasible set", "[baselines]") {
    for (auto m : kAll) {
        HeuristicParams p;
        p.method = m;
        p.ga.generations = 20;
        p.pso.iterations = 20;
        const auto flat = run_baseline(QuboInstance::zeros(9, 3, 1.0), p);
        INFO(to_string(m));
        CHECK(selected_links(flat.best_u).size() == 3);
        CHECK(flat.best_energy == 0.0);

        const auto q = testing::random_qubo(16, 5, 11);
        const auto r = run_baseline(q, p);
        CHECK(selected_links(r.best_u).size() == 5);
        CHECK(r.best_energy == qubo_energy(q, r.best_u));
        CHECK(r.best_energy >= enumerate_exact(q, 5).optimum_energy - 1e-9);
    }
}

TEST_CASE("runs are seed-deterministic", "[baselines]") {
    const auto q = testing::random_qubo(14, 4, 2);
    for (auto m : kAll) {
        HeuristicParams p;
        p.method = m;
        p.seed = 77;
        p.ga.generations = 30;
        p.pso.iterations = 30;
        const auto a = run_baseline(q, p);
        const auto b = run_baseline(q, p);
        CHECK(a.best_u == b.best_u);
        CHECK(a.trace == b.trace);
    }
}

TEST_CASE("tabu search moves one bit at a time", "[baselines]") {
    const auto q = testing::random_qubo(20, 4, 6);
    HeuristicParams p;
    p.method = Method::kTs;
    p.ts.non_improving_cap = 1 << 30;
    std::vector<Bits> states;
    p.observer = [&](std::span<const std::uint8_t> u) { states.emplace_back(u.begin(), u.end()); };
    (void)run_baseline(q, p);
    REQUIRE(states.size() == static_cast<std::size_t>(p.ts.iterations));
    for (std::size_t i = 1; i < states.size(); ++i) {
        int changed = 0;
        for (std::size_t s = 0; s < q.n; ++s) changed += states[i][s] != states[i - 1][s];
        CHECK(changed == 1);
    }
}

TEST_CASE("runtime comparison rows", "[baselines]") {
    const std::vector<QuboInstance> one{nd_instance(2)};
    HeuristicParams hp;
    hp.ga.generations = 50;
    const auto rows = runtime_comparison(one, {"ts"}, {0, 1, 2}, {}, hp);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].method == "ts");
    CHECK(rows[0].k == 2);
    CHECK_THAT(rows[0].gap, WithinAbs(0.0, 1e-12));

    const auto both = runtime_comparison(one, {"sqa", "ga"}, {0}, {}, hp);
    CHECK(both.size() == 2);
    const std::vector<QuboInstance> big{synth_instance(76, 8, 3)};
    CHECK(std::isnan(runtime_comparison(big, {"ts"}, {0}, {}, hp).front().gap));

    const auto dir = testing::scratch_dir("baselines_csv");
    write_comparison_csv(both, dir / "cmp.csv");
    CHECK(std::filesystem::file_size(dir / "cmp.csv") > 0);
}
