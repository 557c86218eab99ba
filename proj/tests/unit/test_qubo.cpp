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
#include <fstream>

#include "qvuln/error.hpp"
#include "qvuln/qubo.hpp"
#include "test_support.hpp"

using namespace qvuln;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("fixture coefficients load with the published extremes", "[qubo][fixture]") {
    const auto set = load_coefficients(testing::nd_dir());
    REQUIRE(set.n() == 19);
    CHECK(set.c[18] == 6679.39);
    CHECK(set.B[15 * 19 + 18] == 30027.43);
    CHECK(set.B[18 * 19 + 15] == 30027.43);
    CHECK(set.B[1 * 19 + 16] == -4601.28);
    CHECK(set.provenance.baseline_tstt == 5749.262154);
    CHECK(std::count(set.provenance.pair_valid.begin(), set.provenance.pair_valid.end(), 1) == 2 * 171);
}

TEST_CASE("QUBO energy hand evaluations", "[qubo]") {
    const auto set = load_coefficients(testing::nd_dir());
    SECTION("pair {16,19} without the linear term") {
        const int ids[] = {16, 19};
        const auto q = set.instance(2, 5000.0, false);
        CHECK_THAT(qubo_energy(q, bits_from_links(19, ids)), WithinAbs(-60054.86, 1e-9));
    }
    SECTION("empty set pays lambda k squared") {
        const auto q = set.instance(2, 5000.0, false);
        CHECK(qubo_energy(q, Bits(19, 0)) == 20000.0);
    }
    SECTION("feasible sets pay no penalty") {
        const int ids[] = {3, 7, 11};
        const auto with_penalty = set.instance(3, 1e6, true);
        const auto tiny_penalty = set.instance(3, 1e-6, true);
        const auto u = bits_from_links(19, ids);
        CHECK(qubo_energy(with_penalty, u) == qubo_energy(tiny_penalty, u));
    }
    SECTION("linear term is the negated single-link impact") {
        const int ids[] = {19};
        CHECK_THAT(qubo_energy(set.instance(1, 1.0, true), bits_from_links(19, ids)), WithinAbs(-6679.39, 1e-12));
    }
}

TEST_CASE("interaction classification", "[qubo]") {
    CHECK(classify_interaction(30027.43) == Interaction::kSynergistic);
    CHECK(classify_interaction(-4601.28) == Interaction::kSubstitutive);
    CHECK(classify_interaction(0.0) == Interaction::kAdditive);
    CHECK(classify_interaction(0.004, additive_tolerance(5749.262154)) == Interaction::kAdditive);
    CHECK(to_string(Interaction::kSubstitutive) == "substitutive");
}

TEST_CASE("default penalty anchors to the largest coefficient", "[qubo]") {
    const auto set = load_coefficients(testing::nd_dir());
    CHECK_THAT(default_lambda(set.c, set.B, 10.0), WithinRel(300274.3, 1e-12));
    const std::vector<double> c{1.0, 0.5};
    const std::vector<double> B(4, 0.0);
    CHECK(default_lambda(c, B, 100.0) == 100.0);
    CHECK_THROWS_AS(default_lambda(c, B, 5.0), DomainError);
    CHECK_THROWS_AS(default_lambda(std::vector<double>(2, 0.0), B, 10.0), DomainError);
    CHECK(max_abs_coefficient(set.c, set.B, false) == 30027.43);
}

TEST_CASE("link set helpers", "[qubo]") {
    const int ids[] = {2, 5, 9};
    const auto u = bits_from_links(10, ids);
    CHECK(selected_links(u) == std::vector<int>{2, 5, 9});
    CHECK(format_links(ids) == "2 5 9");
    CHECK(format_links(ids, ';') == "2;5;9");
    const int bad[] = {11};
    CHECK_THROWS_AS(bits_from_links(10, bad), ValidationError);
}

TEST_CASE("instance validation", "[qubo]") {
    auto q = QuboInstance::zeros(4, 2, 1.0);
    CHECK_NOTHROW(q.validate());
    q.B[1] = 3.0;
    CHECK_THROWS_AS(q.validate(), ValidationError);
    q = QuboInstance::zeros(4, 5, 1.0);
    CHECK_THROWS_AS(q.validate(), ValidationError);
    q = QuboInstance::zeros(4, 2, 0.0);
    CHECK_THROWS_AS(q.validate(), ValidationError);
}

TEST_CASE("synthetic instances", "[qubo][synthetic]") {
    SECTION("seeded generation is bit-identical") {
        CHECK(synth_instance(76, 4, 17) == synth_instance(76, 4, 17));
        CHECK_FALSE(synth_instance(76, 4, 17) == synth_instance(76, 4, 18));
    }
    SECTION("n = 76 has 76 impacts and 2850 pair slots") {
        const auto q = synth_instance(76, 3, 5);
        CHECK(q.c.size() == 76);
        std::size_t slots = 0;
        for (std::size_t s = 0; s < q.n; ++s)
            for (std::size_t t = s + 1; t < q.n; ++t) ++slots;
        CHECK(slots == 2850);
        CHECK(q.B.size() == 76 * 76);
        for (double c : q.c) CHECK((c >= 100.0 && c <= 1000.0));
        CHECK_NOTHROW(q.validate());
    }
    SECTION("zero density gives no interactions") {
        SynthParams params;
        params.beta_density = 0.0;
        const auto q = synth_instance(30, 2, 1, params);
        CHECK(std::all_of(q.B.begin(), q.B.end(), [](double b) { return b == 0.0; }));
    }
    SECTION("save then load") {
        const auto dir = testing::scratch_dir("qubo_synthetic");
        const auto q = synth_instance(40, 6, 9);
        save_synthetic(dir / "inst.json", q, 9, {});
        CHECK(load_synthetic(dir / "inst.json") == q);
    }
}

TEST_CASE("residual ratio sampling", "[qubo]") {
    const auto a = sample_residual_ratios(19, 0.3, 0.7, 4);
    CHECK(a == sample_residual_ratios(19, 0.3, 0.7, 4));
    CHECK(std::all_of(a.begin(), a.end(), [](double e) { return e >= 0.3 && e <= 0.7; }));
    const auto ones = sample_residual_ratios(5, 1.0, 1.0, 0);
    CHECK(std::all_of(ones.begin(), ones.end(), [](double e) { return e == 1.0; }));
    CHECK_THROWS_AS(sample_residual_ratios(5, 0.8, 0.2, 0), ValidationError);
}

TEST_CASE("coefficient files round-trip", "[qubo]") {
    const auto dir = testing::scratch_dir("qubo_coefficients");
    const auto set = load_coefficients(testing::nd_dir());
    save_coefficients(dir, set);
    const auto again = load_coefficients(dir);
    CHECK(again.c == set.c);
    CHECK(again.B == set.B);
    CHECK(again.provenance.e == set.provenance.e);
    CHECK(again.provenance.pair_valid == set.provenance.pair_valid);
}

TEST_CASE("contradicting duplicate pairs are rejected", "[qubo]") {
    const auto dir = testing::scratch_dir("qubo_asymmetric");
    std::ofstream(dir / "c.csv") << "link_id,e,baseline_tstt,disrupted_tstt,c\n1,0.5,10,11,1\n2,0.5,10,12,2\n";
    std::ofstream(dir / "beta.csv") << "s,t,tstt_s,tstt_t,tstt_st,beta\n1,2,11,12,14,1\n2,1,12,11,15,2\n";
    CHECK_THROWS_AS(load_coefficients(dir), ParseError);
}
