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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qvuln/annealer.hpp"
#include "qvuln/qubo.hpp"

namespace qvuln {

enum class Method { kGa, kPso, kSa, kTs };

Method parse_method(std::string_view text);
std::string_view to_string(Method method);

struct GaParams {
    int population = 200;
    int generations = 300;
    double crossover_p = 0.5;  ///< two-point crossover, per parent pair
    double mutation_p = 0.5;   ///< per offspring: flip one random bit
    int tournament = 2;
    int elitism = 1;
};

struct PsoParams {
    int particles = 200;
    int iterations = 300;
    double inertia = 0.7;
    double cognitive = 1.5;
    double social = 1.5;
    double v_max = 4.0;
};

struct SaParams {
    double T0 = 10.0;
    /// Replace T0 by median(uphill dE) / ln 2 over 100 sampled moves.
    bool calibrate_temperature = true;
    double cooling = 0.95;
    int stages = 50;
    int stage_length = 0;  ///< proposals per stage; 0 means 20 n
    int stagnation_restart = 30;
};

struct TsParams {
    int neighbourhood = 100;
    int tenure_min = 10;
    int tenure_max = 20;
    int iterations = 300;
    int non_improving_cap = 30;
};

struct HeuristicParams {
    Method method = Method::kGa;
    GaParams ga;
    PsoParams pso;
    SaParams sa;
    TsParams ts;
    std::uint64_t seed = 0;
    /// Optional: called with the current state after every accepted SA or TS move.
    std::function<void(std::span<const std::uint8_t>)> observer;

    void validate() const;
};

/// Greedy cardinality repair: drops set bits with the smallest |c| while too many are set, then
/// adds unset bits with the largest |c|. Ties go to the lower index.
Bits repair_cardinality(const QuboInstance& instance, Bits u);

/// Minimizes the penalized QUBO energy. The reported state is the best one seen; when that is
/// infeasible it is repaired and compared with the best feasible state visited.
AnnealResult run_baseline(const QuboInstance& instance, const HeuristicParams& params);

struct ComparisonRow {
    std::string method;
    int k = 0;
    double median_seconds = 0.0;
    double best_energy = 0.0;
    double gap = 0.0;  ///< relative to the exact optimum; NaN when enumeration is refused
};

/// For every instance (one per k) and method ("sqa" or a baseline name), runs each seed and
/// records the median wall time and best energy. Gaps use enumerate_exact when C(n,k) <= oracle_guard.
std::vector<ComparisonRow> runtime_comparison(const std::vector<QuboInstance>& instances,
                                              const std::vector<std::string>& methods,
                                              const std::vector<std::uint64_t>& seeds, const AnnealParams& sqa,
                                              const HeuristicParams& heuristics, std::uint64_t oracle_guard = 100000);

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path);

}  // namespace qvuln
