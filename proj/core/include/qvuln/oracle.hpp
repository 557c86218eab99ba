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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qvuln/leaderboard.hpp"
#include "qvuln/qubo.hpp"

namespace qvuln {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultEnumerationGuard = 10'000'000;

struct OracleResult {
    std::vector<int> optimum;  ///< link ids
    double optimum_energy = 0.0;
    std::vector<Leaderboard::Entry> ranking;  ///< best keep_top sets, ascending energy
    std::uint64_t enumerated = 0;
};

/// Exact C(n, k) binomial.
BigInt binomial(unsigned n, unsigned k);

/// Minimizes qubo_energy over every set of exactly k bits, visited in lexicographic order.
/// Throws GuardError (carrying the count) when C(n, k) exceeds `guard`.
OracleResult enumerate_exact(const QuboInstance& instance, int k, std::size_t keep_top = 5,
                             std::uint64_t guard = kDefaultEnumerationGuard);

/// Energy of every cardinality-k set, in lexicographic order of the sets.
std::vector<std::pair<std::vector<int>, double>> energy_distribution(const QuboInstance& instance, int k,
                                                                     std::uint64_t guard = kDefaultEnumerationGuard);

struct GrowthRow {
    unsigned k = 0;
    BigInt count;
    BigInt cumulative;  ///< sum over j <= k
};

/// C(n, k) and running sums for k = 0..k_max.
std::vector<GrowthRow> count_combinations(unsigned n, unsigned k_max);

void write_ranking_csv(const OracleResult& result, const std::filesystem::path& path);
void write_growth_csv(unsigned n, const std::vector<GrowthRow>& rows, const std::filesystem::path& path);

}  // namespace qvuln
