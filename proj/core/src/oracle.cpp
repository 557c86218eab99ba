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

#include "qvuln/oracle.hpp"

#include <cmath>

#include "qvuln/detail/csv.hpp"
#include "qvuln/error.hpp"

namespace qvuln {

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt result = 1;
    for (unsigned i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

namespace {

// Calls visit(indices, energy) for each k-subset in lexicographic order. Energies are updated
// incrementally from the running linear and pair sums of the prefix.
template <class Visit>
std::uint64_t for_each_subset(const QuboInstance& q, int k, std::uint64_t guard, Visit&& visit) {
    if (k < 0 || static_cast<std::size_t>(k) > q.n) throw ValidationError("k must lie in [0, n]");
    const BigInt count = binomial(static_cast<unsigned>(q.n), static_cast<unsigned>(k));
    if (count > guard)
        throw GuardError(count.str(), "refusing to enumerate " + count.str() + " subsets (guard " +
                                          std::to_string(guard) + ")");
    const auto kk = static_cast<std::size_t>(k);
    const double excess = static_cast<double>(k) - q.k;
    const double penalty = q.lambda * excess * excess;
    std::vector<std::size_t> idx(kk);
    // prefix[i] = energy contribution of idx[0..i) without penalty
    std::vector<double> prefix(kk + 1, 0.0);
    std::uint64_t visited = 0;
    auto contribution = [&](std::size_t depth) {
        const std::size_t s = idx[depth];
        double add = q.include_linear ? -q.c[s] : 0.0;
        for (std::size_t j = 0; j < depth; ++j) add -= 2.0 * q.B[idx[j] * q.n + s];
        return add;
    };
    if (kk == 0) {
        visit(idx, penalty);
        return 1;
    }
    for (std::size_t i = 0; i < kk; ++i) {
        idx[i] = i;
        prefix[i + 1] = prefix[i] + contribution(i);
    }
    for (;;) {
        visit(idx, prefix[kk] + penalty);
        ++visited;
        std::size_t i = kk;
        while (i > 0 && idx[i - 1] == q.n - kk + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        prefix[i] = prefix[i - 1] + contribution(i - 1);
        for (std::size_t j = i; j < kk; ++j) {
            idx[j] = idx[j - 1] + 1;
            prefix[j + 1] = prefix[j] + contribution(j);
        }
    }
    return visited;
}

}  // namespace

OracleResult enumerate_exact(const QuboInstance& q, int k, std::size_t keep_top, std::uint64_t guard) {
    Leaderboard board(std::max<std::size_t>(keep_top, 1));
    Bits u(q.n, 0);
    OracleResult result;
    result.enumerated = for_each_subset(q, k, guard, [&](const std::vector<std::size_t>& idx, double approx) {
        // The running sums can differ from qubo_energy in the last bits, so screen with slack
        // and store the exact value.
        if (!board.may_accept(approx - 1e-9 * (1.0 + std::abs(approx)))) return;
        for (auto s : idx) u[s] = 1;
        board.offer(u, qubo_energy(q, u));
        for (auto s : idx) u[s] = 0;
    });
    const auto& top = board.entries();
    result.optimum = top.front().links;
    result.optimum_energy = top.front().energy;
    result.ranking.assign(top.begin(), top.begin() + std::min(keep_top, top.size()));
    return result;
}

std::vector<std::pair<std::vector<int>, double>> energy_distribution(const QuboInstance& q, int k,
                                                                     std::uint64_t guard) {
    std::vector<std::pair<std::vector<int>, double>> out;
    Bits u(q.n, 0);
    for_each_subset(q, k, guard, [&](const std::vector<std::size_t>& idx, double) {
        std::vector<int> ids;
        for (auto s : idx) {
            u[s] = 1;
            ids.push_back(static_cast<int>(s + 1));
        }
        out.emplace_back(std::move(ids), qubo_energy(q, u));
        for (auto s : idx) u[s] = 0;
    });
    return out;
}

std::vector<GrowthRow> count_combinations(unsigned n, unsigned k_max) {
    std::vector<GrowthRow> rows;
    BigInt running = 0;
    for (unsigned k = 0; k <= k_max; ++k) {
        BigInt c = binomial(n, k);
        running += c;
        rows.push_back({k, c, running});
    }
    return rows;
}

void write_ranking_csv(const OracleResult& result, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "rank,links,energy\n";
    for (std::size_t r = 0; r < result.ranking.size(); ++r)
        out << r + 1 << ',' << format_links(result.ranking[r].links) << ',' << csv::fmt(result.ranking[r].energy) << '\n';
}

void write_growth_csv(unsigned n, const std::vector<GrowthRow>& rows, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "n,k,count\n";
    for (const auto& row : rows) out << n << ',' << row.k << ',' << row.count.str() << '\n';
}

}  // namespace qvuln
