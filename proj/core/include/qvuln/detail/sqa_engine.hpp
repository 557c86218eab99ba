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

// Replica Monte Carlo engine behind run_sqa / run_sa and the direct hybrid mode.
//
// A Model exposes n(), k(), reset(bits), delta(m, s), flip(m, s, delta), energy(m), bits(m)
// and natural_scale(). delta() is the change of the classical energy of slice m when bit s
// flips; the engine adds the inter-slice coupling on top.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qvuln/annealer.hpp"
#include "qvuln/detail/common.hpp"
#include "qvuln/leaderboard.hpp"
#include "qvuln/qubo.hpp"

namespace qvuln::detail {

/// QUBO energies with per-slice local fields h = B u and popcounts, so a flip costs O(1) to
/// evaluate and O(n) to apply.
class QuboModel {
 public:
    QuboModel(const QuboInstance& q, int M)
        : q_(q), linear_(q.include_linear ? q.c : std::vector<double>(q.n, 0.0)),
          bits_(M, Bits(q.n, 0)), field_(M, std::vector<double>(q.n, 0.0)), count_(M, 0), energy_(M, 0.0) {}

    std::size_t n() const noexcept { return q_.n; }
    int k() const noexcept { return q_.k; }
    double natural_scale() const { return natural_energy_scale(q_); }

    void reset(const Bits& u) {
        const double e = qubo_energy(q_, u);
        std::vector<double> h(q_.n, 0.0);
        int count = 0;
        for (std::size_t s = 0; s < q_.n; ++s) {
            if (!u[s]) continue;
            ++count;
            for (std::size_t j = 0; j < q_.n; ++j) h[j] += q_.B[j * q_.n + s];
        }
        for (std::size_t m = 0; m < bits_.size(); ++m) {
            bits_[m] = u;
            field_[m] = h;
            count_[m] = count;
            energy_[m] = e;
        }
    }

    double delta(std::size_t m, std::size_t s) const noexcept {
        const double d = bits_[m][s] ? -1.0 : 1.0;
        return d * (-linear_[s] - 2.0 * field_[m][s]) + q_.lambda * (2.0 * d * (count_[m] - q_.k) + 1.0);
    }

    void flip(std::size_t m, std::size_t s, double delta) noexcept {
        const double d = bits_[m][s] ? -1.0 : 1.0;
        bits_[m][s] ^= 1;
        count_[m] += static_cast<int>(d);
        energy_[m] += delta;
        const double* column = &q_.B[s * q_.n];  // symmetric: row s equals column s
        auto& h = field_[m];
        for (std::size_t j = 0; j < q_.n; ++j) h[j] += d * column[j];
    }

    double energy(std::size_t m) const noexcept { return energy_[m]; }
    const Bits& bits(std::size_t m) const noexcept { return bits_[m]; }

 private:
    const QuboInstance& q_;
    std::vector<double> linear_;
    std::vector<Bits> bits_;
    std::vector<std::vector<double>> field_;
    std::vector<int> count_;
    std::vector<double> energy_;
};

/// Coupling change when bit s of slice m flips, given the neighbouring slices.
inline double coupling_delta(CouplingMode mode, double gamma, std::uint8_t u, std::uint8_t prev, std::uint8_t next) {
    if (mode == CouplingMode::kBinaryLiteral) {
        const double d = u ? -1.0 : 1.0;
        return -gamma * d * (prev + next);
    }
    const double sigma = u ? 1.0 : -1.0;
    return 2.0 * gamma * sigma * ((prev ? 1.0 : -1.0) + (next ? 1.0 : -1.0));
}

template <class Model>
AnnealResult anneal(Model& model, const AnnealParams& p, Leaderboard* board) {
    const auto started = std::chrono::steady_clock::now();
    p.validate();
    Rng rng(p.seed);
    const std::size_t n = model.n();
    const auto M = static_cast<std::size_t>(p.M);

    Bits init(n, 0);
    const int k = model.k();
    if (p.init == InitMode::kFeasible && k >= 0 && static_cast<std::size_t>(k) <= n) {
        for (auto s : sample_without_replacement(rng, n, static_cast<std::size_t>(k))) init[s] = 1;
    } else {
        for (auto& bit : init) bit = uniform01(rng) < 0.5;
    }
    model.reset(init);

    double scale = p.energy_scale > 0.0 ? p.energy_scale : model.natural_scale();
    if (!(scale > 0.0)) scale = 1.0;

    AnnealResult result;
    result.seed = p.seed;
    result.best_u = model.bits(0);
    result.best_energy = model.energy(0);
    if (board) board->offer(model.bits(0), model.energy(0));

    double temperature = p.T0;
    result.trace.reserve(static_cast<std::size_t>(p.n_iter));
    for (int sweep = 0; sweep < p.n_iter; ++sweep) {
        const double gamma = p.gamma0 * std::exp(-p.nu * sweep) * scale;
        const double kT = temperature * scale;
        for (std::size_t r = 0; r < n * M; ++r) {
            const auto m = static_cast<std::size_t>(below(rng, M));
            const auto s = static_cast<std::size_t>(below(rng, n));
            const double d_classical = model.delta(m, s);
            double d_total = d_classical;
            if (M > 1 && gamma != 0.0)
                d_total += coupling_delta(p.coupling, gamma, model.bits(m)[s], model.bits((m + M - 1) % M)[s],
                                          model.bits((m + 1) % M)[s]);
            if (!(d_total <= 0.0) && !(uniform01(rng) < std::exp(-d_total / kT))) continue;
            model.flip(m, s, d_classical);
            const double e = model.energy(m);
            if (e < result.best_energy) {
                result.best_energy = e;
                result.best_u = model.bits(m);
            }
            if (board && board->may_accept(e)) board->offer(model.bits(m), e);
        }
        result.trace.push_back(result.best_energy);
        temperature *= p.nu;
    }
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

}  // namespace qvuln::detail
