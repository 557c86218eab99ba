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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qvuln/leaderboard.hpp"
#include "qvuln/qubo.hpp"

namespace qvuln {

enum class CouplingMode {
    kBinaryLiteral,  ///< couple(u, u') = u * u'
    kSpin,           ///< couple(u, u') = (2u - 1)(2u' - 1)
};

enum class InitMode {
    kFeasible,  ///< k random bits set, copied to every slice
    kUniform,   ///< independent fair bits, copied to every slice
};

CouplingMode parse_coupling_mode(std::string_view text);
std::string_view to_string(CouplingMode mode);

struct AnnealParams {
    double T0 = 10.0;
    double gamma0 = 10.0;
    double nu = 0.95;
    int M = 10;
    int n_iter = 50;
    std::uint64_t seed = 0;
    CouplingMode coupling = CouplingMode::kBinaryLiteral;
    InitMode init = InitMode::kFeasible;
    /// Unit in which T and Gamma are expressed. 0 selects the instance's largest absolute
    /// active coefficient; 1 means raw energy units.
    double energy_scale = 0.0;

    void validate() const;
};

struct AnnealResult {
    Bits best_u;
    double best_energy = 0.0;
    std::vector<double> trace;  ///< best-so-far classical energy after each sweep
    std::uint64_t seed = 0;
    double wall_time = 0.0;  ///< seconds
    std::string method = "sqa";
};

/// Replica configurations together with their classical energies.
struct ReplicaState {
    std::vector<Bits> slices;
    std::vector<double> energies;

    static ReplicaState replicate(const QuboInstance& instance, const Bits& u, int M);
};

/// sum_m E(u^m) - gamma * sum_m sum_s couple(u^m_s, u^{m+1}_s), periodic in m. Zero coupling for M = 1.
double sqa_energy(const ReplicaState& state, const QuboInstance& instance, double gamma,
                  CouplingMode mode = CouplingMode::kBinaryLiteral);

/// min(1, exp(-delta_e / temperature)).
double accept_probability(double delta_e, double temperature);

/// (nu * T_n, gamma0 * exp(-nu * n)).
std::pair<double, double> schedule_step(double T_n, double gamma0, double nu, int n);

/// Scale used when params.energy_scale == 0.
double natural_energy_scale(const QuboInstance& instance);

/// Simulated quantum annealing. When `board` is given every feasible state reached is offered to it.
AnnealResult run_sqa(const QuboInstance& instance, const AnnealParams& params, Leaderboard* board = nullptr);

/// Classical annealing on the same machinery: M = 1, gamma0 = 0.
AnnealResult run_sa(const QuboInstance& instance, AnnealParams params, Leaderboard* board = nullptr);

/// One run per seed, possibly concurrent. Results sorted by (best_energy, seed). Per-run
/// leaderboards are merged into `board` when given.
std::vector<AnnealResult> run_sqa_seeds(const QuboInstance& instance, const AnnealParams& params,
                                        const std::vector<std::uint64_t>& seeds, unsigned threads = 0,
                                        Leaderboard* board = nullptr);

std::string to_json(const AnnealParams& params);
/// Params echo (any JSON text), seed, sorted link ids, energy and trace.
std::string anneal_result_json(const AnnealResult& result, const std::string& params_json);

}  // namespace qvuln
