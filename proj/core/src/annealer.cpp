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

#include "qvuln/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "qvuln/detail/common.hpp"
#include "qvuln/detail/sqa_engine.hpp"
#include "qvuln/error.hpp"

namespace qvuln {

CouplingMode parse_coupling_mode(std::string_view text) {
    if (text == "binary" || text == "binary-literal") return CouplingMode::kBinaryLiteral;
    if (text == "spin") return CouplingMode::kSpin;
    throw Error("unknown coupling mode '" + std::string(text) + "' (binary-literal|spin)");
}

std::string_view to_string(CouplingMode mode) {
    return mode == CouplingMode::kSpin ? "spin" : "binary-literal";
}

void AnnealParams::validate() const {
    if (!(T0 > 0.0)) throw ValidationError("T0 must be > 0");
    if (!(gamma0 >= 0.0)) throw ValidationError("gamma0 must be >= 0");
    if (!(nu > 0.0 && nu < 1.0)) throw ValidationError("nu must lie in (0, 1)");
    if (M < 1) throw ValidationError("M must be >= 1");
    if (n_iter < 1) throw ValidationError("n_iter must be >= 1");
    if (!(energy_scale >= 0.0)) throw ValidationError("energy_scale must be >= 0");
}

ReplicaState ReplicaState::replicate(const QuboInstance& instance, const Bits& u, int M) {
    ReplicaState state;
    state.slices.assign(static_cast<std::size_t>(M), u);
    state.energies.assign(static_cast<std::size_t>(M), qubo_energy(instance, u));
    return state;
}

double sqa_energy(const ReplicaState& state, const QuboInstance& instance, double gamma, CouplingMode mode) {
    const auto M = state.slices.size();
    double classical = 0.0;
    for (const auto& u : state.slices) classical += qubo_energy(instance, u);
    if (M <= 1) return classical;
    double coupling = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const auto& a = state.slices[m];
        const auto& b = state.slices[(m + 1) % M];
        for (std::size_t s = 0; s < a.size(); ++s)
            coupling += mode == CouplingMode::kBinaryLiteral ? double(a[s] * b[s])
                                                              : (2.0 * a[s] - 1.0) * (2.0 * b[s] - 1.0);
    }
    return classical - gamma * coupling;
}

double accept_probability(double delta_e, double temperature) {
    if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
    return delta_e <= 0.0 ? 1.0 : std::exp(-delta_e / temperature);
}

std::pair<double, double> schedule_step(double T_n, double gamma0, double nu, int n) {
    return {nu * T_n, gamma0 * std::exp(-nu * n)};
}

double natural_energy_scale(const QuboInstance& instance) {
    const double m = max_abs_coefficient(instance.c, instance.B, instance.include_linear);
    return m > 0.0 ? m : 1.0;
}

AnnealResult run_sqa(const QuboInstance& instance, const AnnealParams& params, Leaderboard* board) {
    instance.validate();
    detail::QuboModel model(instance, params.M);
    auto result = detail::anneal(model, params, board);
    result.best_energy = qubo_energy(instance, result.best_u);
    return result;
}

AnnealResult run_sa(const QuboInstance& instance, AnnealParams params, Leaderboard* board) {
    params.M = 1;
    params.gamma0 = 0.0;
    auto result = run_sqa(instance, params, board);
    result.method = "sa";
    return result;
}

std::vector<AnnealResult> run_sqa_seeds(const QuboInstance& instance, const AnnealParams& params,
                                        const std::vector<std::uint64_t>& seeds, unsigned threads,
                                        Leaderboard* board) {
    std::vector<AnnealResult> results(seeds.size());
    std::vector<Leaderboard> boards;
    if (board) boards.assign(seeds.size(), Leaderboard(board->capacity(), board->required_k()));
    detail::parallel_for(seeds.size(), threads, [&](std::size_t i) {
        AnnealParams p = params;
        p.seed = seeds[i];
        results[i] = run_sqa(instance, p, board ? &boards[i] : nullptr);
    });
    for (auto& b : boards) board->merge(b);
    std::sort(results.begin(), results.end(), [](const AnnealResult& a, const AnnealResult& b) {
        return a.best_energy != b.best_energy ? a.best_energy < b.best_energy : a.seed < b.seed;
    });
    return results;
}

std::string to_json(const AnnealParams& p) {
    nlohmann::json j = {{"T0", p.T0},
                        {"gamma0", p.gamma0},
                        {"nu", p.nu},
                        {"M", p.M},
                        {"n_iter", p.n_iter},
                        {"seed", p.seed},
                        {"coupling", std::string(to_string(p.coupling))},
                        {"init", p.init == InitMode::kFeasible ? "feasible" : "uniform"},
                        {"energy_scale", p.energy_scale}};
    return j.dump();
}

std::string anneal_result_json(const AnnealResult& r, const std::string& params_json) {
    nlohmann::json j;
    j["method"] = r.method;
    j["params"] = nlohmann::json::parse(params_json.empty() ? "{}" : params_json);
    j["seed"] = r.seed;
    j["best_u"] = selected_links(r.best_u);
    j["best_energy"] = r.best_energy;
    j["trace"] = r.trace;
    j["wall_time"] = r.wall_time;
    return j.dump(2);
}

}  // namespace qvuln
