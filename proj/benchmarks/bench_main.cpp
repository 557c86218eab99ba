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


#include <benchmark/benchmark.h>

#include "qvuln/annealer.hpp"
#include "qvuln/assignment.hpp"
#include "qvuln/baselines.hpp"
#include "qvuln/oracle.hpp"
#include "qvuln/qubo.hpp"

namespace {

const qvuln::CoefficientSet& fixture() {
    static const auto set = qvuln::load_coefficients(std::filesystem::path(QVULN_BENCH_DATA_DIR) / "nguyen_dupuis");
    return set;
}

void BM_UeNguyenDupuis(benchmark::State& state) {
    const auto net = qvuln::builtin_nguyen_dupuis();
    const auto scenario = qvuln::DisruptionScenario::none(net.link_count());
    qvuln::UeSettings settings;
    settings.direction = state.range(0) ? qvuln::FwDirection::kConjugate : qvuln::FwDirection::kClassic;
    settings.max_iters = 200;
    for (auto _ : state) benchmark::DoNotOptimize(qvuln::solve_ue(net, scenario, {}, settings).tstt);
}
BENCHMARK(BM_UeNguyenDupuis)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_UeSiouxFalls(benchmark::State& state) {
    const auto net = qvuln::load_network(std::filesystem::path(QVULN_BENCH_DATA_DIR) / "sioux_falls" / "SiouxFalls_net.tntp",
                                         qvuln::NetworkFormat::kTntp);
    const auto scenario = qvuln::DisruptionScenario::none(net.link_count());
    for (auto _ : state) benchmark::DoNotOptimize(qvuln::solve_ue(net, scenario, {}, {100, 1e-4}).tstt);
}
BENCHMARK(BM_UeSiouxFalls)->Unit(benchmark::kMillisecond);

void BM_SqaSynthetic(benchmark::State& state) {
    const auto q = qvuln::synth_instance(static_cast<std::size_t>(state.range(0)), 5, 1);
    qvuln::AnnealParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qvuln::run_sqa(q, p).best_energy);
        ++p.seed;
    }
    state.SetItemsProcessed(state.iterations() * p.n_iter * p.M * state.range(0));
}
BENCHMARK(BM_SqaSynthetic)->Arg(19)->Arg(76)->Arg(914)->Unit(benchmark::kMillisecond);

void BM_OracleFixture(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const auto q = fixture().instance(k, 5000.0, false);
    for (auto _ : state) benchmark::DoNotOptimize(qvuln::enumerate_exact(q, k).optimum_energy);
}
BENCHMARK(BM_OracleFixture)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);

void BM_Baseline(benchmark::State& state) {
    const auto q = fixture().instance(4, 90082.29, false);
    qvuln::HeuristicParams h;
    h.method = static_cast<qvuln::Method>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qvuln::run_baseline(q, h).best_energy);
        ++h.seed;
    }
    state.SetLabel(std::string(qvuln::to_string(h.method)));
}
BENCHMARK(BM_Baseline)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
