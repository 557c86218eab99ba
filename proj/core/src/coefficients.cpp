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

#include "qvuln/coefficients.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qvuln/detail/common.hpp"
#include "qvuln/error.hpp"

namespace qvuln {

TsttEvaluator ue_evaluator(const Network& network, const BprParams& bpr, const UeSettings& settings) {
    return [&network, bpr, settings](const DisruptionScenario& scenario) {
        return solve_ue(network, scenario, bpr, settings).tstt;
    };
}

std::uint64_t settings_hash(const BprParams& bpr, const UeSettings& settings) {
    const std::string text = std::to_string(bpr.alpha) + '|' + std::to_string(bpr.beta_exp) + '|' +
                             std::to_string(settings.max_iters) + '|' + std::to_string(settings.gap_tol) + '|' +
                             std::string(to_string(settings.direction));
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

DisruptionScenario scenario_for(std::span<const double> e, std::initializer_list<std::size_t> on) {
    DisruptionScenario scenario{Bits(e.size(), 0), std::vector<double>(e.begin(), e.end()),
                                static_cast<int>(on.size())};
    for (auto s : on) scenario.u[s] = 1;
    return scenario;
}

}  // namespace

CoefficientSet compute_c(std::span<const double> e, const TsttEvaluator& evaluate, unsigned threads) {
    const auto n = e.size();
    for (std::size_t s = 0; s < n; ++s)
        if (!(e[s] > 0.0 && e[s] <= 1.0))
            throw ValidationError("residual ratio of link " + std::to_string(s + 1) + " must lie in (0, 1]");
    CoefficientSet set;
    auto& p = set.provenance;
    p.e.assign(e.begin(), e.end());
    p.baseline_tstt = evaluate(scenario_for(e, {}));
    p.disrupted_tstt.assign(n, 0.0);
    detail::parallel_for(n, threads, [&](std::size_t s) {
        try {
            p.disrupted_tstt[s] = evaluate(scenario_for(e, {s}));
        } catch (const InfeasibleError& ex) {
            throw InfeasibleError(ex.origin(), ex.destination(),
                                  "disrupting link " + std::to_string(s + 1) + ": " + ex.what());
        }
    });
    set.c.resize(n);
    for (std::size_t s = 0; s < n; ++s) set.c[s] = p.disrupted_tstt[s] - p.baseline_tstt;
    set.B.assign(n * n, 0.0);
    p.joint_tstt.assign(n * n, std::numeric_limits<double>::quiet_NaN());
    p.pair_valid.assign(n * n, 0);
    return set;
}

CoefficientSet compute_c(const Network& network, const BprParams& bpr, std::span<const double> e,
                         const UeSettings& settings, unsigned threads) {
    if (e.size() != network.link_count()) throw ValidationError("need one residual ratio per link");
    auto set = compute_c(e, ue_evaluator(network, bpr, settings), threads);
    set.provenance.settings_hash = settings_hash(bpr, settings);
    return set;
}

std::size_t compute_beta(CoefficientSet& set, const TsttEvaluator& evaluate, std::span<const std::pair<int, int>> pairs,
                         unsigned threads) {
    const auto n = set.n();
    auto& p = set.provenance;
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    if (pairs.empty()) {
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = s + 1; t < n; ++t) jobs.emplace_back(s, t);
    } else {
        for (auto [a, b] : pairs) {
            if (a < 1 || b < 1 || static_cast<std::size_t>(a) > n || static_cast<std::size_t>(b) > n || a == b)
                throw ValidationError("pair (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
            jobs.emplace_back(std::min(a, b) - 1, std::max(a, b) - 1);
        }
    }
    std::vector<double> joint(jobs.size(), std::numeric_limits<double>::quiet_NaN());
    detail::parallel_for(jobs.size(), threads, [&](std::size_t j) {
        try {
            joint[j] = evaluate(scenario_for(p.e, {jobs[j].first, jobs[j].second}));
        } catch (const Error&) {
            // left as NaN; the pair is masked below
        }
    });
    std::size_t invalid = 0;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const auto [s, t] = jobs[j];
        const bool ok = std::isfinite(joint[j]);
        invalid += !ok;
        const double beta = ok ? joint[j] - (p.disrupted_tstt[s] + p.disrupted_tstt[t] - p.baseline_tstt) : 0.0;
        set.B[s * n + t] = set.B[t * n + s] = beta;
        p.joint_tstt[s * n + t] = p.joint_tstt[t * n + s] = joint[j];
        p.pair_valid[s * n + t] = p.pair_valid[t * n + s] = ok;
    }
    return invalid;
}

std::size_t compute_beta(CoefficientSet& set, const Network& network, const BprParams& bpr, const UeSettings& settings,
                         std::span<const std::pair<int, int>> pairs, unsigned threads) {
    return compute_beta(set, ue_evaluator(network, bpr, settings), pairs, threads);
}

double provenance_residual(const CoefficientSet& set) {
    const auto n = set.n();
    const auto& p = set.provenance;
    double worst = 0.0;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t) {
            if (!p.pair_valid[s * n + t]) continue;
            const double joint = p.joint_tstt[s * n + t];
            const double rebuilt = p.baseline_tstt + set.c[s] + set.c[t] + set.B[s * n + t];
            worst = std::max(worst, std::abs(rebuilt - joint) / std::max(std::abs(joint), 1e-300));
        }
    return worst;
}

}  // namespace qvuln
