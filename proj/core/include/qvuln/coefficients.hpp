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
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qvuln/assignment.hpp"
#include "qvuln/qubo.hpp"

namespace qvuln {

/// Maps a disruption scenario to its equilibrium TSTT. Must be safe to call concurrently.
using TsttEvaluator = std::function<double(const DisruptionScenario&)>;

/// Evaluator backed by solve_ue on a fixed network.
TsttEvaluator ue_evaluator(const Network& network, const BprParams& bpr, const UeSettings& settings);

/// Hash of the solver settings, recorded in provenance.
std::uint64_t settings_hash(const BprParams& bpr, const UeSettings& settings);

/// Single-link coefficients c_s = TSTT(u_s = 1) - TSTT(baseline). The baseline is evaluated once.
/// An infeasible single-link scenario throws InfeasibleError naming the link.
CoefficientSet compute_c(std::span<const double> e, const TsttEvaluator& evaluate, unsigned threads = 0);
CoefficientSet compute_c(const Network& network, const BprParams& bpr, std::span<const double> e,
                         const UeSettings& settings = {}, unsigned threads = 0);

/// Fills B for the given 1-based pairs (all pairs when empty) from joint evaluations:
/// beta_st = TSTT_st - (TSTT_s + TSTT_t - baseline). Pairs whose evaluation fails stay masked
/// invalid with B = 0 and NaN joint TSTT. Returns the number of invalid pairs.
std::size_t compute_beta(CoefficientSet& set, const TsttEvaluator& evaluate,
                         std::span<const std::pair<int, int>> pairs = {}, unsigned threads = 0);
std::size_t compute_beta(CoefficientSet& set, const Network& network, const BprParams& bpr,
                         const UeSettings& settings = {}, std::span<const std::pair<int, int>> pairs = {},
                         unsigned threads = 0);

/// Largest relative deviation of baseline + c_s + c_t + beta_st from the stored joint TSTT
/// over valid pairs.
double provenance_residual(const CoefficientSet& set);

}  // namespace qvuln
