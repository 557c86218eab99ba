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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qvuln/network.hpp"

namespace qvuln {

/// Which links are disrupted (u_s = 1) and how much capacity each keeps when it is (e_s).
struct DisruptionScenario {
    std::vector<std::uint8_t> u;
    std::vector<double> e;
    int k = 0;  ///< informational

    /// No link disrupted; e filled with 1.
    static DisruptionScenario none(std::size_t link_count);
    /// Disrupts the given 1-based link ids with ratios taken from `e` (one per link).
    static DisruptionScenario of_links(std::span<const int> ids, std::vector<double> e);

    /// Capacity multiplier 1 - u_s + e_s u_s.
    double capacity_factor(std::size_t s) const noexcept { return u[s] ? e[s] : 1.0; }

    /// Throws ValidationError on size mismatch or e outside [0, 1].
    void validate(std::size_t link_count) const;
};

enum class FwDirection {
    kConjugate,  ///< conjugate Frank-Wolfe direction, falls back to the plain one when not a descent direction
    kClassic,    ///< plain all-or-nothing direction
    kBiconjugate,  ///< conjugate to the last two steps, degrading to kConjugate and then kClassic
};

FwDirection parse_fw_direction(std::string_view text);
std::string_view to_string(FwDirection direction);

struct UeSettings {
    int max_iters = 500;
    double gap_tol = 1e-6;
    FwDirection direction = FwDirection::kBiconjugate;
};

struct UeSolution {
    std::vector<double> x;      ///< link flows, pcu/h
    std::vector<double> times;  ///< link travel times at x, hours
    std::vector<std::vector<double>> od_flows;  ///< per OD pair, per link
    double tstt = 0.0;          ///< pcu*h
    double relative_gap = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  ///< Beckmann value of every iterate, starting point included
    std::vector<double> gap_trace;        ///< relative gap measured at every iterate
};

/// t0 * (1 + alpha * (x / (C * (1 - u + e u)))^beta). Throws DomainError for zero effective capacity.
double link_travel_time(double x, const Link& link, const BprParams& bpr, int u = 0, double e = 1.0);

/// Sum over links of the integral of the travel time from 0 to x_s, in closed form.
double beckmann_objective(const Network& network, std::span<const double> x,
                          const DisruptionScenario& scenario, const BprParams& bpr);

/// Sum of x_s * T_s(x_s).
double tstt(std::span<const double> x, const Network& network, const DisruptionScenario& scenario,
            const BprParams& bpr);

/// Frank-Wolfe user equilibrium. Starts from all-or-nothing at free-flow times and uses an exact
/// bisection line search. Throws InfeasibleError when an OD pair has no route.
UeSolution solve_ue(const Network& network, const DisruptionScenario& scenario, const BprParams& bpr,
                    const UeSettings& settings = {});

/// Largest relative node-balance violation of the per-OD flows (and of their sum against x).
double conservation_residual(const Network& network, const UeSolution& solution);

struct PathAudit {
    struct Path {
        std::vector<int> links;  ///< link ids in travel order
        double flow = 0.0;
        double cost = 0.0;       ///< hours at the audited flows
    };
    struct OdAudit {
        OdPair od;
        std::vector<Path> paths;
        double min_cost = 0.0;
        double worst_violation = 0.0;  ///< max over used paths of cost - min_cost - epsilon * min_cost
    };

    std::vector<OdAudit> od;
    double worst_violation = 0.0;
    bool passed = true;
};

/// Decomposes each OD pair's flow into paths by repeated shortest-path extraction over links that
/// still carry flow, then checks Wardrop's first principle. `epsilon` is relative to the OD's
/// minimum path cost. Paths carrying less than `min_flow_share` of the OD demand are ignored.
PathAudit wardrop_audit(const Network& network, const DisruptionScenario& scenario, const UeSolution& solution,
                        const BprParams& bpr, double epsilon, double min_flow_share = 1e-6);

/// Writes `link_id,flow,time` at six significant figures.
void write_ue_csv(const Network& network, const UeSolution& solution, const std::filesystem::path& path);

/// JSON with settings, traces and TSTT (full precision).
std::string ue_record_json(const UeSolution& solution, const UeSettings& settings, const BprParams& bpr);

}  // namespace qvuln
