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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qvuln/annealer.hpp"
#include "qvuln/assignment.hpp"
#include "qvuln/coefficients.hpp"
#include "qvuln/qubo.hpp"

namespace qvuln {

enum class HybridMode { kCoefficient, kDirect };

HybridMode parse_hybrid_mode(std::string_view text);
std::string_view to_string(HybridMode mode);

/// Where per-link residual capacity ratios come from.
struct ResidualSource {
    bool sampled = false;  ///< false: use `pinned`
    double lo = 0.3;
    double hi = 0.7;
    std::uint64_t seed = 0;
    std::vector<double> pinned;

    std::vector<double> resolve(std::size_t link_count) const;
};

struct HybridConfig {
    HybridMode mode = HybridMode::kCoefficient;
    int k = 2;
    AnnealParams anneal;
    UeSettings ue{500, 1e-6, FwDirection::kBiconjugate};
    UeSettings inner_ue{500, 1e-4, FwDirection::kBiconjugate};  ///< direct mode, per candidate
    BprParams bpr;
    ResidualSource e;
    bool include_linear = true;
    double lambda = 0.0;             ///< 0: lambda_multiplier times the energy scale
    double lambda_multiplier = 3.0;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::size_t top_n = 5;
    unsigned threads = 0;

    void validate(std::size_t link_count) const;
};

struct RankedSet {
    std::vector<int> links;
    double energy = 0.0;
    double tstt = 0.0;  ///< coefficient mode: quadratic-model estimate; direct mode: equilibrium TSTT
};

struct CriticalSetReport {
    int k = 0;
    HybridMode mode = HybridMode::kCoefficient;
    double lambda = 0.0;
    std::vector<std::uint64_t> seeds;
    std::vector<RankedSet> ranking;  ///< ascending energy
    std::size_t ue_solves = 0;
    double wall_time = 0.0;
};

/// Memoized TSTT by disruption bit vector. Lookups and inserts may run concurrently; two threads
/// missing on the same key may both evaluate, and the identical values make the race benign.
class TsttCache {
 public:
    TsttCache(TsttEvaluator evaluate, std::vector<double> e);

    /// TSTT of the scenario with the given bits; +inf when the scenario is infeasible.
    double get(const Bits& u);
    std::size_t solves() const noexcept { return solves_.load(); }
    std::size_t size() const;

 private:
    TsttEvaluator evaluate_;
    std::vector<double> e_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, double> values_;
    std::atomic<std::size_t> solves_{0};
};

/// Quadratic-model TSTT estimate baseline + sum c_s + sum_{s<t} beta_st.
double surrogate_tstt(const CoefficientSet& set, std::span<const int> links);

/// Anneals the QUBO built from `coefficients`; no equilibrium solves happen here.
CriticalSetReport run_coefficient_mode(const CoefficientSet& coefficients, const HybridConfig& config);
/// Computes the coefficients for the configured ratios first.
CriticalSetReport run_coefficient_mode(const Network& network, const HybridConfig& config);

/// Equilibrium inside the annealing loop: E(u) = -TSTT(u) + lambda (sum u - k)^2.
CriticalSetReport run_direct_mode(const Network& network, const HybridConfig& config);
CriticalSetReport run_direct_mode(TsttCache& cache, std::size_t link_count, double scale, const HybridConfig& config);

struct SurfaceRow {
    int k = 0;
    int rank = 0;  ///< 0 marks the undisrupted baseline row
    std::vector<int> links;
    double tstt = 0.0;
};

/// Equilibrium TSTT of every ranked set in the reports, preceded by a baseline row.
std::vector<SurfaceRow> tstt_surface(const Network& network, const std::vector<CriticalSetReport>& reports,
                                     std::span<const double> e, const BprParams& bpr = {}, const UeSettings& ue = {});

std::string report_json(const CriticalSetReport& report);
void write_report_csv(const std::vector<CriticalSetReport>& reports, const std::filesystem::path& path);
void write_energy_histogram_csv(const std::vector<std::pair<std::vector<int>, double>>& energies,
                                const std::filesystem::path& path);
void write_surface_csv(const std::vector<SurfaceRow>& rows, const std::filesystem::path& path);

}  // namespace qvuln
