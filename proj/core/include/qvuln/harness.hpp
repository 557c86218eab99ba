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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qvuln/annealer.hpp"
#include "qvuln/baselines.hpp"
#include "qvuln/hybrid.hpp"
#include "qvuln/network.hpp"

namespace qvuln {

std::string version();

struct NetworkSpec {
    bool builtin = true;  ///< the built-in Nguyen-Dupuis network
    std::filesystem::path path;
    NetworkFormat format = NetworkFormat::kNativeCsv;
    DemandLevel demand = DemandLevel::kMedium;

    Network load() const;
};

/// Everything a sweep needs. Serializes to and from JSON; relative paths in a config file are
/// resolved against the file's directory.
struct ExperimentConfig {
    NetworkSpec network;
    std::filesystem::path coefficients;  ///< directory with c.csv and beta.csv; empty means compute
    HybridMode mode = HybridMode::kCoefficient;
    std::vector<int> k_list{2, 3, 4, 5};
    /// "fixture" takes the ratios stored with the coefficients; "sampled" draws from the interval.
    bool e_sampled = false;
    double e_lo = 0.3;
    double e_hi = 0.7;
    std::uint64_t e_seed = 0;
    std::vector<double> lambdas;  ///< explicit penalties for sweep_lambda; empty elsewhere
    double lambda_multiplier = 3.0;
    bool include_linear = true;
    AnnealParams anneal;
    HeuristicParams baseline;
    UeSettings ue{500, 1e-6, FwDirection::kBiconjugate};
    UeSettings inner_ue{500, 1e-4, FwDirection::kBiconjugate};
    BprParams bpr;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::size_t top_n = 5;
    unsigned threads = 0;
    std::filesystem::path output_dir = "qvuln-out";

    static ExperimentConfig from_json(const std::string& text, const std::filesystem::path& base_dir = {});
    static ExperimentConfig load(const std::filesystem::path& path);
    std::string to_json() const;

    /// Throws ValidationError: referenced files must exist, seeds nonempty, k values positive.
    void validate() const;

    HybridConfig hybrid(int k, const std::vector<double>& e) const;
};

/// One independent job of a sweep. Failures are isolated: `error` is set and `report` is empty.
struct SweepCell {
    std::string label;
    int k = 0;
    double lambda = 0.0;
    std::optional<CriticalSetReport> report;
    std::string error;
};

/// Coefficients and ratios a sweep runs on: loaded from the config's fixture or computed.
struct SweepInputs {
    Network network;
    CoefficientSet coefficients;
    std::vector<double> e;
};
SweepInputs prepare_inputs(const ExperimentConfig& config);

std::vector<SweepCell> sweep_k(const ExperimentConfig& config, const SweepInputs& inputs);

struct IntervalResult {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> e;
    CoefficientSet coefficients;
    std::vector<SweepCell> cells;
    std::vector<double> top_tstt;  ///< per k: equilibrium TSTT of the top-1 set (NaN if the cell failed)
};

/// Resamples ratios per interval with the configured seed, recomputes coefficients and re-runs
/// every k of the config in coefficient mode.
std::vector<IntervalResult> sweep_e(const ExperimentConfig& config, const Network& network,
                                    const std::vector<std::pair<double, double>>& intervals);

struct LambdaSweep {
    std::vector<double> lambdas;
    std::vector<int> ks;
    std::vector<std::vector<SweepCell>> cells;  ///< [lambda][k]
    std::vector<bool> stable_per_k;             ///< all lambdas agree on the top-1 set
    bool stable = true;
};

LambdaSweep sweep_lambda(const ExperimentConfig& config, const CoefficientSet& coefficients,
                         const std::vector<double>& lambdas);

struct ScaleSize {
    std::size_t n = 76;
    SynthParams params;
};

struct ScalePoint {
    std::size_t n = 0;
    int k = 0;
    double best_energy = 0.0;
    double sqa_seconds = 0.0;  ///< median over seeds
    double ga_seconds = 0.0;   ///< median over seeds; NaN when GA is not run
};

struct ScaleSummary {
    std::size_t n = 0;
    bool energy_decreasing = true;  ///< strictly, in k
    double sqa_cv = 0.0;            ///< coefficient of variation of sqa_seconds across k
    bool ga_increasing = true;      ///< strictly, in k
};

struct ScalabilityResult {
    std::vector<ScalePoint> points;
    std::vector<ScaleSummary> summaries;
};

/// For each size builds synthetic instances (instance seed `instance_seed`, one per k so that only
/// k changes) and runs SQA and optionally GA for k = 1..k_max. Timed runs are sequential.
ScalabilityResult scalability_run(const std::vector<ScaleSize>& sizes, int k_max, const std::vector<std::uint64_t>& seeds,
                                  const AnnealParams& anneal, const GaParams* ga, std::uint64_t instance_seed = 1);

void write_scalability_csv(const ScalabilityResult& result, const std::filesystem::path& path);

/// Persistent description of one CLI invocation.
struct RunRecord {
    std::string command;
    std::string config_json = "{}";
    std::vector<std::pair<std::string, std::string>> outputs;  ///< name, path
    std::vector<std::pair<std::string, double>> wall_times;    ///< step, seconds
    std::vector<std::string> notes;
    std::string status = "ok";

    void add_output(const std::string& name, const std::filesystem::path& path);
    std::string to_json() const;
    void write(const std::filesystem::path& path) const;
};

}  // namespace qvuln
