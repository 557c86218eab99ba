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

namespace qvuln {

using Bits = std::vector<std::uint8_t>;

/// Cardinality-constrained QUBO
///   E(u) = -[include_linear] sum_s c_s u_s - sum_{s != t} B_st u_s u_t + lambda (sum_s u_s - k)^2
/// where every unordered pair contributes twice through the ordered double sum.
struct QuboInstance {
    std::size_t n = 0;
    std::vector<double> c;
    std::vector<double> B;  ///< row-major n x n, symmetric, zero diagonal
    double lambda = 1.0;
    int k = 1;
    bool include_linear = true;

    static QuboInstance zeros(std::size_t n, int k, double lambda);

    double beta(std::size_t s, std::size_t t) const noexcept { return B[s * n + t]; }
    void set_beta(std::size_t s, std::size_t t, double value) noexcept {
        B[s * n + t] = value;
        B[t * n + s] = value;
    }
    /// Same coefficients with a different cardinality target and penalty.
    QuboInstance with(int new_k, double new_lambda) const;

    /// Throws ValidationError: sizes, exact symmetry, zero diagonal, lambda > 0, 0 <= k <= n.
    void validate() const;

    bool operator==(const QuboInstance&) const = default;
};

double qubo_energy(const QuboInstance& instance, std::span<const std::uint8_t> u);

enum class Interaction { kSynergistic, kSubstitutive, kAdditive };

/// beta > tol synergistic, beta < -tol substitutive, otherwise additive.
Interaction classify_interaction(double beta, double tol = 0.0);
/// Default additivity tolerance for a network with the given baseline TSTT.
inline double additive_tolerance(double baseline_tstt) { return 1e-6 * baseline_tstt; }
std::string_view to_string(Interaction kind);

/// max(max_s |c_s| if with_linear, max_{s,t} |B_st|).
double max_abs_coefficient(std::span<const double> c, std::span<const double> B, bool with_linear = true);

/// multiplier * max(max|c|, max|B|). Multiplier must lie in [10, 100]; all-zero coefficients throw.
double default_lambda(std::span<const double> c, std::span<const double> B, double multiplier = 10.0);

/// Link ids (1-based) of the set bits, ascending.
std::vector<int> selected_links(std::span<const std::uint8_t> u);
Bits bits_from_links(std::size_t n, std::span<const int> ids);
std::string format_links(std::span<const int> ids, char sep = ' ');

/// Generator settings for seeded synthetic instances.
struct SynthParams {
    double c_lo = 100.0;
    double c_hi = 1000.0;
    double beta_sigma = 50.0;
    double beta_density = 0.05;     ///< fraction of unordered pairs with a nonzero interaction
    double lambda_multiplier = 3.0; ///< lambda = multiplier * max |coefficient|

    void validate() const;
};

/// Deterministic in (n, k, seed, params): c_s ~ U[c_lo, c_hi); each unordered pair independently
/// nonzero with probability beta_density, drawn from N(0, beta_sigma^2).
QuboInstance synth_instance(std::size_t n, int k, std::uint64_t seed, const SynthParams& params = {});

void save_synthetic(const std::filesystem::path& path, const QuboInstance& instance, std::uint64_t seed,
                    const SynthParams& params);
QuboInstance load_synthetic(const std::filesystem::path& path);

/// Per-link ratios drawn uniformly from [lo, hi] with the given seed.
std::vector<double> sample_residual_ratios(std::size_t n, double lo, double hi, std::uint64_t seed);

/// Where a set of coefficients came from.
struct CoefficientProvenance {
    double baseline_tstt = 0.0;
    std::vector<double> e;
    std::vector<double> disrupted_tstt;  ///< per link
    std::vector<double> joint_tstt;      ///< n x n, NaN where not computed
    std::vector<std::uint8_t> pair_valid;  ///< n x n, 1 where joint_tstt is a converged value
    std::uint64_t settings_hash = 0;
    std::uint64_t seed = 0;
};

struct CoefficientSet {
    std::vector<double> c;
    std::vector<double> B;
    CoefficientProvenance provenance;

    std::size_t n() const noexcept { return c.size(); }
    QuboInstance instance(int k, double lambda, bool include_linear) const;
};

/// Writes c.csv and beta.csv (valid pairs only) into `dir` at full precision.
void save_coefficients(const std::filesystem::path& dir, const CoefficientSet& set);
/// Reads c.csv and beta.csv from `dir`. Pairs absent from beta.csv are marked invalid.
CoefficientSet load_coefficients(const std::filesystem::path& dir);

}  // namespace qvuln
