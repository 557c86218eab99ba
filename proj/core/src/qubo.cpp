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

#include "qvuln/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "qvuln/detail/common.hpp"
#include "qvuln/detail/csv.hpp"
#include "qvuln/error.hpp"

namespace qvuln {

QuboInstance QuboInstance::zeros(std::size_t n, int k, double lambda) {
    return {n, std::vector<double>(n, 0.0), std::vector<double>(n * n, 0.0), lambda, k, true};
}

QuboInstance QuboInstance::with(int new_k, double new_lambda) const {
    QuboInstance copy = *this;
    copy.k = new_k;
    copy.lambda = new_lambda;
    return copy;
}

void QuboInstance::validate() const {
    if (c.size() != n || B.size() != n * n)
        throw ValidationError("instance arrays do not match n = " + std::to_string(n));
    for (std::size_t s = 0; s < n; ++s) {
        if (B[s * n + s] != 0.0) throw ValidationError("interaction matrix has nonzero diagonal at " + std::to_string(s + 1));
        for (std::size_t t = s + 1; t < n; ++t)
            if (B[s * n + t] != B[t * n + s])
                throw ValidationError("interaction matrix asymmetric at (" + std::to_string(s + 1) + "," +
                                      std::to_string(t + 1) + ")");
    }
    if (!(lambda > 0.0)) throw ValidationError("lambda must be > 0");
    if (k < 0 || static_cast<std::size_t>(k) > n) throw ValidationError("k must lie in [0, n]");
}

double qubo_energy(const QuboInstance& q, std::span<const std::uint8_t> u) {
    if (u.size() != q.n) throw ValidationError("bit vector length does not match instance size");
    std::vector<std::size_t> on;
    double linear = 0.0;
    for (std::size_t s = 0; s < q.n; ++s)
        if (u[s]) {
            on.push_back(s);
            linear += q.c[s];
        }
    double pairs = 0.0;
    for (std::size_t a = 0; a < on.size(); ++a)
        for (std::size_t b = a + 1; b < on.size(); ++b) pairs += q.B[on[a] * q.n + on[b]];
    const double excess = static_cast<double>(on.size()) - q.k;
    return -(q.include_linear ? linear : 0.0) - 2.0 * pairs + q.lambda * excess * excess;
}

Interaction classify_interaction(double beta, double tol) {
    if (beta > tol) return Interaction::kSynergistic;
    if (beta < -tol) return Interaction::kSubstitutive;
    return Interaction::kAdditive;
}

std::string_view to_string(Interaction kind) {
    switch (kind) {
        case Interaction::kSynergistic: return "synergistic";
        case Interaction::kSubstitutive: return "substitutive";
        case Interaction::kAdditive: return "additive";
    }
    return "additive";
}

double max_abs_coefficient(std::span<const double> c, std::span<const double> B, bool with_linear) {
    double m = 0.0;
    if (with_linear)
        for (double v : c) m = std::max(m, std::abs(v));
    for (double v : B) m = std::max(m, std::abs(v));
    return m;
}

double default_lambda(std::span<const double> c, std::span<const double> B, double multiplier) {
    if (!(multiplier >= 10.0 && multiplier <= 100.0))
        throw DomainError("lambda multiplier must lie in [10, 100]");
    const double m = max_abs_coefficient(c, B, true);
    if (m == 0.0) throw DomainError("all coefficients are zero; nothing to anchor lambda to");
    return multiplier * m;
}

std::vector<int> selected_links(std::span<const std::uint8_t> u) {
    std::vector<int> ids;
    for (std::size_t s = 0; s < u.size(); ++s)
        if (u[s]) ids.push_back(static_cast<int>(s + 1));
    return ids;
}

Bits bits_from_links(std::size_t n, std::span<const int> ids) {
    Bits u(n, 0);
    for (int id : ids) {
        if (id < 1 || static_cast<std::size_t>(id) > n) throw ValidationError("link id " + std::to_string(id) + " out of range");
        u[id - 1] = 1;
    }
    return u;
}

std::string format_links(std::span<const int> ids, char sep) {
    std::string out;
    for (int id : ids) {
        if (!out.empty()) out += sep;
        out += std::to_string(id);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic instances

void SynthParams::validate() const {
    if (!(c_lo <= c_hi)) throw ValidationError("c range must satisfy lo <= hi");
    if (!(beta_sigma >= 0.0)) throw ValidationError("beta_sigma must be >= 0");
    if (!(beta_density >= 0.0 && beta_density <= 1.0)) throw ValidationError("beta_density must lie in [0, 1]");
    if (!(lambda_multiplier > 0.0)) throw ValidationError("lambda_multiplier must be > 0");
}

QuboInstance synth_instance(std::size_t n, int k, std::uint64_t seed, const SynthParams& params) {
    params.validate();
    if (n == 0 || k < 1 || static_cast<std::size_t>(k) > n) throw ValidationError("synthetic instance needs n >= k >= 1");
    detail::Rng rng(seed);
    QuboInstance q = QuboInstance::zeros(n, k, 1.0);
    for (auto& v : q.c) v = detail::uniform(rng, params.c_lo, params.c_hi);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t)
            if (detail::uniform01(rng) < params.beta_density) q.set_beta(s, t, params.beta_sigma * detail::normal(rng));
    const double scale = max_abs_coefficient(q.c, q.B, true);
    q.lambda = scale > 0.0 ? params.lambda_multiplier * scale : 1.0;
    return q;
}

void save_synthetic(const std::filesystem::path& path, const QuboInstance& q, std::uint64_t seed,
                    const SynthParams& params) {
    nlohmann::json j;
    j["n"] = q.n;
    j["k"] = q.k;
    j["seed"] = seed;
    j["lambda"] = q.lambda;
    j["include_linear"] = q.include_linear;
    j["gen_params"] = {{"c_range", {params.c_lo, params.c_hi}},
                       {"beta_sigma", params.beta_sigma},
                       {"beta_density", params.beta_density},
                       {"lambda_multiplier", params.lambda_multiplier}};
    j["c"] = q.c;
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t s = 0; s < q.n; ++s)
        for (std::size_t t = s + 1; t < q.n; ++t)
            if (q.beta(s, t) != 0.0) pairs.push_back({s + 1, t + 1, q.beta(s, t)});
    j["beta"] = pairs;
    csv::open_out(path) << j.dump(1) << '\n';
}

QuboInstance load_synthetic(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        QuboInstance q = QuboInstance::zeros(j.at("n").get<std::size_t>(), j.at("k").get<int>(), j.at("lambda").get<double>());
        q.include_linear = j.value("include_linear", true);
        q.c = j.at("c").get<std::vector<double>>();
        for (const auto& p : j.at("beta")) {
            const auto s = p.at(0).get<std::size_t>();
            const auto t = p.at(1).get<std::size_t>();
            if (s < 1 || t < 1 || s > q.n || t > q.n || s == t) throw ValidationError("bad pair index in " + path.string());
            q.set_beta(s - 1, t - 1, p.at(2).get<double>());
        }
        q.validate();
        return q;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string(), 0, ex.what());
    }
}

std::vector<double> sample_residual_ratios(std::size_t n, double lo, double hi, std::uint64_t seed) {
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) throw ValidationError("residual ratio interval must lie within [0, 1]");
    detail::Rng rng(seed);
    std::vector<double> e(n);
    for (auto& v : e) v = detail::uniform(rng, lo, hi);
    return e;
}

// ---------------------------------------------------------------------------
// Coefficient files

QuboInstance CoefficientSet::instance(int k, double lambda, bool include_linear) const {
    QuboInstance q{n(), c, B, lambda, k, include_linear};
    q.validate();
    return q;
}

void save_coefficients(const std::filesystem::path& dir, const CoefficientSet& set) {
    const auto n = set.n();
    const auto& p = set.provenance;
    auto c_out = csv::open_out(dir / "c.csv");
    c_out << "link_id,e,baseline_tstt,disrupted_tstt,c\n";
    for (std::size_t s = 0; s < n; ++s)
        c_out << s + 1 << ',' << csv::fmt_exact(p.e[s]) << ',' << csv::fmt_exact(p.baseline_tstt) << ','
              << csv::fmt_exact(p.disrupted_tstt[s]) << ',' << csv::fmt_exact(set.c[s]) << '\n';
    auto b_out = csv::open_out(dir / "beta.csv");
    b_out << "s,t,tstt_s,tstt_t,tstt_st,beta\n";
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t)
            if (p.pair_valid[s * n + t])
                b_out << s + 1 << ',' << t + 1 << ',' << csv::fmt_exact(p.disrupted_tstt[s]) << ','
                      << csv::fmt_exact(p.disrupted_tstt[t]) << ',' << csv::fmt_exact(p.joint_tstt[s * n + t]) << ','
                      << csv::fmt_exact(set.B[s * n + t]) << '\n';
}

CoefficientSet load_coefficients(const std::filesystem::path& dir) {
    const auto c_table = csv::read(dir / "c.csv");
    csv::require_header(c_table, {"link_id", "e", "baseline_tstt", "disrupted_tstt", "c"});
    const auto n = c_table.rows.size();
    CoefficientSet set;
    auto& p = set.provenance;
    set.c.assign(n, 0.0);
    p.e.assign(n, 0.0);
    p.disrupted_tstt.assign(n, 0.0);
    std::vector<bool> seen(n, false);
    for (const auto& row : c_table.rows) {
        const auto id = csv::to_int(c_table, row, 0);
        if (id < 1 || static_cast<std::size_t>(id) > n || seen[id - 1])
            throw ParseError(c_table.file, row.line, "link ids must be unique and contiguous 1.." + std::to_string(n));
        seen[id - 1] = true;
        p.e[id - 1] = csv::to_double(c_table, row, 1);
        p.baseline_tstt = csv::to_double(c_table, row, 2);
        p.disrupted_tstt[id - 1] = csv::to_double(c_table, row, 3);
        set.c[id - 1] = csv::to_double(c_table, row, 4);
    }

    const auto b_table = csv::read(dir / "beta.csv");
    csv::require_header(b_table, {"s", "t", "tstt_s", "tstt_t", "tstt_st", "beta"});
    set.B.assign(n * n, 0.0);
    p.joint_tstt.assign(n * n, std::numeric_limits<double>::quiet_NaN());
    p.pair_valid.assign(n * n, 0);
    for (const auto& row : b_table.rows) {
        const auto s = csv::to_int(b_table, row, 0);
        const auto t = csv::to_int(b_table, row, 1);
        if (s < 1 || t < 1 || static_cast<std::size_t>(s) > n || static_cast<std::size_t>(t) > n || s == t)
            throw ParseError(b_table.file, row.line, "pair (" + std::to_string(s) + "," + std::to_string(t) + ") out of range");
        const auto i = static_cast<std::size_t>(s - 1);
        const auto j = static_cast<std::size_t>(t - 1);
        const double beta = csv::to_double(b_table, row, 5);
        const double joint = csv::to_double(b_table, row, 4);
        if (p.pair_valid[i * n + j] && set.B[i * n + j] != beta)
            throw ParseError(b_table.file, row.line,
                             "asymmetric interaction for pair (" + std::to_string(s) + "," + std::to_string(t) + ")");
        set.B[i * n + j] = set.B[j * n + i] = beta;
        p.joint_tstt[i * n + j] = p.joint_tstt[j * n + i] = joint;
        p.pair_valid[i * n + j] = p.pair_valid[j * n + i] = 1;
    }
    return set;
}

}  // namespace qvuln
