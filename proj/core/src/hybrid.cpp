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

#include "qvuln/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "qvuln/detail/common.hpp"
#include "qvuln/detail/csv.hpp"
#include "qvuln/detail/sqa_engine.hpp"
#include "qvuln/error.hpp"

namespace qvuln {

HybridMode parse_hybrid_mode(std::string_view text) {
    if (text == "coefficient") return HybridMode::kCoefficient;
    if (text == "direct") return HybridMode::kDirect;
    throw Error("unknown mode '" + std::string(text) + "' (coefficient|direct)");
}

std::string_view to_string(HybridMode mode) { return mode == HybridMode::kDirect ? "direct" : "coefficient"; }

std::vector<double> ResidualSource::resolve(std::size_t link_count) const {
    if (sampled) return sample_residual_ratios(link_count, lo, hi, seed);
    if (pinned.size() != link_count)
        throw ValidationError("pinned residual ratios: expected " + std::to_string(link_count) + ", got " +
                              std::to_string(pinned.size()));
    return pinned;
}

void HybridConfig::validate(std::size_t link_count) const {
    if (k < 1 || static_cast<std::size_t>(k) > link_count) throw ValidationError("k must lie in [1, number of links]");
    if (e.sampled && !(0.0 <= e.lo && e.lo <= e.hi && e.hi <= 1.0))
        throw ValidationError("residual ratio interval must lie within [0, 1]");
    if (seeds.empty()) throw ValidationError("seed list must not be empty");
    if (!(lambda >= 0.0) || !(lambda_multiplier > 0.0)) throw ValidationError("lambda settings must be positive");
    anneal.validate();
}

// ---------------------------------------------------------------------------

TsttCache::TsttCache(TsttEvaluator evaluate, std::vector<double> e) : evaluate_(std::move(evaluate)), e_(std::move(e)) {}

double TsttCache::get(const Bits& u) {
    std::string key(u.begin(), u.end());
    {
        std::lock_guard lock(mutex_);
        if (const auto it = values_.find(key); it != values_.end()) return it->second;
    }
    DisruptionScenario scenario{u, e_, static_cast<int>(std::count(u.begin(), u.end(), 1))};
    double value;
    try {
        value = evaluate_(scenario);
    } catch (const InfeasibleError&) {
        value = std::numeric_limits<double>::infinity();
    }
    ++solves_;
    std::lock_guard lock(mutex_);
    values_[std::move(key)] = value;
    return value;
}

std::size_t TsttCache::size() const {
    std::lock_guard lock(mutex_);
    return values_.size();
}

double surrogate_tstt(const CoefficientSet& set, std::span<const int> links) {
    const auto n = set.n();
    double total = set.provenance.baseline_tstt;
    for (std::size_t a = 0; a < links.size(); ++a) {
        const auto s = static_cast<std::size_t>(links[a] - 1);
        total += set.c[s];
        for (std::size_t b = a + 1; b < links.size(); ++b) total += set.B[s * n + static_cast<std::size_t>(links[b] - 1)];
    }
    return total;
}

namespace {

double elapsed(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Classical energy -TSTT(u) + lambda (sum u - k)^2 backed by the shared cache.
class DirectModel {
 public:
    DirectModel(TsttCache& cache, std::size_t n, int k, double lambda, double scale, int M)
        : cache_(cache), n_(n), k_(k), lambda_(lambda), scale_(scale), bits_(M), energy_(M, 0.0) {}

    std::size_t n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    double natural_scale() const noexcept { return scale_; }

    void reset(const Bits& u) {
        const double e = energy_of(u);
        for (std::size_t m = 0; m < bits_.size(); ++m) {
            bits_[m] = u;
            energy_[m] = e;
        }
    }

    double delta(std::size_t m, std::size_t s) {
        Bits& u = bits_[m];
        u[s] ^= 1;
        const double next = energy_of(u);
        u[s] ^= 1;
        const double current = energy_[m];
        if (std::isinf(current) && std::isinf(next)) return 0.0;
        return next - current;
    }

    void flip(std::size_t m, std::size_t s, double) {
        bits_[m][s] ^= 1;
        energy_[m] = energy_of(bits_[m]);
    }

    double energy(std::size_t m) const noexcept { return energy_[m]; }
    const Bits& bits(std::size_t m) const noexcept { return bits_[m]; }

 private:
    double energy_of(const Bits& u) {
        const double excess = static_cast<double>(std::count(u.begin(), u.end(), 1)) - k_;
        return -cache_.get(u) + lambda_ * excess * excess;
    }

    TsttCache& cache_;
    std::size_t n_;
    int k_;
    double lambda_;
    double scale_;
    std::vector<Bits> bits_;
    std::vector<double> energy_;
};

}  // namespace

CriticalSetReport run_coefficient_mode(const CoefficientSet& coefficients, const HybridConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    config.validate(coefficients.n());
    const double scale = max_abs_coefficient(coefficients.c, coefficients.B, config.include_linear);
    const double lambda = config.lambda > 0.0 ? config.lambda : config.lambda_multiplier * (scale > 0.0 ? scale : 1.0);
    const QuboInstance q = coefficients.instance(config.k, lambda, config.include_linear);

    Leaderboard board(config.top_n, config.k);
    run_sqa_seeds(q, config.anneal, config.seeds, config.threads, &board);

    CriticalSetReport report;
    report.k = config.k;
    report.mode = HybridMode::kCoefficient;
    report.lambda = lambda;
    report.seeds = config.seeds;
    for (const auto& entry : board.entries())
        report.ranking.push_back({entry.links, qubo_energy(q, entry.u), surrogate_tstt(coefficients, entry.links)});
    report.wall_time = elapsed(started);
    return report;
}

CriticalSetReport run_coefficient_mode(const Network& network, const HybridConfig& config) {
    const auto e = config.e.resolve(network.link_count());
    auto set = compute_c(network, config.bpr, e, config.ue, config.threads);
    compute_beta(set, network, config.bpr, config.ue, {}, config.threads);
    set.provenance.seed = config.e.sampled ? config.e.seed : 0;
    auto report = run_coefficient_mode(set, config);
    report.ue_solves = 1 + set.n() + set.n() * (set.n() - 1) / 2;
    return report;
}

CriticalSetReport run_direct_mode(TsttCache& cache, std::size_t link_count, double scale, const HybridConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    config.validate(link_count);
    const double lambda = config.lambda > 0.0 ? config.lambda : config.lambda_multiplier * scale;
    const std::size_t solves_before = cache.solves();

    std::vector<Leaderboard> boards(config.seeds.size(), Leaderboard(config.top_n, config.k));
    detail::parallel_for(config.seeds.size(), config.threads, [&](std::size_t i) {
        AnnealParams p = config.anneal;
        p.seed = config.seeds[i];
        DirectModel model(cache, link_count, config.k, lambda, scale, p.M);
        detail::anneal(model, p, &boards[i]);
    });
    Leaderboard board(config.top_n, config.k);
    for (const auto& b : boards) board.merge(b);

    CriticalSetReport report;
    report.k = config.k;
    report.mode = HybridMode::kDirect;
    report.lambda = lambda;
    report.seeds = config.seeds;
    for (const auto& entry : board.entries()) {
        const double t = cache.get(entry.u);
        report.ranking.push_back({entry.links, -t, t});
    }
    report.ue_solves = cache.solves() - solves_before;
    report.wall_time = elapsed(started);
    return report;
}

CriticalSetReport run_direct_mode(const Network& network, const HybridConfig& config) {
    const auto e = config.e.resolve(network.link_count());
    TsttCache cache(ue_evaluator(network, config.bpr, config.inner_ue), e);
    const double baseline = cache.get(Bits(network.link_count(), 0));
    return run_direct_mode(cache, network.link_count(), baseline, config);
}

std::vector<SurfaceRow> tstt_surface(const Network& network, const std::vector<CriticalSetReport>& reports,
                                     std::span<const double> e, const BprParams& bpr, const UeSettings& ue) {
    const std::vector<double> ratios(e.begin(), e.end());
    std::vector<SurfaceRow> rows;
    rows.push_back({0, 0, {}, solve_ue(network, DisruptionScenario::none(network.link_count()), bpr, ue).tstt});
    for (const auto& report : reports)
        for (std::size_t r = 0; r < report.ranking.size(); ++r) {
            const auto& links = report.ranking[r].links;
            const auto scenario = DisruptionScenario::of_links(links, ratios);
            rows.push_back({report.k, static_cast<int>(r + 1), links, solve_ue(network, scenario, bpr, ue).tstt});
        }
    return rows;
}

std::string report_json(const CriticalSetReport& report) {
    nlohmann::json j;
    j["k"] = report.k;
    j["mode"] = std::string(to_string(report.mode));
    j["lambda"] = report.lambda;
    j["seeds"] = report.seeds;
    j["ue_solves"] = report.ue_solves;
    j["wall_time"] = report.wall_time;
    j["ranking"] = nlohmann::json::array();
    for (const auto& r : report.ranking)
        j["ranking"].push_back({{"links", r.links}, {"energy", r.energy}, {"tstt", r.tstt}});
    return j.dump(2);
}

void write_report_csv(const std::vector<CriticalSetReport>& reports, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "k,rank,links,energy,tstt\n";
    for (const auto& report : reports)
        for (std::size_t r = 0; r < report.ranking.size(); ++r)
            out << report.k << ',' << r + 1 << ',' << format_links(report.ranking[r].links) << ','
                << csv::fmt(report.ranking[r].energy) << ',' << csv::fmt(report.ranking[r].tstt) << '\n';
}

void write_energy_histogram_csv(const std::vector<std::pair<std::vector<int>, double>>& energies,
                                const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "set,energy\n";
    for (const auto& [links, energy] : energies) out << format_links(links) << ',' << csv::fmt(energy) << '\n';
}

void write_surface_csv(const std::vector<SurfaceRow>& rows, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "k,rank,tstt\n";
    for (const auto& row : rows) out << row.k << ',' << row.rank << ',' << csv::fmt(row.tstt) << '\n';
}

}  // namespace qvuln
