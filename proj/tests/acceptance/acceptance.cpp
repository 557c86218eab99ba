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


// Acceptance suite. Usage: qvuln_acceptance <C1..C9|all>
//
// Every criterion prints its individual checks followed by exactly one summary line that starts
// with PASS or FAIL. The exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/statistics/bivariate_statistics.hpp>

#include "nd_exact_ue.hpp"
#include "pascal.hpp"
#include "qvuln/annealer.hpp"
#include "qvuln/assignment.hpp"
#include "qvuln/baselines.hpp"
#include "qvuln/coefficients.hpp"
#include "qvuln/detail/sqa_engine.hpp"
#include "qvuln/harness.hpp"
#include "qvuln/hybrid.hpp"
#include "qvuln/oracle.hpp"
#include "test_support.hpp"

using namespace qvuln;

namespace {

using Clock = std::chrono::steady_clock;

class Criterion {
 public:
    Criterion(std::string id, std::string title) : id_(std::move(id)), title_(std::move(title)), start_(Clock::now()) {}

    void check(bool ok, const std::string& what) {
        std::printf("  [%s] %s\n", ok ? " ok " : "MISS", what.c_str());
        passed_ = passed_ && ok;
    }

    void runtime_below(double limit_s) {
        const double t = seconds();
        check(t < limit_s, "runtime " + fmt(t, 2) + " s < " + fmt(limit_s, 0) + " s");
    }

    double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

    bool finish() const {
        std::printf("%s %s %s (%.2f s)\n", passed_ ? "PASS" : "FAIL", id_.c_str(), title_.c_str(), seconds());
        std::fflush(stdout);
        return passed_;
    }

    static std::string fmt(double v, int digits) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", digits, v);
        return buf;
    }

 private:
    std::string id_;
    std::string title_;
    Clock::time_point start_;
    bool passed_ = true;
};

std::string links_text(const std::vector<int>& ids) { return "{" + format_links(ids, ',') + "}"; }

const CoefficientSet& fixture() {
    static const CoefficientSet set = load_coefficients(testing::nd_dir());
    return set;
}

double fixture_lambda() { return 3.0 * max_abs_coefficient(fixture().c, fixture().B, false); }

const std::map<int, std::vector<int>> kPublishedTop1 = {
    {2, {16, 19}}, {3, {9, 16, 19}}, {4, {8, 9, 16, 19}}, {5, {7, 9, 15, 16, 19}}};

constexpr double kPublishedBaselineTstt = 5749.262154;

double relative_gap(double energy, double optimum) { return (energy - optimum) / std::abs(optimum); }

// ---------------------------------------------------------------------------

bool c1_fixture_regression() {
    Criterion c("C1", "fixture regression: exact enumeration reproduces the published ranking");
    const std::map<int, double> published_energy = {{2, -60056.0}, {3, -105114.0}, {4, -151143.0}, {5, -206516.0}};
    for (int k = 2; k <= 5; ++k) {
        const auto result = enumerate_exact(fixture().instance(k, 5000.0, false), k);
        c.check(result.optimum == kPublishedTop1.at(k),
                "k=" + std::to_string(k) + " top-1 " + links_text(result.optimum) + " expected " +
                    links_text(kPublishedTop1.at(k)));
        const double diff = std::abs(result.optimum_energy - published_energy.at(k));
        c.check(diff <= 3.0, "k=" + std::to_string(k) + " energy " + Criterion::fmt(result.optimum_energy, 2) +
                                 " vs " + Criterion::fmt(published_energy.at(k), 0) + " (|diff| " +
                                 Criterion::fmt(diff, 2) + " <= 3)");
        if (k == 2) {
            const std::vector<std::vector<int>> order{{16, 19}, {7, 18}, {9, 15}, {4, 19}, {7, 10}};
            bool same = result.ranking.size() == order.size();
            std::string got;
            for (std::size_t i = 0; i < result.ranking.size(); ++i) {
                got += links_text(result.ranking[i].links);
                if (i < order.size() && result.ranking[i].links != order[i]) same = false;
            }
            c.check(same, "k=2 top-5 order " + got);
        }
    }
    c.runtime_below(5.0);
    return c.finish();
}

bool c2_sqa_solvability() {
    Criterion c("C2", "SQA solvability on the fixture at the published schedule");
    AnnealParams p;  // T0 = 10, gamma0 = 10, nu = 0.95, M = 10, 50 sweeps
    for (int k : {2, 3}) {
        const auto q = fixture().instance(k, fixture_lambda(), false);
        const auto oracle = enumerate_exact(q, k, 1);
        int hits = 0;
        double worst_gap = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            p.seed = seed;
            const auto r = run_sqa(q, p);
            hits += selected_links(r.best_u) == oracle.optimum;
            worst_gap = std::max(worst_gap, relative_gap(r.best_energy, oracle.optimum_energy));
        }
        c.check(hits >= 18, "k=" + std::to_string(k) + " optimum found in " + std::to_string(hits) + "/20 runs (>= 18)");
        c.check(worst_gap <= 0.03, "k=" + std::to_string(k) + " worst energy gap " +
                                       Criterion::fmt(100.0 * worst_gap, 3) + "% (<= 3%)");
    }
    c.runtime_below(30.0);
    return c.finish();
}

bool c4_lambda_stability();

bool c3_ue_baseline(const std::function<bool()>& c1, const std::function<bool()>& c2, const std::function<bool()>& c4) {
    Criterion c("C3", "UE baseline TSTT on Nguyen-Dupuis medium demand");
    const auto net = builtin_nguyen_dupuis(DemandLevel::kMedium);
    const auto sol = solve_ue(net, DisruptionScenario::none(net.link_count()), {}, {500, 1e-6});
    const double dev = (sol.tstt - kPublishedBaselineTstt) / kPublishedBaselineTstt;
    c.check(sol.converged, "converged to relative gap " + Criterion::fmt(sol.relative_gap * 1e6, 3) + "e-6 in " +
                               std::to_string(sol.iterations) + " iterations");
    const bool within = std::abs(dev) <= 0.01;
    c.check(true, "TSTT " + Criterion::fmt(sol.tstt, 6) + " pcu*h; independent path-based equilibrium " +
                      Criterion::fmt(oracle_values::kNdBaselineTstt, 6));
    if (within) {
        c.check(true, "within 1% of " + Criterion::fmt(kPublishedBaselineTstt, 6));
    } else {
        // Deviation path: documented in a run record, and the fixture-based criteria must pass.
        RunRecord record;
        record.command = "acceptance C3";
        record.notes.push_back("baseline TSTT " + Criterion::fmt(sol.tstt, 6) + " deviates " +
                               Criterion::fmt(100.0 * dev, 3) + "% from reference " +
                               Criterion::fmt(kPublishedBaselineTstt, 6));
        const auto path = testing::scratch_dir("acceptance_c3") / "run.json";
        record.write(path);
        c.check(std::filesystem::exists(path),
                "deviation " + Criterion::fmt(100.0 * dev, 3) + "% recorded in " + path.string());
        std::printf("  -- deviation path: re-running C1, C2 and C4\n");
        const bool ok1 = c1(), ok2 = c2(), ok4 = c4();
        c.check(ok1, "C1 passes");
        c.check(ok2, "C2 passes");
        c.check(ok4, "C4 passes");
    }
    return c.finish();
}

bool c4_lambda_stability() {
    Criterion c("C4", "top-1 sets stable across penalty values");
    ExperimentConfig cfg;
    cfg.coefficients = testing::nd_dir();
    cfg.include_linear = false;
    cfg.k_list = {2, 3, 4, 5};
    const std::vector<std::vector<double>> grids{{2000, 3500, 5000, 8000}, {1e2, 1e3, 1e4, 1e5}};
    for (const auto& grid : grids) {
        const auto sweep = sweep_lambda(cfg, fixture(), grid);
        std::string grid_text;
        for (double l : grid) grid_text += (grid_text.empty() ? "" : ",") + Criterion::fmt(l, 0);
        for (std::size_t b = 0; b < sweep.ks.size(); ++b) {
            std::string tops;
            for (std::size_t a = 0; a < grid.size(); ++a) {
                const auto& cell = sweep.cells[a][b];
                tops += " " + (cell.report && !cell.report->ranking.empty()
                                   ? links_text(cell.report->ranking.front().links)
                                   : std::string("error"));
            }
            c.check(sweep.stable_per_k[b], "lambda {" + grid_text + "} k=" + std::to_string(sweep.ks[b]) + ":" + tops);
        }
    }
    c.runtime_below(60.0);
    return c.finish();
}

double spearman(std::vector<double> a, std::vector<double> b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            for (std::size_t t = i; t <= j; ++t) r[idx[t]] = 0.5 * static_cast<double>(i + j) + 1.0;
            i = j + 1;
        }
        return r;
    };
    return boost::math::statistics::correlation_coefficient(ranks(a), ranks(b));
}

bool c5_coefficient_recomputation() {
    Criterion c("C5", "coefficient recomputation against the published tables");
    const auto net = builtin_nguyen_dupuis();
    auto set = compute_c(net, {}, fixture().provenance.e);
    const double rho = spearman(set.c, fixture().c);
    c.check(rho >= 0.9, "Spearman(c, published c) = " + Criterion::fmt(rho, 4) + " (>= 0.9)");
    const std::pair<int, int> pairs[] = {{16, 19}, {2, 17}};
    const auto invalid = compute_beta(set, net, {}, {}, pairs);
    c.check(invalid == 0, "both joint equilibria converged");
    const double b1619 = set.B[15 * 19 + 18], b217 = set.B[1 * 19 + 16];
    c.check(b1619 > 0.0, "beta(16,19) = " + Criterion::fmt(b1619, 2) + " synergistic (published +30027.43)");
    c.check(b217 < 0.0, "beta(2,17) = " + Criterion::fmt(b217, 2) + " substitutive (published -4601.28)");
    c.runtime_below(300.0);
    return c.finish();
}

bool c6_properties() {
    Criterion c("C6", "property suites");

    // (a) descent and conservation on random networks
    {
        int descent_ok = 0, conservation_ok = 0;
        double worst_increase = 0.0, worst_conservation = 0.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto net = testing::random_network(1000 + seed);
            const auto sol = solve_ue(net, DisruptionScenario::none(net.link_count()), {}, {1000, 1e-9});
            bool mono = true;
            for (std::size_t i = 1; i < sol.objective_trace.size(); ++i) {
                const double rise = (sol.objective_trace[i] - sol.objective_trace[i - 1]) / sol.objective_trace[i - 1];
                worst_increase = std::max(worst_increase, rise);
                if (rise > 1e-9) mono = false;
            }
            const double cons = conservation_residual(net, sol);
            worst_conservation = std::max(worst_conservation, cons);
            descent_ok += mono;
            conservation_ok += cons <= 1e-9;
        }
        c.check(descent_ok == 50, "(a) Beckmann descent on " + std::to_string(descent_ok) +
                                      "/50 networks (worst relative rise " + std::to_string(worst_increase) + ")");
        c.check(conservation_ok == 50, "(a) flow conservation on " + std::to_string(conservation_ok) +
                                           "/50 networks (worst " + std::to_string(worst_conservation) + ")");
    }

    // (b) provenance identity on every computed pair
    {
        const auto net = builtin_nguyen_dupuis();
        auto set = compute_c(net, {}, fixture().provenance.e);
        compute_beta(set, net, {});
        double worst = provenance_residual(set);
        std::size_t pairs = 0;
        for (auto v : set.provenance.pair_valid) pairs += v;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto rnd = testing::random_network(2000 + seed);
            auto rs = compute_c(rnd, {}, sample_residual_ratios(rnd.link_count(), 0.3, 0.7, seed));
            compute_beta(rs, rnd, {});
            worst = std::max(worst, provenance_residual(rs));
            for (auto v : rs.provenance.pair_valid) pairs += v;
        }
        c.check(worst <= 1e-9, "(b) baseline + c_s + c_t + beta_st = TSTT_st on " + std::to_string(pairs / 2) +
                                   " pairs (worst relative " + std::to_string(worst) + ")");
    }

    // (c) incremental flip energy against full recomputation of the extended energy
    {
        detail::Rng rng(7);
        int flips = 0, agree = 0;
        double worst = 0.0;
        for (auto mode : {CouplingMode::kBinaryLiteral, CouplingMode::kSpin}) {
            for (std::uint64_t inst = 0; inst < 5; ++inst) {
                const auto q = testing::random_qubo(15, 4, 300 + inst, inst % 2 == 0);
                const int M = 5;
                const double gamma = 0.5 + 20.0 * detail::uniform01(rng);
                detail::QuboModel model(q, M);
                Bits init(q.n, 0);
                for (auto& b : init) b = detail::uniform01(rng) < 0.5;
                model.reset(init);
                ReplicaState state = ReplicaState::replicate(q, init, M);
                for (int i = 0; i < 100; ++i) {
                    const auto m = detail::below(rng, M);
                    const auto s = detail::below(rng, q.n);
                    const double before = sqa_energy(state, q, gamma, mode);
                    const double d_classical = model.delta(m, s);
                    const double d = d_classical + detail::coupling_delta(mode, gamma, state.slices[m][s],
                                                                          state.slices[(m + M - 1) % M][s],
                                                                          state.slices[(m + 1) % M][s]);
                    model.flip(m, s, d_classical);
                    state.slices[m][s] ^= 1;
                    const double after = sqa_energy(state, q, gamma, mode);
                    const double err = std::abs(d - (after - before)) / std::max(1.0, std::abs(after));
                    worst = std::max(worst, err);
                    agree += err <= 1e-9;
                    ++flips;
                }
            }
        }
        c.check(agree == flips && flips == 1000, "(c) single-flip delta matches recomputation on " +
                                                     std::to_string(agree) + "/" + std::to_string(flips) +
                                                     " flips (worst relative " + std::to_string(worst) + ")");
    }

    // (d) no sampler beats exhaustive enumeration
    {
        std::vector<QuboInstance> instances;
        for (int k = 1; k <= 9; ++k) instances.push_back(fixture().instance(k, fixture_lambda(), false));
        for (int k = 1; k <= 5; ++k) instances.push_back(synth_instance(20, k, 40 + static_cast<std::uint64_t>(k)));
        for (int k = 1; k <= 3; ++k) instances.push_back(synth_instance(30, k, 60 + static_cast<std::uint64_t>(k)));
        for (int k = 2; k <= 4; ++k) instances.push_back(testing::random_qubo(14, k, 80 + static_cast<std::uint64_t>(k)));
        int runs = 0, violations = 0;
        for (const auto& q : instances) {
            const double opt = enumerate_exact(q, q.k, 1, 100000).optimum_energy;
            const double slack = 1e-9 * std::max(1.0, std::abs(opt));
            auto judge = [&](double energy) {
                ++runs;
                violations += energy < opt - slack;
            };
            for (std::uint64_t seed = 0; seed < 2; ++seed) {
                AnnealParams p;
                p.seed = seed;
                Leaderboard board(5, q.k);
                (void)run_sqa(q, p, &board);
                for (const auto& e : board.entries()) judge(qubo_energy(q, e.u));
                Leaderboard sa_board(5, q.k);
                (void)run_sa(q, p, &sa_board);
                for (const auto& e : sa_board.entries()) judge(qubo_energy(q, e.u));
                for (auto m : {Method::kGa, Method::kPso, Method::kSa, Method::kTs}) {
                    HeuristicParams h;
                    h.method = m;
                    h.seed = seed;
                    const auto r = run_baseline(q, h);
                    if (selected_links(r.best_u).size() == static_cast<std::size_t>(q.k)) judge(r.best_energy);
                    else ++violations;
                }
            }
        }
        c.check(violations == 0, "(d) oracle dominance: " + std::to_string(violations) + " violations in " +
                                     std::to_string(runs) + " sampler results over " +
                                     std::to_string(instances.size()) + " instances");
    }
    return c.finish();
}

bool c7_baseline_quality() {
    Criterion c("C7", "classical baselines reach the fixture optima");
    std::map<int, double> optimum;
    for (int k = 2; k <= 5; ++k) optimum[k] = enumerate_exact(fixture().instance(k, fixture_lambda(), false), k).optimum_energy;
    for (auto m : {Method::kGa, Method::kPso, Method::kSa, Method::kTs}) {
        const auto started = Clock::now();
        double gap_sum = 0.0;
        int runs = 0, exact = 0;
        for (int k = 2; k <= 5; ++k) {
            const auto q = fixture().instance(k, fixture_lambda(), false);
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                HeuristicParams h;
                h.method = m;
                h.seed = seed;
                const auto r = run_baseline(q, h);
                const double gap = relative_gap(r.best_energy, optimum[k]);
                gap_sum += gap;
                exact += gap <= 1e-12;
                ++runs;
            }
        }
        const double mean = gap_sum / runs;
        const double secs = std::chrono::duration<double>(Clock::now() - started).count();
        c.check(mean <= 0.03, std::string(to_string(m)) + " mean gap " + Criterion::fmt(100.0 * mean, 3) +
                                  "% over " + std::to_string(runs) + " runs (" + std::to_string(exact) +
                                  " exact, " + Criterion::fmt(secs, 2) + " s)");
    }
    c.runtime_below(300.0);
    return c.finish();
}

bool c8_scalability() {
    Criterion c("C8", "scalability trends on synthetic instances");
    std::vector<std::uint64_t> seeds(15);
    std::iota(seeds.begin(), seeds.end(), 0);
    GaParams ga;
    const auto result = scalability_run({{76, {}}, {914, {}}}, 10, seeds, AnnealParams{}, &ga);
    for (const auto& summary : result.summaries) {
        std::string energies, sqa_times, ga_times;
        for (const auto& p : result.points) {
            if (p.n != summary.n) continue;
            energies += " " + Criterion::fmt(p.best_energy, 0);
            sqa_times += " " + Criterion::fmt(1e3 * p.sqa_seconds, 1);
            ga_times += " " + Criterion::fmt(1e3 * p.ga_seconds, 1);
        }
        const auto n = std::to_string(summary.n);
        c.check(summary.energy_decreasing, "n=" + n + " SQA best energy strictly decreasing:" + energies);
        c.check(summary.sqa_cv <= 0.20, "n=" + n + " SQA time CV " + Criterion::fmt(summary.sqa_cv, 3) +
                                            " (<= 0.20), median ms:" + sqa_times);
        c.check(summary.ga_increasing, "n=" + n + " GA time strictly increasing, median ms:" + ga_times);
    }
    write_scalability_csv(result, testing::scratch_dir("acceptance_c8") / "scalability.csv");
    c.runtime_below(900.0);
    return c.finish();
}

bool c9_growth() {
    Criterion c("C9", "combinatorial growth of the search space");
    const auto tri = oracle_values::pascal_triangle(76);
    const auto nd = count_combinations(19, 2);
    c.check(nd.size() == 3 && nd[2].count == 171 && nd[2].count == tri[19][2], "C(19,2) = " + nd[2].count.str());
    const auto rows = count_combinations(76, 10);
    BigInt independent = 0;
    bool rows_match = true;
    for (const auto& row : rows) {
        independent += tri[76][row.k];
        rows_match = rows_match && row.count == tri[76][row.k] && row.cumulative == independent;
    }
    c.check(rows_match && rows.size() == 11, "C(76,k) and running sums for k = 0..10 match Pascal's triangle");
    const BigInt total = rows.back().cumulative;
    const bool in_range = total >= BigInt(100'000'000'000) && total <= BigInt(1'000'000'000'000);
    c.check(in_range, "sum_{k<=10} C(76,k) = " + total.str() + " within [1e11, 1e12]");
    c.check(true, "C(76,10) alone = " + rows.back().count.str());
    c.runtime_below(1.0);
    return c.finish();
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<std::string, std::function<bool()>> criteria = {
        {"C1", c1_fixture_regression},
        {"C2", c2_sqa_solvability},
        {"C3", [] { return c3_ue_baseline(c1_fixture_regression, c2_sqa_solvability, c4_lambda_stability); }},
        {"C4", c4_lambda_stability},
        {"C5", c5_coefficient_recomputation},
        {"C6", c6_properties},
        {"C7", c7_baseline_quality},
        {"C8", c8_scalability},
        {"C9", c9_growth},
    };
    std::vector<std::string> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "all") {
            for (const auto& [id, fn] : criteria) selected.push_back(id);
        } else if (criteria.count(arg)) {
            selected.push_back(arg);
        } else {
            std::fprintf(stderr, "unknown criterion '%s' (C1..C9 or all)\n", arg.c_str());
            return 2;
        }
    }
    if (selected.empty()) {
        std::fprintf(stderr, "usage: %s <C1..C9|all>...\n", argv[0]);
        return 2;
    }
    bool all_ok = true;
    for (const auto& id : selected) all_ok = criteria.at(id)() && all_ok;
    return all_ok ? 0 : 1;
}
