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


// qvuln command-line driver. Every invocation writes run.json into the output directory next to
// the artifacts it produced.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qvuln/annealer.hpp"
#include "qvuln/assignment.hpp"
#include "qvuln/baselines.hpp"
#include "qvuln/coefficients.hpp"
#include "qvuln/error.hpp"
#include "qvuln/harness.hpp"
#include "qvuln/hybrid.hpp"
#include "qvuln/network.hpp"
#include "qvuln/oracle.hpp"
#include "qvuln/qubo.hpp"

namespace fs = std::filesystem;
using namespace qvuln;

namespace {

// Published baseline for the built-in network at medium demand; ue solve reports its deviation.
constexpr double kReferenceBaselineTstt = 5749.262154;

struct Globals {
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::string config;
    std::string mode;
    std::string include_linear;
};

struct NetworkOptions {
    std::string path;
    std::string format = "native-csv";
    std::string demand = "medium";

    void attach(CLI::App* app) {
        app->add_option("--network", path, "Network file or directory (default: built-in Nguyen-Dupuis)");
        app->add_option("--format", format, "native-csv or tntp")->capture_default_str();
        app->add_option("--demand", demand, "Demand level of the built-in network: low, medium, high")
            ->capture_default_str();
    }

    NetworkSpec spec() const {
        NetworkSpec s;
        s.builtin = path.empty();
        s.path = path;
        s.format = parse_network_format(format);
        s.demand = parse_demand_level(demand);
        return s;
    }
};

struct InstanceOptions {
    std::string coefficients;
    std::string synthetic;
    int k = 2;
    double lambda = 0.0;
    double multiplier = 3.0;

    void attach(CLI::App* app) {
        app->add_option("--coefficients", coefficients, "Directory with c.csv and beta.csv");
        app->add_option("--instance", synthetic, "Synthetic instance JSON");
        app->add_option("-k", k, "Number of disrupted links")->capture_default_str();
        app->add_option("--lambda", lambda, "Cardinality penalty (default: multiplier x max |coefficient|)");
        app->add_option("--lambda-multiplier", multiplier, "Penalty multiplier")->capture_default_str();
    }
};

struct AnnealOptions {
    AnnealParams p;
    std::string coupling = "binary";

    void attach(CLI::App* app) {
        app->add_option("--T0", p.T0, "Initial temperature, in units of the energy scale")->capture_default_str();
        app->add_option("--gamma0", p.gamma0, "Initial transverse field")->capture_default_str();
        app->add_option("--nu", p.nu, "Decay rate")->capture_default_str();
        app->add_option("-M,--slices", p.M, "Trotter slices")->capture_default_str();
        app->add_option("--iters", p.n_iter, "Sweeps")->capture_default_str();
        app->add_option("--coupling", coupling, "binary or spin")->capture_default_str();
        app->add_option("--energy-scale", p.energy_scale, "Energy unit for T and Gamma; 0 picks max |coefficient|");
    }

    AnnealParams params() const {
        AnnealParams q = p;
        q.coupling = parse_coupling_mode(coupling);
        return q;
    }
};

class Session {
 public:
    Session(const Globals& g, std::string command) : g_(g) {
        record_.command = std::move(command);
        cfg_ = g.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(g.config);
        if (!g.mode.empty()) cfg_.mode = parse_hybrid_mode(g.mode);
        if (!g.include_linear.empty()) cfg_.include_linear = parse_bool(g.include_linear);
        if (g.seed_set) cfg_.e_seed = g.seed;
        if (!g.out.empty()) cfg_.output_dir = g.out;
        else if (const char* env = std::getenv("QVULN_OUT"); env && *env && g.config.empty()) cfg_.output_dir = env;
        fs::create_directories(cfg_.output_dir);
    }

    ExperimentConfig& config() { return cfg_; }
    RunRecord& record() { return record_; }
    fs::path out(const std::string& name) const { return cfg_.output_dir / name; }
    std::uint64_t seed() const { return g_.seed; }

    void timed(const std::string& step, const std::function<void()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        record_.wall_times.emplace_back(step, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }

    void output(const std::string& name, const fs::path& path) {
        record_.add_output(name, path);
        std::cout << "wrote " << path.string() << '\n';
    }

    int finish(int status = 0) {
        record_.config_json = cfg_.to_json();
        if (status) record_.status = "failed";
        record_.write(out("run.json"));
        return status;
    }

    static bool parse_bool(const std::string& text) {
        if (text == "true" || text == "1" || text == "yes") return true;
        if (text == "false" || text == "0" || text == "no") return false;
        throw Error("expected true or false, got '" + text + "'");
    }

 private:
    const Globals& g_;
    ExperimentConfig cfg_;
    RunRecord record_;
};

QuboInstance build_instance(const InstanceOptions& o, bool include_linear) {
    if (!o.synthetic.empty()) {
        auto q = load_synthetic(o.synthetic);
        q = q.with(o.k, o.lambda > 0.0 ? o.lambda : q.lambda);
        return q;
    }
    if (o.coefficients.empty()) throw Error("pass --coefficients DIR or --instance FILE");
    const auto set = load_coefficients(o.coefficients);
    const double scale = max_abs_coefficient(set.c, set.B, include_linear);
    const double lambda = o.lambda > 0.0 ? o.lambda : o.multiplier * (scale > 0.0 ? scale : 1.0);
    return set.instance(o.k, lambda, include_linear);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

void print_report(const CriticalSetReport& r) {
    std::printf("k=%d mode=%s lambda=%g\n", r.k, std::string(to_string(r.mode)).c_str(), r.lambda);
    for (std::size_t i = 0; i < r.ranking.size(); ++i)
        std::printf("  %zu. {%s} energy %.4f tstt %.4f\n", i + 1, format_links(r.ranking[i].links).c_str(),
                    r.ranking[i].energy, r.ranking[i].tstt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qvuln: critical link sets of road networks via QUBO annealing"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    Globals g;
    app.add_option("--seed", g.seed, "Seed for sampled ratios and single runs")->each([&](const std::string&) {
        g.seed_set = true;
    });
    app.add_option("--out", g.out, "Output directory (default: $QVULN_OUT or qvuln-out)");
    app.add_option("--config", g.config, "Experiment config JSON")->check(CLI::ExistingFile);
    app.add_option("--mode", g.mode, "coefficient or direct");
    app.add_option("--include-linear", g.include_linear, "true or false");

    int status = 0;

    // net validate -----------------------------------------------------------
    auto* net = app.add_subcommand("net", "Network inspection");
    net->require_subcommand(1);
    auto* net_validate = net->add_subcommand("validate", "Check a network and report every failed invariant");
    NetworkOptions net_opts;
    net_opts.attach(net_validate);
    net_validate->callback([&] {
        Session s(g, "net validate");
        Network network;
        try {
            network = net_opts.spec().load();
        } catch (const ValidationError& e) {
            std::cout << e.what() << '\n';
            status = s.finish(1);
            return;
        }
        const auto report = validate(network);
        std::printf("%zu links, %zu nodes, %zu OD pairs\n", network.link_count(), network.node_count(),
                    network.od_pairs().size());
        for (const auto& c : report.checks)
            std::printf("  %-28s %s%s%s\n", c.name.c_str(), c.passed ? "ok" : "FAILED", c.detail.empty() ? "" : ": ",
                        c.detail.c_str());
        status = s.finish(report.ok() ? 0 : 1);
    });

    // ue solve ---------------------------------------------------------------
    auto* ue = app.add_subcommand("ue", "Traffic assignment");
    ue->require_subcommand(1);
    auto* ue_solve = ue->add_subcommand("solve", "Solve the user equilibrium");
    NetworkOptions ue_net;
    ue_net.attach(ue_solve);
    std::vector<int> disrupt;
    std::string ratios_dir;
    double uniform_ratio = 0.5;
    UeSettings ue_settings;
    std::string direction = "biconjugate";
    ue_solve->add_option("--disrupt", disrupt, "Link ids to disrupt");
    ue_solve->add_option("--ratios-from", ratios_dir, "Coefficient directory whose residual ratios are used");
    ue_solve->add_option("--ratio", uniform_ratio, "Residual ratio for every disrupted link")->capture_default_str();
    ue_solve->add_option("--gap-tol", ue_settings.gap_tol, "Relative gap tolerance")->capture_default_str();
    ue_solve->add_option("--max-iters", ue_settings.max_iters, "Iteration cap")->capture_default_str();
    ue_solve->add_option("--direction", direction, "biconjugate, conjugate or classic")->capture_default_str();
    ue_solve->callback([&] {
        Session s(g, "ue solve");
        const auto spec = ue_net.spec();
        const auto network = spec.load();
        ue_settings.direction = parse_fw_direction(direction);
        std::vector<double> e(network.link_count(), uniform_ratio);
        if (!ratios_dir.empty()) e = load_coefficients(ratios_dir).provenance.e;
        const auto scenario = disrupt.empty() ? DisruptionScenario::none(network.link_count())
                                              : DisruptionScenario::of_links(disrupt, e);
        UeSolution sol;
        s.timed("solve", [&] { sol = solve_ue(network, scenario, s.config().bpr, ue_settings); });
        std::printf("TSTT %.6f pcu*h, relative gap %.3g after %d iterations%s\n", sol.tstt, sol.relative_gap,
                    sol.iterations, sol.converged ? "" : " (not converged)");
        write_ue_csv(network, sol, s.out("flows.csv"));
        s.output("flows", s.out("flows.csv"));
        std::ofstream(s.out("ue.json")) << ue_record_json(sol, ue_settings, s.config().bpr) << '\n';
        s.output("summary", s.out("ue.json"));
        if (spec.builtin && spec.demand == DemandLevel::kMedium && disrupt.empty()) {
            const double dev = (sol.tstt - kReferenceBaselineTstt) / kReferenceBaselineTstt;
            char note[256];
            std::snprintf(note, sizeof note,
                          "baseline TSTT %.6f deviates %+.3f%% from the reference %.6f; the reference matches a "
                          "Frank-Wolfe run stopped near 50 iterations, not a converged equilibrium",
                          sol.tstt, 100.0 * dev, kReferenceBaselineTstt);
            s.record().notes.push_back(note);
            std::printf("note: %s\n", note);
        }
        status = s.finish();
    });

    // coeffs compute / load --------------------------------------------------
    auto* coeffs = app.add_subcommand("coeffs", "Impact and interaction coefficients");
    coeffs->require_subcommand(1);
    auto* coeffs_compute = coeffs->add_subcommand("compute", "Compute c and beta from equilibrium solves");
    NetworkOptions cc_net;
    cc_net.attach(coeffs_compute);
    std::vector<double> interval{0.3, 0.7};
    std::string pinned_dir;
    bool singles_only = false;
    coeffs_compute->add_option("--interval", interval, "Residual ratio interval lo hi")->expected(2)->capture_default_str();
    coeffs_compute->add_option("--ratios-from", pinned_dir, "Reuse the residual ratios stored in a coefficient directory");
    coeffs_compute->add_flag("--singles-only", singles_only, "Skip the pairwise interactions");
    coeffs_compute->callback([&] {
        Session s(g, "coeffs compute");
        const auto network = cc_net.spec().load();
        const auto& cfg = s.config();
        const auto e = pinned_dir.empty() ? sample_residual_ratios(network.link_count(), interval[0], interval[1], cfg.e_seed)
                                          : load_coefficients(pinned_dir).provenance.e;
        CoefficientSet set;
        s.timed("impacts", [&] { set = compute_c(network, cfg.bpr, e, cfg.ue, cfg.threads); });
        std::size_t invalid = 0;
        if (!singles_only)
            s.timed("interactions", [&] { invalid = compute_beta(set, network, cfg.bpr, cfg.ue, {}, cfg.threads); });
        set.provenance.seed = pinned_dir.empty() ? cfg.e_seed : 0;
        const auto dir = s.out("coefficients");
        save_coefficients(dir, set);
        s.output("coefficients", dir);
        std::printf("baseline TSTT %.6f; %zu impacts; %zu failed pairs; provenance residual %.3g\n",
                    set.provenance.baseline_tstt, set.n(), invalid, provenance_residual(set));
        if (invalid) s.record().notes.push_back(std::to_string(invalid) + " joint solves failed and were masked");
        status = s.finish();
    });
    auto* coeffs_load = coeffs->add_subcommand("load", "Summarize a coefficient directory");
    std::string load_dir;
    coeffs_load->add_option("dir", load_dir, "Directory with c.csv and beta.csv")->required();
    coeffs_load->callback([&] {
        Session s(g, "coeffs load");
        const auto set = load_coefficients(load_dir);
        const auto n = set.n();
        std::size_t pairs = 0, syn = 0, sub = 0;
        const double tol = additive_tolerance(set.provenance.baseline_tstt);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!set.provenance.pair_valid[a * n + b]) continue;
                ++pairs;
                const auto kind = classify_interaction(set.B[a * n + b], tol);
                syn += kind == Interaction::kSynergistic;
                sub += kind == Interaction::kSubstitutive;
            }
        std::printf("%zu links, baseline TSTT %.6f, max c %.4f, max |beta| %.4f\n", n, set.provenance.baseline_tstt,
                    *std::max_element(set.c.begin(), set.c.end()), max_abs_coefficient({}, set.B, false));
        std::printf("%zu pairs: %zu synergistic, %zu substitutive, %zu additive\n", pairs, syn, sub, pairs - syn - sub);
        status = s.finish();
    });

    // anneal -----------------------------------------------------------------
    auto* anneal = app.add_subcommand("anneal", "Simulated quantum annealing");
    InstanceOptions an_inst;
    AnnealOptions an_opts;
    NetworkOptions an_net;
    std::vector<std::uint64_t> an_seeds;
    an_inst.attach(anneal);
    an_opts.attach(anneal);
    an_net.attach(anneal);
    anneal->add_option("--seeds", an_seeds, "Run several seeds and report the merged ranking");
    anneal->callback([&] {
        Session s(g, "anneal");
        auto& cfg = s.config();
        auto params = an_opts.params();
        params.seed = s.seed();
        if (cfg.mode == HybridMode::kDirect) {
            if (an_inst.coefficients.empty()) throw Error("direct mode takes its residual ratios from --coefficients DIR");
            HybridConfig h = cfg.hybrid(an_inst.k, load_coefficients(an_inst.coefficients).provenance.e);
            h.anneal = params;
            h.lambda = an_inst.lambda;
            h.lambda_multiplier = an_inst.multiplier;
            h.seeds = an_seeds.empty() ? std::vector<std::uint64_t>{s.seed()} : an_seeds;
            CriticalSetReport report;
            s.timed("anneal", [&] { report = run_direct_mode(an_net.spec().load(), h); });
            print_report(report);
            std::ofstream(s.out("report.json")) << report_json(report) << '\n';
            s.output("report", s.out("report.json"));
            status = s.finish();
            return;
        }
        const auto q = build_instance(an_inst, cfg.include_linear);
        AnnealResult best;
        Leaderboard board(cfg.top_n, q.k);
        s.timed("anneal", [&] {
            if (an_seeds.empty()) best = run_sqa(q, params, &board);
            else best = run_sqa_seeds(q, params, an_seeds, cfg.threads, &board).front();
        });
        std::printf("best {%s} energy %.4f (seed %llu)\n", format_links(selected_links(best.best_u)).c_str(),
                    best.best_energy, static_cast<unsigned long long>(best.seed));
        for (std::size_t i = 0; i < board.entries().size(); ++i)
            std::printf("  %zu. {%s} %.4f\n", i + 1, format_links(board.entries()[i].links).c_str(),
                        board.entries()[i].energy);
        std::ofstream(s.out("anneal.json")) << anneal_result_json(best, to_json(params)) << '\n';
        s.output("result", s.out("anneal.json"));
        status = s.finish();
    });

    // baseline ---------------------------------------------------------------
    auto* baseline = app.add_subcommand("baseline", "Classical heuristics (ga, pso, sa, ts)");
    InstanceOptions bl_inst;
    bl_inst.attach(baseline);
    std::string method = "ga";
    baseline->add_option("--method", method, "ga, pso, sa or ts")->capture_default_str();
    baseline->callback([&] {
        Session s(g, "baseline");
        const auto q = build_instance(bl_inst, s.config().include_linear);
        HeuristicParams h = s.config().baseline;
        h.method = parse_method(method);
        h.seed = s.seed();
        AnnealResult r;
        s.timed("search", [&] { r = run_baseline(q, h); });
        std::printf("%s best {%s} energy %.4f in %.3f s\n", method.c_str(),
                    format_links(selected_links(r.best_u)).c_str(), r.best_energy, r.wall_time);
        std::ofstream(s.out("baseline.json")) << anneal_result_json(r, "{}") << '\n';
        s.output("result", s.out("baseline.json"));
        status = s.finish();
    });

    // oracle -----------------------------------------------------------------
    auto* oracle = app.add_subcommand("oracle", "Exhaustive enumeration over all k-subsets");
    InstanceOptions or_inst;
    or_inst.attach(oracle);
    std::size_t top = 5;
    std::uint64_t guard = kDefaultEnumerationGuard;
    bool histogram = false;
    oracle->add_option("--top", top, "Ranking length")->capture_default_str();
    oracle->add_option("--guard", guard, "Refuse enumerations larger than this")->capture_default_str();
    oracle->add_flag("--histogram", histogram, "Also write every subset energy");
    oracle->callback([&] {
        Session s(g, "oracle");
        const auto q = build_instance(or_inst, s.config().include_linear);
        OracleResult r;
        s.timed("enumerate", [&] { r = enumerate_exact(q, q.k, top, guard); });
        std::printf("optimum {%s} energy %.4f over %llu subsets\n", format_links(r.optimum).c_str(), r.optimum_energy,
                    static_cast<unsigned long long>(r.enumerated));
        for (std::size_t i = 0; i < r.ranking.size(); ++i)
            std::printf("  %zu. {%s} %.4f\n", i + 1, format_links(r.ranking[i].links).c_str(), r.ranking[i].energy);
        write_ranking_csv(r, s.out("ranking.csv"));
        s.output("ranking", s.out("ranking.csv"));
        if (histogram) {
            write_energy_histogram_csv(energy_distribution(q, q.k, guard), s.out("energies.csv"));
            s.output("energies", s.out("energies.csv"));
        }
        status = s.finish();
    });

    // sweep k|e|lambda -------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "Parameter sweeps");
    sweep->require_subcommand(1);
    std::string sw_coeffs;
    std::string sw_ks;
    auto sweep_common = [&](CLI::App* sub) {
        sub->add_option("--coefficients", sw_coeffs, "Coefficient directory (overrides the config)");
        sub->add_option("--k", sw_ks, "Comma-separated k values (overrides the config)");
    };
    auto apply_common = [&](ExperimentConfig& cfg) {
        if (!sw_coeffs.empty()) cfg.coefficients = sw_coeffs;
        if (!sw_ks.empty()) {
            cfg.k_list.clear();
            for (const auto& t : split_list(sw_ks)) cfg.k_list.push_back(std::stoi(t));
        }
    };
    auto write_cells = [&](Session& s, const std::vector<SweepCell>& cells, const std::string& stem) {
        std::vector<CriticalSetReport> reports;
        nlohmann::json j = nlohmann::json::array();
        for (const auto& cell : cells) {
            if (cell.report) {
                print_report(*cell.report);
                reports.push_back(*cell.report);
                j.push_back({{"label", cell.label}, {"report", nlohmann::json::parse(report_json(*cell.report))}});
            } else {
                std::printf("%s failed: %s\n", cell.label.c_str(), cell.error.c_str());
                j.push_back({{"label", cell.label}, {"error", cell.error}});
                s.record().notes.push_back(cell.label + " failed: " + cell.error);
            }
        }
        write_report_csv(reports, s.out(stem + ".csv"));
        s.output(stem, s.out(stem + ".csv"));
        std::ofstream(s.out(stem + ".json")) << j.dump(2) << '\n';
        s.output(stem + "_json", s.out(stem + ".json"));
    };

    auto* sweep_k_cmd = sweep->add_subcommand("k", "Critical sets for every k of the config");
    sweep_common(sweep_k_cmd);
    bool surface = false;
    sweep_k_cmd->add_flag("--surface", surface, "Re-solve the equilibrium for every ranked set");
    sweep_k_cmd->callback([&] {
        Session s(g, "sweep k");
        auto& cfg = s.config();
        apply_common(cfg);
        if (cfg.coefficients.empty()) cfg.e_sampled = true;
        SweepInputs inputs;
        std::vector<SweepCell> cells;
        s.timed("inputs", [&] { inputs = prepare_inputs(cfg); });
        s.timed("sweep", [&] { cells = sweep_k(cfg, inputs); });
        write_cells(s, cells, "sweep_k");
        if (surface) {
            std::vector<CriticalSetReport> reports;
            for (const auto& c : cells)
                if (c.report) reports.push_back(*c.report);
            std::vector<SurfaceRow> rows;
            s.timed("surface", [&] { rows = tstt_surface(inputs.network, reports, inputs.e, cfg.bpr, cfg.ue); });
            write_surface_csv(rows, s.out("surface.csv"));
            s.output("surface", s.out("surface.csv"));
        }
        const bool any_failed = std::any_of(cells.begin(), cells.end(), [](const SweepCell& c) { return !c.report; });
        status = s.finish(any_failed ? 1 : 0);
    });

    auto* sweep_e_cmd = sweep->add_subcommand("e", "Resample residual ratios per interval");
    sweep_common(sweep_e_cmd);
    NetworkOptions se_net;
    se_net.attach(sweep_e_cmd);
    std::vector<std::string> intervals{"0.3:0.7"};
    sweep_e_cmd->add_option("--interval", intervals, "Intervals as lo:hi")->capture_default_str();
    sweep_e_cmd->callback([&] {
        Session s(g, "sweep e");
        auto& cfg = s.config();
        apply_common(cfg);
        std::vector<std::pair<double, double>> iv;
        for (const auto& t : intervals) {
            const auto colon = t.find(':');
            if (colon == std::string::npos) throw Error("interval '" + t + "' must look like lo:hi");
            iv.emplace_back(std::stod(t.substr(0, colon)), std::stod(t.substr(colon + 1)));
        }
        std::vector<IntervalResult> results;
        s.timed("sweep", [&] { results = sweep_e(cfg, se_net.spec().load(), iv); });
        std::vector<SweepCell> cells;
        auto table = std::ofstream(s.out("sweep_e_tstt.csv"));
        table << "lo,hi,k,top_tstt\n";
        for (const auto& r : results) {
            for (std::size_t i = 0; i < r.cells.size(); ++i) {
                cells.push_back(r.cells[i]);
                table << r.lo << ',' << r.hi << ',' << r.cells[i].k << ',' << r.top_tstt[i] << '\n';
            }
        }
        s.output("top_tstt", s.out("sweep_e_tstt.csv"));
        write_cells(s, cells, "sweep_e");
        status = s.finish();
    });

    auto* sweep_l_cmd = sweep->add_subcommand("lambda", "Stability of the top-1 sets across penalties");
    sweep_common(sweep_l_cmd);
    std::vector<double> lambdas;
    sweep_l_cmd->add_option("--lambda", lambdas, "Penalty values (overrides the config)");
    sweep_l_cmd->callback([&] {
        Session s(g, "sweep lambda");
        auto& cfg = s.config();
        apply_common(cfg);
        if (!lambdas.empty()) cfg.lambdas = lambdas;
        if (cfg.lambdas.empty()) throw Error("no penalty values: pass --lambda or set 'lambda' in the config");
        const auto inputs = prepare_inputs(cfg);
        LambdaSweep result;
        s.timed("sweep", [&] { result = sweep_lambda(cfg, inputs.coefficients, cfg.lambdas); });
        std::vector<SweepCell> flat;
        for (const auto& row : result.cells) flat.insert(flat.end(), row.begin(), row.end());
        write_cells(s, flat, "sweep_lambda");
        for (std::size_t b = 0; b < result.ks.size(); ++b)
            std::printf("k=%d %s\n", result.ks[b], result.stable_per_k[b] ? "stable" : "UNSTABLE");
        if (!result.stable) s.record().notes.push_back("top-1 sets differ across penalty values");
        status = s.finish();
    });

    // scale ------------------------------------------------------------------
    auto* scale = app.add_subcommand("scale", "Scalability runs on synthetic instances");
    std::vector<std::size_t> sizes{76, 914};
    int k_max = 10;
    int scale_seeds = 15;
    bool with_ga = false;
    AnnealOptions sc_anneal;
    sc_anneal.attach(scale);
    scale->add_option("--sizes", sizes, "Instance sizes")->capture_default_str();
    scale->add_option("--k-max", k_max, "Largest k")->capture_default_str();
    scale->add_option("--runs", scale_seeds, "Seeds per point (medians are reported; seeds are interleaved across k)")->capture_default_str();
    scale->add_flag("--ga", with_ga, "Also time the genetic algorithm");
    scale->callback([&] {
        Session s(g, "scale");
        std::vector<ScaleSize> spec;
        for (auto n : sizes) spec.push_back({n, {}});
        std::vector<std::uint64_t> seeds;
        for (int i = 0; i < scale_seeds; ++i) seeds.push_back(s.seed() + static_cast<std::uint64_t>(i));
        GaParams ga = s.config().baseline.ga;
        ScalabilityResult r;
        s.timed("scale", [&] { r = scalability_run(spec, k_max, seeds, sc_anneal.params(), with_ga ? &ga : nullptr); });
        for (const auto& p : r.points)
            std::printf("n=%zu k=%d best %.3f sqa %.4f s ga %.4f s\n", p.n, p.k, p.best_energy, p.sqa_seconds, p.ga_seconds);
        for (const auto& sm : r.summaries)
            std::printf("n=%zu energy decreasing: %s, sqa time CV %.3f%s\n", sm.n, sm.energy_decreasing ? "yes" : "no",
                        sm.sqa_cv, with_ga ? (sm.ga_increasing ? ", GA time increasing" : ", GA time not increasing") : "");
        write_scalability_csv(r, s.out("scalability.csv"));
        s.output("scalability", s.out("scalability.csv"));
        status = s.finish();
    });

    // growth -----------------------------------------------------------------
    auto* growth = app.add_subcommand("growth", "Number of candidate sets per k");
    unsigned growth_n = 19, growth_k = 5;
    growth->add_option("-n", growth_n, "Number of links")->capture_default_str();
    growth->add_option("--k-max", growth_k, "Largest k")->capture_default_str();
    growth->callback([&] {
        Session s(g, "growth");
        const auto rows = count_combinations(growth_n, growth_k);
        for (const auto& r : rows) std::printf("k=%u count %s cumulative %s\n", r.k, r.count.str().c_str(), r.cumulative.str().c_str());
        write_growth_csv(growth_n, rows, s.out("growth.csv"));
        s.output("growth", s.out("growth.csv"));
        status = s.finish();
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const qvuln::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return status;
}
