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

#include "qvuln/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "qvuln/detail/common.hpp"
#include "qvuln/detail/csv.hpp"
#include "qvuln/error.hpp"

#ifndef QVULN_VERSION
#define QVULN_VERSION "0.0.0"
#endif

namespace qvuln {

using nlohmann::json;

std::string version() { return QVULN_VERSION; }

Network NetworkSpec::load() const {
    if (builtin) return builtin_nguyen_dupuis(demand);
    return load_network(path, format);
}

// ---------------------------------------------------------------------------
// Config serialization

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

json ue_json(const UeSettings& s) {
    return {{"max_iters", s.max_iters}, {"gap_tol", s.gap_tol}, {"direction", std::string(to_string(s.direction))}};
}

UeSettings ue_from(const json& j, UeSettings s) {
    s.max_iters = j.value("max_iters", s.max_iters);
    s.gap_tol = j.value("gap_tol", s.gap_tol);
    if (j.contains("direction")) s.direction = parse_fw_direction(j.at("direction").get<std::string>());
    return s;
}

AnnealParams anneal_from(const json& j, AnnealParams p) {
    p.T0 = j.value("T0", p.T0);
    p.gamma0 = j.value("gamma0", p.gamma0);
    p.nu = j.value("nu", p.nu);
    p.M = j.value("M", p.M);
    p.n_iter = j.value("n_iter", p.n_iter);
    p.energy_scale = j.value("energy_scale", p.energy_scale);
    if (j.contains("coupling")) p.coupling = parse_coupling_mode(j.at("coupling").get<std::string>());
    if (j.contains("init")) {
        const auto init = j.at("init").get<std::string>();
        if (init != "feasible" && init != "uniform") throw Error("anneal.init must be feasible or uniform");
        p.init = init == "feasible" ? InitMode::kFeasible : InitMode::kUniform;
    }
    return p;
}

HeuristicParams baseline_from(const json& j, HeuristicParams p) {
    if (j.contains("method")) p.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("ga")) {
        const auto& g = j.at("ga");
        p.ga.population = g.value("population", p.ga.population);
        p.ga.generations = g.value("generations", p.ga.generations);
        p.ga.crossover_p = g.value("crossover_p", p.ga.crossover_p);
        p.ga.mutation_p = g.value("mutation_p", p.ga.mutation_p);
        p.ga.tournament = g.value("tournament", p.ga.tournament);
        p.ga.elitism = g.value("elitism", p.ga.elitism);
    }
    if (j.contains("pso")) {
        const auto& s = j.at("pso");
        p.pso.particles = s.value("particles", p.pso.particles);
        p.pso.iterations = s.value("iterations", p.pso.iterations);
        p.pso.inertia = s.value("inertia", p.pso.inertia);
        p.pso.cognitive = s.value("cognitive", p.pso.cognitive);
        p.pso.social = s.value("social", p.pso.social);
        p.pso.v_max = s.value("v_max", p.pso.v_max);
    }
    if (j.contains("sa")) {
        const auto& s = j.at("sa");
        p.sa.T0 = s.value("T0", p.sa.T0);
        p.sa.calibrate_temperature = s.value("calibrate_temperature", p.sa.calibrate_temperature);
        p.sa.cooling = s.value("cooling", p.sa.cooling);
        p.sa.stages = s.value("stages", p.sa.stages);
        p.sa.stage_length = s.value("stage_length", p.sa.stage_length);
        p.sa.stagnation_restart = s.value("stagnation_restart", p.sa.stagnation_restart);
    }
    if (j.contains("ts")) {
        const auto& s = j.at("ts");
        p.ts.neighbourhood = s.value("neighbourhood", p.ts.neighbourhood);
        p.ts.tenure_min = s.value("tenure_min", p.ts.tenure_min);
        p.ts.tenure_max = s.value("tenure_max", p.ts.tenure_max);
        p.ts.iterations = s.value("iterations", p.ts.iterations);
        p.ts.non_improving_cap = s.value("non_improving_cap", p.ts.non_improving_cap);
    }
    return p;
}

json baseline_json(const HeuristicParams& p) {
    return {{"method", std::string(to_string(p.method))},
            {"ga",
             {{"population", p.ga.population},
              {"generations", p.ga.generations},
              {"crossover_p", p.ga.crossover_p},
              {"mutation_p", p.ga.mutation_p},
              {"tournament", p.ga.tournament},
              {"elitism", p.ga.elitism}}},
            {"pso",
             {{"particles", p.pso.particles},
              {"iterations", p.pso.iterations},
              {"inertia", p.pso.inertia},
              {"cognitive", p.pso.cognitive},
              {"social", p.pso.social},
              {"v_max", p.pso.v_max}}},
            {"sa",
             {{"T0", p.sa.T0},
              {"calibrate_temperature", p.sa.calibrate_temperature},
              {"cooling", p.sa.cooling},
              {"stages", p.sa.stages},
              {"stage_length", p.sa.stage_length},
              {"stagnation_restart", p.sa.stagnation_restart}}},
            {"ts",
             {{"neighbourhood", p.ts.neighbourhood},
              {"tenure_min", p.ts.tenure_min},
              {"tenure_max", p.ts.tenure_max},
              {"iterations", p.ts.iterations},
              {"non_improving_cap", p.ts.non_improving_cap}}}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text, const std::filesystem::path& base_dir) {
    ExperimentConfig c;
    try {
        const json j = json::parse(text);
        if (j.contains("network")) {
            const auto& n = j.at("network");
            if (n.contains("path")) {
                c.network.builtin = false;
                c.network.path = resolve(base_dir, n.at("path").get<std::string>());
                c.network.format = parse_network_format(n.value("format", std::string("native-csv")));
            }
            if (n.contains("demand")) c.network.demand = parse_demand_level(n.at("demand").get<std::string>());
        }
        if (j.contains("coefficients") && !j.at("coefficients").is_null())
            c.coefficients = resolve(base_dir, j.at("coefficients").get<std::string>());
        if (j.contains("mode")) c.mode = parse_hybrid_mode(j.at("mode").get<std::string>());
        if (j.contains("k")) c.k_list = j.at("k").get<std::vector<int>>();
        if (j.contains("e_source")) {
            const auto& e = j.at("e_source");
            const auto kind = e.value("kind", std::string("fixture"));
            if (kind != "fixture" && kind != "sampled") throw Error("e_source.kind must be fixture or sampled");
            c.e_sampled = kind == "sampled";
            if (e.contains("interval")) {
                const auto iv = e.at("interval").get<std::vector<double>>();
                if (iv.size() != 2) throw Error("e_source.interval needs two numbers");
                c.e_lo = iv[0];
                c.e_hi = iv[1];
            }
            c.e_seed = e.value("seed", c.e_seed);
        }
        if (j.contains("lambda")) c.lambdas = j.at("lambda").get<std::vector<double>>();
        c.lambda_multiplier = j.value("lambda_multiplier", c.lambda_multiplier);
        c.include_linear = j.value("include_linear", c.include_linear);
        if (j.contains("anneal")) c.anneal = anneal_from(j.at("anneal"), c.anneal);
        if (j.contains("baseline")) c.baseline = baseline_from(j.at("baseline"), c.baseline);
        if (j.contains("ue")) c.ue = ue_from(j.at("ue"), c.ue);
        if (j.contains("inner_ue")) c.inner_ue = ue_from(j.at("inner_ue"), c.inner_ue);
        if (j.contains("bpr")) {
            c.bpr.alpha = j.at("bpr").value("alpha", c.bpr.alpha);
            c.bpr.beta_exp = j.at("bpr").value("beta", c.bpr.beta_exp);
        }
        if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        c.top_n = j.value("top_n", c.top_n);
        c.threads = j.value("threads", c.threads);
        if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    } catch (const json::exception& ex) {
        throw ParseError("<config>", 0, ex.what());
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    std::stringstream text;
    text << in.rdbuf();
    try {
        return from_json(text.str(), path.parent_path());
    } catch (const ParseError& ex) {
        throw ParseError(path.string(), 0, ex.what());
    }
}

std::string ExperimentConfig::to_json() const {
    json j;
    if (network.builtin)
        j["network"] = {{"builtin", "nguyen-dupuis"}, {"demand", std::string(to_string(network.demand))}};
    else
        j["network"] = {{"path", network.path.string()},
                        {"format", network.format == NetworkFormat::kTntp ? "tntp" : "native-csv"},
                        {"demand", std::string(to_string(network.demand))}};
    j["coefficients"] = coefficients.empty() ? json(nullptr) : json(coefficients.string());
    j["mode"] = std::string(to_string(mode));
    j["k"] = k_list;
    j["e_source"] = e_sampled ? json{{"kind", "sampled"}, {"interval", {e_lo, e_hi}}, {"seed", e_seed}}
                              : json{{"kind", "fixture"}};
    j["lambda"] = lambdas;
    j["lambda_multiplier"] = lambda_multiplier;
    j["include_linear"] = include_linear;
    j["anneal"] = json::parse(qvuln::to_json(anneal));
    j["anneal"].erase("seed");
    j["baseline"] = baseline_json(baseline);
    j["ue"] = ue_json(ue);
    j["inner_ue"] = ue_json(inner_ue);
    j["bpr"] = {{"alpha", bpr.alpha}, {"beta", bpr.beta_exp}};
    j["seeds"] = seeds;
    j["top_n"] = top_n;
    j["threads"] = threads;
    j["output_dir"] = output_dir.string();
    return j.dump(2);
}

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw ValidationError("seed list must not be empty");
    if (k_list.empty()) throw ValidationError("k list must not be empty");
    for (int k : k_list)
        if (k < 1) throw ValidationError("every k must be >= 1");
    for (double l : lambdas)
        if (!(l > 0.0)) throw ValidationError("every lambda must be > 0");
    if (!network.builtin && !std::filesystem::exists(network.path))
        throw ValidationError("network file not found: " + network.path.string());
    if (!coefficients.empty())
        for (const char* f : {"c.csv", "beta.csv"})
            if (!std::filesystem::exists(coefficients / f))
                throw ValidationError("coefficient file not found: " + (coefficients / f).string());
    if (e_sampled && !coefficients.empty())
        throw ValidationError("sampled residual ratios need computed coefficients; remove 'coefficients'");
    if (!e_sampled && coefficients.empty())
        throw ValidationError("fixture residual ratios need a 'coefficients' directory");
    if (e_sampled && !(0.0 <= e_lo && e_lo <= e_hi && e_hi <= 1.0))
        throw ValidationError("residual ratio interval must lie within [0, 1]");
    anneal.validate();
    baseline.validate();
    bpr.validate();
}

HybridConfig ExperimentConfig::hybrid(int k, const std::vector<double>& e) const {
    HybridConfig h;
    h.mode = mode;
    h.k = k;
    h.anneal = anneal;
    h.ue = ue;
    h.inner_ue = inner_ue;
    h.bpr = bpr;
    h.e.sampled = false;
    h.e.pinned = e;
    h.include_linear = include_linear;
    h.lambda_multiplier = lambda_multiplier;
    h.seeds = seeds;
    h.top_n = top_n;
    h.threads = 1;
    return h;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepInputs prepare_inputs(const ExperimentConfig& config) {
    config.validate();
    SweepInputs in{config.network.load(), {}, {}};
    if (!config.coefficients.empty()) {
        in.coefficients = load_coefficients(config.coefficients);
        if (in.coefficients.n() != in.network.link_count())
            throw ValidationError("coefficient fixture has " + std::to_string(in.coefficients.n()) +
                                  " links, network has " + std::to_string(in.network.link_count()));
        in.e = in.coefficients.provenance.e;
        return in;
    }
    in.e = sample_residual_ratios(in.network.link_count(), config.e_lo, config.e_hi, config.e_seed);
    if (config.mode == HybridMode::kCoefficient) {
        in.coefficients = compute_c(in.network, config.bpr, in.e, config.ue, config.threads);
        compute_beta(in.coefficients, in.network, config.bpr, config.ue, {}, config.threads);
        in.coefficients.provenance.seed = config.e_seed;
    }
    return in;
}

std::vector<SweepCell> sweep_k(const ExperimentConfig& config, const SweepInputs& inputs) {
    std::vector<SweepCell> cells;
    for (int k : config.k_list) cells.push_back({"k=" + std::to_string(k), k, 0.0, std::nullopt, {}});
    std::optional<TsttCache> cache;
    double baseline = 0.0;
    if (config.mode == HybridMode::kDirect) {
        cache.emplace(ue_evaluator(inputs.network, config.bpr, config.inner_ue), inputs.e);
        baseline = cache->get(Bits(inputs.network.link_count(), 0));
    }
    detail::parallel_for(cells.size(), config.threads, [&](std::size_t i) {
        auto& cell = cells[i];
        try {
            const auto h = config.hybrid(cell.k, inputs.e);
            cell.report = config.mode == HybridMode::kCoefficient
                              ? run_coefficient_mode(inputs.coefficients, h)
                              : run_direct_mode(*cache, inputs.network.link_count(), baseline, h);
            cell.lambda = cell.report->lambda;
        } catch (const std::exception& ex) {
            cell.error = ex.what();
        }
    });
    return cells;
}

std::vector<IntervalResult> sweep_e(const ExperimentConfig& config, const Network& network,
                                    const std::vector<std::pair<double, double>>& intervals) {
    std::vector<IntervalResult> results;
    for (const auto& [lo, hi] : intervals) {
        if (!(0.0 < lo && lo <= hi && hi <= 1.0))
            throw ValidationError("interval [" + csv::fmt(lo) + "," + csv::fmt(hi) + "] must satisfy 0 < lo <= hi <= 1");
        IntervalResult r;
        r.lo = lo;
        r.hi = hi;
        r.e = sample_residual_ratios(network.link_count(), lo, hi, config.e_seed);
        r.coefficients = compute_c(network, config.bpr, r.e, config.ue, config.threads);
        compute_beta(r.coefficients, network, config.bpr, config.ue, {}, config.threads);
        r.coefficients.provenance.seed = config.e_seed;
        for (int k : config.k_list) {
            SweepCell cell{"[" + csv::fmt(lo) + "," + csv::fmt(hi) + "] k=" + std::to_string(k), k, 0.0, std::nullopt, {}};
            double top = std::numeric_limits<double>::quiet_NaN();
            try {
                auto h = config.hybrid(k, r.e);
                h.threads = config.threads;
                cell.report = run_coefficient_mode(r.coefficients, h);
                cell.lambda = cell.report->lambda;
                if (!cell.report->ranking.empty()) {
                    const auto scenario = DisruptionScenario::of_links(cell.report->ranking.front().links, r.e);
                    top = solve_ue(network, scenario, config.bpr, config.ue).tstt;
                }
            } catch (const std::exception& ex) {
                cell.error = ex.what();
            }
            r.top_tstt.push_back(top);
            r.cells.push_back(std::move(cell));
        }
        results.push_back(std::move(r));
    }
    return results;
}

LambdaSweep sweep_lambda(const ExperimentConfig& config, const CoefficientSet& coefficients,
                         const std::vector<double>& lambdas) {
    LambdaSweep sweep;
    sweep.lambdas = lambdas;
    sweep.ks = config.k_list;
    const auto nk = sweep.ks.size();
    std::vector<SweepCell> flat(lambdas.size() * nk);
    for (std::size_t a = 0; a < lambdas.size(); ++a) {
        if (!(lambdas[a] > 0.0)) throw ValidationError("every lambda must be > 0");
        for (std::size_t b = 0; b < nk; ++b)
            flat[a * nk + b] = {"lambda=" + csv::fmt(lambdas[a]) + " k=" + std::to_string(sweep.ks[b]), sweep.ks[b],
                                lambdas[a], std::nullopt, {}};
    }
    detail::parallel_for(flat.size(), config.threads, [&](std::size_t i) {
        auto& cell = flat[i];
        try {
            auto h = config.hybrid(cell.k, coefficients.provenance.e);
            h.lambda = cell.lambda;
            cell.report = run_coefficient_mode(coefficients, h);
        } catch (const std::exception& ex) {
            cell.error = ex.what();
        }
    });
    sweep.cells.assign(lambdas.size(), {});
    for (std::size_t a = 0; a < lambdas.size(); ++a)
        sweep.cells[a].assign(flat.begin() + a * nk, flat.begin() + (a + 1) * nk);
    sweep.stable_per_k.assign(nk, true);
    for (std::size_t b = 0; b < nk; ++b) {
        std::optional<std::vector<int>> first;
        for (std::size_t a = 0; a < lambdas.size(); ++a) {
            const auto& cell = sweep.cells[a][b];
            if (!cell.report || cell.report->ranking.empty()) {
                sweep.stable_per_k[b] = false;
                continue;
            }
            const auto& top = cell.report->ranking.front().links;
            if (!first) first = top;
            else if (*first != top) sweep.stable_per_k[b] = false;
        }
    }
    sweep.stable = std::all_of(sweep.stable_per_k.begin(), sweep.stable_per_k.end(), [](bool v) { return v; });
    return sweep;
}

// ---------------------------------------------------------------------------
// Scalability

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

ScalabilityResult scalability_run(const std::vector<ScaleSize>& sizes, int k_max, const std::vector<std::uint64_t>& seeds,
                                  const AnnealParams& anneal, const GaParams* ga, std::uint64_t instance_seed) {
    if (k_max < 1) throw ValidationError("k_max must be >= 1");
    if (seeds.empty()) throw ValidationError("seed list must not be empty");
    ScalabilityResult result;
    for (const auto& size : sizes) {
        if (static_cast<std::size_t>(k_max) > size.n) throw ValidationError("k_max exceeds instance size");
        ScaleSummary summary;
        summary.n = size.n;
        std::vector<QuboInstance> instances;
        for (int k = 1; k <= k_max; ++k) instances.push_back(synth_instance(size.n, k, instance_seed, size.params));

        // Seeds form the outer loop so that slow stretches of machine time spread over every k
        // instead of inflating one k's block of runs.
        const auto K = instances.size();
        std::vector<std::vector<double>> sqa_runs(K), ga_runs(K);
        std::vector<double> best(K, std::numeric_limits<double>::infinity());
        for (const auto seed : seeds)
            for (std::size_t i = 0; i < K; ++i) {
                AnnealParams p = anneal;
                p.seed = seed;
                const auto r = run_sqa(instances[i], p);
                sqa_runs[i].push_back(r.wall_time);
                best[i] = std::min(best[i], r.best_energy);
                if (ga) {
                    HeuristicParams h;
                    h.method = Method::kGa;
                    h.ga = *ga;
                    h.seed = seed;
                    ga_runs[i].push_back(run_baseline(instances[i], h).wall_time);
                }
            }

        std::vector<double> sqa_times;
        for (std::size_t i = 0; i < K; ++i) {
            ScalePoint point;
            point.n = size.n;
            point.k = static_cast<int>(i) + 1;
            point.best_energy = best[i];
            point.sqa_seconds = median(sqa_runs[i]);
            point.ga_seconds = ga ? median(ga_runs[i]) : std::numeric_limits<double>::quiet_NaN();
            if (i > 0) {
                const auto& prev = result.points.back();
                if (!(point.best_energy < prev.best_energy)) summary.energy_decreasing = false;
                if (ga && !(point.ga_seconds > prev.ga_seconds)) summary.ga_increasing = false;
            }
            sqa_times.push_back(point.sqa_seconds);
            result.points.push_back(point);
        }
        double mean = 0.0;
        for (double t : sqa_times) mean += t;
        mean /= static_cast<double>(sqa_times.size());
        double var = 0.0;
        for (double t : sqa_times) var += (t - mean) * (t - mean);
        var /= static_cast<double>(sqa_times.size());
        summary.sqa_cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
        if (!ga) summary.ga_increasing = false;
        result.summaries.push_back(summary);
    }
    return result;
}

void write_scalability_csv(const ScalabilityResult& result, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "n,k,best_energy,sqa_seconds,ga_seconds\n";
    for (const auto& p : result.points)
        out << p.n << ',' << p.k << ',' << csv::fmt(p.best_energy) << ',' << csv::fmt(p.sqa_seconds) << ','
            << (std::isnan(p.ga_seconds) ? std::string("nan") : csv::fmt(p.ga_seconds)) << '\n';
}

// ---------------------------------------------------------------------------
// Run records

void RunRecord::add_output(const std::string& name, const std::filesystem::path& path) {
    outputs.emplace_back(name, path.string());
}

std::string RunRecord::to_json() const {
    json j;
    j["command"] = command;
    j["version"] = version();
    j["config"] = json::parse(config_json.empty() ? "{}" : config_json);
    j["outputs"] = json::object();
    for (const auto& [name, path] : outputs) j["outputs"][name] = path;
    j["wall_times"] = json::object();
    for (const auto& [step, seconds] : wall_times) j["wall_times"][step] = seconds;
    j["notes"] = notes;
    j["status"] = status;
    return j.dump(2);
}

void RunRecord::write(const std::filesystem::path& path) const { csv::open_out(path) << to_json() << '\n'; }

}  // namespace qvuln
