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

#include "qvuln/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "qvuln/detail/common.hpp"
#include "qvuln/detail/csv.hpp"
#include "qvuln/detail/sqa_engine.hpp"
#include "qvuln/error.hpp"
#include "qvuln/oracle.hpp"

namespace qvuln {

Method parse_method(std::string_view text) {
    if (text == "ga") return Method::kGa;
    if (text == "pso") return Method::kPso;
    if (text == "sa") return Method::kSa;
    if (text == "ts") return Method::kTs;
    throw Error("unknown method '" + std::string(text) + "' (ga|pso|sa|ts)");
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::kGa: return "ga";
        case Method::kPso: return "pso";
        case Method::kSa: return "sa";
        case Method::kTs: return "ts";
    }
    return "ga";
}

void HeuristicParams::validate() const {
    auto positive = [](int v, const char* what) {
        if (v < 1) throw ValidationError(std::string(what) + " must be >= 1");
    };
    auto probability = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0, 1]");
    };
    positive(ga.population, "GA population");
    positive(ga.generations, "GA generations");
    positive(ga.tournament, "GA tournament size");
    probability(ga.crossover_p, "GA crossover probability");
    probability(ga.mutation_p, "GA mutation probability");
    if (ga.elitism < 0 || ga.elitism >= ga.population) throw ValidationError("GA elitism must lie in [0, population)");
    positive(pso.particles, "PSO particles");
    positive(pso.iterations, "PSO iterations");
    if (!(pso.v_max > 0.0)) throw ValidationError("PSO velocity clamp must be > 0");
    if (!(sa.T0 > 0.0)) throw ValidationError("SA T0 must be > 0");
    if (!(sa.cooling > 0.0 && sa.cooling < 1.0)) throw ValidationError("SA cooling must lie in (0, 1)");
    positive(sa.stages, "SA stages");
    if (sa.stage_length < 0) throw ValidationError("SA stage length must be >= 0");
    positive(sa.stagnation_restart, "SA stagnation restart");
    positive(ts.neighbourhood, "TS neighbourhood");
    positive(ts.iterations, "TS iterations");
    positive(ts.non_improving_cap, "TS non-improving cap");
    if (ts.tenure_min < 0 || ts.tenure_max < ts.tenure_min) throw ValidationError("TS tenure range invalid");
}

Bits repair_cardinality(const QuboInstance& q, Bits u) {
    auto count = static_cast<int>(std::count(u.begin(), u.end(), 1));
    auto pick = [&](std::uint8_t want, bool smallest) {
        std::size_t best = q.n;
        for (std::size_t s = 0; s < q.n; ++s) {
            if (u[s] != want) continue;
            if (best == q.n) best = s;
            else if (smallest ? std::abs(q.c[s]) < std::abs(q.c[best]) : std::abs(q.c[s]) > std::abs(q.c[best])) best = s;
        }
        return best;
    };
    for (; count > q.k; --count) u[pick(1, true)] = 0;
    for (; count < q.k; ++count) u[pick(0, false)] = 1;
    return u;
}

namespace {

using detail::Rng;

Bits random_feasible(const QuboInstance& q, Rng& rng) {
    Bits u(q.n, 0);
    for (auto s : detail::sample_without_replacement(rng, q.n, static_cast<std::size_t>(q.k))) u[s] = 1;
    return u;
}

// Row-wise dense evaluation: for every set bit the full interaction row is scanned.
double dense_energy(const QuboInstance& q, const Bits& u) {
    double linear = 0.0;
    double pairs = 0.0;
    int count = 0;
    for (std::size_t s = 0; s < q.n; ++s) {
        if (!u[s]) continue;
        ++count;
        linear += q.c[s];
        const double* row = &q.B[s * q.n];
        for (std::size_t t = 0; t < q.n; ++t) pairs += row[t] * u[t];
    }
    const double excess = static_cast<double>(count) - q.k;
    return -(q.include_linear ? linear : 0.0) - pairs + q.lambda * excess * excess;
}

struct Incumbent {
    const QuboInstance& q;
    Bits best;
    double energy = std::numeric_limits<double>::infinity();
    Bits feasible;
    double feasible_energy = std::numeric_limits<double>::infinity();

    void offer(const Bits& u, double e) {
        if (e < energy) {
            energy = e;
            best = u;
        }
        if (e < feasible_energy && std::count(u.begin(), u.end(), 1) == q.k) {
            feasible_energy = e;
            feasible = u;
        }
    }

    void finish(AnnealResult& r) const {
        Bits chosen = best;
        if (std::count(best.begin(), best.end(), 1) != q.k) {
            chosen = repair_cardinality(q, best);
            if (!feasible.empty() && feasible_energy < qubo_energy(q, chosen)) chosen = feasible;
        }
        r.best_u = chosen;
        r.best_energy = qubo_energy(q, chosen);
    }
};

void run_ga(const QuboInstance& q, const GaParams& p, Rng& rng, Incumbent& inc, std::vector<double>& trace) {
    const auto P = static_cast<std::size_t>(p.population);
    std::vector<Bits> pop(P);
    std::vector<double> fit(P);
    for (std::size_t i = 0; i < P; ++i) {
        pop[i] = random_feasible(q, rng);
        fit[i] = dense_energy(q, pop[i]);
        inc.offer(pop[i], fit[i]);
    }
    auto tournament = [&] {
        auto winner = static_cast<std::size_t>(detail::below(rng, P));
        for (int t = 1; t < p.tournament; ++t) {
            const auto other = static_cast<std::size_t>(detail::below(rng, P));
            if (fit[other] < fit[winner]) winner = other;
        }
        return winner;
    };
    std::vector<std::size_t> order(P);
    std::vector<Bits> next;
    std::vector<double> next_fit;
    for (int g = 0; g < p.generations; ++g) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });
        next.clear();
        next_fit.clear();
        for (int e = 0; e < p.elitism; ++e) {
            next.push_back(pop[order[e]]);
            next_fit.push_back(fit[order[e]]);
        }
        while (next.size() < P) {
            Bits a = pop[tournament()];
            Bits b = pop[tournament()];
            if (detail::uniform01(rng) < p.crossover_p) {
                auto i = static_cast<std::size_t>(detail::below(rng, q.n + 1));
                auto j = static_cast<std::size_t>(detail::below(rng, q.n + 1));
                if (i > j) std::swap(i, j);
                for (std::size_t s = i; s < j; ++s) std::swap(a[s], b[s]);
            }
            for (Bits* child : {&a, &b}) {
                if (next.size() >= P) break;
                if (detail::uniform01(rng) < p.mutation_p) (*child)[detail::below(rng, q.n)] ^= 1;
                const double e = dense_energy(q, *child);
                inc.offer(*child, e);
                next.push_back(std::move(*child));
                next_fit.push_back(e);
            }
        }
        pop.swap(next);
        fit.swap(next_fit);
        trace.push_back(inc.energy);
    }
}

void run_pso(const QuboInstance& q, const PsoParams& p, Rng& rng, Incumbent& inc, std::vector<double>& trace) {
    const auto P = static_cast<std::size_t>(p.particles);
    const std::size_t n = q.n;
    std::vector<Bits> x(P);
    std::vector<std::vector<double>> v(P, std::vector<double>(n, 0.0));
    std::vector<Bits> pbest(P);
    std::vector<double> pbest_e(P);
    Bits gbest;
    double gbest_e = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < P; ++i) {
        x[i] = random_feasible(q, rng);
        pbest[i] = x[i];
        pbest_e[i] = dense_energy(q, x[i]);
        inc.offer(x[i], pbest_e[i]);
        if (pbest_e[i] < gbest_e) {
            gbest_e = pbest_e[i];
            gbest = x[i];
        }
    }
    for (int it = 0; it < p.iterations; ++it) {
        for (std::size_t i = 0; i < P; ++i) {
            for (std::size_t s = 0; s < n; ++s) {
                const double r1 = detail::uniform01(rng);
                const double r2 = detail::uniform01(rng);
                double vel = p.inertia * v[i][s] + p.cognitive * r1 * (pbest[i][s] - x[i][s]) +
                             p.social * r2 * (gbest[s] - x[i][s]);
                vel = std::clamp(vel, -p.v_max, p.v_max);
                v[i][s] = vel;
                x[i][s] = detail::uniform01(rng) < 1.0 / (1.0 + std::exp(-vel));
            }
            const double e = dense_energy(q, x[i]);
            inc.offer(x[i], e);
            if (e < pbest_e[i]) {
                pbest_e[i] = e;
                pbest[i] = x[i];
            }
            if (e < gbest_e) {
                gbest_e = e;
                gbest = x[i];
            }
        }
        trace.push_back(inc.energy);
    }
}

void run_sa_baseline(const QuboInstance& q, const HeuristicParams& hp, Rng& rng, Incumbent& inc,
                     std::vector<double>& trace) {
    const SaParams& p = hp.sa;
    detail::QuboModel model(q, 1);
    model.reset(random_feasible(q, rng));
    inc.offer(model.bits(0), model.energy(0));

    double t_start = p.T0;
    if (p.calibrate_temperature) {
        std::vector<double> uphill;
        for (int i = 0; i < 100; ++i) {
            const double d = model.delta(0, detail::below(rng, q.n));
            if (d > 0.0) uphill.push_back(d);
        }
        if (!uphill.empty()) {
            std::nth_element(uphill.begin(), uphill.begin() + uphill.size() / 2, uphill.end());
            t_start = uphill[uphill.size() / 2] / std::log(2.0);
        }
    }
    const std::size_t stage_length = p.stage_length > 0 ? static_cast<std::size_t>(p.stage_length) : 20 * q.n;
    double temperature = t_start;
    int stagnant = 0;
    for (int stage = 0; stage < p.stages; ++stage) {
        const double before = inc.energy;
        for (std::size_t r = 0; r < stage_length; ++r) {
            const auto s = static_cast<std::size_t>(detail::below(rng, q.n));
            const double d = model.delta(0, s);
            if (d > 0.0 && !(detail::uniform01(rng) < std::exp(-d / temperature))) continue;
            model.flip(0, s, d);
            inc.offer(model.bits(0), model.energy(0));
            if (hp.observer) hp.observer(model.bits(0));
        }
        trace.push_back(inc.energy);
        temperature *= p.cooling;
        stagnant = inc.energy < before ? 0 : stagnant + 1;
        if (stagnant >= p.stagnation_restart) {
            model.reset(inc.best);
            temperature = t_start;
            stagnant = 0;
        }
    }
}

void run_ts(const QuboInstance& q, const HeuristicParams& hp, Rng& rng, Incumbent& inc, std::vector<double>& trace) {
    const TsParams& p = hp.ts;
    detail::QuboModel model(q, 1);
    model.reset(random_feasible(q, rng));
    inc.offer(model.bits(0), model.energy(0));
    const int tenure = std::clamp(static_cast<int>(q.n) / 5, p.tenure_min, p.tenure_max);
    const auto candidates = std::min<std::size_t>(static_cast<std::size_t>(p.neighbourhood), q.n);
    std::vector<int> tabu_until(q.n, 0);
    int non_improving = 0;
    for (int it = 1; it <= p.iterations; ++it) {
        std::vector<std::size_t> moves;
        if (candidates == q.n) {
            moves.resize(q.n);
            std::iota(moves.begin(), moves.end(), 0);
        } else {
            moves = detail::sample_without_replacement(rng, q.n, candidates);
            std::sort(moves.begin(), moves.end());
        }
        std::size_t chosen = q.n;
        double chosen_delta = std::numeric_limits<double>::infinity();
        for (const auto s : moves) {
            const double d = model.delta(0, s);
            const bool allowed = tabu_until[s] < it || model.energy(0) + d < inc.energy;
            if (allowed && d < chosen_delta) {
                chosen = s;
                chosen_delta = d;
            }
        }
        const double before = inc.energy;
        if (chosen != q.n) {
            model.flip(0, chosen, chosen_delta);
            tabu_until[chosen] = it + tenure;
            inc.offer(model.bits(0), model.energy(0));
            if (hp.observer) hp.observer(model.bits(0));
        }
        non_improving = inc.energy < before ? 0 : non_improving + 1;
        if (non_improving >= p.non_improving_cap) {
            model.reset(random_feasible(q, rng));
            std::fill(tabu_until.begin(), tabu_until.end(), 0);
            non_improving = 0;
        }
        trace.push_back(inc.energy);
    }
}

}  // namespace

AnnealResult run_baseline(const QuboInstance& instance, const HeuristicParams& params) {
    const auto started = std::chrono::steady_clock::now();
    instance.validate();
    params.validate();
    Rng rng(params.seed);
    Incumbent inc{instance, {}, std::numeric_limits<double>::infinity(), {}, std::numeric_limits<double>::infinity()};
    AnnealResult result;
    result.seed = params.seed;
    result.method = std::string(to_string(params.method));
    switch (params.method) {
        case Method::kGa: run_ga(instance, params.ga, rng, inc, result.trace); break;
        case Method::kPso: run_pso(instance, params.pso, rng, inc, result.trace); break;
        case Method::kSa: run_sa_baseline(instance, params, rng, inc, result.trace); break;
        case Method::kTs: run_ts(instance, params, rng, inc, result.trace); break;
    }
    inc.finish(result);
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::vector<ComparisonRow> runtime_comparison(const std::vector<QuboInstance>& instances,
                                              const std::vector<std::string>& methods,
                                              const std::vector<std::uint64_t>& seeds, const AnnealParams& sqa,
                                              const HeuristicParams& heuristics, std::uint64_t oracle_guard) {
    if (seeds.empty()) throw ValidationError("runtime comparison needs at least one seed");
    std::vector<ComparisonRow> rows;
    for (const auto& q : instances) {
        double optimum = std::numeric_limits<double>::quiet_NaN();
        if (binomial(static_cast<unsigned>(q.n), static_cast<unsigned>(q.k)) <= oracle_guard)
            optimum = enumerate_exact(q, q.k, 1, oracle_guard).optimum_energy;
        for (const auto& name : methods) {
            std::vector<double> times;
            double best = std::numeric_limits<double>::infinity();
            for (const auto seed : seeds) {
                AnnealResult r;
                if (name == "sqa") {
                    AnnealParams p = sqa;
                    p.seed = seed;
                    r = run_sqa(q, p);
                } else {
                    HeuristicParams p = heuristics;
                    p.method = parse_method(name);
                    p.seed = seed;
                    r = run_baseline(q, p);
                }
                times.push_back(r.wall_time);
                best = std::min(best, r.best_energy);
            }
            std::sort(times.begin(), times.end());
            const auto mid = times.size() / 2;
            const double median = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
            const double gap = std::isnan(optimum) ? optimum
                                                   : (best - optimum) / std::max(std::abs(optimum), 1e-300);
            rows.push_back({name, q.k, median, best, gap});
        }
    }
    return rows;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "method,k,median_seconds,best_energy,gap\n";
    for (const auto& r : rows)
        out << r.method << ',' << r.k << ',' << csv::fmt(r.median_seconds) << ',' << csv::fmt(r.best_energy) << ','
            << (std::isnan(r.gap) ? std::string("nan") : csv::fmt(r.gap)) << '\n';
}

}  // namespace qvuln
