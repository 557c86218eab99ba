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

#include "qvuln/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <json.hpp>

#include "qvuln/detail/csv.hpp"
#include "qvuln/error.hpp"
#include "qvuln/shortest_path.hpp"

namespace qvuln {

DisruptionScenario DisruptionScenario::none(std::size_t link_count) {
    return {std::vector<std::uint8_t>(link_count, 0), std::vector<double>(link_count, 1.0), 0};
}

DisruptionScenario DisruptionScenario::of_links(std::span<const int> ids, std::vector<double> e) {
    DisruptionScenario scenario{std::vector<std::uint8_t>(e.size(), 0), std::move(e), static_cast<int>(ids.size())};
    for (int id : ids) {
        if (id < 1 || static_cast<std::size_t>(id) > scenario.u.size())
            throw ValidationError("disrupted link id " + std::to_string(id) + " out of range");
        scenario.u[id - 1] = 1;
    }
    return scenario;
}

void DisruptionScenario::validate(std::size_t link_count) const {
    if (u.size() != link_count || e.size() != link_count)
        throw ValidationError("scenario has " + std::to_string(u.size()) + " bits and " + std::to_string(e.size()) +
                              " ratios for " + std::to_string(link_count) + " links");
    for (std::size_t s = 0; s < e.size(); ++s)
        if (!(e[s] >= 0.0 && e[s] <= 1.0))
            throw ValidationError("residual capacity ratio of link " + std::to_string(s + 1) + " outside [0,1]");
}

FwDirection parse_fw_direction(std::string_view text) {
    if (text == "conjugate") return FwDirection::kConjugate;
    if (text == "biconjugate") return FwDirection::kBiconjugate;
    if (text == "classic") return FwDirection::kClassic;
    throw Error("unknown Frank-Wolfe direction '" + std::string(text) + "' (biconjugate|conjugate|classic)");
}

std::string_view to_string(FwDirection direction) {
    switch (direction) {
        case FwDirection::kBiconjugate: return "biconjugate";
        case FwDirection::kConjugate: return "conjugate";
        case FwDirection::kClassic: break;
    }
    return "classic";
}

namespace {

double effective_capacity(const Link& link, int u, double e) {
    const double cap = link.capacity * (u ? e : 1.0);
    if (!(cap > 0.0))
        throw DomainError("link " + std::to_string(link.id) + " has zero effective capacity (u = 1, e = 0)");
    return cap;
}

double time_derivative(double x, const Link& link, const BprParams& bpr, double cap) {
    if (x <= 0.0) return bpr.beta_exp == 1.0 ? link.free_flow_time_h * bpr.alpha / cap : 0.0;
    return link.free_flow_time_h * bpr.alpha * bpr.beta_exp * std::pow(x / cap, bpr.beta_exp - 1.0) / cap;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

// Per-link quantities that do not change during one solve.
struct LinkModel {
    const Network& network;
    const BprParams& bpr;
    std::vector<double> cap;

    LinkModel(const Network& net, const DisruptionScenario& scenario, const BprParams& params)
        : network(net), bpr(params), cap(net.link_count()) {
        for (std::size_t s = 0; s < cap.size(); ++s)
            cap[s] = effective_capacity(net.links()[s], scenario.u[s], scenario.e[s]);
    }

    double time(std::size_t s, double x) const {
        const Link& l = network.links()[s];
        return l.free_flow_time_h * (1.0 + bpr.alpha * std::pow(std::max(x, 0.0) / cap[s], bpr.beta_exp));
    }

    void times(std::span<const double> x, std::vector<double>& out) const {
        out.resize(x.size());
        for (std::size_t s = 0; s < x.size(); ++s) out[s] = time(s, x[s]);
    }
};

// All-or-nothing loading, grouped by origin so each shortest-path tree is built once.
class AonLoader {
 public:
    explicit AonLoader(const Network& network) : network_(network) {
        const auto od = network.od_pairs();
        for (std::size_t w = 0; w < od.size(); ++w) by_origin_[*network.node_index(od[w].origin)].push_back(w);
    }

    void load(std::span<const double> cost, std::vector<std::vector<double>>& od_flows,
              std::vector<double>& total) const {
        const auto od = network_.od_pairs();
        od_flows.assign(od.size(), std::vector<double>(network_.link_count(), 0.0));
        total.assign(network_.link_count(), 0.0);
        for (const auto& [origin, pairs] : by_origin_) {
            const auto tree = shortest_path_tree(network_, origin, cost);
            for (const auto w : pairs) {
                const auto dest = *network_.node_index(od[w].destination);
                if (!tree.reaches(dest))
                    throw InfeasibleError(od[w].origin, od[w].destination,
                                          "no route from " + std::to_string(od[w].origin) + " to " +
                                              std::to_string(od[w].destination));
                for (auto v = dest; tree.pred_link[v] != kNoLink; v = network_.tail(tree.pred_link[v])) {
                    od_flows[w][tree.pred_link[v]] += od[w].demand;
                    total[tree.pred_link[v]] += od[w].demand;
                }
            }
        }
    }

 private:
    const Network& network_;
    std::map<std::size_t, std::vector<std::size_t>> by_origin_;
};

// Step in [0, 1] along d from x minimizing the Beckmann objective. Returns the left end of the
// final bisection bracket, where the directional derivative is still nonpositive.
double line_search(const LinkModel& model, std::span<const double> x, std::span<const double> d) {
    auto slope = [&](double tau) {
        double g = 0.0;
        for (std::size_t s = 0; s < x.size(); ++s)
            if (d[s] != 0.0) g += d[s] * model.time(s, x[s] + tau * d[s]);
        return g;
    };
    if (slope(0.0) >= 0.0) return 0.0;
    if (slope(1.0) <= 0.0) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) > 0.0 ? hi : lo) = mid;
    }
    return lo;
}

}  // namespace

double link_travel_time(double x, const Link& link, const BprParams& bpr, int u, double e) {
    if (x < 0.0) throw DomainError("negative flow on link " + std::to_string(link.id));
    const double cap = effective_capacity(link, u, e);
    return link.free_flow_time_h * (1.0 + bpr.alpha * std::pow(x / cap, bpr.beta_exp));
}

double beckmann_objective(const Network& network, std::span<const double> x, const DisruptionScenario& scenario,
                          const BprParams& bpr) {
    double sum = 0.0;
    const auto links = network.links();
    for (std::size_t s = 0; s < links.size(); ++s) {
        if (x[s] < 0.0) throw DomainError("negative flow on link " + std::to_string(links[s].id));
        const double cap = effective_capacity(links[s], scenario.u[s], scenario.e[s]);
        const double t0 = links[s].free_flow_time_h;
        sum += t0 * x[s] + t0 * bpr.alpha * std::pow(x[s], bpr.beta_exp + 1.0) /
                               ((bpr.beta_exp + 1.0) * std::pow(cap, bpr.beta_exp));
    }
    return sum;
}

double tstt(std::span<const double> x, const Network& network, const DisruptionScenario& scenario,
            const BprParams& bpr) {
    double sum = 0.0;
    const auto links = network.links();
    for (std::size_t s = 0; s < links.size(); ++s)
        sum += x[s] * link_travel_time(x[s], links[s], bpr, scenario.u[s], scenario.e[s]);
    return sum;
}

UeSolution solve_ue(const Network& network, const DisruptionScenario& scenario, const BprParams& bpr,
                    const UeSettings& settings) {
    bpr.validate();
    scenario.validate(network.link_count());
    if (settings.max_iters < 0) throw ValidationError("max_iters must be >= 0");

    const LinkModel model(network, scenario, bpr);
    const AonLoader aon(network);
    const std::size_t m = network.link_count();
    const std::size_t od_count = network.od_pairs().size();

    UeSolution sol;
    std::vector<double> t;
    model.times(std::vector<double>(m, 0.0), t);
    aon.load(t, sol.od_flows, sol.x);

    // Direction memory: the two previous target points and the steps actually taken towards them.
    std::vector<std::vector<double>> y_od, s_od, prev_od, prev2_od;
    std::vector<double> y, s, prev, prev2, d(m), h(m), dir1(m), dir2(m);
    int memory = 0;
    const int depth = settings.direction == FwDirection::kBiconjugate ? 2
                      : settings.direction == FwDirection::kConjugate ? 1
                                                                       : 0;

    auto hdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += a[i] * h[i] * b[i];
        return sum;
    };

    for (;;) {
        model.times(sol.x, t);
        sol.objective_trace.push_back(beckmann_objective(network, sol.x, scenario, bpr));
        aon.load(t, y_od, y);
        const double xt = dot(sol.x, t);
        sol.relative_gap = xt > 0.0 ? std::max(0.0, (xt - dot(y, t)) / xt) : 0.0;
        sol.gap_trace.push_back(sol.relative_gap);
        if (sol.relative_gap <= settings.gap_tol) {
            sol.converged = true;
            break;
        }
        if (sol.iterations >= settings.max_iters) break;

        // Target point s = b0 y + b1 prev + b2 prev2 with weights chosen so that s - x is
        // conjugate (under the diagonal Hessian at x) to the last one or two steps.
        double b1 = 0.0, b2 = 0.0;
        const int use = std::min(depth, memory);
        if (use > 0) {
            for (std::size_t i = 0; i < m; ++i) {
                h[i] = time_derivative(sol.x[i], network.links()[i], bpr, model.cap[i]);
                d[i] = y[i] - sol.x[i];
            }
            std::vector<double> p1(m), p2(m);
            for (std::size_t i = 0; i < m; ++i) p1[i] = prev[i] - y[i];
            const double r1 = hdot(d, dir1), a11 = hdot(p1, dir1);
            bool ok = false;
            if (use == 2) {
                for (std::size_t i = 0; i < m; ++i) p2[i] = prev2[i] - y[i];
                const double r2 = hdot(d, dir2), a12 = hdot(p2, dir1), a21 = hdot(p1, dir2), a22 = hdot(p2, dir2);
                const double det = a11 * a22 - a12 * a21;
                if (std::abs(det) > 1e-14 * (std::abs(a11 * a22) + std::abs(a12 * a21))) {
                    b1 = (-r1 * a22 + r2 * a12) / det;
                    b2 = (-r2 * a11 + r1 * a21) / det;
                    ok = b1 >= 0.0 && b2 >= 0.0 && b1 + b2 < 1.0 - 1e-5;
                }
            }
            if (!ok) {
                b2 = 0.0;
                b1 = a11 != 0.0 ? -r1 / a11 : 0.0;
                // A weight at the upper bound means the remembered point has gone stale; restart
                // from the plain vertex instead of crawling along it.
                if (!(b1 >= 0.0 && b1 < 1.0 - 1e-5)) b1 = 0.0;
            }
            double descent = 0.0;
            for (std::size_t i = 0; i < m; ++i) descent += (d[i] + b1 * p1[i] + (b2 > 0.0 ? b2 * p2[i] : 0.0)) * t[i];
            if (!(descent < 0.0)) b1 = b2 = 0.0;
        }
        const double b0 = 1.0 - b1 - b2;
        s.resize(m);
        s_od.resize(od_count);
        for (std::size_t i = 0; i < m; ++i)
            s[i] = b0 * y[i] + (b1 > 0.0 ? b1 * prev[i] : 0.0) + (b2 > 0.0 ? b2 * prev2[i] : 0.0);
        for (std::size_t w = 0; w < od_count; ++w) {
            s_od[w].resize(m);
            for (std::size_t i = 0; i < m; ++i)
                s_od[w][i] = b0 * y_od[w][i] + (b1 > 0.0 ? b1 * prev_od[w][i] : 0.0) +
                             (b2 > 0.0 ? b2 * prev2_od[w][i] : 0.0);
        }

        for (std::size_t i = 0; i < m; ++i) d[i] = s[i] - sol.x[i];
        const double tau = line_search(model, sol.x, d);
        for (std::size_t i = 0; i < m; ++i) sol.x[i] = std::max(0.0, sol.x[i] + tau * d[i]);
        for (std::size_t w = 0; w < od_count; ++w)
            for (std::size_t i = 0; i < m; ++i)
                sol.od_flows[w][i] = std::max(0.0, sol.od_flows[w][i] + tau * (s_od[w][i] - sol.od_flows[w][i]));

        // A vanishing step leaves no usable curvature information, so the memory is dropped.
        if (tau > 1e-6) {
            std::swap(prev2, prev);
            std::swap(prev2_od, prev_od);
            std::swap(dir2, dir1);
            prev = s;
            prev_od = s_od;
            for (std::size_t i = 0; i < m; ++i) dir1[i] = tau * d[i];
            memory = std::min(memory + 1, 2);
        } else {
            memory = 0;
        }
        ++sol.iterations;
    }
    sol.times = t;
    sol.tstt = dot(sol.x, t);
    return sol;
}

double conservation_residual(const Network& network, const UeSolution& solution) {
    const auto od = network.od_pairs();
    double worst = 0.0;
    std::vector<double> sum(network.link_count(), 0.0);
    for (std::size_t w = 0; w < od.size(); ++w) {
        std::vector<double> net(network.node_count(), 0.0);
        for (std::size_t s = 0; s < network.link_count(); ++s) {
            const double f = solution.od_flows[w][s];
            net[network.tail(s)] += f;
            net[network.head(s)] -= f;
            sum[s] += f;
        }
        const auto o = *network.node_index(od[w].origin);
        const auto dst = *network.node_index(od[w].destination);
        for (std::size_t v = 0; v < net.size(); ++v) {
            const double expected = v == o ? od[w].demand : v == dst ? -od[w].demand : 0.0;
            worst = std::max(worst, std::abs(net[v] - expected) / od[w].demand);
        }
    }
    double scale = 0.0;
    for (double v : solution.x) scale = std::max(scale, std::abs(v));
    if (scale > 0.0)
        for (std::size_t s = 0; s < sum.size(); ++s) worst = std::max(worst, std::abs(sum[s] - solution.x[s]) / scale);
    return worst;
}

PathAudit wardrop_audit(const Network& network, const DisruptionScenario& scenario, const UeSolution& solution,
                        const BprParams& bpr, double epsilon, double min_flow_share) {
    const LinkModel model(network, scenario, bpr);
    std::vector<double> cost;
    model.times(solution.x, cost);
    const auto links = network.links();

    PathAudit audit;
    const auto od = network.od_pairs();
    for (std::size_t w = 0; w < od.size(); ++w) {
        PathAudit::OdAudit entry;
        entry.od = od[w];
        const auto origin = *network.node_index(od[w].origin);
        const auto dest = *network.node_index(od[w].destination);
        entry.min_cost = shortest_path_tree(network, origin, cost).dist[dest];

        std::vector<double> residual = solution.od_flows[w];
        const double tiny = 1e-12 * od[w].demand;
        std::vector<unsigned char> usable(residual.size());
        double remaining = od[w].demand;
        for (std::size_t guard = 0; guard < 10 * links.size() + 100 && remaining > tiny; ++guard) {
            for (std::size_t s = 0; s < residual.size(); ++s) usable[s] = residual[s] > tiny;
            const auto tree = shortest_path_tree(network, origin, cost, usable);
            if (!tree.reaches(dest)) break;
            const auto path = tree.path_to(network, dest);
            double flow = remaining;
            for (const auto s : path) flow = std::min(flow, residual[s]);
            PathAudit::Path p;
            p.flow = flow;
            p.cost = tree.dist[dest];
            for (const auto s : path) {
                residual[s] -= flow;
                p.links.push_back(links[s].id);
            }
            remaining -= flow;
            if (flow >= min_flow_share * od[w].demand)
                entry.worst_violation = std::max(entry.worst_violation, p.cost - entry.min_cost * (1.0 + epsilon));
            entry.paths.push_back(std::move(p));
        }
        audit.worst_violation = std::max(audit.worst_violation, entry.worst_violation);
        audit.od.push_back(std::move(entry));
    }
    audit.passed = audit.worst_violation <= 0.0;
    return audit;
}

void write_ue_csv(const Network& network, const UeSolution& solution, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "link_id,flow,time\n";
    for (std::size_t s = 0; s < network.link_count(); ++s)
        out << network.links()[s].id << ',' << csv::fmt(solution.x[s]) << ',' << csv::fmt(solution.times[s]) << '\n';
}

std::string ue_record_json(const UeSolution& solution, const UeSettings& settings, const BprParams& bpr) {
    nlohmann::json j;
    j["settings"] = {{"max_iters", settings.max_iters},
                     {"gap_tol", settings.gap_tol},
                     {"direction", std::string(to_string(settings.direction))},
                     {"bpr_alpha", bpr.alpha},
                     {"bpr_beta", bpr.beta_exp}};
    j["tstt"] = solution.tstt;
    j["relative_gap"] = solution.relative_gap;
    j["iterations"] = solution.iterations;
    j["converged"] = solution.converged;
    j["gap_trace"] = solution.gap_trace;
    j["objective_trace"] = solution.objective_trace;
    return j.dump(2);
}

}  // namespace qvuln
