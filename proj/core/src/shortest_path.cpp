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

#include "qvuln/shortest_path.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <utility>

namespace qvuln {

namespace {

ShortestPathTree dijkstra(const Network& network, std::size_t source, std::span<const double> cost,
                          std::span<const unsigned char> usable) {
    const auto n = network.node_count();
    const auto links = network.links();
    ShortestPathTree tree{std::vector<double>(n, std::numeric_limits<double>::infinity()),
                          std::vector<std::size_t>(n, kNoLink)};
    std::vector<bool> settled(n, false);
    using Label = std::pair<double, std::size_t>;
    std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
    tree.dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (settled[v]) continue;
        settled[v] = true;
        for (const auto s : network.out_links(v)) {
            if (!usable.empty() && !usable[s]) continue;
            const auto w = network.head(s);
            if (settled[w]) continue;
            const double candidate = d + cost[s];
            const bool better = candidate < tree.dist[w] ||
                                (candidate == tree.dist[w] && tree.pred_link[w] != kNoLink &&
                                 links[s].id < links[tree.pred_link[w]].id);
            if (better) {
                tree.dist[w] = candidate;
                tree.pred_link[w] = s;
                heap.emplace(candidate, w);
            }
        }
    }
    return tree;
}

}  // namespace

std::vector<std::size_t> ShortestPathTree::path_to(const Network& network, std::size_t node) const {
    std::vector<std::size_t> path;
    if (!reaches(node)) return path;
    for (auto v = node; pred_link[v] != kNoLink; v = network.tail(pred_link[v])) path.push_back(pred_link[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

ShortestPathTree shortest_path_tree(const Network& network, std::size_t source,
                                    std::span<const double> link_cost) {
    return dijkstra(network, source, link_cost, {});
}

ShortestPathTree shortest_path_tree(const Network& network, std::size_t source,
                                    std::span<const double> link_cost,
                                    std::span<const unsigned char> usable) {
    return dijkstra(network, source, link_cost, usable);
}

std::vector<bool> reachable_from(const Network& network, std::size_t source) {
    std::vector<bool> seen(network.node_count(), false);
    std::deque<std::size_t> frontier{source};
    seen[source] = true;
    while (!frontier.empty()) {
        const auto v = frontier.front();
        frontier.pop_front();
        for (const auto s : network.out_links(v)) {
            const auto w = network.head(s);
            if (!seen[w]) {
                seen[w] = true;
                frontier.push_back(w);
            }
        }
    }
    return seen;
}

}  // namespace qvuln
