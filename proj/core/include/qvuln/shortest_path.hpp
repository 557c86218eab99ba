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
#include <limits>
#include <span>
#include <vector>

#include "qvuln/network.hpp"

namespace qvuln {

inline constexpr std::size_t kNoLink = std::numeric_limits<std::size_t>::max();

/// Label-setting shortest-path tree from one node under nonnegative link costs.
/// Ties between equal-cost labels go to the lower link id, so trees are deterministic.
struct ShortestPathTree {
    std::vector<double> dist;            ///< per node index; +inf when unreachable
    std::vector<std::size_t> pred_link;  ///< link position entering the node, kNoLink at the root

    bool reaches(std::size_t node) const noexcept {
        return dist[node] != std::numeric_limits<double>::infinity();
    }
    /// Link positions from the root to `node`, in travel order. Empty if unreachable.
    std::vector<std::size_t> path_to(const Network& network, std::size_t node) const;
};

ShortestPathTree shortest_path_tree(const Network& network, std::size_t source,
                                    std::span<const double> link_cost);

/// Same as shortest_path_tree but only links with usable[s] != 0 may be traversed.
ShortestPathTree shortest_path_tree(const Network& network, std::size_t source,
                                    std::span<const double> link_cost,
                                    std::span<const unsigned char> usable);

/// Breadth-first reachability over directed links.
std::vector<bool> reachable_from(const Network& network, std::size_t source);

}  // namespace qvuln
