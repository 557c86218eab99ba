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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qvuln {

/// Directed road link. Free-flow time is kept in hours; the CSV fixture stores minutes.
struct Link {
    int id = 0;  ///< 1-based, contiguous within a Network
    int from_node = 0;
    int to_node = 0;
    double length_km = 0.0;
    double free_flow_time_h = 0.0;
    double capacity = 0.0;  ///< pcu/h
    double max_speed_kmh = 0.0;

    bool operator==(const Link&) const = default;
};

/// Fixed, inelastic origin-destination demand in pcu/h.
struct OdPair {
    int origin = 0;
    int destination = 0;
    double demand = 0.0;

    bool operator==(const OdPair&) const = default;
};

/// Parameters of the BPR volume-delay curve t0 * (1 + alpha * (x / C)^beta_exp).
struct BprParams {
    double alpha = 0.15;
    double beta_exp = 4.0;

    /// Throws ValidationError unless alpha > 0 and beta_exp >= 1.
    void validate() const;

    bool operator==(const BprParams&) const = default;
};

enum class DemandLevel { kLow, kMedium, kHigh };
enum class NetworkFormat { kNativeCsv, kTntp };

DemandLevel parse_demand_level(std::string_view text);
NetworkFormat parse_network_format(std::string_view text);
std::string_view to_string(DemandLevel level);

/// Immutable directed network. Node indices are assigned in order of first appearance:
/// an explicit node list first, then link endpoints in link order, then OD endpoints.
class Network {
 public:
    Network() = default;
    Network(std::vector<Link> links, std::vector<OdPair> od_pairs);
    Network(std::vector<int> nodes, std::vector<Link> links, std::vector<OdPair> od_pairs);

    std::span<const Link> links() const noexcept { return links_; }
    std::span<const OdPair> od_pairs() const noexcept { return od_pairs_; }
    std::span<const int> nodes() const noexcept { return nodes_; }
    std::size_t link_count() const noexcept { return links_.size(); }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    /// Link by 1-based id; requires contiguous ids.
    const Link& link(int id) const;

    std::optional<std::size_t> node_index(int node_id) const;
    std::size_t tail(std::size_t link_pos) const noexcept { return tails_[link_pos]; }
    std::size_t head(std::size_t link_pos) const noexcept { return heads_[link_pos]; }

    /// Positions (into links()) of the links leaving `node`, ordered by link id.
    std::span<const std::size_t> out_links(std::size_t node) const noexcept;

    /// Copy without the given link ids; remaining links are renumbered 1..n in order.
    Network without_links(std::span<const int> ids) const;

    Network with_demand(std::vector<OdPair> od_pairs) const;

    bool operator==(const Network& other) const;

 private:
    void index();

    std::vector<int> nodes_;
    std::unordered_map<int, std::size_t> node_lookup_;
    std::vector<Link> links_;
    std::vector<OdPair> od_pairs_;
    std::vector<std::size_t> tails_;
    std::vector<std::size_t> heads_;
    std::vector<std::size_t> out_offsets_;
    std::vector<std::size_t> out_links_;
};

/// Per-invariant outcome of validate().
struct ValidationReport {
    struct Check {
        std::string name;
        bool passed = true;
        std::string detail;
    };

    std::vector<Check> checks;
    std::vector<OdPair> unreachable;

    bool ok() const noexcept;
    const Check* find(std::string_view name) const noexcept;
    /// Failed checks joined as "name: detail; ...".
    std::string failures() const;

    bool operator==(const ValidationReport& other) const;
};

/// Pure: the same network always yields the same report.
ValidationReport validate(const Network& network);

/// Standard 13-node, 19-link Nguyen-Dupuis network with four OD pairs
/// (1->2, 1->3, 4->2, 4->3) at 500 / 1000 / 1500 pcu/h each.
Network builtin_nguyen_dupuis(DemandLevel level = DemandLevel::kMedium);

/// Explicit file pair. `demand` may be empty (network without OD pairs).
struct NetworkSource {
    std::filesystem::path links;
    std::filesystem::path demand;
    NetworkFormat format = NetworkFormat::kNativeCsv;
};

/// Loads and validates. For the native format `path` is either a directory holding
/// links.csv and od.csv or a links CSV with an od.csv next to it. For TNTP `path` is the
/// *_net.tntp file; a sibling *_trips.tntp is picked up when present.
Network load_network(const std::filesystem::path& path, NetworkFormat format);
Network load_network(const NetworkSource& source);

/// Writes the native CSV pair; free-flow times go back to minutes.
void save_network(const Network& network, const std::filesystem::path& links_csv,
                  const std::filesystem::path& od_csv);

}  // namespace qvuln
