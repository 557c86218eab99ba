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

#include "qvuln/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "qvuln/detail/csv.hpp"
#include "qvuln/error.hpp"
#include "qvuln/shortest_path.hpp"

namespace qvuln {

void BprParams::validate() const {
    if (!(alpha > 0.0)) throw ValidationError("BPR alpha must be > 0");
    if (!(beta_exp >= 1.0)) throw ValidationError("BPR beta exponent must be >= 1");
}

DemandLevel parse_demand_level(std::string_view text) {
    if (text == "low") return DemandLevel::kLow;
    if (text == "medium") return DemandLevel::kMedium;
    if (text == "high") return DemandLevel::kHigh;
    throw Error("unknown demand level '" + std::string(text) + "' (low|medium|high)");
}

NetworkFormat parse_network_format(std::string_view text) {
    if (text == "native-csv" || text == "native" || text == "csv") return NetworkFormat::kNativeCsv;
    if (text == "tntp") return NetworkFormat::kTntp;
    throw Error("unknown network format '" + std::string(text) + "' (native-csv|tntp)");
}

std::string_view to_string(DemandLevel level) {
    switch (level) {
        case DemandLevel::kLow: return "low";
        case DemandLevel::kMedium: return "medium";
        case DemandLevel::kHigh: return "high";
    }
    return "medium";
}

// ---------------------------------------------------------------------------
// Network

Network::Network(std::vector<Link> links, std::vector<OdPair> od_pairs)
    : Network({}, std::move(links), std::move(od_pairs)) {}

Network::Network(std::vector<int> nodes, std::vector<Link> links, std::vector<OdPair> od_pairs)
    : links_(std::move(links)), od_pairs_(std::move(od_pairs)) {
    auto add = [this](int id) {
        if (node_lookup_.emplace(id, nodes_.size()).second) nodes_.push_back(id);
    };
    for (int id : nodes) add(id);
    for (const auto& l : links_) {
        add(l.from_node);
        add(l.to_node);
    }
    for (const auto& od : od_pairs_) {
        add(od.origin);
        add(od.destination);
    }
    index();
}

void Network::index() {
    const auto m = links_.size();
    tails_.resize(m);
    heads_.resize(m);
    std::vector<std::size_t> degree(nodes_.size() + 1, 0);
    for (std::size_t s = 0; s < m; ++s) {
        tails_[s] = node_lookup_.at(links_[s].from_node);
        heads_[s] = node_lookup_.at(links_[s].to_node);
        ++degree[tails_[s] + 1];
    }
    out_offsets_.assign(degree.size(), 0);
    std::partial_sum(degree.begin(), degree.end(), out_offsets_.begin());
    out_links_.assign(m, 0);
    std::vector<std::size_t> fill(out_offsets_.begin(), out_offsets_.end() - 1);
    for (std::size_t s = 0; s < m; ++s) out_links_[fill[tails_[s]]++] = s;
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        std::sort(out_links_.begin() + out_offsets_[v], out_links_.begin() + out_offsets_[v + 1],
                  [this](std::size_t a, std::size_t b) { return links_[a].id < links_[b].id; });
}

const Link& Network::link(int id) const {
    if (id >= 1 && static_cast<std::size_t>(id) <= links_.size() && links_[id - 1].id == id)
        return links_[id - 1];
    for (const auto& l : links_)
        if (l.id == id) return l;
    throw Error("no link with id " + std::to_string(id));
}

std::optional<std::size_t> Network::node_index(int node_id) const {
    const auto it = node_lookup_.find(node_id);
    if (it == node_lookup_.end()) return std::nullopt;
    return it->second;
}

std::span<const std::size_t> Network::out_links(std::size_t node) const noexcept {
    return std::span<const std::size_t>(out_links_).subspan(out_offsets_[node],
                                                             out_offsets_[node + 1] - out_offsets_[node]);
}

Network Network::without_links(std::span<const int> ids) const {
    const std::set<int> drop(ids.begin(), ids.end());
    std::vector<Link> kept;
    for (const auto& l : links_) {
        if (drop.count(l.id)) continue;
        kept.push_back(l);
        kept.back().id = static_cast<int>(kept.size());
    }
    return Network(nodes_, std::move(kept), od_pairs_);
}

Network Network::with_demand(std::vector<OdPair> od_pairs) const {
    return Network(nodes_, links_, std::move(od_pairs));
}

bool Network::operator==(const Network& other) const {
    return nodes_ == other.nodes_ && links_ == other.links_ && od_pairs_ == other.od_pairs_;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const ValidationReport::Check* ValidationReport::find(std::string_view name) const noexcept {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string ValidationReport::failures() const {
    std::string out;
    for (const auto& c : checks) {
        if (c.passed) continue;
        if (!out.empty()) out += "; ";
        out += c.name + ": " + c.detail;
    }
    return out;
}

bool ValidationReport::operator==(const ValidationReport& other) const {
    if (checks.size() != other.checks.size() || unreachable != other.unreachable) return false;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& a = checks[i];
        const auto& b = other.checks[i];
        if (a.name != b.name || a.passed != b.passed || a.detail != b.detail) return false;
    }
    return true;
}

namespace {

void note(std::string& detail, const std::string& item) {
    if (!detail.empty()) detail += ", ";
    detail += item;
}

std::string num(double v) { return csv::fmt(v); }

}  // namespace

ValidationReport validate(const Network& network) {
    ValidationReport report;
    const auto links = network.links();
    auto add = [&report](std::string name, const std::string& detail) {
        report.checks.push_back({std::move(name), detail.empty(), detail});
    };

    add("nonempty links", links.empty() ? "network has no links" : "");

    {
        std::string detail;
        std::set<int> seen;
        for (const auto& l : links)
            if (!seen.insert(l.id).second) note(detail, "duplicate link id " + std::to_string(l.id));
        for (std::size_t i = 0; i < links.size(); ++i)
            if (detail.empty() && links[i].id != static_cast<int>(i + 1))
                note(detail, "link ids not contiguous 1.." + std::to_string(links.size()) + " at position " +
                                 std::to_string(i + 1) + " (id " + std::to_string(links[i].id) + ")");
        add("unique contiguous link ids", detail);
    }
    {
        std::string detail;
        for (const auto& l : links)
            if (!(l.capacity > 0.0))
                note(detail, "link " + std::to_string(l.id) + " has capacity " + num(l.capacity));
        add("positive capacity", detail);
    }
    {
        std::string detail;
        for (const auto& l : links)
            if (!(l.free_flow_time_h > 0.0))
                note(detail, "link " + std::to_string(l.id) + " has free-flow time " + num(l.free_flow_time_h));
        add("positive free-flow time", detail);
    }
    {
        std::string detail;
        for (const auto& l : links)
            if (l.from_node == l.to_node)
                note(detail, "link " + std::to_string(l.id) + " is a self loop at node " + std::to_string(l.from_node));
        add("distinct link endpoints", detail);
    }
    {
        std::string detail;
        for (const auto& od : network.od_pairs())
            if (!(od.demand > 0.0) || od.origin == od.destination)
                note(detail, "od " + std::to_string(od.origin) + "->" + std::to_string(od.destination) +
                                 " demand " + num(od.demand));
        add("positive demand", detail);
    }
    {
        std::string detail;
        std::vector<bool> has_link(network.node_count(), false);
        for (std::size_t s = 0; s < links.size(); ++s) {
            has_link[network.tail(s)] = true;
            has_link[network.head(s)] = true;
        }
        for (const auto& od : network.od_pairs())
            for (int node : {od.origin, od.destination})
                if (!has_link[*network.node_index(node)])
                    note(detail, "node " + std::to_string(node) + " is not on any link");
        add("known od endpoints", detail);
    }
    {
        std::string detail;
        std::vector<std::vector<bool>> cache(network.node_count());
        for (const auto& od : network.od_pairs()) {
            const auto o = *network.node_index(od.origin);
            if (cache[o].empty()) cache[o] = reachable_from(network, o);
            if (!cache[o][*network.node_index(od.destination)]) {
                report.unreachable.push_back(od);
                note(detail, "no path " + std::to_string(od.origin) + "->" + std::to_string(od.destination));
            }
        }
        add("od reachability", detail);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Built-in fixture

Network builtin_nguyen_dupuis(DemandLevel level) {
    struct Row {
        int from, to;
        double length, fftime_min, speed, capacity;
    };
    static constexpr std::array<Row, 19> kRows{{
        {1, 12, 10, 12, 50, 800}, {1, 5, 11, 10, 60, 700},  {12, 6, 10, 10, 70, 600},
        {12, 8, 16, 15, 60, 900}, {4, 5, 11, 8, 80, 700},   {5, 6, 12, 12, 60, 500},
        {6, 7, 8, 6, 80, 300},    {7, 8, 10, 8, 70, 400},   {4, 9, 14, 12, 70, 600},
        {5, 9, 10, 12, 60, 600},  {6, 10, 11, 12, 50, 700}, {7, 11, 12, 12, 60, 800},
        {8, 2, 13, 13, 70, 800},  {9, 10, 10, 10, 60, 400}, {10, 11, 12, 9, 80, 600},
        {11, 2, 11, 8, 80, 500},  {9, 13, 14, 12, 70, 900}, {11, 3, 10, 12, 60, 600},
        {13, 3, 10, 12, 60, 600},
    }};
    std::vector<Link> links;
    for (std::size_t i = 0; i < kRows.size(); ++i) {
        const auto& r = kRows[i];
        links.push_back({static_cast<int>(i + 1), r.from, r.to, r.length, r.fftime_min / 60.0, r.capacity, r.speed});
    }
    const double demand = level == DemandLevel::kLow ? 500.0 : level == DemandLevel::kMedium ? 1000.0 : 1500.0;
    std::vector<OdPair> od{{1, 2, demand}, {1, 3, demand}, {4, 2, demand}, {4, 3, demand}};
    return Network(std::move(links), std::move(od));
}

// ---------------------------------------------------------------------------
// Loading

namespace {

Network checked(Network network) {
    const auto report = validate(network);
    if (!report.ok()) throw ValidationError("invalid network: " + report.failures());
    return network;
}

std::vector<Link> read_native_links(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    csv::require_header(table, {"link_id", "from", "to", "length_km", "fftime_min", "speed_kmh", "capacity_pcuh"});
    std::vector<Link> links;
    for (const auto& row : table.rows) {
        Link l;
        l.id = static_cast<int>(csv::to_int(table, row, 0));
        l.from_node = static_cast<int>(csv::to_int(table, row, 1));
        l.to_node = static_cast<int>(csv::to_int(table, row, 2));
        l.length_km = csv::to_double(table, row, 3);
        l.free_flow_time_h = csv::to_double(table, row, 4) / 60.0;
        l.max_speed_kmh = csv::to_double(table, row, 5);
        l.capacity = csv::to_double(table, row, 6);
        links.push_back(l);
    }
    return links;
}

std::vector<OdPair> read_native_od(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    csv::require_header(table, {"origin", "dest", "demand_pcuh"});
    std::vector<OdPair> od;
    for (const auto& row : table.rows)
        od.push_back({static_cast<int>(csv::to_int(table, row, 0)), static_cast<int>(csv::to_int(table, row, 1)),
                      csv::to_double(table, row, 2)});
    return od;
}

struct TntpNet {
    int node_count = 0;
    std::vector<Link> links;
};

std::vector<std::string> tokens(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

double tntp_number(const std::string& file, std::size_t line, const std::string& token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size())
        throw ParseError(file, line, "not a number: '" + token + "'");
    return v;
}

int tntp_int(const std::string& file, std::size_t line, const std::string& token) {
    const double v = tntp_number(file, line, token);
    if (v != std::floor(v)) throw ParseError(file, line, "not an integer: '" + token + "'");
    return static_cast<int>(v);
}

TntpNet read_tntp_net(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    const std::string file = path.string();
    TntpNet net;
    int declared_links = -1;
    bool metadata = true;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto body = csv::trim(line);
        if (body.empty()) continue;
        if (metadata) {
            if (body.front() != '<') throw ParseError(file, number, "expected metadata line");
            const auto close = body.find('>');
            if (close == std::string_view::npos) throw ParseError(file, number, "unterminated metadata tag");
            const auto key = body.substr(1, close - 1);
            const auto value = csv::trim(body.substr(close + 1));
            if (key == "END OF METADATA") metadata = false;
            else if (key == "NUMBER OF NODES") net.node_count = tntp_int(file, number, std::string(value));
            else if (key == "NUMBER OF LINKS") declared_links = tntp_int(file, number, std::string(value));
            continue;
        }
        if (body.front() == '~') continue;
        auto t = tokens(body);
        if (!t.empty() && t.back() == ";") t.pop_back();
        else if (!t.empty() && t.back().back() == ';') t.back().pop_back();
        else throw ParseError(file, number, "link record must end with ';'");
        if (t.size() != 10) throw ParseError(file, number, "expected 10 link fields, got " + std::to_string(t.size()));
        Link l;
        l.id = static_cast<int>(net.links.size() + 1);
        l.from_node = tntp_int(file, number, t[0]);
        l.to_node = tntp_int(file, number, t[1]);
        l.capacity = tntp_number(file, number, t[2]);
        l.length_km = tntp_number(file, number, t[3]);
        l.free_flow_time_h = tntp_number(file, number, t[4]) / 60.0;
        l.max_speed_kmh = tntp_number(file, number, t[7]);
        net.links.push_back(l);
    }
    if (metadata) throw ParseError(file, number, "missing <END OF METADATA>");
    if (declared_links >= 0 && declared_links != static_cast<int>(net.links.size()))
        throw ParseError(file, number,
                         "metadata declares " + std::to_string(declared_links) + " links, file has " +
                             std::to_string(net.links.size()));
    return net;
}

std::vector<OdPair> read_tntp_trips(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    const std::string file = path.string();
    std::vector<OdPair> od;
    int origin = -1;
    bool metadata = true;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto body = csv::trim(line);
        if (body.empty() || body.front() == '~') continue;
        if (body.front() == '<') {
            if (body.find("<END OF METADATA>") == 0) metadata = false;
            continue;
        }
        metadata = false;
        const auto t = tokens(body);
        if (t.front() == "Origin") {
            if (t.size() != 2) throw ParseError(file, number, "malformed Origin line");
            origin = tntp_int(file, number, t[1]);
            continue;
        }
        if (origin < 0) throw ParseError(file, number, "demand entry before any Origin line");
        for (const auto& cell : csv::split(body, ';')) {
            if (cell.empty()) continue;
            const auto colon = cell.find(':');
            if (colon == std::string::npos) throw ParseError(file, number, "expected 'dest : demand'");
            const int dest = tntp_int(file, number, std::string(csv::trim(std::string_view(cell).substr(0, colon))));
            const double demand = tntp_number(file, number, std::string(csv::trim(std::string_view(cell).substr(colon + 1))));
            if (demand > 0.0 && dest != origin) od.push_back({origin, dest, demand});
        }
    }
    (void)metadata;
    return od;
}

}  // namespace

Network load_network(const NetworkSource& source) {
    if (!std::filesystem::exists(source.links)) throw Error("network file not found: " + source.links.string());
    if (!source.demand.empty() && !std::filesystem::exists(source.demand))
        throw Error("demand file not found: " + source.demand.string());
    if (source.format == NetworkFormat::kNativeCsv) {
        auto links = read_native_links(source.links);
        auto od = source.demand.empty() ? std::vector<OdPair>{} : read_native_od(source.demand);
        return checked(Network(std::move(links), std::move(od)));
    }
    auto net = read_tntp_net(source.links);
    auto od = source.demand.empty() ? std::vector<OdPair>{} : read_tntp_trips(source.demand);
    std::vector<int> nodes(static_cast<std::size_t>(std::max(net.node_count, 0)));
    std::iota(nodes.begin(), nodes.end(), 1);
    return checked(Network(std::move(nodes), std::move(net.links), std::move(od)));
}

Network load_network(const std::filesystem::path& path, NetworkFormat format) {
    NetworkSource source;
    source.format = format;
    if (format == NetworkFormat::kNativeCsv) {
        if (std::filesystem::is_directory(path)) {
            source.links = path / "links.csv";
            source.demand = path / "od.csv";
        } else {
            source.links = path;
            const auto sibling = path.parent_path() / "od.csv";
            if (std::filesystem::exists(sibling)) source.demand = sibling;
        }
    } else {
        source.links = path;
        std::string name = path.filename().string();
        const auto pos = name.rfind("_net.tntp");
        if (pos != std::string::npos) {
            name.replace(pos, 9, "_trips.tntp");
            const auto sibling = path.parent_path() / name;
            if (std::filesystem::exists(sibling)) source.demand = sibling;
        }
    }
    return load_network(source);
}

namespace {

// Minutes text whose value divided by 60 gives back exactly `hours`.
std::string minutes_text(double hours) {
    const double m = hours * 60.0;
    double candidate = m;
    for (int i = 0; i < 4; ++i) candidate = std::nextafter(candidate, -HUGE_VAL);
    for (int i = 0; i < 9; ++i, candidate = std::nextafter(candidate, HUGE_VAL))
        if (candidate / 60.0 == hours) return csv::fmt_exact(candidate);
    return csv::fmt_exact(m);
}

}  // namespace

void save_network(const Network& network, const std::filesystem::path& links_csv,
                  const std::filesystem::path& od_csv) {
    auto out = csv::open_out(links_csv);
    out << "link_id,from,to,length_km,fftime_min,speed_kmh,capacity_pcuh\n";
    for (const auto& l : network.links())
        out << l.id << ',' << l.from_node << ',' << l.to_node << ',' << csv::fmt_exact(l.length_km) << ','
            << minutes_text(l.free_flow_time_h) << ',' << csv::fmt_exact(l.max_speed_kmh) << ','
            << csv::fmt_exact(l.capacity) << '\n';
    auto od = csv::open_out(od_csv);
    od << "origin,dest,demand_pcuh\n";
    for (const auto& p : network.od_pairs())
        od << p.origin << ',' << p.destination << ',' << csv::fmt_exact(p.demand) << '\n';
}

}  // namespace qvuln
