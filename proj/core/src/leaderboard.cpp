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

#include "qvuln/leaderboard.hpp"

#include <algorithm>

namespace qvuln {

namespace {

bool before(double ea, const std::vector<int>& la, double eb, const std::vector<int>& lb) {
    if (ea != eb) return ea < eb;
    return la < lb;
}

}  // namespace

Leaderboard::Leaderboard(std::size_t capacity, int required_k) : capacity_(capacity), required_k_(required_k) {}

bool Leaderboard::offer(std::span<const std::uint8_t> u, double energy) {
    if (capacity_ == 0 || !may_accept(energy)) return false;
    if (required_k_ >= 0 && std::count(u.begin(), u.end(), 1) != required_k_) return false;
    auto links = selected_links(u);
    for (const auto& e : entries_)
        if (e.links == links) return false;
    auto pos = std::find_if(entries_.begin(), entries_.end(),
                            [&](const Entry& e) { return before(energy, links, e.energy, e.links); });
    if (pos == entries_.end() && entries_.size() >= capacity_) return false;
    entries_.insert(pos, Entry{Bits(u.begin(), u.end()), std::move(links), energy});
    if (entries_.size() > capacity_) entries_.pop_back();
    return true;
}

void Leaderboard::merge(const Leaderboard& other) {
    for (const auto& e : other.entries_) offer(e.u, e.energy);
}

}  // namespace qvuln
