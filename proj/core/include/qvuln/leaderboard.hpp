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
#include <span>
#include <vector>

#include "qvuln/qubo.hpp"

namespace qvuln {

/// Bounded set of distinct bit vectors with the lowest energies seen so far. Ordering is by
/// energy, ties broken lexicographically on the sorted link ids, so merges are order-independent.
class Leaderboard {
 public:
    struct Entry {
        Bits u;
        std::vector<int> links;
        double energy = 0.0;
    };

    /// `required_k` < 0 accepts any cardinality; otherwise offers with another popcount are ignored.
    explicit Leaderboard(std::size_t capacity, int required_k = -1);

    /// Returns true if the entry was inserted.
    bool offer(std::span<const std::uint8_t> u, double energy);
    void merge(const Leaderboard& other);

    /// Cheap pre-check: false when an offer with this energy would certainly be rejected.
    bool may_accept(double energy) const noexcept {
        return entries_.size() < capacity_ || energy <= entries_.back().energy;
    }

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t capacity() const noexcept { return capacity_; }
    int required_k() const noexcept { return required_k_; }

 private:
    std::size_t capacity_;
    int required_k_;
    std::vector<Entry> entries_;
};

}  // namespace qvuln
