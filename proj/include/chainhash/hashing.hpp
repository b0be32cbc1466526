// Copyright 2026 The chainhash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainhash/probability.hpp"

namespace chainhash {

/// Upper limit on slot and universe sizes accepted by the hash model.
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 24;

enum class HashMode { identity, fixed_table };

/// A fixed map from keys {0..universe-1} to slots {0..slots-1}.
class HashModel {
 public:
  /// h(x) = x with universe == slots.
  static HashModel identity(std::size_t slots) {
    check_dimension(slots, "slot count");
    return HashModel(HashMode::identity, slots, slots, {});
  }

  /// h(x) = table[x]; every entry must be < slots.
  static HashModel fixed_table(std::vector<std::uint32_t> table, std::size_t slots) {
    check_dimension(slots, "slot count");
    check_dimension(table.size(), "universe size");
    for (std::size_t x = 0; x < table.size(); ++x) {
      if (table[x] >= slots) {
        throw std::invalid_argument("hash table entry for key " + std::to_string(x) +
                                    " is " + std::to_string(table[x]) +
                                    ", not below slot count " + std::to_string(slots));
      }
    }
    const std::size_t universe = table.size();
    return HashModel(HashMode::fixed_table, slots, universe, std::move(table));
  }

  /// Table whose entry for key x is floor(u_x * slots), with u_0, u_1, ...
  /// consecutive `unit_uniform` draws from an engine seeded with `seed`.
  static HashModel random_table(std::size_t universe, std::size_t slots, std::uint64_t seed) {
    check_dimension(slots, "slot count");
    check_dimension(universe, "universe size");
    Rng rng(seed);
    std::vector<std::uint32_t> table(universe);
    const double n = static_cast<double>(slots);
    for (auto& slot : table) {
      slot = static_cast<std::uint32_t>(unit_uniform(rng) * n);
    }
    return fixed_table(std::move(table), slots);
  }

  /// Reads one decimal slot index per line; line i (0-based) is key i.
  static HashModel load_table_file(const std::string& path, std::size_t slots) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open hash table file: " + path);
    std::vector<std::uint32_t> table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) {
        if (in.peek() == std::char_traits<char>::eof()) break;
        throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": empty line");
      }
      if (!std::all_of(line.begin(), line.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                    ": expected a decimal slot index");
      }
      const unsigned long long v = std::stoull(line);
      if (v >= slots) {
        throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": slot index " +
                                    line + " is not below " + std::to_string(slots));
      }
      table.push_back(static_cast<std::uint32_t>(v));
    }
    if (table.empty()) throw std::invalid_argument("hash table file is empty: " + path);
    return fixed_table(std::move(table), slots);
  }

  HashMode mode() const noexcept { return mode_; }
  std::size_t slots() const noexcept { return slots_; }
  std::size_t universe() const noexcept { return universe_; }
  std::span<const std::uint32_t> table() const noexcept { return table_; }

  std::size_t operator()(Key key) const {
    if (key >= universe_) {
      throw std::invalid_argument("key " + std::to_string(key) + " outside universe of size " +
                                  std::to_string(universe_));
    }
    return mode_ == HashMode::identity ? static_cast<std::size_t>(key) : table_[key];
  }

 private:
  HashModel(HashMode mode, std::size_t slots, std::size_t universe,
            std::vector<std::uint32_t> table)
      : mode_(mode), slots_(slots), universe_(universe), table_(std::move(table)) {}

  static void check_dimension(std::size_t v, const char* what) {
    if (v == 0 || v > kMaxDimension) {
      throw std::invalid_argument(std::string(what) + " must be in [1, 2^24], got " +
                                  std::to_string(v));
    }
  }

  HashMode mode_;
  std::size_t slots_;
  std::size_t universe_;
  std::vector<std::uint32_t> table_;
};

/// k_i: number of keys (with multiplicity, or distinct, depending on the
/// producer) landing in slot i. `total` is their sum.
struct SlotCounts {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::size_t size() const noexcept { return counts.size(); }
  std::uint64_t operator[](std::size_t i) const { return counts[i]; }

  static SlotCounts from_counts(std::vector<std::uint64_t> counts) {
    std::uint64_t m = 0;
    for (auto c : counts) m += c;
    return SlotCounts{std::move(counts), m};
  }

  friend bool operator==(const SlotCounts&, const SlotCounts&) = default;
};

/// p_i = sum of q(x) over keys x with h(x) = i.
inline ProbabilityVector slot_probabilities(const ProbabilityVector& q, const HashModel& h) {
  if (q.size() != h.universe()) {
    throw std::invalid_argument("key distribution has " + std::to_string(q.size()) +
                                " entries but the hash universe has " +
                                std::to_string(h.universe()));
  }
  std::vector<double> p(h.slots(), 0.0);
  for (std::size_t x = 0; x < q.size(); ++x) p[h(x)] += q[x];
  return ProbabilityVector::from_weights(std::move(p));
}

inline SlotCounts count_slots(std::span<const Key> keys, const HashModel& h) {
  std::vector<std::uint64_t> counts(h.slots(), 0);
  for (Key k : keys) ++counts[h(k)];
  return SlotCounts{std::move(counts), keys.size()};
}

/// Like count_slots, but each key value is counted once per slot.
inline SlotCounts distinct_counts(std::span<const Key> keys, const HashModel& h) {
  std::vector<Key> unique(keys.begin(), keys.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  return count_slots(unique, h);
}

}  // namespace chainhash
