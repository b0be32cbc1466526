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

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "chainhash/hashing.hpp"
#include "chainhash/probability.hpp"

namespace chainhash {

/// Raised when the empirical collision probability is requested for fewer
/// than two keys, where m(m-1) vanishes.
class undefined_estimate : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct CollisionEstimate {
  double empirical_cp = 0.0;
  std::uint64_t m = 0;
  std::uint64_t collision_pairs = 0;
};

/// Number of unordered pairs of inserted keys sharing a slot: sum k_i(k_i-1)/2.
/// Equal keys inserted twice count as a colliding pair.
inline std::uint64_t collision_pairs(const SlotCounts& k) noexcept {
  std::uint64_t pairs = 0;
  for (std::uint64_t c : k.counts) {
    // c(c-1) is even; halve the even factor first.
    pairs += (c % 2 == 0) ? (c / 2) * (c - 1) : c * ((c - 1) / 2);
  }
  return pairs;
}

inline CollisionEstimate empirical_collision_probability(const SlotCounts& k) {
  if (k.total < 2) {
    throw undefined_estimate("estimator undefined for m < 2 (got m = " +
                             std::to_string(k.total) + ")");
  }
  const std::uint64_t pairs = collision_pairs(k);
  const std::uint64_t m = k.total;
  // pairs / C(m, 2), kept as an integer ratio until the final division.
  const long double all_pairs =
      static_cast<long double>(m) * static_cast<long double>(m - 1) / 2.0L;
  return CollisionEstimate{static_cast<double>(static_cast<long double>(pairs) / all_pairs), m,
                           pairs};
}

/// O(m^2) reference count of pairs j < j' with h(x_j) == h(x_j').
inline std::uint64_t brute_force_collision_pairs(std::span<const Key> keys, const HashModel& h) {
  std::vector<std::size_t> slots(keys.size());
  for (std::size_t j = 0; j < keys.size(); ++j) slots[j] = h(keys[j]);
  std::uint64_t pairs = 0;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    for (std::size_t jj = j + 1; jj < slots.size(); ++jj) {
      if (slots[j] == slots[jj]) ++pairs;
    }
  }
  return pairs;
}

/// Probability that two independent keys are distinct yet share a slot:
/// ||p||^2 - sum_u q(u)^2.
inline double true_collision_probability(const ProbabilityVector& q, const HashModel& h) {
  const double value = norm_sq(slot_probabilities(q, h)) - norm_sq(q);
  // Rounding can leave a tiny negative residue when h is injective on supp(q).
  return value < 0.0 ? 0.0 : value;
}

/// Signed deviation empirical_cp / ||p||^2 - 1.
inline double signed_relative_error(const CollisionEstimate& est, double p_norm_sq) {
  if (!(p_norm_sq > 0.0)) {
    throw std::invalid_argument("collision probability ||p||^2 must be positive");
  }
  return est.empirical_cp / p_norm_sq - 1.0;
}

inline double relative_error(const CollisionEstimate& est, double p_norm_sq) {
  return std::abs(signed_relative_error(est, p_norm_sq));
}

}  // namespace chainhash
