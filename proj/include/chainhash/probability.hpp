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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chainhash {

using Key = std::uint64_t;
using KeySequence = std::vector<Key>;

/// Random engine used for every sampled quantity in the library.
///
/// MT19937-64 is fully specified by the C++ standard, so a given seed yields
/// the same stream on every conforming implementation. Doubles are derived
/// from the top 53 bits of each draw (see `unit_uniform`) instead of
/// std::uniform_real_distribution, whose algorithm is implementation-defined.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the high 53 bits of one engine draw.
inline double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Seed of trial `t` in a run with `base_seed`.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t t) noexcept {
  return base_seed ^ (t * 0x9E3779B97F4A7C15ULL);
}

inline constexpr double kSumTolerance = 1e-12;

/// Nonnegative weights summing to one over {0, ..., size-1}.
///
/// Used for the key distribution over the universe, the induced slot
/// distribution, and a user's access pattern over slots. Immutable once built.
class ProbabilityVector {
 public:
  /// Normalizes `weights` by their exact sum. Throws std::invalid_argument on
  /// an empty input, a negative or non-finite entry, or an all-zero vector.
  static ProbabilityVector from_weights(std::vector<double> weights) {
    if (weights.empty()) {
      throw std::invalid_argument("probability vector must have at least one entry");
    }
    double sum = 0.0;
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) {
        throw std::invalid_argument("probability weights must be finite and nonnegative");
      }
      sum += w;
    }
    if (!(sum > 0.0)) {
      throw std::invalid_argument("probability weights must not all be zero");
    }
    for (double& w : weights) w /= sum;
    return ProbabilityVector(std::move(weights));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

  double sum() const noexcept {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

 private:
  explicit ProbabilityVector(std::vector<double> w) : weights_(std::move(w)) {}

  std::vector<double> weights_;
};

inline ProbabilityVector make_uniform(std::size_t size) {
  if (size == 0) throw std::invalid_argument("uniform distribution needs size >= 1");
  return ProbabilityVector::from_weights(std::vector<double>(size, 1.0));
}

/// weight_i proportional to (i+1)^(-exponent).
inline ProbabilityVector make_zipf(std::size_t size, double exponent) {
  if (size == 0) throw std::invalid_argument("zipf distribution needs size >= 1");
  if (!std::isfinite(exponent) || exponent < 0.0) {
    throw std::invalid_argument("zipf exponent must be finite and nonnegative");
  }
  std::vector<double> w(size);
  for (std::size_t i = 0; i < size; ++i) {
    w[i] = std::pow(static_cast<double>(i + 1), -exponent);
  }
  return ProbabilityVector::from_weights(std::move(w));
}

/// Uniform over the first floor(alpha * size) entries, zero elsewhere.
inline ProbabilityVector make_restricted_uniform(std::size_t size, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("restricted-uniform alpha must lie in (0, 1]");
  }
  // The small nudge keeps e.g. 0.1 * 10 from flooring to 0.
  const auto active = static_cast<std::size_t>(
      std::floor(alpha * static_cast<double>(size) * (1.0 + 1e-12)));
  if (active == 0) {
    throw std::invalid_argument("restricted-uniform needs floor(alpha * size) >= 1");
  }
  std::vector<double> w(size, 0.0);
  std::fill_n(w.begin(), std::min(active, size), 1.0);
  return ProbabilityVector::from_weights(std::move(w));
}

inline ProbabilityVector make_point_mass(std::size_t size, std::size_t at = 0) {
  if (at >= size) throw std::invalid_argument("point mass index must be < size");
  std::vector<double> w(size, 0.0);
  w[at] = 1.0;
  return ProbabilityVector::from_weights(std::move(w));
}

/// Squared Euclidean norm; for a slot distribution this is the collision
/// probability of the hash function.
inline double norm_sq(const ProbabilityVector& pv) noexcept {
  double s = 0.0;
  for (double w : pv.weights()) s += w * w;
  return s;
}

inline double norm(const ProbabilityVector& pv) noexcept { return std::sqrt(norm_sq(pv)); }

/// Inverse-CDF sampler over a fixed ProbabilityVector: O(size) to build,
/// O(log size) per draw.
class Sampler {
 public:
  explicit Sampler(const ProbabilityVector& pv) : cdf_(pv.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      acc += pv[i];
      cdf_[i] = acc;
    }
    // Pin the top of the table so u < 1 always lands on a positive-weight entry.
    const double total = cdf_.back();
    for (double& c : cdf_) c /= total;
    for (std::size_t i = cdf_.size(); i-- > 0;) {
      if (pv[i] > 0.0) {
        std::fill(cdf_.begin() + static_cast<std::ptrdiff_t>(i), cdf_.end(), 1.0);
        break;
      }
    }
  }

  std::size_t size() const noexcept { return cdf_.size(); }

  Key operator()(Rng& rng) const {
    const double u = unit_uniform(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<Key>(it - cdf_.begin());
  }

  void fill(Rng& rng, std::span<Key> out) const {
    for (Key& k : out) k = (*this)(rng);
  }

 private:
  std::vector<double> cdf_;
};

/// `count` i.i.d. draws from `pv` using an engine seeded with `seed`.
inline KeySequence sample(const Sampler& sampler, std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  KeySequence keys(count);
  sampler.fill(rng, keys);
  return keys;
}

inline KeySequence sample(const ProbabilityVector& pv, std::uint64_t seed, std::size_t count) {
  return sample(Sampler(pv), seed, count);
}

}  // namespace chainhash
