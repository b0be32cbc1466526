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
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "chainhash/bounds.hpp"
#include "chainhash/hashing.hpp"
#include "chainhash/probability.hpp"

namespace chainhash {

/// P{ AST(v, x) <= value } >= confidence, with the tail kept separately as in
/// DeviationBound.
struct AstBound {
  double value = 0.0;
  double confidence = 0.0;
  double tail = 1.0;
  bool vacuous = false;
  bool underflow = false;

  static AstBound from_tail(double value, double tail) {
    AstBound b;
    b.value = value;
    b.tail = tail;
    b.confidence = 1.0 - tail;
    b.vacuous = b.confidence <= 0.0;
    b.underflow = b.confidence == 1.0;
    return b;
  }
};

/// Example 1 style answer: AST <= center + halfwidth, where center is the
/// eps -> 0 value cL/sqrt(alpha) + 1 and halfwidth = 8 eps cL/sqrt(alpha).
struct CenteredAstBound {
  double center = 0.0;
  double halfwidth = 0.0;
  double confidence = 0.0;
  double tail = 1.0;

  double upper() const noexcept { return center + halfwidth; }
};

namespace detail {

inline void check_access_dims(const ProbabilityVector& v, std::size_t slots) {
  if (v.size() != slots) {
    throw std::invalid_argument("access pattern has " + std::to_string(v.size()) +
                                " entries but the table has " + std::to_string(slots) +
                                " slots");
  }
}

inline void check_ast_params(const char* op, double load, std::uint64_t n, double v_norm,
                             double p_norm) {
  require_n_above_24(op, n);
  if (!(load > 9.0) || !std::isfinite(load)) {
    violated(op, "L > 9 required (got L = " + num(load) + ")");
  }
  // Norms computed from vectors may miss the closed endpoints by an ulp or two.
  constexpr double slack = 1e-12;
  if (!(v_norm > 0.0 && v_norm <= 1.0 + slack)) {
    violated(op, "||v|| in (0, 1] required (got " + num(v_norm) + ")");
  }
  const double p_min = 1.0 / std::sqrt(static_cast<double>(n));
  if (!(p_norm >= p_min * (1.0 - slack) && p_norm <= 1.0 + slack)) {
    violated(op, "||p|| in [1/sqrt(n), 1] required (got " + num(p_norm) + ")");
  }
}

inline void check_example_params(const char* op, double c, double epsilon, double load) {
  if (!(c > 0.0)) violated(op, "c > 0 required (got c = " + num(c) + ")");
  if (!(epsilon > 0.0)) violated(op, "epsilon > 0 required (got epsilon = " + num(epsilon) + ")");
  if (!(load > 9.0) || !std::isfinite(load)) {
    violated(op, "L > 9 required (got L = " + num(load) + ")");
  }
}

inline void check_alpha(const char* op, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    violated(op, "alpha in (0, 1] required (got alpha = " + num(alpha) + ")");
  }
}

}  // namespace detail

/// Average search time: access-weighted number of distinct keys per slot.
inline double ast_exact(const ProbabilityVector& v, std::span<const Key> keys,
                        const HashModel& h) {
  detail::check_access_dims(v, h.slots());
  const SlotCounts chains = distinct_counts(keys, h);
  double total = 0.0;
  for (std::size_t i = 0; i < chains.size(); ++i) total += v[i] * static_cast<double>(chains[i]);
  return total;
}

/// sum v_i k_i, counting repeated keys; never below ast_exact.
inline double ast_upper_empirical(const ProbabilityVector& v, const SlotCounts& k) {
  detail::check_access_dims(v, k.size());
  double total = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) total += v[i] * static_cast<double>(k[i]);
  return total;
}

/// L n ||v|| ||p|| sqrt(1 + (3 + 6s)/sqrt(L) + 5 s^2 / L) + 1 with confidence
/// 1 - (10/9) exp(-s^2/4).
inline AstBound ast_bound_s(double load, std::uint64_t n, double v_norm, double p_norm,
                            double s) {
  constexpr const char* op = "ast_bound_s";
  detail::check_ast_params(op, load, n, v_norm, p_norm);
  if (!(s >= 0.0) || !std::isfinite(s)) {
    detail::violated(op, "s >= 0 required (got s = " + detail::num(s) + ")");
  }
  const double radicand = 1.0 + (3.0 + 6.0 * s) / std::sqrt(load) + 5.0 * s * s / load;
  const double value =
      load * static_cast<double>(n) * v_norm * p_norm * std::sqrt(radicand) + 1.0;
  return AstBound::from_tail(value, detail::ten_ninths_tail(s * s / 4.0));
}

/// L n ||v|| ||p|| (1 + 8 eps) + 1 with confidence 1 - (10/9) exp(-L eps^2).
inline AstBound ast_bound_eps(double load, std::uint64_t n, double v_norm, double p_norm,
                              double epsilon) {
  constexpr const char* op = "ast_bound_eps";
  detail::check_ast_params(op, load, n, v_norm, p_norm);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    detail::violated(op, "epsilon > 0 required (got epsilon = " + detail::num(epsilon) + ")");
  }
  const double value =
      load * static_cast<double>(n) * v_norm * p_norm * (1.0 + 8.0 * epsilon) + 1.0;
  return AstBound::from_tail(value, detail::ten_ninths_tail(load * epsilon * epsilon));
}

/// A user touching a fraction alpha of the slots uniformly, on a table with
/// ||p|| <= c / sqrt(n).
inline CenteredAstBound example1_bound(double c, double alpha, double epsilon, double load) {
  constexpr const char* op = "example1_bound";
  detail::check_example_params(op, c, epsilon, load);
  detail::check_alpha(op, alpha);
  const double scale = c * load / std::sqrt(alpha);
  CenteredAstBound b;
  b.center = scale + 1.0;
  b.halfwidth = scale * 8.0 * epsilon;
  b.tail = detail::ten_ninths_tail(load * epsilon * epsilon);
  b.confidence = 1.0 - b.tail;
  return b;
}

/// Query made of two subqueries, each behaving like the Example 1 user with
/// its own alpha; union bound doubles the tail.
inline AstBound example2_bound(double c, double alpha1, double alpha2, double epsilon,
                               double load) {
  constexpr const char* op = "example2_bound";
  detail::check_example_params(op, c, epsilon, load);
  detail::check_alpha(op, alpha1);
  detail::check_alpha(op, alpha2);
  const double value =
      c * load / std::sqrt(std::min(alpha1, alpha2)) * (1.0 + 8.0 * epsilon) + 1.0;
  return AstBound::from_tail(value, 2.0 * detail::ten_ninths_tail(load * epsilon * epsilon));
}

}  // namespace chainhash
