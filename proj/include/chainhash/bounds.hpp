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
#include <sstream>
#include <stdexcept>
#include <string>

namespace chainhash {

/// A statement P{ relative error <= error_bound } >= confidence.
///
/// `tail` is 1 - confidence evaluated directly, so it keeps its precision when
/// confidence rounds to 1. A nonpositive confidence carries no information
/// (`vacuous`). `underflow` marks a confidence that rounded to exactly 1 in
/// double precision although the tail term is positive.
struct DeviationBound {
  double error_bound = 0.0;
  double confidence = 0.0;
  double tail = 1.0;
  bool vacuous = false;
  bool underflow = false;

  static DeviationBound from_tail(double error_bound, double tail) {
    DeviationBound b;
    b.error_bound = error_bound;
    b.tail = tail;
    b.confidence = 1.0 - tail;
    b.vacuous = b.confidence <= 0.0;
    b.underflow = b.confidence == 1.0;
    return b;
  }
};

/// Parameters tied together by m = eps^-2 n^(1+delta), i.e. L = m/n = eps^-2 n^delta.
struct BoundParams {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double s = 0.0;
  double load = 0.0;  ///< L = m / n before rounding m
  double beta = 0.0;  ///< -2 log(eps) / log(n)
  double lambda = 0.0;  ///< 1/2 + delta
  double m_exact = 0.0;  ///< eps^-2 n^(1+delta)
  double m_rounding = 0.0;  ///< m - m_exact
};

namespace detail {

[[noreturn]] inline void violated(const std::string& op, const std::string& what) {
  throw std::invalid_argument(op + ": precondition violated: " + what);
}

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline void require_n_above_24(const char* op, std::uint64_t n) {
  if (n <= 24) violated(op, "n > 24 required (got n = " + std::to_string(n) + ")");
}

inline void require_epsilon(const char* op, double eps) {
  if (!(eps > 0.0 && eps < 1.0 / 3.0)) {
    violated(op, "0 < epsilon < 1/3 required (got epsilon = " + num(eps) + ")");
  }
}

inline double ten_ninths_tail(double exponent) { return (10.0 / 9.0) * std::exp(-exponent); }

}  // namespace detail

/// Polynomial deviation bound of Goldreich and Ron for m = n^(1/2 + beta + lambda):
/// error 3 / n^(beta/2) with confidence 1 - 4 / (9 n^lambda).
inline DeviationBound gr_bound(std::uint64_t n, double beta, double lambda) {
  constexpr const char* op = "gr_bound";
  if (n < 2) detail::violated(op, "n >= 2 required (got n = " + std::to_string(n) + ")");
  if (!(beta > 0.0)) detail::violated(op, "beta > 0 required (got beta = " + detail::num(beta) + ")");
  if (!(lambda >= 0.0)) {
    detail::violated(op, "lambda >= 0 required (got lambda = " + detail::num(lambda) + ")");
  }
  const double nd = static_cast<double>(n);
  return DeviationBound::from_tail(3.0 / std::pow(nd, beta / 2.0),
                                   4.0 / (9.0 * std::pow(nd, lambda)));
}

/// Exponential deviation bound for m = eps^-2 n^(1+delta):
/// error eps (3 + 6s / n^(delta/2) + 5 s^2 eps / n^delta),
/// confidence 1 - (10/9) exp(-s^2 / 4).
inline DeviationBound main_bound(std::uint64_t n, double epsilon, double delta, double s) {
  constexpr const char* op = "main_bound";
  detail::require_n_above_24(op, n);
  detail::require_epsilon(op, epsilon);
  if (!(delta > 0.0)) detail::violated(op, "delta > 0 required (got delta = " + detail::num(delta) + ")");
  if (!(s >= 0.0) || !std::isfinite(s)) {
    detail::violated(op, "s >= 0 required (got s = " + detail::num(s) + ")");
  }
  const double nd = static_cast<double>(n);
  const double error = epsilon * (3.0 + 6.0 * s / std::pow(nd, delta / 2.0) +
                                  5.0 * s * s * epsilon / std::pow(nd, delta));
  return DeviationBound::from_tail(error, detail::ten_ninths_tail(s * s / 4.0));
}

/// main_bound with s = 2 n^(delta/2), rounded up to error 22 eps.
inline DeviationBound cor_fixed_s(std::uint64_t n, double epsilon, double delta) {
  constexpr const char* op = "cor_fixed_s";
  detail::require_n_above_24(op, n);
  detail::require_epsilon(op, epsilon);
  if (!(delta > 0.0)) detail::violated(op, "delta > 0 required (got delta = " + detail::num(delta) + ")");
  return DeviationBound::from_tail(
      22.0 * epsilon, detail::ten_ninths_tail(std::pow(static_cast<double>(n), delta)));
}

/// Load-factor form: for L = m/n > eps^-2, error 22 eps with confidence
/// 1 - (10/9) exp(-L eps^2).
inline DeviationBound cor_load_factor(double epsilon, double load) {
  constexpr const char* op = "cor_load_factor";
  detail::require_epsilon(op, epsilon);
  if (!(load * epsilon * epsilon > 1.0)) {
    detail::violated(op, "1/3 > epsilon > 1/sqrt(L) required (got epsilon = " +
                             detail::num(epsilon) + ", L = " + detail::num(load) + ")");
  }
  return DeviationBound::from_tail(22.0 * epsilon,
                                   detail::ten_ninths_tail(load * epsilon * epsilon));
}

/// cor_fixed_s restated with eps = n^(-beta/2), delta = lambda - 1/2.
inline DeviationBound cor_gr_form(std::uint64_t n, double beta, double lambda) {
  constexpr const char* op = "cor_gr_form";
  detail::require_n_above_24(op, n);
  const double nd = static_cast<double>(n);
  const double beta_min = std::log(3.0) / std::log(nd);
  if (!(beta > beta_min)) {
    detail::violated(op, "beta > log 3 / log n = " + detail::num(beta_min) +
                             " required (got beta = " + detail::num(beta) + ")");
  }
  if (!(lambda > 0.5)) {
    detail::violated(op, "lambda > 1/2 required (got lambda = " + detail::num(lambda) + ")");
  }
  return DeviationBound::from_tail(22.0 / 5.0 * std::pow(nd, -beta / 2.0),
                                   detail::ten_ninths_tail(std::pow(nd, lambda - 0.5)));
}

/// Realizes (n, L, eps) as theorem parameters: m = round(L n),
/// delta = log(L eps^2) / log n, beta = -2 log(eps) / log n, lambda = 1/2 + delta
/// and s = 2 n^(delta/2).
inline BoundParams params_from_load(std::uint64_t n, double load, double epsilon) {
  constexpr const char* op = "params_from_load";
  detail::require_n_above_24(op, n);
  detail::require_epsilon(op, epsilon);
  if (!(load * epsilon * epsilon > 1.0) || !std::isfinite(load)) {
    detail::violated(op, "L * epsilon^2 > 1 required so that delta > 0 (got L = " +
                             detail::num(load) + ", epsilon = " + detail::num(epsilon) + ")");
  }
  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);
  BoundParams p;
  p.n = n;
  p.epsilon = epsilon;
  p.load = load;
  p.delta = std::log(load * epsilon * epsilon) / log_n;
  p.beta = -2.0 * std::log(epsilon) / log_n;
  p.lambda = 0.5 + p.delta;
  p.s = 2.0 * std::pow(nd, p.delta / 2.0);
  p.m_exact = std::pow(epsilon, -2.0) * std::pow(nd, 1.0 + p.delta);
  p.m = static_cast<std::uint64_t>(std::llround(load * nd));
  p.m_rounding = static_cast<double>(p.m) - p.m_exact;
  return p;
}

/// delta implied by a realized key count: m = eps^-2 n^(1+delta).
inline double delta_for(std::uint64_t n, std::uint64_t m, double epsilon) {
  const double nd = static_cast<double>(n);
  return std::log(static_cast<double>(m) * epsilon * epsilon / nd) / std::log(nd);
}

}  // namespace chainhash
