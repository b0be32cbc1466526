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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "chainhash/ast.hpp"
#include "chainhash/bounds.hpp"
#include "chainhash/estimator.hpp"
#include "chainhash/hashing.hpp"
#include "chainhash/probability.hpp"

namespace chainhash {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Named distribution. `size` 0 means "whatever the context needs" (the hash
/// universe for keys, the slot count for access patterns).
struct DistributionSpec {
  std::string name = "uniform";  ///< uniform | zipf | restricted | pointmass
  double zipf_exponent = 1.0;
  double alpha = 1.0;
  std::size_t size = 0;
  std::size_t point = 0;
};

struct HashSpec {
  std::string mode = "identity";  ///< identity | table
  std::size_t universe = 0;  ///< table mode only; 0 falls back to 2^20
  std::uint64_t seed = 0;  ///< random table generation
  std::string file;  ///< table mode: load from file instead of generating
};

/// Which bound a run is checked against, plus its parameters. Unused fields
/// are ignored. A missing delta (collision bounds) is derived from (n, m, eps).
struct BoundSpec {
  std::string kind = "load_factor";  ///< gr | main | fixed_s | load_factor | gr_form | ast_s | ast_eps
  double epsilon = 0.15;
  std::optional<double> delta;
  double s = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
};

struct ExperimentConfig {
  std::string experiment = "collision";  ///< collision | ast
  DistributionSpec keys;
  HashSpec hash;
  DistributionSpec access{"uniform"};
  std::size_t n = 64;
  std::uint64_t m = 0;  ///< 0: derive from `load` or from the bound's m relation
  double load = 0.0;
  std::uint64_t trials = 1000;
  std::uint64_t base_seed = 1;
  BoundSpec bound;
  std::string output;  ///< JSON report path; empty to skip
  std::string csv_output;  ///< per-trial CSV path; empty to skip
  unsigned threads = 0;  ///< 0: hardware concurrency
};

inline constexpr std::size_t kDefaultTableUniverse = std::size_t{1} << 20;
inline constexpr std::uint64_t kMaxStoredRecords = 1'000'000;
inline constexpr std::size_t kReservoirSize = 10'000;

inline ProbabilityVector build_distribution(const DistributionSpec& spec, std::size_t size) {
  if (spec.size != 0 && spec.size != size) {
    throw std::invalid_argument("distribution '" + spec.name + "' declares size " +
                                std::to_string(spec.size) + " but " + std::to_string(size) +
                                " is required here");
  }
  if (spec.name == "uniform") return make_uniform(size);
  if (spec.name == "zipf") return make_zipf(size, spec.zipf_exponent);
  if (spec.name == "restricted") return make_restricted_uniform(size, spec.alpha);
  if (spec.name == "pointmass") return make_point_mass(size, spec.point);
  throw std::invalid_argument("unknown distribution '" + spec.name +
                              "' (expected uniform, zipf, restricted or pointmass)");
}

inline HashModel build_hash(const HashSpec& spec, std::size_t slots) {
  if (spec.mode == "identity") return HashModel::identity(slots);
  if (spec.mode == "table") {
    if (!spec.file.empty()) return HashModel::load_table_file(spec.file, slots);
    const std::size_t universe = spec.universe == 0 ? kDefaultTableUniverse : spec.universe;
    return HashModel::random_table(universe, slots, spec.seed);
  }
  throw std::invalid_argument("unknown hash mode '" + spec.mode + "' (expected identity or table)");
}

inline void to_json(nlohmann::json& j, const DistributionSpec& d) {
  j = {{"name", d.name}, {"zipf_exponent", d.zipf_exponent}, {"alpha", d.alpha},
       {"size", d.size}, {"point", d.point}};
}
inline void from_json(const nlohmann::json& j, DistributionSpec& d) {
  if (j.is_string()) {
    d.name = j.get<std::string>();
    return;
  }
  d.name = j.value("name", d.name);
  d.zipf_exponent = j.value("zipf_exponent", d.zipf_exponent);
  d.alpha = j.value("alpha", d.alpha);
  d.size = j.value("size", d.size);
  d.point = j.value("point", d.point);
}

inline void to_json(nlohmann::json& j, const HashSpec& h) {
  j = {{"mode", h.mode}, {"universe", h.universe}, {"seed", h.seed}, {"file", h.file}};
}
inline void from_json(const nlohmann::json& j, HashSpec& h) {
  h.mode = j.value("mode", h.mode);
  h.universe = j.value("universe", h.universe);
  h.seed = j.value("seed", h.seed);
  h.file = j.value("file", h.file);
}

inline void to_json(nlohmann::json& j, const BoundSpec& b) {
  j = {{"kind", b.kind}, {"epsilon", b.epsilon}, {"s", b.s}, {"beta", b.beta},
       {"lambda", b.lambda}};
  j["delta"] = b.delta ? nlohmann::json(*b.delta) : nlohmann::json(nullptr);
}
inline void from_json(const nlohmann::json& j, BoundSpec& b) {
  b.kind = j.value("kind", b.kind);
  b.epsilon = j.value("epsilon", b.epsilon);
  b.s = j.value("s", b.s);
  b.beta = j.value("beta", b.beta);
  b.lambda = j.value("lambda", b.lambda);
  if (j.contains("delta") && !j.at("delta").is_null()) b.delta = j.at("delta").get<double>();
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = {{"experiment", c.experiment}, {"keys", c.keys},       {"hash", c.hash},
       {"access", c.access},         {"n", c.n},             {"m", c.m},
       {"load", c.load},             {"trials", c.trials},   {"base_seed", c.base_seed},
       {"bound", c.bound},           {"output", c.output},   {"csv_output", c.csv_output},
       {"threads", c.threads}};
}
inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  static const char* const known[] = {"experiment", "keys",   "hash",       "access",
                                      "n",          "m",      "load",       "trials",
                                      "base_seed",  "bound",  "output",     "csv_output",
                                      "threads"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  c.experiment = j.value("experiment", c.experiment);
  if (j.contains("keys")) c.keys = j.at("keys").get<DistributionSpec>();
  if (j.contains("hash")) c.hash = j.at("hash").get<HashSpec>();
  if (j.contains("access")) c.access = j.at("access").get<DistributionSpec>();
  c.n = j.value("n", c.n);
  c.m = j.value("m", c.m);
  c.load = j.value("load", c.load);
  c.trials = j.value("trials", c.trials);
  c.base_seed = j.value("base_seed", c.base_seed);
  if (j.contains("bound")) c.bound = j.at("bound").get<BoundSpec>();
  c.output = j.value("output", c.output);
  c.csv_output = j.value("csv_output", c.csv_output);
  c.threads = j.value("threads", c.threads);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(in).get<ExperimentConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed config file " + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// One Monte Carlo trial. For collision runs `value` is the empirical
/// collision probability and `rel_error` its unsigned relative error against
/// ||p||^2. For AST runs `value` is sum v_i k_i, `ast_exact` the distinct-key
/// AST, and `rel_error` the unsigned deviation of `value` from its mean
/// m * sum v_i p_i.
struct TrialRecord {
  std::uint64_t trial = 0;
  double value = 0.0;
  double rel_error = 0.0;
  double signed_error = 0.0;
  double ast_exact = 0.0;
  bool violation = false;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct Aggregates {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  double violation_frequency = 0.0;
  double mean_value = 0.0;
  double std_value = 0.0;  ///< sample standard deviation (n - 1)
  double mean_rel_error = 0.0;
  double max_rel_error = 0.0;
  // AST runs only.
  double mean_ast_exact = 0.0;
  std::uint64_t exact_le_upper = 0;
  std::uint64_t exact_eq_upper = 0;
};

/// The bound a run is judged against. `threshold` is the relative-error
/// ceiling (collision) or the AST value ceiling (AST).
struct TheoreticalBound {
  std::string kind;
  double threshold = 0.0;
  double confidence = 0.0;
  double tail = 1.0;
  bool vacuous = false;
  bool underflow = false;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::uint64_t m = 0;
  double p_norm_sq = 0.0;
  double v_norm = 0.0;  ///< AST runs
  double expected_value = 0.0;  ///< ||p||^2 (collision) or m sum v_i p_i (AST)
  TheoreticalBound bound;
  Aggregates aggregates;
  std::vector<TrialRecord> records;  ///< every trial, or a reservoir sample past 10^6 trials
  bool records_complete = true;
  double duration_seconds = 0.0;
};

inline void to_json(nlohmann::json& j, const TheoreticalBound& b) {
  j = {{"kind", b.kind},         {"threshold", b.threshold}, {"confidence", b.confidence},
       {"tail", b.tail},         {"vacuous", b.vacuous},     {"underflow", b.underflow}};
}

inline void to_json(nlohmann::json& j, const Aggregates& a) {
  j = {{"trials", a.trials},
       {"violations", a.violations},
       {"violation_frequency", a.violation_frequency},
       {"mean_value", a.mean_value},
       {"std_value", a.std_value},
       {"mean_rel_error", a.mean_rel_error},
       {"max_rel_error", a.max_rel_error},
       {"mean_ast_exact", a.mean_ast_exact},
       {"exact_le_upper", a.exact_le_upper},
       {"exact_eq_upper", a.exact_eq_upper}};
}

inline nlohmann::json report_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["config"] = r.config;
  j["m"] = r.m;
  j["p_norm_sq"] = r.p_norm_sq;
  j["v_norm"] = r.v_norm;
  j["expected_value"] = r.expected_value;
  j["bound"] = r.bound;
  j["aggregates"] = r.aggregates;
  j["records_stored"] = r.records.size();
  j["records_complete"] = r.records_complete;
  j["duration_seconds"] = r.duration_seconds;
  return j;
}

inline void write_report_json(const ExperimentReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << report_json(r).dump(2) << '\n';
}

inline void write_report_csv(const ExperimentReport& r, std::ostream& out) {
  const bool ast = r.config.experiment == "ast";
  out << (ast ? "trial,value,rel_error,violation,ast_exact\n" : "trial,value,rel_error,violation\n");
  char buf[128];
  for (const auto& rec : r.records) {
    if (ast) {
      std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%d,%.17g\n",
                    static_cast<unsigned long long>(rec.trial), rec.value, rec.rel_error,
                    rec.violation ? 1 : 0, rec.ast_exact);
    } else {
      std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%d\n",
                    static_cast<unsigned long long>(rec.trial), rec.value, rec.rel_error,
                    rec.violation ? 1 : 0);
    }
    out << buf;
  }
}

inline void write_report_csv(const ExperimentReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV: " + path);
  write_report_csv(r, out);
}

// ---------------------------------------------------------------------------
// Harness
// ---------------------------------------------------------------------------

/// A validated, ready-to-run experiment. Every trial is a pure function of the
/// configuration and its index, so `trial(t)` can be replayed on its own.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg)
      : cfg_(std::move(cfg)),
        hash_(build_hash(cfg_.hash, cfg_.n)),
        keys_(build_distribution(cfg_.keys, hash_.universe())),
        slots_(slot_probabilities(keys_, hash_)),
        access_(cfg_.experiment == "ast" ? build_distribution(cfg_.access, cfg_.n)
                                         : make_uniform(cfg_.n)),
        sampler_(keys_) {
    if (cfg_.experiment != "collision" && cfg_.experiment != "ast") {
      throw std::invalid_argument("unknown experiment '" + cfg_.experiment +
                                  "' (expected collision or ast)");
    }
    if (cfg_.trials < 1) throw std::invalid_argument("trials must be >= 1");
    p_norm_sq_ = norm_sq(slots_);
    resolve_m_and_bound();
    if (cfg_.experiment == "ast") {
      double mean_access = 0.0;
      for (std::size_t i = 0; i < cfg_.n; ++i) mean_access += access_[i] * slots_[i];
      expected_ = static_cast<double>(m_) * mean_access;
    } else {
      expected_ = p_norm_sq_;
    }
  }

  const ExperimentConfig& config() const noexcept { return cfg_; }
  std::uint64_t m() const noexcept { return m_; }
  const TheoreticalBound& bound() const noexcept { return bound_; }
  const HashModel& hash() const noexcept { return hash_; }
  const ProbabilityVector& key_distribution() const noexcept { return keys_; }
  const ProbabilityVector& slot_distribution() const noexcept { return slots_; }
  const ProbabilityVector& access_pattern() const noexcept { return access_; }

  /// Keys inserted in trial t.
  KeySequence trial_keys(std::uint64_t t) const {
    return sample(sampler_, trial_seed(cfg_.base_seed, t), m_);
  }

  TrialRecord trial(std::uint64_t t) const {
    const KeySequence keys = trial_keys(t);
    const SlotCounts k = count_slots(keys, hash_);
    TrialRecord rec;
    rec.trial = t;
    if (cfg_.experiment == "collision") {
      const CollisionEstimate est = empirical_collision_probability(k);
      rec.value = est.empirical_cp;
      rec.signed_error = signed_relative_error(est, p_norm_sq_);
      rec.rel_error = std::abs(rec.signed_error);
      rec.violation = rec.rel_error > bound_.threshold;
    } else {
      rec.value = ast_upper_empirical(access_, k);
      rec.ast_exact = ast_exact(access_, keys, hash_);
      rec.signed_error = expected_ > 0.0 ? rec.value / expected_ - 1.0 : 0.0;
      rec.rel_error = std::abs(rec.signed_error);
      rec.violation = rec.value > bound_.threshold;
    }
    return rec;
  }

  ExperimentReport run() const {
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.config = cfg_;
    report.m = m_;
    report.p_norm_sq = p_norm_sq_;
    report.v_norm = cfg_.experiment == "ast" ? norm(access_) : 0.0;
    report.expected_value = expected_;
    report.bound = bound_;

    const std::uint64_t trials = cfg_.trials;
    report.records_complete = trials <= kMaxStoredRecords;
    if (report.records_complete) report.records.reserve(trials);
    Rng reservoir_rng(cfg_.base_seed ^ 0xD1B54A32D192ED03ULL);

    // Welford accumulation in trial order keeps aggregates independent of
    // how trials were scheduled across threads.
    Aggregates& agg = report.aggregates;
    double m2 = 0.0;
    double rel_sum = 0.0;
    double exact_sum = 0.0;

    constexpr std::uint64_t kBlock = 1 << 14;
    std::vector<TrialRecord> block;
    for (std::uint64_t first = 0; first < trials; first += kBlock) {
      const std::uint64_t count = std::min<std::uint64_t>(kBlock, trials - first);
      run_block(first, count, block);
      for (const TrialRecord& rec : block) {
        ++agg.trials;
        if (rec.violation) ++agg.violations;
        const double d = rec.value - agg.mean_value;
        agg.mean_value += d / static_cast<double>(agg.trials);
        m2 += d * (rec.value - agg.mean_value);
        rel_sum += rec.rel_error;
        agg.max_rel_error = std::max(agg.max_rel_error, rec.rel_error);
        if (cfg_.experiment == "ast") {
          exact_sum += rec.ast_exact;
          if (rec.ast_exact <= rec.value) ++agg.exact_le_upper;
          if (rec.ast_exact == rec.value) ++agg.exact_eq_upper;
        }
        store(report, rec, reservoir_rng);
      }
    }
    agg.violation_frequency =
        static_cast<double>(agg.violations) / static_cast<double>(agg.trials);
    agg.std_value = agg.trials > 1 ? std::sqrt(m2 / static_cast<double>(agg.trials - 1)) : 0.0;
    agg.mean_rel_error = rel_sum / static_cast<double>(agg.trials);
    agg.mean_ast_exact = exact_sum / static_cast<double>(agg.trials);

    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }

 private:
  void resolve_m_and_bound() {
    const std::uint64_t n = cfg_.n;
    const double nd = static_cast<double>(n);
    const BoundSpec& b = cfg_.bound;
    std::optional<double> implied_m;  // m forced by the bound's own hypothesis
    if (b.kind == "gr" || b.kind == "gr_form") {
      implied_m = std::pow(nd, 0.5 + b.beta + b.lambda);
    } else if ((b.kind == "main" || b.kind == "fixed_s") && b.delta) {
      implied_m = std::pow(b.epsilon, -2.0) * std::pow(nd, 1.0 + *b.delta);
    }

    if (cfg_.m != 0) {
      m_ = cfg_.m;
    } else if (cfg_.load > 0.0) {
      m_ = static_cast<std::uint64_t>(std::llround(cfg_.load * nd));
    } else if (implied_m) {
      m_ = static_cast<std::uint64_t>(std::llround(*implied_m));
    } else {
      throw std::invalid_argument("config must give m or load (or a bound that fixes m)");
    }
    if (implied_m && std::abs(static_cast<double>(m_) - *implied_m) > 1.0) {
      throw std::invalid_argument("m = " + std::to_string(m_) +
                                  " contradicts the bound's key-count relation (m = " +
                                  detail::num(*implied_m) + ")");
    }
    if (cfg_.experiment == "collision" && m_ < 2) {
      throw std::invalid_argument("collision experiments need m >= 2");
    }

    const double load = static_cast<double>(m_) / nd;
    bound_.kind = b.kind;
    if (cfg_.experiment == "collision") {
      DeviationBound d;
      if (b.kind == "gr") {
        d = gr_bound(n, b.beta, b.lambda);
      } else if (b.kind == "main") {
        d = main_bound(n, b.epsilon, b.delta.value_or(delta_for(n, m_, b.epsilon)), b.s);
      } else if (b.kind == "fixed_s") {
        d = cor_fixed_s(n, b.epsilon, b.delta.value_or(delta_for(n, m_, b.epsilon)));
      } else if (b.kind == "load_factor") {
        d = cor_load_factor(b.epsilon, load);
      } else if (b.kind == "gr_form") {
        d = cor_gr_form(n, b.beta, b.lambda);
      } else {
        throw std::invalid_argument("bound '" + b.kind + "' does not apply to collision runs");
      }
      bound_.threshold = d.error_bound;
      bound_.confidence = d.confidence;
      bound_.tail = d.tail;
      bound_.vacuous = d.vacuous;
      bound_.underflow = d.underflow;
    } else {
      const double v_norm = norm(access_);
      const double p_norm = std::sqrt(p_norm_sq_);
      AstBound a;
      if (b.kind == "ast_eps") {
        a = ast_bound_eps(load, n, v_norm, p_norm, b.epsilon);
      } else if (b.kind == "ast_s") {
        a = ast_bound_s(load, n, v_norm, p_norm, b.s);
      } else {
        throw std::invalid_argument("bound '" + b.kind + "' does not apply to ast runs");
      }
      bound_.threshold = a.value;
      bound_.confidence = a.confidence;
      bound_.tail = a.tail;
      bound_.vacuous = a.vacuous;
      bound_.underflow = a.underflow;
    }
  }

  void run_block(std::uint64_t first, std::uint64_t count, std::vector<TrialRecord>& out) const {
    out.assign(count, TrialRecord{});
    unsigned workers = cfg_.threads != 0 ? cfg_.threads : std::thread::hardware_concurrency();
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, count));
    if (workers == 1) {
      for (std::uint64_t i = 0; i < count; ++i) out[i] = trial(first + i);
      return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t i = w; i < count; i += workers) out[i] = trial(first + i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  static void store(ExperimentReport& report, const TrialRecord& rec, Rng& rng) {
    if (report.records_complete) {
      report.records.push_back(rec);
      return;
    }
    // Reservoir sampling (Algorithm R) once the run exceeds the storage cap.
    if (report.records.size() < kReservoirSize) {
      report.records.push_back(rec);
      return;
    }
    const std::uint64_t j = rng() % (rec.trial + 1);
    if (j < kReservoirSize) report.records[j] = rec;
  }

  ExperimentConfig cfg_;
  HashModel hash_;
  ProbabilityVector keys_;
  ProbabilityVector slots_;
  ProbabilityVector access_;
  Sampler sampler_;
  double p_norm_sq_ = 0.0;
  double expected_ = 0.0;
  std::uint64_t m_ = 0;
  TheoreticalBound bound_;
};

inline ExperimentReport run_collision_trials(ExperimentConfig cfg) {
  cfg.experiment = "collision";
  return Experiment(std::move(cfg)).run();
}

inline ExperimentReport run_ast_trials(ExperimentConfig cfg) {
  cfg.experiment = "ast";
  return Experiment(std::move(cfg)).run();
}

// ---------------------------------------------------------------------------
// Perturbation lemma
// ---------------------------------------------------------------------------

struct PerturbationCheck {
  std::uint64_t lhs = 0;  ///< sum_i |k_i(x) - k_i(y)|
  std::uint64_t rhs = 0;  ///< 2 * #{j : x_j != y_j}
  bool holds = false;
};

/// Changing one inserted key moves at most one key out of one slot and into
/// another, so slot counts differ in l1 by at most twice the Hamming distance.
inline PerturbationCheck check_perturbation_lemma(std::span<const Key> x, std::span<const Key> y,
                                                  const HashModel& h) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("key sequences differ in length (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  const SlotCounts kx = count_slots(x, h);
  const SlotCounts ky = count_slots(y, h);
  PerturbationCheck c;
  for (std::size_t i = 0; i < kx.size(); ++i) {
    c.lhs += kx[i] > ky[i] ? kx[i] - ky[i] : ky[i] - kx[i];
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != y[j]) c.rhs += 2;
  }
  c.holds = c.lhs <= c.rhs;
  return c;
}

struct LemmaSweep {
  std::uint64_t pairs = 0;
  std::uint64_t failures = 0;
  std::uint64_t max_lhs = 0;
  std::uint64_t max_rhs = 0;
  std::uint64_t tight = 0;  ///< pairs with lhs == rhs
};

/// Checks the lemma on `pairs` random (x, y) pairs of length m over a random
/// table. Pair t draws x uniformly, then resamples a random-size subset of
/// its coordinates to obtain y.
inline LemmaSweep perturbation_sweep(const HashModel& h, std::size_t m, std::uint64_t pairs,
                                     std::uint64_t base_seed) {
  LemmaSweep sweep;
  const Sampler keys(make_uniform(h.universe()));
  const double md = static_cast<double>(m);
  for (std::uint64_t t = 0; t < pairs; ++t) {
    Rng rng(trial_seed(base_seed, t));
    KeySequence x(m);
    keys.fill(rng, x);
    KeySequence y = x;
    const auto changes = static_cast<std::size_t>(unit_uniform(rng) * (md + 1.0));
    for (std::size_t c = 0; c < changes && m > 0; ++c) {
      const auto j = static_cast<std::size_t>(unit_uniform(rng) * md);
      y[j] = keys(rng);
    }
    const PerturbationCheck r = check_perturbation_lemma(x, y, h);
    ++sweep.pairs;
    if (!r.holds) ++sweep.failures;
    if (r.lhs == r.rhs) ++sweep.tight;
    sweep.max_lhs = std::max(sweep.max_lhs, r.lhs);
    sweep.max_rhs = std::max(sweep.max_rhs, r.rhs);
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Unbiasedness
// ---------------------------------------------------------------------------

struct UnbiasednessResult {
  double sample_mean = 0.0;
  double sample_std = 0.0;
  double p_norm_sq = 0.0;
  double z_score = std::numeric_limits<double>::quiet_NaN();  ///< NaN when sample_std == 0
  bool exact_match = false;  ///< zero variance and mean equal to ||p||^2
  std::uint64_t trials = 0;
};

/// Monte Carlo mean of the empirical collision probability against ||p||^2,
/// as a z-score over `trials` independent key sequences of length m.
inline UnbiasednessResult unbiasedness_check(const ProbabilityVector& q, const HashModel& h,
                                             std::uint64_t m, std::uint64_t trials,
                                             std::uint64_t base_seed) {
  if (m < 2) throw std::invalid_argument("unbiasedness check needs m >= 2");
  if (trials < 100) throw std::invalid_argument("unbiasedness check needs trials >= 100");
  const ProbabilityVector p = slot_probabilities(q, h);
  const Sampler sampler(q);
  UnbiasednessResult r;
  r.p_norm_sq = norm_sq(p);
  r.trials = trials;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const KeySequence keys = sample(sampler, trial_seed(base_seed, t), m);
    const double cp = empirical_collision_probability(count_slots(keys, h)).empirical_cp;
    const double d = cp - mean;
    mean += d / static_cast<double>(t + 1);
    m2 += d * (cp - mean);
  }
  r.sample_mean = mean;
  r.sample_std = std::sqrt(m2 / static_cast<double>(trials - 1));
  if (r.sample_std > 0.0) {
    r.z_score = (mean - r.p_norm_sq) / (r.sample_std / std::sqrt(static_cast<double>(trials)));
  } else {
    r.exact_match = std::abs(mean - r.p_norm_sq) <= 1e-12;
  }
  return r;
}

}  // namespace chainhash
