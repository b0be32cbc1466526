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

// Command-line front end for the chainhash library.
//
// Every subcommand is a thin adapter: parse flags, call one library
// operation, print its fields. Exit status is 0 on success, 1 when a
// library precondition rejects the input, 2 on a usage error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "chainhash/chainhash.hpp"

namespace {

using nlohmann::ordered_json;
using namespace chainhash;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_scalar(const ordered_json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

void print_table(const std::string& name, const ordered_json& rows) {
  std::cout << name << ":\n";
  if (rows.empty()) return;
  std::vector<std::string> header;
  for (const auto& [key, _] : rows.front().items()) header.push_back(key);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    auto& line = cells.emplace_back();
    for (std::size_t c = 0; c < header.size(); ++c) {
      line.push_back(format_scalar(row.at(header[c])));
      width[c] = std::max(width[c], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::cout << " ";
    for (std::size_t c = 0; c < line.size(); ++c) {
      std::cout << ' ' << std::string(width[c] - line[c].size(), ' ') << line[c];
    }
    std::cout << '\n';
  };
  emit(header);
  for (const auto& line : cells) emit(line);
}

void print_text(const ordered_json& result, const std::string& prefix = "") {
  for (const auto& [key, value] : result.items()) {
    if (value.is_object()) {
      print_text(value, prefix + key + ".");
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      print_table(prefix + key, value);
    } else {
      std::cout << prefix << key << ": " << format_scalar(value) << '\n';
    }
  }
}

ordered_json bound_json(const DeviationBound& b) {
  return {{"error_bound", b.error_bound}, {"confidence", b.confidence}, {"tail", b.tail},
          {"vacuous", b.vacuous},         {"underflow", b.underflow}};
}

ordered_json ast_json(const AstBound& b) {
  return {{"value", b.value}, {"confidence", b.confidence}, {"tail", b.tail},
          {"vacuous", b.vacuous}, {"underflow", b.underflow}};
}

// Flags shared by every subcommand that draws keys.
struct KeyFlags {
  std::string dist = "uniform";
  double zipf_exp = 1.0;
  double alpha = 1.0;
  std::size_t n = 64;
  std::uint64_t m = 0;
  double load = 0.0;
  std::uint64_t seed = 1;
  std::size_t universe = 0;
  std::string table_file;
  std::uint64_t table_seed = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--dist", dist, "Key distribution")
        ->check(CLI::IsMember({"uniform", "zipf", "restricted", "pointmass"}));
    cmd->add_option("--zipf-exp", zipf_exp, "Zipf exponent");
    cmd->add_option("--alpha", alpha, "Active fraction for the restricted distribution");
    cmd->add_option("--n", n, "Number of slots");
    cmd->add_option("--m", m, "Number of inserted keys");
    cmd->add_option("--load", load, "Load factor L = m/n (used when --m is absent)");
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_option("--universe", universe,
                    "Key universe size; selects a random fixed hash table");
    cmd->add_option("--table", table_file, "Hash table file (one slot index per line)");
    cmd->add_option("--table-seed", table_seed, "Seed of the random hash table");
  }

  HashSpec hash_spec() const {
    HashSpec h;
    if (universe != 0 || !table_file.empty()) {
      h.mode = "table";
      h.universe = universe;
      h.file = table_file;
      h.seed = table_seed;
    }
    return h;
  }

  DistributionSpec dist_spec() const {
    DistributionSpec d;
    d.name = dist;
    d.zipf_exponent = zipf_exp;
    d.alpha = alpha;
    return d;
  }

  std::uint64_t key_count() const {
    if (m != 0) return m;
    if (load > 0.0) return static_cast<std::uint64_t>(std::llround(load * static_cast<double>(n)));
    throw usage_error("either --m or --load is required");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision-probability estimation and search-time bounds for hashing with chaining"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable JSON output");

  std::function<ordered_json()> action;

  // estimate -----------------------------------------------------------------
  KeyFlags est;
  auto* estimate = app.add_subcommand("estimate", "Empirical collision probability of one sample");
  est.add(estimate);
  estimate->add_flag("--json", as_json, "Machine-readable JSON output");
  estimate->callback([&] {
    action = [&] {
      const HashModel h = build_hash(est.hash_spec(), est.n);
      const ProbabilityVector q = build_distribution(est.dist_spec(), h.universe());
      const double p_norm_sq = norm_sq(slot_probabilities(q, h));
      const KeySequence keys = sample(q, est.seed, est.key_count());
      const CollisionEstimate e = empirical_collision_probability(count_slots(keys, h));
      ordered_json out{{"m", e.m},
                       {"n", h.slots()},
                       {"collision_pairs", e.collision_pairs},
                       {"empirical_cp", e.empirical_cp},
                       {"p_norm_sq", p_norm_sq},
                       {"rel_error", relative_error(e, p_norm_sq)},
                       {"signed_error", signed_relative_error(e, p_norm_sq)}};
      if (h.mode() == HashMode::fixed_table) {
        out["true_collision_probability"] = true_collision_probability(q, h);
      }
      return out;
    };
  });

  // bound --------------------------------------------------------------------
  std::string bound_kind = "load-factor";
  std::uint64_t bn = 100;
  double beps = 0.1, bdelta = 1.0, bs = 0.0, bbeta = 1.0, blambda = 1.0, bload = 0.0;
  auto* bound = app.add_subcommand("bound", "Evaluate a relative-error deviation bound");
  bound->add_option("--kind", bound_kind, "Which bound")
      ->check(CLI::IsMember({"gr", "main", "fixed-s", "load-factor", "gr-form", "params"}));
  bound->add_option("--n", bn, "Number of slots");
  bound->add_option("--eps", beps, "epsilon");
  bound->add_option("--delta", bdelta, "delta");
  bound->add_option("--s", bs, "s");
  bound->add_option("--beta", bbeta, "beta");
  bound->add_option("--lambda", blambda, "lambda");
  bound->add_option("--load", bload, "Load factor L");
  bound->add_flag("--json", as_json, "Machine-readable JSON output");
  bound->callback([&] {
    action = [&]() -> ordered_json {
      if (bound_kind == "gr") return bound_json(gr_bound(bn, bbeta, blambda));
      if (bound_kind == "main") return bound_json(main_bound(bn, beps, bdelta, bs));
      if (bound_kind == "fixed-s") return bound_json(cor_fixed_s(bn, beps, bdelta));
      if (bound_kind == "load-factor") return bound_json(cor_load_factor(beps, bload));
      if (bound_kind == "gr-form") return bound_json(cor_gr_form(bn, bbeta, blambda));
      const BoundParams p = params_from_load(bn, bload, beps);
      return {{"n", p.n},         {"m", p.m},         {"epsilon", p.epsilon},
              {"delta", p.delta}, {"s", p.s},         {"load", p.load},
              {"beta", p.beta},   {"lambda", p.lambda}, {"m_exact", p.m_exact},
              {"m_rounding", p.m_rounding}};
    };
  });

  // ast-bound ----------------------------------------------------------------
  std::string ast_kind = "eps";
  std::uint64_t an = 100;
  double aload = 100.0, av = 0.0, ap = 0.0, as = 0.0, aeps = 0.05, aalpha = 0.0, ac = 0.0;
  auto* ast = app.add_subcommand("ast-bound", "Evaluate an average-search-time bound");
  ast->add_option("--kind", ast_kind, "s: radical form; eps: linear form")
      ->check(CLI::IsMember({"s", "eps"}));
  ast->add_option("--load", aload, "Load factor L");
  ast->add_option("--n", an, "Number of slots");
  ast->add_option("--v-norm", av, "||v||");
  ast->add_option("--p-norm", ap, "||p||");
  ast->add_option("--alpha", aalpha, "Sets ||v|| = 1/sqrt(alpha n) when --v-norm is absent");
  ast->add_option("--c", ac, "Sets ||p|| = c/sqrt(n) when --p-norm is absent");
  ast->add_option("--s", as, "s");
  ast->add_option("--eps", aeps, "epsilon");
  ast->add_flag("--json", as_json, "Machine-readable JSON output");
  ast->callback([&] {
    action = [&]() -> ordered_json {
      const double nd = static_cast<double>(an);
      double v_norm = av, p_norm = ap;
      if (v_norm == 0.0) {
        v_norm = aalpha > 0.0 ? 1.0 / std::sqrt(aalpha * nd) : 1.0 / std::sqrt(nd);
      }
      if (p_norm == 0.0) p_norm = (ac > 0.0 ? ac : 1.0) / std::sqrt(nd);
      ordered_json out = ast_kind == "s" ? ast_json(ast_bound_s(aload, an, v_norm, p_norm, as))
                                         : ast_json(ast_bound_eps(aload, an, v_norm, p_norm, aeps));
      out["v_norm"] = v_norm;
      out["p_norm"] = p_norm;
      return out;
    };
  });

  // example1 / example2 ------------------------------------------------------
  double xc = 5.0, xalpha = 0.1, xalpha2 = 0.5, xeps = 0.05;
  std::vector<double> xloads{1000.0, 10000.0};
  auto* ex1 = app.add_subcommand("example1", "Search-time bound for a user on a fraction of slots");
  ex1->add_option("--c", xc, "||p|| <= c / sqrt(n)");
  ex1->add_option("--alpha", xalpha, "Fraction of slots the user accesses");
  ex1->add_option("--eps", xeps, "epsilon");
  ex1->add_option("--load", xloads, "Load factor(s) L");
  ex1->add_flag("--json", as_json, "Machine-readable JSON output");
  ex1->callback([&] {
    action = [&] {
      ordered_json rows = ordered_json::array();
      for (double load : xloads) {
        const CenteredAstBound b = example1_bound(xc, xalpha, xeps, load);
        rows.push_back({{"load", load},
                        {"center", b.center},
                        {"halfwidth", b.halfwidth},
                        {"upper", b.upper()},
                        {"confidence", b.confidence},
                        {"tail", b.tail}});
      }
      return ordered_json{{"c", xc}, {"alpha", xalpha}, {"epsilon", xeps}, {"rows", rows}};
    };
  });

  auto* ex2 = app.add_subcommand("example2", "Search-time bound for a query of two subqueries");
  ex2->add_option("--c", xc, "||p|| <= c / sqrt(n)");
  ex2->add_option("--alpha1", xalpha, "Fraction of slots accessed by the first subquery");
  ex2->add_option("--alpha2", xalpha2, "Fraction of slots accessed by the second subquery");
  ex2->add_option("--eps", xeps, "epsilon");
  ex2->add_option("--load", xloads, "Load factor(s) L");
  ex2->add_flag("--json", as_json, "Machine-readable JSON output");
  ex2->callback([&] {
    action = [&] {
      ordered_json rows = ordered_json::array();
      for (double load : xloads) {
        const AstBound b = example2_bound(xc, xalpha, xalpha2, xeps, load);
        rows.push_back(
            {{"load", load}, {"value", b.value}, {"confidence", b.confidence}, {"tail", b.tail}});
      }
      return ordered_json{{"c", xc},
                          {"alpha1", xalpha},
                          {"alpha2", xalpha2},
                          {"epsilon", xeps},
                          {"rows", rows}};
    };
  });

  // experiment ---------------------------------------------------------------
  std::string config_path, out_path, csv_path, exp_kind, bound_name, access;
  KeyFlags ef;
  double eeps = 0, edelta = 0, es = 0, ebeta = 0, elambda = 0;
  std::uint64_t trials = 0;
  unsigned threads = 0;
  auto* experiment = app.add_subcommand("experiment", "Run a seeded Monte Carlo coverage experiment");
  experiment->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  ef.add(experiment);
  auto* o_kind = experiment->add_option("--kind", exp_kind, "collision or ast")
                     ->check(CLI::IsMember({"collision", "ast"}));
  auto* o_bound = experiment->add_option("--bound", bound_name, "Bound to check against")
                      ->check(CLI::IsMember({"gr", "main", "fixed_s", "load_factor", "gr_form",
                                             "ast_s", "ast_eps"}));
  auto* o_access = experiment->add_option("--access", access, "Access pattern (ast runs)")
                       ->check(CLI::IsMember({"uniform", "zipf", "restricted", "pointmass"}));
  auto* o_eps = experiment->add_option("--eps", eeps, "epsilon");
  auto* o_delta = experiment->add_option("--delta", edelta, "delta");
  auto* o_s = experiment->add_option("--s", es, "s");
  auto* o_beta = experiment->add_option("--beta", ebeta, "beta");
  auto* o_lambda = experiment->add_option("--lambda", elambda, "lambda");
  auto* o_trials = experiment->add_option("--trials", trials, "Number of trials");
  auto* o_threads = experiment->add_option("--threads", threads, "Worker threads (0: all cores)");
  auto* o_out = experiment->add_option("--out", out_path, "Write the JSON report here");
  auto* o_csv = experiment->add_option("--csv", csv_path, "Write per-trial CSV here");
  experiment->add_flag("--json", as_json, "Machine-readable JSON output");
  experiment->callback([&] {
    action = [&] {
      ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
      auto given = [&](const char* name) { return experiment->count(name) > 0; };
      if (o_kind->count()) cfg.experiment = exp_kind;
      if (given("--dist")) cfg.keys.name = ef.dist;
      if (given("--zipf-exp")) cfg.keys.zipf_exponent = ef.zipf_exp;
      if (given("--alpha")) cfg.keys.alpha = cfg.access.alpha = ef.alpha;
      if (o_access->count()) cfg.access.name = access;
      if (given("--n")) cfg.n = ef.n;
      if (given("--m")) cfg.m = ef.m;
      if (given("--load")) {
        cfg.load = ef.load;
        if (!given("--m")) cfg.m = 0;
      }
      if (given("--seed")) cfg.base_seed = ef.seed;
      if (given("--universe") || given("--table")) cfg.hash = ef.hash_spec();
      if (given("--table-seed")) cfg.hash.seed = ef.table_seed;
      if (o_bound->count()) cfg.bound.kind = bound_name;
      if (o_eps->count()) cfg.bound.epsilon = eeps;
      if (o_delta->count()) cfg.bound.delta = edelta;
      if (o_s->count()) cfg.bound.s = es;
      if (o_beta->count()) cfg.bound.beta = ebeta;
      if (o_lambda->count()) cfg.bound.lambda = elambda;
      if (o_trials->count()) cfg.trials = trials;
      if (o_threads->count()) cfg.threads = threads;
      if (o_out->count()) cfg.output = out_path;
      if (o_csv->count()) cfg.csv_output = csv_path;

      const ExperimentReport report = Experiment(cfg).run();
      if (!cfg.output.empty()) write_report_json(report, cfg.output);
      if (!cfg.csv_output.empty()) write_report_csv(report, cfg.csv_output);
      const nlohmann::json full = report_json(report);
      ordered_json out;
      out["experiment"] = cfg.experiment;
      out["m"] = report.m;
      out["p_norm_sq"] = report.p_norm_sq;
      out["expected_value"] = report.expected_value;
      out["bound"] = full["bound"];
      out["aggregates"] = full["aggregates"];
      out["duration_seconds"] = report.duration_seconds;
      return out;
    };
  });

  // lemma-check --------------------------------------------------------------
  std::size_t ln = 16, lm = 200, luniverse = 4096;
  std::uint64_t lpairs = 10000, lseed = 1;
  auto* lemma = app.add_subcommand("lemma-check",
                                   "Check the slot-count perturbation inequality on random pairs");
  lemma->add_option("--n", ln, "Number of slots");
  lemma->add_option("--m", lm, "Sequence length");
  lemma->add_option("--trials", lpairs, "Number of random pairs");
  lemma->add_option("--universe", luniverse, "Key universe size");
  lemma->add_option("--seed", lseed, "Seed for the table and the pairs");
  lemma->add_flag("--json", as_json, "Machine-readable JSON output");
  lemma->callback([&] {
    action = [&] {
      const HashModel h = HashModel::random_table(luniverse, ln, lseed);
      const LemmaSweep s = perturbation_sweep(h, lm, lpairs, lseed);
      return ordered_json{{"pairs", s.pairs},     {"failures", s.failures}, {"tight", s.tight},
                          {"max_lhs", s.max_lhs}, {"max_rhs", s.max_rhs},   {"holds", s.failures == 0}};
    };
  });

  // unbiasedness -------------------------------------------------------------
  KeyFlags uf;
  std::uint64_t utrials = 10000;
  auto* unbiased = app.add_subcommand("unbiasedness",
                                      "Monte Carlo mean of the estimator against ||p||^2");
  uf.add(unbiased);
  unbiased->add_option("--trials", utrials, "Number of trials (>= 100)");
  unbiased->add_flag("--json", as_json, "Machine-readable JSON output");
  unbiased->callback([&] {
    action = [&] {
      const HashModel h = build_hash(uf.hash_spec(), uf.n);
      const ProbabilityVector q = build_distribution(uf.dist_spec(), h.universe());
      const UnbiasednessResult r = unbiasedness_check(q, h, uf.key_count(), utrials, uf.seed);
      return ordered_json{{"trials", r.trials},
                          {"sample_mean", r.sample_mean},
                          {"sample_std", r.sample_std},
                          {"p_norm_sq", r.p_norm_sq},
                          {"z_score", std::isnan(r.z_score) ? ordered_json(nullptr)
                                                            : ordered_json(r.z_score)},
                          {"exact_match", r.exact_match}};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    const ordered_json result = action();
    if (as_json) {
      std::cout << result.dump(2) << '\n';
    } else {
      print_text(result);
    }
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}
