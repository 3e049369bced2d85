#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "iqplab/circuits/boolean_circuit.hpp"
#include "iqplab/circuits/cnf.hpp"
#include "iqplab/circuits/iqp.hpp"
#include "iqplab/circuits/phase_oracle.hpp"
#include "iqplab/circuits/reversible.hpp"
#include "iqplab/counting.hpp"
#include "iqplab/experiments.hpp"
#include "iqplab/gf2poly_io.hpp"
#include "iqplab/hashing.hpp"
#include "iqplab/version.hpp"

namespace iqplab::cli {

enum ExitCode : int { kPass = 0, kInvariantFailure = 1, kConfigError = 2 };

/// Everything one invocation needs. Fields unused by a subcommand keep their defaults.
struct RunConfig {
  std::string subcommand;
  std::string poly_path;
  std::string cnf_path;
  std::string circuit_path;
  std::string out_path;
  std::string format;  // json or csv; empty picks the subcommand default
  std::string query_log_path;
  std::uint64_t seed = 1;
  bool timing = false;

  std::uint64_t trials = 10000;
  int n = 0;
  int degree = 3;
  int alpha = 16;
  double eps = 0.05;
  double delta = 0.1;
  double sigma = 0.9;
  std::vector<double> taus = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  bool exhaustive = false;

  std::string z_bits;  // gap: optional shift
  int m = 1;
  std::uint64_t set_size = 0;  // hash-test and approx-count planted sets
  double hash_eps = 0.5;
  int k = 0;
  int r = 5;
  std::string sampler = "random-function";
  int randomness_bits = 10;
  int output_bits = 4;
  int coset_bits = 2;
  std::uint64_t z = 0;
  bool all_z = false;
  int f_trials = 5;
  std::string adversary = "exact";
  std::optional<double> adversary_eps;
  int chain_bits = 0;
  int mantissa_bits = 2;
  bool allow_nonpositive_v = false;
  unsigned threads = 1;
};

namespace detail {

using nlohmann::json;

inline std::string bits_string(std::uint64_t x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if ((x >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

inline std::uint64_t parse_bits(const std::string& s, int n) {
  if (s.size() != static_cast<std::size_t>(n)) throw ConfigError("--z must have exactly n = " + std::to_string(n) + " characters");
  std::uint64_t x = 0;
  for (int i = 0; i < n; ++i) {
    const char c = s[static_cast<std::size_t>(i)];
    if (c != '0' && c != '1') throw ConfigError("--z must consist of 0 and 1 characters");
    if (c == '1') x |= std::uint64_t{1} << i;
  }
  return x;
}

inline const std::string& format_or(const RunConfig& c, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string& f = c.format.empty() ? fallback : c.format;
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw ConfigError("--format " + f + " is not supported by '" + c.subcommand + "'");
}

/// Collected output: text to emit plus the pass/fail verdict.
struct Outcome {
  std::string text;
  bool pass = true;
};

inline Outcome emit_report(ExperimentReport rep, const RunConfig& c, double ms) {
  if (c.timing) rep.runtime_ms = ms;
  return {rep.to_json().dump(2) + "\n", rep.pass()};
}

inline ExperimentReport base_report(const RunConfig& c, json config) {
  ExperimentReport rep;
  rep.experiment = c.subcommand;
  rep.seed = c.seed;
  rep.config = std::move(config);
  return rep;
}

inline Outcome run_gap(const RunConfig& c) {
  const auto f = read_polynomial_file(c.poly_path);
  const std::uint64_t z = c.z_bits.empty() ? 0 : parse_bits(c.z_bits, f.n());
  const auto g = gap(c.z_bits.empty() ? f : shift_by_z(f, BitVector::from_uint(z, static_cast<std::size_t>(f.n()))));
  if (format_or(c, "text", {"text", "json"}) == "text") return {std::to_string(g) + "\n", true};
  auto rep = base_report(c, {{"poly", c.poly_path}, {"z", c.z_bits.empty() ? bits_string(0, f.n()) : c.z_bits}});
  rep.results = {{"n", f.n()}, {"gap", g}};
  return {rep.to_json().dump(2) + "\n", true};
}

inline ExperimentReport run_iqp_dist(const RunConfig& c, std::string* csv) {
  const auto f = read_polynomial_file(c.poly_path);
  DistributionTable table;
  std::string oracle = "none";
  if (!c.circuit_path.empty()) {
    table = boolean_phase_distribution(f, read_boolean_circuit_file(c.circuit_path, f.n()));
    oracle = "circuit";
  } else if (!c.cnf_path.empty()) {
    table = cnf_phase_distribution(f, read_dimacs_file(c.cnf_path));
    oracle = "cnf";
  } else {
    table = iqp_distribution(f);
  }
  if (csv) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t z = 0; z < table.size(); ++z) {
      rows.push_back({bits_string(z, table.n), std::to_string(table.gaps[z]), fmt_double(table.prob(z))});
    }
    *csv = to_csv({"z", "gap", "prob"}, rows);
  }
  auto rep = base_report(c, {{"poly", c.poly_path}, {"circuit", c.circuit_path}, {"cnf", c.cnf_path}, {"phase_oracle", oracle}});
  rep.results = {{"n", table.n}, {"gaps", table.gaps}, {"probs", table.probs()}};
  rep.check("parseval", table.normalized(), "sum_z gap^2 = 4^n");
  rep.check("even_gaps", table.gaps_even(), "every gap is even");
  return rep;
}

inline ExperimentReport run_anticoncentration(const RunConfig& c, std::string* csv) {
  if (c.n < 1) throw ConfigError("anticoncentration: --n is required");
  std::vector<TauResult> rs;
  auto rep = anticoncentration_sweep(c.n, c.degree, c.taus, c.trials, c.seed, c.exhaustive, &rs);
  if (csv) *csv = anticoncentration_csv(rs);
  return rep;
}

inline std::vector<std::uint64_t> planted_set(int n, std::uint64_t size, Rng& rng) {
  if (n < 1 || n > 30) throw ConfigError("planted set: --n must be in [1, 30]");
  if (size > (std::uint64_t{1} << n)) throw ConfigError("planted set: size exceeds 2^n");
  std::set<std::uint64_t> s;
  while (s.size() < size) s.insert(rng.below(std::uint64_t{1} << n));
  return {s.begin(), s.end()};
}

inline ExperimentReport run_hash_test(const RunConfig& c) {
  if (c.n < 1 || c.m < 1 || c.m > c.n) throw ConfigError("hash-test: need 1 <= --m <= --n");
  const std::uint64_t size = c.set_size ? c.set_size : std::uint64_t{1} << (c.n - 1);
  auto rep = base_report(c, {{"n", c.n}, {"m", c.m}, {"set_size", size}, {"eps", c.hash_eps}, {"trials", c.trials},
                             {"exhaustive", c.exhaustive}, {"slack", "3 binomial standard errors at the bound"}});
  if (c.exhaustive) {
    const auto pw = pairwise_independence_exhaustive(c.n, c.m);
    rep.results["pairwise"] = {{"family_size", pw.family_size},
                               {"expected_count", pw.expected_count},
                               {"tuples_checked", pw.tuples_checked},
                               {"violations", pw.violations.size()}};
    rep.check("pairwise_independence", pw.ok(), std::to_string(pw.violations.size()) + " violating tuples");
  }
  Rng set_rng(derive_seed(c.seed, "hash-test-set"));
  const auto members = planted_set(c.n, size, set_rng);
  std::vector<BitVector> set;
  for (auto x : members) set.push_back(BitVector::from_uint(x, static_cast<std::size_t>(c.n)));
  Rng rng(derive_seed(c.seed, "hash-test-leftover"));
  const auto lo = leftover_deviation_probability(set, c.m, c.hash_eps, c.trials, rng);
  rep.results["leftover"] = {{"deviations", lo.deviations}, {"empirical", lo.empirical}, {"bound", lo.bound}, {"se", lo.se}};
  rep.check("leftover_hash", lo.pass(),
            "empirical " + fmt_double(lo.empirical) + " vs bound " + fmt_double(lo.bound) + " + 3se");
  return rep;
}

inline std::unique_ptr<MembershipPredicate> load_predicate(const RunConfig& c, json& desc) {
  if (!c.cnf_path.empty()) {
    auto g = std::make_shared<Cnf3>(read_dimacs_file(c.cnf_path));
    desc = {{"source", "cnf"}, {"path", c.cnf_path}, {"n", g->n()}, {"m", g->m()}};
    return std::make_unique<FunctionPredicate>(g->n(), [g](std::uint64_t x) { return g->evaluate(x); }, "cnf");
  }
  if (!c.poly_path.empty()) {
    const auto f = read_polynomial_file(c.poly_path);
    if (f.n() > 64) throw ConfigError("approx-count: polynomial predicates need n <= 64");
    auto masks = std::make_shared<std::vector<std::uint64_t>>(f.monomial_masks());
    desc = {{"source", "poly"}, {"path", c.poly_path}, {"n", f.n()}};
    return std::make_unique<FunctionPredicate>(f.n(), [masks](std::uint64_t x) { return evaluate(*masks, x); }, "poly");
  }
  if (c.set_size == 0 && c.n == 0) throw ConfigError("approx-count: give one of --cnf, --poly or --size with --n");
  Rng rng(derive_seed(c.seed, "approx-count-set"));
  desc = {{"source", "planted"}, {"n", c.n}, {"size", c.set_size}};
  return std::make_unique<SetPredicate>(c.n, planted_set(c.n, c.set_size, rng));
}

inline std::uint64_t exact_size(const MembershipPredicate& pred) {
  if (const auto* s = dynamic_cast<const SetPredicate*>(&pred)) return s->size();
  const auto* f = dynamic_cast<const FunctionPredicate*>(&pred);
  iqplab::detail::check_enumerable(f->width(), "approx-count");
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << f->width()); ++x) count += f->accepts_word(x);
  return count;
}

inline ExperimentReport run_approx_count(const RunConfig& c) {
  json desc;
  const auto pred = load_predicate(c, desc);
  std::ofstream log;
  if (!c.query_log_path.empty()) {
    log.open(c.query_log_path);
    if (!log) throw ConfigError("cannot open query log for writing: " + c.query_log_path);
  }
  ExactCountOracle oracle(c.query_log_path.empty() ? nullptr : &log);
  Rng rng(derive_seed(c.seed, "approx-count"));
  auto rep = base_report(c, {{"predicate", desc}, {"k", c.k}, {"r", c.r}});
  const auto res = a_k(*pred, c.k, c.r, oracle, rng);
  const std::uint64_t size = exact_size(*pred);
  rep.results = {{"accepted", res.accepted},
                 {"rounds", res.rounds},
                 {"accepts", res.accepts},
                 {"queries", oracle.query_count()},
                 {"repetitions", repetitions(c.r)},
                 {"exact_size", size},
                 {"accept_region", size >= (std::uint64_t{1} << (c.k + 1))},
                 {"reject_region", size < (std::uint64_t{1} << c.k)}};
  return rep;
}

inline RandomizedAlgorithm make_sampler(const RunConfig& c, Rng& rng) {
  const int t = c.randomness_bits, n = c.output_bits;
  if (c.sampler == "random-function") return random_function_algorithm(t, n, rng);
  if (c.sampler == "coset") return coset_sampler_algorithm(t, n, c.coset_bits, rng);
  if (c.sampler == "identity") return identity_algorithm(t);
  if (c.sampler == "constant") return constant_algorithm(t, n, rng.below(std::uint64_t{1} << n));
  throw ConfigError("--sampler must be random-function, coset, identity or constant");
}

inline ExperimentReport run_stockmeyer(const RunConfig& c) {
  Rng alg_rng(derive_seed(c.seed, "stockmeyer-sampler"));
  const auto alg = make_sampler(c, alg_rng);
  if (c.alpha < 1 || c.alpha * alg.randomness_bits() > ProductPredicate::kMaxWidth) {
    throw ConfigError("stockmeyer: need 1 <= alpha and alpha * T <= 256");
  }
  std::vector<std::uint64_t> zs;
  if (c.all_z) {
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << alg.output_bits()); ++z) zs.push_back(z);
  } else {
    if (alg.output_bits() < 64 && c.z >= (std::uint64_t{1} << alg.output_bits())) throw ConfigError("--z out of range");
    zs.push_back(c.z);
  }
  ExactCountOracle oracle;
  Rng rng(derive_seed(c.seed, "stockmeyer"));
  auto rep = base_report(c, {{"sampler", c.sampler}, {"T", alg.randomness_bits()}, {"N", alg.output_bits()},
                             {"s", c.coset_bits}, {"alpha", c.alpha}, {"r", c.r}, {"all_z", c.all_z}});
  const double xi = xi_for_alpha(c.alpha);
  json ests = json::array();
  std::uint64_t sandwich = 0, nonempty = 0, harmonic_fail = 0, query_fail = 0;
  for (auto z : zs) {
    const auto est = stockmeyer_estimate(alg, z, c.alpha, c.r, oracle, rng);
    const auto exact = exact_probability(alg, z);
    json e = est.to_json();
    e.erase("probes");
    e["z"] = z;
    e["exact_count"] = exact.count;
    e["q"] = exact.value();
    if (exact.count) {
      ++nonempty;
      const bool s = sandwich_holds(exact.count, c.alpha, est.eta);
      sandwich += s;
      e["sandwich"] = s;
      e["mid_within_xi"] = within_relative(exact.value(), est.q_tilde_mid, xi);
      e["harmonic_within_xi"] = within_relative(exact.value(), est.q_tilde_harmonic, xi);
      if (s && !within_relative(exact.value(), est.q_tilde_harmonic, xi)) ++harmonic_fail;
    } else if (!est.empty) {
      ++harmonic_fail;
    }
    if (est.queries > stockmeyer_query_bound(c.alpha, alg.randomness_bits(), c.r) * static_cast<std::uint64_t>(est.attempts)) {
      ++query_fail;
    }
    ests.push_back(e);
  }
  rep.results = {{"estimates", ests},
                 {"xi", xi},
                 {"w", stockmeyer_success_bound(c.alpha, alg.randomness_bits(), c.r)},
                 {"sandwich_rate", nonempty ? static_cast<double>(sandwich) / static_cast<double>(nonempty) : 1.0}};
  rep.check("estimate_within_xi_given_sandwich", harmonic_fail == 0,
            "harmonic estimate within xi whenever the sandwich holds; empty level sets estimated as 0");
  rep.check("query_bound", query_fail == 0, "oracle calls per attempt within the search bound");
  return rep;
}

inline ExperimentReport run_chain(const RunConfig& c) {
  ChainParams p{c.eps, c.delta, c.sigma, c.alpha, c.r};
  const auto kind = parse_adversary_kind(c.adversary);
  double adv_eps = 0.0;
  if (c.adversary_eps) adv_eps = *c.adversary_eps;
  else if (kind == AdversaryKind::Uniform) adv_eps = 2.0;
  else if (kind != AdversaryKind::Exact) adv_eps = c.eps;
  ChainOptions opt;
  opt.randomness_bits = c.chain_bits;
  opt.mantissa_bits = c.mantissa_bits;
  opt.allow_nonpositive_v = c.allow_nonpositive_v;
  opt.threads = c.threads;
  ExactCountOracle oracle;
  return chain_experiment(c.n ? c.n : 6, p, {kind, adv_eps}, c.f_trials, c.seed, oracle, opt);
}

inline Outcome run_tcount(const RunConfig& c) {
  const auto g = read_dimacs_file(c.cnf_path);
  if (format_or(c, "text", {"text", "json"}) == "text") return {std::to_string(t_count(g)) + "\n", true};
  auto rep = base_report(c, {{"cnf", c.cnf_path}});
  rep.results = {{"n", g.n()}, {"m", g.m()}, {"toffoli", 3 * g.m() - 1}, {"t_count", t_count(g)}};
  return {rep.to_json().dump(2) + "\n", true};
}

inline ExperimentReport run_compile_cnf(const RunConfig& c) {
  const auto g = read_dimacs_file(c.cnf_path);
  const auto rc = compile_cnf(g);
  auto rep = base_report(c, {{"cnf", c.cnf_path}});
  json gates = json::array();
  for (const auto& gate : rc.gates) {
    const char* kind = gate.kind == RevKind::X ? "X" : gate.kind == RevKind::Cnot ? "CNOT" : "TOFFOLI";
    json wires = json::array();
    for (int a = 0; a < gate.arity(); ++a) wires.push_back(gate.wires[static_cast<std::size_t>(a)]);
    gates.push_back({{"gate", kind}, {"wires", wires}});
  }
  rep.results = {{"n", g.n()},          {"m", g.m()},       {"ancillas", rc.ancillas},
                 {"output", rc.output}, {"toffoli", rc.toffoli_count()}, {"t_count", t_count(g)},
                 {"gates", gates}};
  rep.check("toffoli_count", rc.toffoli_count() == static_cast<std::size_t>(3 * g.m() - 1), "exactly 3m-1 Toffolis");
  if (g.n() <= 20) {
    std::uint64_t mismatches = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << g.n()); ++x) {
      const auto s = rc.run_on_input(x);
      bool ok = s.get(static_cast<std::size_t>(rc.output)) == g.evaluate(x);
      for (int i = 0; i < g.n(); ++i) ok = ok && s.get(static_cast<std::size_t>(i)) == static_cast<bool>((x >> i) & 1u);
      mismatches += !ok;
    }
    rep.results["verified_inputs"] = std::uint64_t{1} << g.n();
    rep.check("matches_cnf", mismatches == 0, std::to_string(mismatches) + " inputs disagree with direct evaluation");
  }
  return rep;
}

inline Outcome dispatch_outcome(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  const std::string& s = c.subcommand;
  if (s == "gap") return run_gap(c);
  if (s == "tcount") return run_tcount(c);
  auto timed = [&](auto&& run) {
    auto rep = run();
    return emit_report(std::move(rep), c, elapsed());
  };
  auto with_csv = [&](auto&& run) -> Outcome {
    const bool csv = format_or(c, "json", {"json", "csv"}) == "csv";
    std::string text;
    auto rep = run(csv ? &text : nullptr);
    if (csv) return {text, rep.pass()};
    return emit_report(std::move(rep), c, elapsed());
  };
  if (s == "iqp-dist") return with_csv([&](std::string* csv) { return run_iqp_dist(c, csv); });
  if (s == "anticoncentration") return with_csv([&](std::string* csv) { return run_anticoncentration(c, csv); });
  format_or(c, "json", {"json"});
  if (s == "hash-test") return timed([&] { return run_hash_test(c); });
  if (s == "approx-count") return timed([&] { return run_approx_count(c); });
  if (s == "stockmeyer") return timed([&] { return run_stockmeyer(c); });
  if (s == "chain") return timed([&] { return run_chain(c); });
  if (s == "compile-cnf") return timed([&] { return run_compile_cnf(c); });
  throw ConfigError("unknown subcommand '" + s + "'");
}

}  // namespace detail

/// Runs a validated configuration. Returns 0 on pass, 1 on invariant failure, 2 on configuration error.
inline int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const auto o = detail::dispatch_outcome(c);
    if (c.out_path.empty()) {
      out << o.text;
    } else {
      std::ofstream f(c.out_path);
      if (!f) throw ConfigError("cannot open output file: " + c.out_path);
      f << o.text;
    }
    return o.pass ? kPass : kInvariantFailure;
  } catch (const ParseError& e) {
    err << "error: invalid input: " << e.what() << "\n";
  } catch (const ConfigError& e) {
    err << "error: configuration: " << e.what() << "\n";
  } catch (const ArgumentError& e) {
    err << "error: argument: " << e.what() << "\n";
  } catch (const ResourceError& e) {
    err << "error: resource limit: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid input: " << e.what() << "\n";
  }
  return kConfigError;
}

namespace detail {

inline void add_common(CLI::App* sub, RunConfig& c, bool seeded) {
  if (seeded) sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--out", c.out_path, "Write the report to this file instead of stdout");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_flag("--timing", c.timing, "Include runtime_ms in the report");
}

}  // namespace detail

/// Parses argv into `c`. Returns nullopt on success, otherwise the exit code to use.
inline std::optional<int> parse(int argc, const char* const* argv, RunConfig& c, std::ostream& out, std::ostream& err) {
  CLI::App app{"iqplab: IQP output distributions, Toeplitz hashing and approximate counting experiments"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto* gap = app.add_subcommand("gap", "Print gap(f) for a polynomial JSON file");
  gap->add_option("poly", c.poly_path, "Polynomial JSON file")->required();
  gap->add_option("--z", c.z_bits, "Shift z as a bit string x_0 x_1 ... (gap of f_z)");
  detail::add_common(gap, c, false);

  auto* dist = app.add_subcommand("iqp-dist", "Exact output distribution p_z = gap(f_z)^2 / 4^n");
  dist->add_option("poly", c.poly_path, "Polynomial JSON file")->required();
  auto* circ = dist->add_option("--circuit", c.circuit_path, "Boolean circuit JSON added as a phase oracle");
  auto* dcnf = dist->add_option("--cnf", c.cnf_path, "DIMACS 3-CNF added as a phase oracle");
  circ->excludes(dcnf);
  detail::add_common(dist, c, false);

  auto* ac = app.add_subcommand("anticoncentration", "Pr[p_z(f) >= tau / 2^n] against (1 - tau)^2 / 3");
  ac->add_option("--n", c.n, "Number of variables")->required();
  ac->add_option("--degree", c.degree, "Polynomial degree (2 or 3)")->capture_default_str();
  ac->add_option("--tau-list", c.taus, "Comma-separated thresholds in (0, 1)")->delimiter(',');
  auto* act = ac->add_option("--trials", c.trials, "Sampled (f, z) pairs")->capture_default_str();
  auto* acx = ac->add_flag("--exhaustive", c.exhaustive, "Enumerate every f and z instead of sampling");
  acx->excludes(act);
  detail::add_common(ac, c, true);

  auto* ht = app.add_subcommand("hash-test", "Toeplitz family pairwise independence and leftover deviation");
  ht->add_option("--n", c.n, "Input bits")->required();
  ht->add_option("--m", c.m, "Output bits")->required();
  ht->add_option("--set-size", c.set_size, "Planted set size (default 2^(n-1))");
  ht->add_option("--eps", c.hash_eps, "Relative deviation")->capture_default_str();
  ht->add_option("--trials", c.trials, "Sampled hashers")->capture_default_str();
  ht->add_flag("--exhaustive", c.exhaustive, "Also check pairwise independence over the whole family");
  detail::add_common(ht, c, true);

  auto* apx = app.add_subcommand("approx-count", "Run the amplified threshold test A_k on a predicate");
  auto* acnf = apx->add_option("--cnf", c.cnf_path, "DIMACS 3-CNF; S = satisfying assignments");
  auto* apoly = apx->add_option("--poly", c.poly_path, "Polynomial JSON; S = {x : f(x) = 1}");
  auto* asize = apx->add_option("--size", c.set_size, "Planted random set of this size (needs --n)");
  acnf->excludes(apoly)->excludes(asize);
  apoly->excludes(asize);
  apx->add_option("--n", c.n, "Width of the planted set");
  apx->add_option("--k", c.k, "Threshold exponent")->required();
  apx->add_option("--r", c.r, "Amplification parameter")->capture_default_str();
  apx->add_option("--query-log", c.query_log_path, "Write every oracle query as a JSON line");
  detail::add_common(apx, c, true);

  auto* sm = app.add_subcommand("stockmeyer", "Estimate q_z of a seeded sampler with the counting estimator");
  sm->add_option("--sampler", c.sampler, "random-function, coset, identity or constant")->capture_default_str();
  sm->add_option("--T", c.randomness_bits, "Random bits of the sampler")->capture_default_str();
  sm->add_option("--N", c.output_bits, "Output bits of the sampler")->capture_default_str();
  sm->add_option("--s", c.coset_bits, "Rank of the coset sampler's linear map")->capture_default_str();
  auto* smz = sm->add_option("--z", c.z, "Outcome index to estimate");
  auto* sma = sm->add_flag("--all-z", c.all_z, "Estimate every outcome");
  smz->excludes(sma);
  sm->add_option("--alpha", c.alpha, "Product power")->capture_default_str();
  sm->add_option("--r", c.r, "Amplification parameter")->capture_default_str();
  detail::add_common(sm, c, true);

  auto* ch = app.add_subcommand("chain", "End-to-end additive-error chain against a mock sampler");
  ch->add_option("--n", c.n, "Number of qubits (default 6)");
  ch->add_option("--eps", c.eps, "Additive error budget")->capture_default_str();
  ch->add_option("--delta", c.delta, "Markov tail parameter")->capture_default_str();
  ch->add_option("--sigma", c.sigma, "Relative slack")->capture_default_str();
  ch->add_option("--alpha", c.alpha, "Product power")->capture_default_str();
  ch->add_option("--r", c.r, "Amplification parameter")->capture_default_str();
  ch->add_option("--f-trials", c.f_trials, "Sampled polynomials")->capture_default_str();
  ch->add_option("--adversary", c.adversary, "exact, additive-noise, sparsified or uniform")->capture_default_str();
  ch->add_option("--adversary-eps", c.adversary_eps, "Declared l1 budget of the sampler");
  ch->add_option("--T", c.chain_bits, "Random bits of the realization (default 2n)");
  ch->add_option("--mantissa-bits", c.mantissa_bits, "Significant bits per level-set size (0 = exact)")->capture_default_str();
  ch->add_flag("--allow-nonpositive-v", c.allow_nonpositive_v, "Run even when v <= 0");
  ch->add_option("--threads", c.threads, "Worker threads over polynomials")->capture_default_str();
  detail::add_common(ch, c, true);

  auto* tc = app.add_subcommand("tcount", "Print the T-count 14(3m - 1) of a DIMACS 3-CNF");
  tc->add_option("cnf", c.cnf_path, "DIMACS file")->required();
  detail::add_common(tc, c, false);

  auto* cc = app.add_subcommand("compile-cnf", "Compile a DIMACS 3-CNF to an X/CNOT/Toffoli circuit");
  cc->add_option("cnf", c.cnf_path, "DIMACS file")->required();
  detail::add_common(cc, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  if (c.subcommand == "approx-count" && asize->count() && c.n == 0) {
    err << "error: configuration: --size needs --n\n";
    return kConfigError;
  }
  return std::nullopt;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  if (auto code = parse(argc, argv, c, out, err)) return *code;
  return dispatch(c, out, err);
}

}  // namespace iqplab::cli
