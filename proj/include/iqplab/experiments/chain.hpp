#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "iqplab/circuits/iqp.hpp"
#include "iqplab/counting/stockmeyer.hpp"
#include "iqplab/experiments/adversary.hpp"
#include "iqplab/experiments/markov.hpp"
#include "iqplab/experiments/params.hpp"
#include "iqplab/experiments/report.hpp"
#include "iqplab/hashing.hpp"

namespace iqplab {

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::Exact;
  double eps = 0.0;  // declared l1 budget of the sampler
};

struct ChainOptions {
  int randomness_bits = 0;  // 0: 2n, which represents every p_z = gap^2/4^n exactly
  int mantissa_bits = 2;    // significant bits kept per level-set size
  bool allow_nonpositive_v = false;
  unsigned threads = 1;
  StockmeyerOptions stockmeyer;
};

inline constexpr int kChainMaxN = 12;

/// Outcome for one sampled polynomial f.
struct ChainTrial {
  std::uint64_t seed = 0;
  double adversary_l1 = 0.0;
  double realization_l1 = 0.0;
  double markov_fraction = 0.0;
  std::uint64_t pairs = 0;
  std::uint64_t success_mid = 0;
  std::uint64_t success_raw = 0;
  std::uint64_t success_harmonic = 0;
  std::uint64_t nonempty = 0;
  std::uint64_t sandwich = 0;
  std::uint64_t queries = 0;
  std::uint64_t monotonicity_violations = 0;
};

namespace detail {

inline bool chain_success(double p, double est, double u) { return p == 0.0 ? est == 0.0 : within_relative(p, est, u); }

inline ChainTrial chain_trial(int n, const ChainParams& params, const AdversarySpec& adv, std::uint64_t seed, int t,
                              const ChainOptions& opt, CountOracle& oracle) {
  ChainTrial out;
  out.seed = seed;
  Rng rng(seed);
  Rng f_rng = rng.split();
  Rng adv_rng = rng.split();
  Rng est_rng = rng.split();
  const auto f = random_polynomial(n, 3, f_rng);
  const auto table = iqp_distribution(f);
  const auto sampler = build_adversary(adv.kind, table, adv.eps, adv_rng);
  out.adversary_l1 = sampler.l1;
  if (params.eps > 0.0 && sampler.l1 <= params.eps) {
    out.markov_fraction = markov_tail_check(table, sampler.q, params.eps, params.delta).fraction;
  }
  const auto real = realize_dyadic(sampler.q, t, opt.mantissa_bits);
  out.realization_l1 = real.l1_error;
  const auto alg = real.algorithm();
  const double u = params.u();
  for (std::uint64_t z = 0; z < table.size(); ++z) {
    const auto est = stockmeyer_estimate(alg, z, params.alpha, params.r, oracle, est_rng, opt.stockmeyer);
    const double p = table.prob(z);
    ++out.pairs;
    out.success_mid += chain_success(p, est.empty ? 0.0 : est.q_tilde_mid, u);
    out.success_raw += chain_success(p, est.empty ? 0.0 : est.q_tilde, u);
    out.success_harmonic += chain_success(p, est.empty ? 0.0 : est.q_tilde_harmonic, u);
    out.queries += est.queries;
    out.monotonicity_violations += static_cast<std::uint64_t>(est.monotonicity_violations);
    if (real.counts[z]) {
      ++out.nonempty;
      out.sandwich += sandwich_holds(real.counts[z], params.alpha, est.eta);
    }
  }
  return out;
}

}  // namespace detail

/// End-to-end chain: for f_trials random degree-3 f, realize the adversary's q(f) as a
/// T-bit sampler, estimate every q_z by the counting estimator and count the pairs (z, f)
/// with |p_z - q~_z| <= u p_z. Passes when that fraction is >= v - 3 se.
inline ExperimentReport chain_experiment(int n, const ChainParams& params, const AdversarySpec& adv, int f_trials,
                                         std::uint64_t seed, CountOracle& oracle, const ChainOptions& opt = {}) {
  params.validate(opt.allow_nonpositive_v);
  if (n < 1 || n > kChainMaxN) throw ConfigError("chain: n must be in [1, 12]");
  if (f_trials < 1) throw ConfigError("chain: f_trials must be >= 1");
  const int t = opt.randomness_bits ? opt.randomness_bits : 2 * n;
  if (t < 1 || t > kMaxRandomnessBits) throw ConfigError("chain: T must be in [1, 24]");
  if (params.alpha * t > ProductPredicate::kMaxWidth) {
    throw ConfigError("chain: alpha * T = " + std::to_string(params.alpha * t) + " exceeds " +
                      std::to_string(ProductPredicate::kMaxWidth));
  }

  std::vector<ChainTrial> trials(static_cast<std::size_t>(f_trials));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(trials.size());
  auto worker = [&] {
    for (int i = next++; i < f_trials; i = next++) {
      try {
        trials[static_cast<std::size_t>(i)] =
            detail::chain_trial(n, params, adv, derive_seed(seed, "chain-f", static_cast<std::uint64_t>(i)), t, opt, oracle);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::clamp(opt.threads, 1u, static_cast<unsigned>(f_trials));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ChainTrial sum;
  double max_adv = 0.0, max_real = 0.0, max_markov = 0.0;
  nlohmann::json per_f = nlohmann::json::array();
  for (const auto& tr : trials) {
    sum.pairs += tr.pairs;
    sum.success_mid += tr.success_mid;
    sum.success_raw += tr.success_raw;
    sum.success_harmonic += tr.success_harmonic;
    sum.nonempty += tr.nonempty;
    sum.sandwich += tr.sandwich;
    sum.queries += tr.queries;
    sum.monotonicity_violations += tr.monotonicity_violations;
    max_adv = std::max(max_adv, tr.adversary_l1);
    max_real = std::max(max_real, tr.realization_l1);
    max_markov = std::max(max_markov, tr.markov_fraction);
    per_f.push_back({{"seed", tr.seed},
                     {"adversary_l1", tr.adversary_l1},
                     {"realization_l1", tr.realization_l1},
                     {"markov_fraction", tr.markov_fraction},
                     {"success_mid", tr.success_mid},
                     {"pairs", tr.pairs}});
  }
  auto frac = [&sum](std::uint64_t k) { return static_cast<double>(k) / static_cast<double>(sum.pairs); };
  const double v = params.v();
  const double se = binomial_se(v, sum.pairs);
  const bool applicable = max_adv <= params.eps + kBudgetTolerance;

  ExperimentReport rep;
  rep.experiment = "chain";
  rep.seed = seed;
  rep.config = {{"n", n},
                {"f_trials", f_trials},
                {"params", params.to_json(t)},
                {"adversary", {{"kind", to_string(adv.kind)}, {"eps", adv.eps}}},
                {"randomness_bits", t},
                {"mantissa_bits", opt.mantissa_bits},
                {"allow_nonpositive_v", opt.allow_nonpositive_v},
                {"stockmeyer", {{"max_attempts", opt.stockmeyer.max_attempts}, {"verify_boundary", opt.stockmeyer.verify_boundary}}},
                {"slack", "3 binomial standard errors at v"},
                {"note", "parameter tuples are non-normative"}};
  rep.results = {{"pairs", sum.pairs},
                 {"fraction_mid", frac(sum.success_mid)},
                 {"fraction_raw", frac(sum.success_raw)},
                 {"fraction_harmonic", frac(sum.success_harmonic)},
                 {"v", v},
                 {"se", se},
                 {"threshold", v - 3.0 * se},
                 {"bound_applicable", applicable},
                 {"max_adversary_l1", max_adv},
                 {"max_realization_l1", max_real},
                 {"max_markov_fraction", max_markov},
                 {"sandwich_rate", sum.nonempty ? static_cast<double>(sum.sandwich) / static_cast<double>(sum.nonempty) : 1.0},
                 {"queries", sum.queries},
                 {"monotonicity_violations", sum.monotonicity_violations},
                 {"u_ge_lower_note", params.u() >= params.u_lower_note()},
                 {"v_le_upper_note", v <= params.v_upper_note()},
                 {"per_f", per_f}};
  if (applicable) {
    rep.check("chain_fraction", frac(sum.success_mid) >= v - 3.0 * se,
              "fraction " + fmt_double(frac(sum.success_mid)) + " vs v - 3se = " + fmt_double(v - 3.0 * se));
    if (params.eps > 0.0) {
      rep.check("markov_tail", max_markov <= params.delta,
                "max fraction " + fmt_double(max_markov) + " vs delta " + fmt_double(params.delta));
    }
  }
  return rep;
}

}  // namespace iqplab
