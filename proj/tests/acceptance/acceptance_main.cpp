#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "iqplab/circuits/iqp.hpp"
#include "iqplab/circuits/phase_oracle.hpp"
#include "iqplab/circuits/reversible.hpp"
#include "iqplab/counting.hpp"
#include "iqplab/experiments.hpp"
#include "iqplab/hashing.hpp"

using namespace iqplab;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void fail_if(bool bad, const std::string& why) {
    if (bad && pass) detail << "[" << why << "] ";
    if (bad) pass = false;
  }
};

Cnf3 random_cnf(int n, int m, Rng& rng) {
  std::vector<Clause> cs;
  for (int j = 0; j < m; ++j) {
    Clause c;
    for (auto& l : c) l = {static_cast<int>(rng.below(static_cast<std::uint64_t>(n))), rng.bit()};
    cs.push_back(c);
  }
  return Cnf3(n, cs);
}

BooleanCircuit random_circuit(int n, int size, Rng& rng) {
  std::vector<BoolGate> gates;
  for (int i = 0; i < size; ++i) {
    const int ids = n + i;
    const auto op = static_cast<BoolOp>(rng.below(4));
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(ids)));
    const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(ids)));
    gates.push_back(op == BoolOp::Not ? BoolGate{op, {a}} : BoolGate{op, {a, b}});
  }
  return BooleanCircuit(n, gates, n + size - 1);
}

std::vector<std::uint64_t> random_subset(int n, std::size_t size, Rng& rng) {
  std::set<std::uint64_t> s;
  while (s.size() < size) s.insert(rng.below(std::uint64_t{1} << n));
  return {s.begin(), s.end()};
}

// 1. Statevector amplitudes vs gap(f_z)^2 / 4^n, and Parseval.
void distribution_equivalence(Verdict& v) {
  double worst = 0.0;
  int checked = 0;
  for (int n = 2; n <= 10; ++n) {
    Rng rng(derive_seed(1, "acceptance-1", static_cast<std::uint64_t>(n)));
    for (int i = 0; i < 100; ++i) {
      const auto f = random_polynomial(n, 3, rng);
      const auto table = iqp_distribution(f);
      const auto amps = simulate_statevector(build_iqp(f));
      for (std::size_t z = 0; z < amps.size(); ++z) worst = std::max(worst, std::abs(std::norm(amps[z]) - table.prob(z)));
      v.fail_if(table.squared_sum() != (__uint128_t{1} << (2 * n)), "parseval n=" + std::to_string(n));
      ++checked;
    }
  }
  v.fail_if(worst > 1e-10, "max |statevector - gap formula| too large");
  v.detail << checked << " polynomials, max deviation " << worst;
}

// 2. Exhaustive pairwise independence.
void pairwise(Verdict& v) {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 2}}) {
    const auto rep = pairwise_independence_exhaustive(n, m);
    v.fail_if(!rep.ok(), "(n,m)=(" + std::to_string(n) + "," + std::to_string(m) + ")");
    v.detail << "(" << n << "," << m << "): " << rep.tuples_checked << " tuples, count " << rep.expected_count << "; ";
  }
}

// 3. Leftover deviation probability against 2^m / (eps^2 |S|) + 3 se.
void leftover(Verdict& v) {
  const int n = 20;
  int configs = 0;
  double worst_margin = 1e300;
  for (int log_s : {10, 12}) {
    Rng rng(derive_seed(1, "acceptance-3", static_cast<std::uint64_t>(log_s)));
    std::vector<BitVector> s;
    for (auto x : random_subset(n, std::size_t{1} << log_s, rng)) s.push_back(BitVector::from_uint(x, n));
    for (int m : {3, 4, 5}) {
      for (double eps : {0.25, 0.5}) {
        const auto rep = leftover_deviation_probability(s, m, eps, 10000, rng);
        v.fail_if(!rep.pass(), "|S|=2^" + std::to_string(log_s) + " m=" + std::to_string(m));
        worst_margin = std::min(worst_margin, rep.bound + 3 * rep.se - rep.empirical);
        ++configs;
      }
    }
  }
  v.detail << configs << " configurations, smallest margin " << worst_margin;
}

// 4. Single-round and amplified A_k error rates on planted sets.
void approx_count(Verdict& v) {
  ExactCountOracle oracle;
  const int n = 20, rounds = 10000, amplified = 1000;
  const double e5 = std::exp(-5.0);
  double min_acc = 1.0, max_rej = 0.0, max_amp_err = 0.0;
  for (int k = 6; k <= 12; ++k) {
    Rng rng(derive_seed(1, "acceptance-4", static_cast<std::uint64_t>(k)));
    const SetPredicate big(n, random_subset(n, std::size_t{1} << (k + 1), rng));
    const SetPredicate small(n, random_subset(n, (std::size_t{1} << k) - 1, rng));
    int acc_big = 0, acc_small = 0;
    for (int i = 0; i < rounds; ++i) {
      acc_big += a_k_round(big, k, oracle, rng);
      acc_small += a_k_round(small, k, oracle, rng);
    }
    const double rb = acc_big / double(rounds), rs = acc_small / double(rounds);
    v.fail_if(rb < 0.75 - 3 * binomial_se(0.75, rounds), "accept rate k=" + std::to_string(k));
    v.fail_if(rs > 0.125 + 3 * binomial_se(0.125, rounds), "reject rate k=" + std::to_string(k));
    int err_big = 0, err_small = 0;
    for (int i = 0; i < amplified; ++i) {
      err_big += !a_k(big, k, 5, oracle, rng).accepted;
      err_small += a_k(small, k, 5, oracle, rng).accepted;
    }
    const double lim = e5 + 3 * binomial_se(e5, amplified);
    v.fail_if(err_big / double(amplified) > lim, "amplified accept k=" + std::to_string(k));
    v.fail_if(err_small / double(amplified) > lim, "amplified reject k=" + std::to_string(k));
    min_acc = std::min(min_acc, rb);
    max_rej = std::max(max_rej, rs);
    max_amp_err = std::max({max_amp_err, err_big / double(amplified), err_small / double(amplified)});
  }
  v.detail << "min accept rate " << min_acc << ", max false accept " << max_rej << ", max amplified error "
           << max_amp_err;
}

// 5. Sandwich rate against w and the midpoint estimate under the sandwich.
void stockmeyer(Verdict& v) {
  ExactCountOracle oracle;
  const int alphas[] = {1, 4, 16};
  std::uint64_t runs = 0, sandwiched = 0, mid_fail = 0, harmonic_fail = 0;
  double w_sum = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(derive_seed(1, "acceptance-5", static_cast<std::uint64_t>(i)));
    const int alpha = alphas[i % 3];
    const int t = 10 + i % 7;
    const auto alg = alpha == 16 ? coset_sampler_algorithm(t, 4, 1 + i % 2, rng)
                                 : random_function_algorithm(t, t - 5 - static_cast<int>(rng.below(3)), rng);
    const double w = stockmeyer_success_bound(alpha, t, 5);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> outcomes;
    for (const auto& zc : alg.histogram()) outcomes.push_back(zc);
    for (std::size_t j = 0; j < 6 && j < outcomes.size(); ++j) {
      std::swap(outcomes[j], outcomes[j + rng.below(outcomes.size() - j)]);
      const auto [z, count] = outcomes[j];
      const auto est = stockmeyer_estimate(alg, z, alpha, 5, oracle, rng);
      ++runs;
      w_sum += w;
      if (!sandwich_holds(count, alpha, est.eta)) continue;
      ++sandwiched;
      const double q = exact_probability(alg, z).value();
      mid_fail += !within_relative(q, est.q_tilde_mid, est.xi);
      harmonic_fail += !within_relative(q, est.q_tilde_harmonic, est.xi);
    }
  }
  const double rate = sandwiched / double(runs), w_mean = w_sum / double(runs);
  v.fail_if(rate < w_mean, "sandwich rate below w");
  v.fail_if(mid_fail > 0, "midpoint estimate outside xi q");
  v.detail << runs << " estimates, sandwich rate " << rate << " vs w " << w_mean << ", midpoint failures " << mid_fail
           << ", harmonic failures " << harmonic_fail;
}

// 6. Anti-concentration, exhaustive at n = 3 and sampled at n = 8, 10.
void anticoncentration(Verdict& v) {
  const std::vector<double> taus{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  for (const auto& r : anticoncentration_exhaustive(3, 3, taus)) {
    v.fail_if(!r.pass(), "exhaustive tau=" + fmt_double(r.tau));
  }
  v.detail << "exhaustive n=3 over " << anticoncentration_exhaustive(3, 3, {std::vector<double>{0.5}}).front().trials
           << " pairs; ";
  for (int n : {8, 10}) {
    Rng rng(derive_seed(1, "acceptance-6", static_cast<std::uint64_t>(n)));
    double margin = 1e300;
    for (const auto& r : anticoncentration_monte_carlo(n, 3, taus, 10000, rng)) {
      v.fail_if(!r.pass(), "n=" + std::to_string(n) + " tau=" + fmt_double(r.tau));
      margin = std::min(margin, r.empirical - r.bound);
    }
    v.detail << "n=" << n << " smallest empirical - bound " << margin << "; ";
  }
}

// 7. End-to-end chain with the exact adversary, 20 seeds per parameter tuple.
void chain(Verdict& v) {
  ExactCountOracle oracle;
  const int n = 6, seeds = 20, f_per_seed = 4;
  struct Tuple {
    ChainParams params;
    bool allow_nonpositive_v;
  };
  const Tuple tuples[] = {{ChainParams{}, true}, {ChainParams{0.01, 0.05, 0.9, 16, 5}, false}};
  for (const auto& tp : tuples) {
    ChainOptions opt;
    opt.allow_nonpositive_v = tp.allow_nonpositive_v;
    std::uint64_t pairs = 0, good = 0;
    int seed_passes = 0;
    for (int s = 1; s <= seeds; ++s) {
      const auto rep = chain_experiment(n, tp.params, {AdversaryKind::Exact, 0.0}, f_per_seed,
                                        static_cast<std::uint64_t>(s), oracle, opt);
      const auto p = rep.results["pairs"].get<std::uint64_t>();
      pairs += p;
      good += static_cast<std::uint64_t>(std::llround(rep.results["fraction_mid"].get<double>() * static_cast<double>(p)));
      seed_passes += rep.pass();
    }
    const double frac = good / double(pairs), vv = tp.params.v();
    const double threshold = vv - 3 * binomial_se(vv, pairs);
    v.fail_if(frac < threshold, "eps=" + fmt_double(tp.params.eps));
    v.detail << "eps=" << tp.params.eps << " delta=" << tp.params.delta << ": fraction " << frac << " vs v - 3se "
             << threshold << " (" << seed_passes << "/" << seeds << " seeds pass); ";
  }
}

// 8. Toffoli and T counts, compiled circuit vs CNF, CNF construction vs statevector.
void tcount(Verdict& v) {
  Rng rng(derive_seed(1, "acceptance-8"));
  for (int m = 1; m <= 10; ++m) {
    const auto g = random_cnf(6, m, rng);
    const auto u = compile_cnf(g);
    v.fail_if(u.toffoli_count() != static_cast<std::size_t>(3 * m - 1), "toffoli count m=" + std::to_string(m));
    v.fail_if(t_count(g) != 14LL * (3 * m - 1), "t count m=" + std::to_string(m));
  }
  int circuits = 0;
  for (int n = 1; n <= 10; ++n) {
    for (int m = 1; m <= 6; ++m) {
      const auto g = random_cnf(n, m, rng);
      const auto u = compile_cnf(g);
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const auto out = u.run_on_input(x);
        v.fail_if(out.get(static_cast<std::size_t>(u.output)) != g.evaluate(x),
                  "compiled output n=" + std::to_string(n) + " m=" + std::to_string(m));
        const auto back = u.run_inverse(out);
        for (int a = 0; a < u.width(); ++a) {
          const bool want = a < n && ((x >> a) & 1u);
          v.fail_if(back.get(static_cast<std::size_t>(a)) != want, "inverse does not restore the input");
        }
      }
      ++circuits;
    }
  }
  double worst = 0.0;
  int sims = 0;
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 4; ++m) {
      const auto f = random_polynomial(n, 2, rng);
      const auto g = random_cnf(n, m, rng);
      const auto exact = cnf_phase_distribution(f, g);
      const auto sim = simulate_cnf_construction(f, g);
      for (std::size_t z = 0; z < sim.size(); ++z) worst = std::max(worst, std::abs(sim[z] - exact.prob(z)));
      ++sims;
    }
  }
  v.fail_if(worst > 1e-10, "statevector construction deviates");
  v.detail << "counts for m=1..10, " << circuits << " compiled circuits checked exhaustively, " << sims
           << " statevector constructions, max deviation " << worst;
}

// 9. Injected phases do not change the output distribution.
void phase_irrelevance(Verdict& v) {
  Rng rng(derive_seed(1, "acceptance-9"));
  double worst = 0.0;
  int runs = 0;
  for (int n = 1; n <= 6; ++n) {
    const auto f = random_polynomial(n, 2, rng);
    const auto c = random_circuit(n, 2 * n + 1, rng);
    const auto exact = boolean_phase_distribution(f, c);
    for (int i = 0; i < 10; ++i) {
      std::vector<double> h(std::size_t{1} << n);
      for (auto& x : h) x = 2 * std::numbers::pi * rng.uniform01();
      const auto sim = simulate_boolean_phase_construction(f, c, [&](std::uint64_t x) { return h[x]; });
      for (std::size_t z = 0; z < sim.size(); ++z) worst = std::max(worst, std::abs(sim[z] - exact.prob(z)));
      ++runs;
    }
  }
  v.fail_if(worst > 1e-10, "phase changes the distribution");
  v.detail << runs << " injected phase functions, max deviation " << worst;
}

// 10. Markov tail fraction <= delta whenever sum |p - q| <= eps.
void markov(Verdict& v) {
  Rng rng(derive_seed(1, "acceptance-10"));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(rng.below(10));
    const std::size_t size = std::size_t{1} << n;
    auto random_dist = [&] {
      std::vector<double> d(size);
      double total = 0.0;
      const bool sparse = rng.bit();
      for (auto& x : d) total += x = (sparse && rng.bit()) ? 0.0 : rng.uniform01();
      if (total == 0.0) d[0] = total = 1.0;
      for (auto& x : d) x /= total;
      return d;
    };
    std::vector<double> p, q;
    if (i % 2 == 0) {
      p = iqp_distribution(random_polynomial(n, 3, rng)).probs();
      q = random_dist();
    } else {
      p = random_dist();
      q = random_dist();
    }
    const double l1 = l1_distance(p, q);
    const double eps = l1 > 0.0 ? l1 * (1.0 + 0.01 + rng.uniform01()) : 0.01 + rng.uniform01();
    const double delta = 0.001 + 0.999 * rng.uniform01();
    const auto r = markov_tail(p, q, eps, delta);
    v.fail_if(r.fraction > delta, "instance " + std::to_string(i));
    worst = std::max(worst, r.fraction / delta);
  }
  v.detail << "1000 instances, max fraction / delta " << worst;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<void(Verdict&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "distribution_equivalence", 60, distribution_equivalence},
      {2, "pairwise_independence", 60, pairwise},
      {3, "leftover_hash", 120, leftover},
      {4, "threshold_test", 300, approx_count},
      {5, "stockmeyer_estimator", 600, stockmeyer},
      {6, "anticoncentration", 120, anticoncentration},
      {7, "chain", 900, chain},
      {8, "tcount", 600, tcount},
      {9, "phase_irrelevance", 600, phase_irrelevance},
      {10, "markov_tail", 600, markov},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.fail_if(secs > c.limit_s, "over time limit");
    std::printf("%s %d %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.str().c_str());
    std::fflush(stdout);
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
