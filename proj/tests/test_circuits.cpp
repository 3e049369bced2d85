#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "iqplab/circuits/phase_oracle.hpp"

using namespace iqplab;

namespace {

Cnf3 random_cnf(int n, int m, Rng& rng) {
  std::vector<Clause> cs;
  for (int j = 0; j < m; ++j) {
    Clause c;
    for (auto& l : c) l = {static_cast<int>(rng.below(static_cast<std::uint64_t>(n))), rng.bit()};
    cs.push_back(c);
  }
  return Cnf3(n, cs);
}

// The same CNF written as a gate list over {NOT, OR, AND}.
BooleanCircuit cnf_as_circuit(const Cnf3& g) {
  const int n = g.n();
  std::vector<BoolGate> gates;
  auto add = [&](BoolOp op, std::vector<int> in) {
    gates.push_back({op, std::move(in)});
    return n + static_cast<int>(gates.size()) - 1;
  };
  int acc = -1;
  for (const auto& c : g.clauses()) {
    int ids[3];
    for (int i = 0; i < 3; ++i) ids[i] = c[i].negated ? add(BoolOp::Not, {c[i].var}) : c[i].var;
    const int o = add(BoolOp::Or, {add(BoolOp::Or, {ids[0], ids[1]}), ids[2]});
    acc = acc < 0 ? o : add(BoolOp::And, {acc, o});
  }
  return BooleanCircuit(n, gates, acc);
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

// Direct sum over x of (-1)^{f(x) + g(x) + x.z}.
template <typename G>
std::vector<std::int64_t> direct_gaps(const Gf2Polynomial& f, G&& g) {
  const int n = f.n();
  const auto masks = f.monomial_masks();
  std::vector<std::int64_t> out(std::size_t{1} << n, 0);
  for (std::uint64_t z = 0; z < out.size(); ++z) {
    for (std::uint64_t x = 0; x < out.size(); ++x) {
      const bool bit = evaluate(masks, x) ^ g(x) ^ (std::popcount(x & z) & 1);
      out[z] += bit ? -1 : 1;
    }
  }
  return out;
}

}  // namespace

TEST(BuildIqp, Examples) {
  EXPECT_TRUE(build_iqp(Gf2Polynomial(3)).gates.empty());
  const auto c = build_iqp(Gf2Polynomial(3, {{0}, {1, 2}}));
  ASSERT_EQ(c.gates.size(), 2u);
  EXPECT_EQ(c.gates[0].kind, DiagonalKind::Z);
  EXPECT_EQ(c.gates[0].qubits[0], 0);
  EXPECT_EQ(c.gates[1].kind, DiagonalKind::CZ);
  EXPECT_EQ(c.gates[1].qubits[0], 1);
  EXPECT_EQ(c.gates[1].qubits[1], 2);
  const auto d = build_iqp(Gf2Polynomial(3, {{0, 1, 2}}));
  ASSERT_EQ(d.gates.size(), 1u);
  EXPECT_EQ(d.gates[0].kind, DiagonalKind::CCZ);
  EXPECT_THROW(build_iqp(Gf2Polynomial(4, {{0, 1, 2, 3}}, 4)), UnsupportedGateError);
}

TEST(Statevector, SingleQubit) {
  auto a = simulate_statevector(build_iqp(Gf2Polynomial(1)));
  EXPECT_NEAR(a[0].real(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(a[1]), 0.0, 1e-12);
  auto b = simulate_statevector(build_iqp(Gf2Polynomial(1, {{0}})));
  EXPECT_NEAR(std::abs(b[0]), 0.0, 1e-12);
  EXPECT_NEAR(b[1].real(), 1.0, 1e-12);
}

TEST(Statevector, LimitEnforced) {
  EXPECT_THROW(StateVector(21), ResourceError);
  IqpCircuit c{4, {}};
  EXPECT_THROW(simulate_statevector(c, 3), ResourceError);
}

TEST(Statevector, AmplitudesRealAndMatchGapFormula) {
  Rng rng(100);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng.below(10));
    const auto f = random_polynomial(n, 3, rng);
    const auto amps = simulate_statevector(build_iqp(f));
    const auto dist = iqp_distribution(f);
    for (std::size_t z = 0; z < amps.size(); ++z) {
      EXPECT_NEAR(amps[z].imag(), 0.0, 1e-12);
      // amplitude_z = gap(f_z) / 2^n exactly
      ASSERT_NEAR(amps[z].real(), std::ldexp(static_cast<double>(dist.gaps[z]), -n), 1e-10);
      ASSERT_NEAR(std::norm(amps[z]), dist.prob(z), 1e-10);
    }
  }
}

TEST(IqpDistribution, Examples) {
  const auto d0 = iqp_distribution(Gf2Polynomial(4));
  EXPECT_EQ(d0.prob(0), 1.0);
  for (std::size_t z = 1; z < d0.size(); ++z) EXPECT_EQ(d0.prob(z), 0.0);
  const auto d1 = iqp_distribution(Gf2Polynomial(2, {{0, 1}}));
  for (std::size_t z = 0; z < 4; ++z) EXPECT_EQ(d1.prob(z), 0.25);
  Rng rng(4);
  for (int n = 1; n <= 12; ++n) {
    const auto d = iqp_distribution(random_polynomial(n, 3, rng));
    EXPECT_TRUE(d.normalized());
    EXPECT_TRUE(d.gaps_even());
  }
}

TEST(DistributionTable, RejectsWrongLength) {
  EXPECT_THROW(DistributionTable(2, {4, 0, 0}), ArgumentError);
}

TEST(BooleanCircuit, EvaluateDepthAndCycles) {
  // x0 AND (NOT x1), then XOR x2
  const BooleanCircuit c(3, {{BoolOp::Not, {1}}, {BoolOp::And, {0, 3}}, {BoolOp::Xor, {4, 2}}}, 5);
  EXPECT_EQ(c.depth(), 3);
  for (std::uint64_t x = 0; x < 8; ++x) {
    const bool want = ((x & 1) && !((x >> 1) & 1)) != static_cast<bool>((x >> 2) & 1);
    EXPECT_EQ(c.evaluate(x), want);
  }
  EXPECT_THROW(BooleanCircuit(2, {{BoolOp::And, {0, 3}}, {BoolOp::Or, {2, 1}}}, 3), ArgumentError);
  EXPECT_THROW(BooleanCircuit(2, {{BoolOp::Not, {0, 1}}}, 2), ArgumentError);
  EXPECT_EQ(BooleanCircuit(2, {}, 1).depth(), 0);
}

TEST(BooleanCircuit, JsonIngestion) {
  const auto j = nlohmann::json::parse(R"({"n":2,"gates":[{"op":"AND","in":[0,1]}],"output":2})");
  const auto c = boolean_circuit_from_json(j);
  EXPECT_EQ(c.n(), 2);
  EXPECT_TRUE(c.evaluate(3));
  EXPECT_FALSE(c.evaluate(1));
  const auto no_n = nlohmann::json::parse(R"({"gates":[{"op":"NOT","in":[0]}],"output":3})");
  EXPECT_EQ(boolean_circuit_from_json(no_n, 3).n(), 3);
  EXPECT_THROW(boolean_circuit_from_json(no_n), ParseError);
  EXPECT_THROW(boolean_circuit_from_json(nlohmann::json::parse(R"({"n":2,"gates":[{"op":"NAND","in":[0,1]}],"output":2})")),
               ParseError);
  EXPECT_THROW(boolean_circuit_from_json(nlohmann::json::parse(R"({"n":2,"gates":[{"op":"AND","in":[0,3]}],"output":2})")),
               ParseError);
}

TEST(Cnf, DimacsParsing) {
  const auto g = parse_dimacs("c comment\np cnf 3 2\n1 -2 3 0\n-1 2 2 0\n");
  EXPECT_EQ(g.n(), 3);
  EXPECT_EQ(g.m(), 2);
  EXPECT_EQ(g.clauses()[0][1], (Literal{1, true}));
  EXPECT_EQ(parse_dimacs(to_dimacs(g)).clauses(), g.clauses());
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 2 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 2 3 -1 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 3 2\n1 2 3 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 2 4 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("1 2 3 0\n"), ParseError);
}

TEST(CompileCnf, ToffoliAndAncillaCounts) {
  Rng rng(6);
  for (int m = 1; m <= 10; ++m) {
    const auto g = random_cnf(6, m, rng);
    const auto u = compile_cnf(g);
    EXPECT_EQ(u.toffoli_count(), static_cast<std::size_t>(3 * m - 1));
    EXPECT_EQ(u.ancillas, 3 * m - 1);
    EXPECT_EQ(t_count(g), 14LL * (3 * m - 1));
    EXPECT_EQ(t_count(g), 2 * 7 * static_cast<long long>(u.toffoli_count()));
  }
  Rng r1(1);
  EXPECT_EQ(t_count(random_cnf(3, 1, r1)), 28);
  EXPECT_EQ(t_count(random_cnf(3, 3, r1)), 112);
  EXPECT_EQ(compile_cnf(random_cnf(3, 4, r1)).ancillas, 11);
}

TEST(CompileCnf, ReproducesCnfEvaluation) {
  Rng rng(31);
  for (int n = 1; n <= 10; ++n) {
    for (int m = 1; m <= 6; ++m) {
      const auto g = random_cnf(n, m, rng);
      const auto u = compile_cnf(g);
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const auto out = u.run_on_input(x);
        ASSERT_EQ(out.get(static_cast<std::size_t>(u.output)), g.evaluate(x)) << "n=" << n << " m=" << m;
        // inputs are restored and U^dagger U clears every ancilla
        ASSERT_EQ(out.slice(0, static_cast<std::size_t>(n)).to_uint(), x);
        ASSERT_TRUE(u.run_inverse(out).slice(static_cast<std::size_t>(n), static_cast<std::size_t>(u.ancillas)).none());
      }
    }
  }
}

TEST(CompileCnf, RepeatedVariableClauses) {
  // x0 or x0 or x0; x0 or !x0 or x1; !x1 or !x1 or x0
  for (const char* text : {"p cnf 2 1\n1 1 1 0\n", "p cnf 2 1\n1 -1 2 0\n", "p cnf 2 1\n-2 -2 1 0\n",
                           "p cnf 2 2\n1 -1 1 0\n-2 2 -2 0\n"}) {
    const auto g = parse_dimacs(text);
    const auto u = compile_cnf(g);
    EXPECT_EQ(u.toffoli_count(), static_cast<std::size_t>(3 * g.m() - 1));
    for (std::uint64_t x = 0; x < 4; ++x) EXPECT_EQ(u.run_on_input(x).get(static_cast<std::size_t>(u.output)), g.evaluate(x));
  }
}

TEST(PhaseDistribution, ZeroOracleIsIqp) {
  Rng rng(12);
  for (int n = 1; n <= 8; ++n) {
    const auto f = random_polynomial(n, 2, rng);
    EXPECT_EQ(boolean_phase_distribution(f, BooleanCircuit::zero(n)).gaps, iqp_distribution(f).gaps);
  }
}

TEST(PhaseDistribution, AndOracleEqualsMonomial) {
  const BooleanCircuit g(2, {{BoolOp::And, {0, 1}}}, 2);
  const auto d = boolean_phase_distribution(Gf2Polynomial(2), g);
  EXPECT_EQ(d.gaps, (std::vector<std::int64_t>{2, 2, 2, -2}));
  for (std::size_t z = 0; z < 4; ++z) EXPECT_EQ(d.prob(z), 0.25);
}

TEST(PhaseDistribution, RejectsCubicAndMismatch) {
  const Gf2Polynomial cubic(3, {{0, 1, 2}});
  EXPECT_THROW(boolean_phase_distribution(cubic, BooleanCircuit::zero(3)), ArgumentError);
  EXPECT_THROW(boolean_phase_distribution(Gf2Polynomial(3), BooleanCircuit::zero(4)), ArgumentError);
}

TEST(PhaseDistribution, MatchesDirectSum) {
  Rng rng(13);
  for (int n = 1; n <= 8; ++n) {
    const auto f = random_polynomial(n, 2, rng);
    const auto c = random_circuit(n, 3 * n, rng);
    EXPECT_EQ(boolean_phase_distribution(f, c).gaps, direct_gaps(f, [&](std::uint64_t x) { return c.evaluate(x); }));
    const auto g = random_cnf(n, 1 + static_cast<int>(rng.below(5)), rng);
    const auto d = cnf_phase_distribution(f, g);
    EXPECT_EQ(d.gaps, direct_gaps(f, [&](std::uint64_t x) { return g.evaluate(x); }));
    EXPECT_TRUE(d.normalized());
  }
}

TEST(PhaseDistribution, CnfAndCircuitRepresentationsAgree) {
  Rng rng(14);
  for (int n = 1; n <= 8; ++n) {
    for (int t = 0; t < 3; ++t) {
      const auto f = random_polynomial(n, 2, rng);
      const auto g = random_cnf(n, 1 + static_cast<int>(rng.below(6)), rng);
      EXPECT_EQ(cnf_phase_distribution(f, g).gaps, boolean_phase_distribution(f, cnf_as_circuit(g)).gaps);
    }
  }
  // single repeated-literal clause x0 or x0 or x0
  const auto g = parse_dimacs("p cnf 3 1\n1 1 1 0\n");
  const BooleanCircuit x0(3, {}, 0);
  const Gf2Polynomial f(3, {{1, 2}});
  EXPECT_EQ(cnf_phase_distribution(f, g).gaps, boolean_phase_distribution(f, x0).gaps);
}

TEST(PhaseDistribution, StatevectorConstructionWithInjectedPhase) {
  Rng rng(15);
  for (int n = 1; n <= 6; ++n) {
    const auto f = random_polynomial(n, 2, rng);
    const auto c = random_circuit(n, 2 * n, rng);
    const auto exact = boolean_phase_distribution(f, c);
    const auto base = simulate_boolean_phase_construction(f, c);
    std::vector<double> table(std::size_t{1} << n);
    for (auto& v : table) v = 2 * std::numbers::pi * rng.uniform01();
    const auto phased = simulate_boolean_phase_construction(f, c, [&](std::uint64_t x) { return table[x]; });
    for (std::size_t z = 0; z < base.size(); ++z) {
      EXPECT_NEAR(base[z], exact.prob(z), 1e-10);
      EXPECT_NEAR(phased[z], exact.prob(z), 1e-10);
    }
  }
}

TEST(PhaseDistribution, CnfStatevectorConstruction) {
  Rng rng(16);
  for (int n = 1; n <= 6; ++n) {
    for (int m = 1; m <= 4; ++m) {
      if (n + 3 * m - 1 > 16) continue;
      const auto f = random_polynomial(n, 2, rng);
      const auto g = random_cnf(n, m, rng);
      const auto exact = cnf_phase_distribution(f, g);
      const auto sim = simulate_cnf_construction(f, g);
      for (std::size_t z = 0; z < sim.size(); ++z) ASSERT_NEAR(sim[z], exact.prob(z), 1e-10);
    }
  }
}
