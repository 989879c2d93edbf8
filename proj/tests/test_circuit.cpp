#include <gtest/gtest.h>

#include <random>

#include "pcw/circuit.hpp"
#include "pcw/cp_proof.hpp"
#include "pcw/random_lab.hpp"
#include "support.hpp"

using namespace pcw;

namespace {

struct Pipeline {
  CcRefutation cc;
  CompileResult compiled;
};

Pipeline compile_by_resolution(const CnfFormula& f, const VariablePartition& part, bool record = false) {
  auto r = resolution_refutation_from_dpll(f);
  Pipeline p{cc_refutation_from_resolution(r, f, part), {}};
  CompileOptions opts;
  opts.record_stacked = record;
  p.compiled = compile_cc_refutation(p.cc, f, part, opts);
  return p;
}

MonotoneCircuit single(Gate g) { return MonotoneCircuit({g}, 0); }

}  // namespace

TEST(Circuit, ValidationAndSharing) {
  EXPECT_THROW(MonotoneCircuit({Gate::and_of(0, 0)}, 0), InvalidArgument);
  EXPECT_THROW(MonotoneCircuit({Gate::constant(true)}, 1), InvalidArgument);
  CircuitBuilder b;
  auto a = b.input(0, 1, 1);
  auto c = b.input(0, 1, 1);
  EXPECT_EQ(a, c);
  auto o = b.or_of(a, b.constant(false));
  EXPECT_EQ(b.or_of(a, 1), o);
  EXPECT_EQ(b.size(), 3u);
}

TEST(Circuit, TextRoundTripAndErrors) {
  CircuitBuilder b;
  auto i0 = b.input(0, 0, 1), i1 = b.input(2, 3, 2), e = b.input(1, 0, 0);
  auto out = b.and_of(b.or_of(i0, i1), b.or_of(e, b.constant(true)));
  auto c = b.build(out);
  auto text = to_text(c);
  EXPECT_NE(text.find("g2 = in 3 11"), std::string::npos);
  EXPECT_NE(text.find("g3 = in 2 -"), std::string::npos);
  EXPECT_EQ(parse_circuit(text), c);
  EXPECT_THROW(parse_circuit("g1 = and g1 g1\noutput g1\n"), ParseError);
  EXPECT_THROW(parse_circuit("g1 = const1\n"), ParseError);
  EXPECT_THROW(parse_circuit("g1 = xor g1 g1\noutput g1\n"), ParseError);
  EXPECT_THROW(parse_circuit("g2 = const1\noutput g2\n"), ParseError);
  EXPECT_THROW(parse_circuit("g1 = in 1 0x\noutput g1\n"), ParseError);
}

TEST(EvalCircuit, Examples) {
  auto f = test::complete2();
  auto part = test::complete2_partition();
  auto g = build_constraint_graph(f, part);
  auto tt = single(Gate::input(0, 0, 1));
  EXPECT_TRUE(eval_circuit(tt, g, accepting_instance(g, part, 0)));
  EXPECT_FALSE(eval_circuit(tt, g, rejecting_instance(g, f, part, 0)));
  EXPECT_TRUE(eval_circuit(single(Gate::constant(true)), g, rejecting_instance(g, f, part, 0)));
  EXPECT_THROW(eval_circuit(single(Gate::input(9, 0, 1)), g, accepting_instance(g, part, 0)), InvalidArgument);
  EXPECT_THROW(eval_circuit(single(Gate::input(0, 0, 2)), g, accepting_instance(g, part, 0)), InvalidArgument);
}

TEST(Compile, CompleteTwoCnf) {
  auto f = test::complete2();
  auto part = test::complete2_partition();
  auto p = compile_by_resolution(f, part, true);
  EXPECT_EQ(p.compiled.length, 7u);
  EXPECT_EQ(p.compiled.k, 2);
  EXPECT_LE(double(p.compiled.circuit.size()), p.compiled.conservative_bound);
  EXPECT_EQ(p.compiled.conservative_bound, 7.0 * 64);
  auto g = build_constraint_graph(f, part);
  for (std::uint64_t x = 0; x < 2; ++x) EXPECT_TRUE(eval_circuit(p.compiled.circuit, g, accepting_instance(g, part, x)));
  for (std::uint64_t y = 0; y < 2; ++y)
    EXPECT_FALSE(eval_circuit(p.compiled.circuit, g, rejecting_instance(g, f, part, y)));
  EXPECT_TRUE(verify_separation(p.compiled.circuit, f, part).pass);

  // the axiom line (x1 v y1) with history "00" is the input gate TT_1(0)
  bool found = false;
  for (const auto& lc : p.compiled.line_circuits)
    if (lc.line == 0 && lc.history.to_string() == "00") {
      EXPECT_EQ(p.compiled.circuit.gate(lc.gate), Gate::input(0, 0, 1));
      found = true;
    }
  EXPECT_TRUE(found);

  auto claim = check_line_circuits(p.compiled, p.cc, f, part);
  EXPECT_GT(claim.checked, 0u);
  EXPECT_EQ(claim.violations, 0u);
  auto stacked = check_stacked_nodes(p.compiled, p.cc, f, part);
  EXPECT_GT(stacked.checked, 0u);
  EXPECT_EQ(stacked.violations, 0u);
}

TEST(Compile, OneSidedContradiction) {
  CnfFormula f(1, {Clause::from_dimacs({1}), Clause::from_dimacs({-1})});
  VariablePartition part(1, {1}, {});
  auto p = compile_by_resolution(f, part);
  auto g = build_constraint_graph(f, part);
  EXPECT_EQ(g.num_bits(), 4u);
  auto sep = verify_separation(p.compiled.circuit, f, part);
  EXPECT_TRUE(sep.pass);
  EXPECT_EQ(sep.accepting_checked, 2u);
  EXPECT_EQ(sep.rejecting_checked, 1u);
}

TEST(Compile, CuttingPlanesProof) {
  // x1 >= 1 and -x1 >= 0 with the partition X = {1}, Y = {2} over 2 variables.
  CnfFormula f(2, {Clause::from_dimacs({1}), Clause::from_dimacs({-1})});
  auto part = test::complete2_partition();
  auto proof = parse_cp_proof("1: 1 0 >= 1 ; hyp 1\n2: -1 0 >= 0 ; hyp 2\n3: 0 1 >= 0 ; bool 2 lo\n"
                              "4: 0 0 >= 1 ; add 1 2\n",
                              system_of(f));
  ASSERT_TRUE(check_cp_proof(proof).refutation);
  auto cc = cc_refutation_from_cp(proof, f, part, default_weight_bound(2));
  EXPECT_EQ(check_cc_refutation(cc, f, part), "");
  EXPECT_EQ(cc.length(), 2u + 4u);
  EXPECT_TRUE(cc.lines.back().line.is_constant(false));
  EXPECT_EQ(cc.lines.back().protocol.depth(), 0);
  auto res = compile_cc_refutation(cc, f, part);
  EXPECT_TRUE(verify_separation(res.circuit, f, part).pass);
  EXPECT_EQ(check_line_circuits(res, cc, f, part).violations, 0u);
}

TEST(Compile, RejectsBrokenRefutations) {
  auto f = test::complete2();
  auto part = test::complete2_partition();
  auto cc = cc_refutation_from_resolution(resolution_refutation_from_dpll(f), f, part);
  auto wrong_last = cc;
  wrong_last.lines.back().line = SemanticLine::constant(1, 1, true);
  EXPECT_NE(check_cc_refutation(wrong_last, f, part), "");
  EXPECT_THROW(compile_cc_refutation(wrong_last, f, part), PreconditionError);
  auto unsound = cc;
  unsound.lines[4].why = Derivation::from(0, 0);
  EXPECT_NE(check_cc_refutation(unsound, f, part), "");
  EXPECT_THROW(compile_cc_refutation(unsound, f, part), PreconditionError);
}

TEST(Compile, RandomFormulasSeparateAndSatisfyTheClaim) {
  auto part = VariablePartition::alternating(8);
  for (const auto& f : test::unsat_samples(40, 8, 3, 12, 77)) {
    auto p = compile_by_resolution(f, part, true);
    EXPECT_LE(double(p.compiled.circuit.size()), p.compiled.conservative_bound);
    EXPECT_TRUE(verify_separation(p.compiled.circuit, f, part).pass);
    EXPECT_EQ(check_line_circuits(p.compiled, p.cc, f, part).violations, 0u);
    EXPECT_EQ(check_stacked_nodes(p.compiled, p.cc, f, part).violations, 0u);
  }
}

TEST(Compile, CircuitsAreMonotone) {
  auto part = VariablePartition::alternating(8);
  auto f = test::unsat_samples(40, 8, 3, 1, 5).front();
  auto p = compile_by_resolution(f, part);
  for (const auto& gate : p.compiled.circuit.gates())
    EXPECT_TRUE(gate.kind == GateKind::Input || gate.kind == GateKind::And || gate.kind == GateKind::Or ||
                gate.kind == GateKind::Const0 || gate.kind == GateKind::Const1);
  auto g = build_constraint_graph(f, part);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 500; ++k) {
    CspSatInstance a{Bits(g.num_bits())};
    for (std::size_t i = 0; i < g.num_bits(); ++i) a.bits[i] = rng() % 2;
    auto b = a;
    for (std::size_t i = 0; i < g.num_bits(); ++i)
      if (rng() % 4 == 0) b.bits[i] = true;
    if (eval_circuit(p.compiled.circuit, g, a)) EXPECT_TRUE(eval_circuit(p.compiled.circuit, g, b));
  }
}

TEST(Compile, Deterministic) {
  auto part = VariablePartition::alternating(8);
  auto f = test::unsat_samples(40, 8, 3, 1, 9).front();
  EXPECT_EQ(to_text(compile_by_resolution(f, part).compiled.circuit),
            to_text(compile_by_resolution(f, part).compiled.circuit));
}

TEST(VerifySeparation, ConstantCircuitsFailWithWitnesses) {
  auto f = test::complete2();
  auto part = test::complete2_partition();
  auto s0 = verify_separation(single(Gate::constant(false)), f, part);
  EXPECT_FALSE(s0.pass);
  EXPECT_EQ(s0.witness_x, 0u);
  EXPECT_FALSE(s0.witness_y);
  auto s1 = verify_separation(single(Gate::constant(true)), f, part);
  EXPECT_FALSE(s1.pass);
  EXPECT_FALSE(s1.witness_x);
  EXPECT_EQ(s1.witness_y, 0u);
  EXPECT_THROW(verify_separation(single(Gate::constant(true)), f, part, {0}), CapExceeded);
}

TEST(Extract, RoundTripOnCompleteTwoCnf) {
  auto f = test::complete2();
  auto part = test::complete2_partition();
  auto p = compile_by_resolution(f, part);
  auto e = extract_cc2_refutation(p.compiled.circuit, f, part);
  EXPECT_EQ(e.lines.size(), p.compiled.circuit.size());
  EXPECT_TRUE(e.separation);
  EXPECT_TRUE(e.leaves_entailed);
  EXPECT_TRUE(e.internal_entailed);
  EXPECT_TRUE(e.protocols_compute);
  EXPECT_TRUE(e.root_constant_zero);
  EXPECT_TRUE(e.valid());
  for (const auto& t : e.protocols) EXPECT_EQ(t.depth(), 2);
}

TEST(Extract, SingleInputGateIsEntailedButNoRefutation) {
  auto f = test::complete2();
  auto part = test::complete2_partition();
  ExtractOptions opts;
  opts.require_separation = false;
  auto e = extract_cc2_refutation(single(Gate::input(0, 0, 1)), f, part, opts);
  ASSERT_EQ(e.lines.size(), 1u);
  // 0 iff x1 = 0 and (x1 v y1) is false
  auto expect = SemanticLine::from_function(1, 1, [](auto x, auto y) { return !(x == 0 && y == 0); });
  EXPECT_EQ(e.lines[0], expect);
  EXPECT_EQ(e.leaf_provenance[0], (std::pair<std::size_t, std::uint64_t>{0, 0}));
  EXPECT_TRUE(e.leaves_entailed);
  EXPECT_FALSE(e.root_constant_zero);
  EXPECT_FALSE(e.valid());
  EXPECT_FALSE(e.separation);
}

TEST(Extract, DegenerateCircuitFailsThePrecondition) {
  auto f = test::complete2();
  auto part = test::complete2_partition();
  auto c = single(Gate::constant(false));
  EXPECT_THROW(extract_cc2_refutation(c, f, part), PreconditionError);
  ExtractOptions opts;
  opts.require_separation = false;
  // Constant gates extract to the constant-1 line, so the root is not a contradiction.
  auto e = extract_cc2_refutation(c, f, part, opts);
  EXPECT_FALSE(e.root_constant_zero);
  EXPECT_FALSE(e.separation);
}

TEST(Extract, RoundTripOnRandomFormulas) {
  auto part = VariablePartition::alternating(8);
  for (const auto& f : test::unsat_samples(60, 8, 3, 8, 123)) {
    auto p = compile_by_resolution(f, part);
    auto e = extract_cc2_refutation(p.compiled.circuit, f, part);
    EXPECT_EQ(e.lines.size(), p.compiled.circuit.size());
    EXPECT_TRUE(e.valid());
  }
}
