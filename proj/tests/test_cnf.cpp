#include <gtest/gtest.h>

#include <random>

#include "pcw/cnf.hpp"
#include "pcw/error.hpp"
#include "pcw/random_lab.hpp"
#include "support.hpp"

using namespace pcw;

namespace {

Assignment total_from_code(int n, std::uint64_t a) {
  std::vector<bool> bits(n);
  for (int i = 0; i < n; ++i) bits[i] = (a >> i) & 1U;
  return Assignment::total(bits);
}

}  // namespace

TEST(Dimacs, ParsesClausesInOrder) {
  auto f = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 2 0");
  EXPECT_EQ(f.num_vars(), 2);
  ASSERT_EQ(f.num_clauses(), 2u);
  EXPECT_EQ(f.clause(0), Clause::from_dimacs({1, -2}));
  EXPECT_EQ(f.clause(1), Clause::from_dimacs({-1, 2}));
}

TEST(Dimacs, CommentsAndTrailingWhitespace) {
  auto f = parse_dimacs("c hello\np cnf 3 2  \n1 2\n 3 0\nc mid\n-3 0   \n");
  ASSERT_EQ(f.num_clauses(), 2u);
  EXPECT_EQ(f.clause(0).width(), 3);
}

TEST(Dimacs, ErrorsCarryLineNumbers) {
  try {
    parse_dimacs("p cnf 1 1\n1 -1 0");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("repeated"), std::string::npos);
  }
  try {
    parse_dimacs("p cnf 2 1\n3 0");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);
  }
  EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 0"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 0\n2 0"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf x 1\n1 0"), ParseError);
  EXPECT_THROW(parse_dimacs("1 0"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 2"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 a 0"), ParseError);
}

TEST(Dimacs, RoundTripIsIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto f = sample_f({7, 6, 3, seed});
    auto text = to_dimacs(f);
    auto g = parse_dimacs(text);
    EXPECT_EQ(f, g);
    EXPECT_EQ(to_dimacs(g), text);
  }
}

TEST(Dimacs, DuplicateClausesPreserved) {
  auto f = parse_dimacs("p cnf 1 2\n1 0\n1 0\n");
  EXPECT_EQ(f.num_clauses(), 2u);
}

TEST(EvalClause, Examples) {
  auto c = Clause::from_dimacs({1, -2});
  Assignment a(2);
  a.set(1, true);
  a.set(2, true);
  EXPECT_TRUE(eval_clause(c, a));
  a.set(1, false);
  EXPECT_FALSE(eval_clause(c, a));
  Assignment b(1);
  b.set(1, false);
  EXPECT_TRUE(eval_clause(Clause::from_dimacs({-1}), b));
  Assignment partial(2);
  partial.set(1, false);
  EXPECT_THROW(eval_clause(c, partial), InvalidArgument);
}

TEST(ClauseToInequality, Examples) {
  EXPECT_EQ(clause_to_inequality(Clause::from_dimacs({1, -2}), 2), LinearInequality({1, -1}, 0));
  EXPECT_EQ(clause_to_inequality(Clause::from_dimacs({1}), 1), LinearInequality({1}, 1));
  EXPECT_EQ(clause_to_inequality(Clause::from_dimacs({-1, -2}), 2), LinearInequality({-1, -1}, -1));
}

TEST(ClauseToInequality, AgreesWithEvaluationExhaustively) {
  std::mt19937_64 rng(5);
  for (int w = 1; w <= 8; ++w) {
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<Literal> lits;
      for (int v = 1; v <= w; ++v) lits.push_back({v, bool(rng() & 1U)});
      Clause c(lits);
      auto ineq = clause_to_inequality(c, w);
      for (std::uint64_t a = 0; a < (1ULL << w); ++a) {
        std::vector<std::int64_t> point(w);
        for (int i = 0; i < w; ++i) point[i] = (a >> i) & 1U;
        EXPECT_EQ(eval_clause(c, total_from_code(w, a)), ineq.satisfied_by(point));
      }
    }
  }
}

TEST(BruteForceSat, Examples) {
  EXPECT_FALSE(brute_force_sat(parse_dimacs("p cnf 1 2\n1 0\n-1 0")));
  auto w = brute_force_sat(parse_dimacs("p cnf 2 1\n1 2 0"));
  ASSERT_TRUE(w);
  EXPECT_FALSE(w->value(1));
  EXPECT_TRUE(w->value(2));
  EXPECT_FALSE(brute_force_sat(parse_dimacs("p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0")));
  EXPECT_THROW(brute_force_sat(CnfFormula(30, {Clause::from_dimacs({1})})), CapExceeded);
}

TEST(BruteForceSat, AgreesWithEnumerationOracle) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    int n = 4 + seed % 9;
    auto f = sample_f({int(3 * n + seed % 7), n, 3, seed});
    auto w = brute_force_sat(f);
    EXPECT_EQ(bool(w), test::exhaustive_sat(f)) << "seed " << seed;
    if (w)
      for (const auto& c : f.clauses()) EXPECT_TRUE(eval_clause(c, *w));
  }
}

TEST(SearchViolation, Examples) {
  auto f = test::complete2();
  auto p = test::complete2_partition();
  EXPECT_EQ(search_violation(f, p, p.decode(Side::X, 0), p.decode(Side::Y, 0)), 0u);
  EXPECT_EQ(search_violation(f, p, p.decode(Side::X, 1), p.decode(Side::Y, 1)), 3u);
  CnfFormula sat(2, {Clause::from_dimacs({1, 2})});
  EXPECT_THROW(search_violation(sat, p, p.decode(Side::X, 1), p.decode(Side::Y, 0)), PreconditionError);
}

TEST(SearchViolation, SmallestFalsifiedIndex) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto f = test::unsat_samples(40, 6, 3, 1, seed).front();
    auto p = VariablePartition::alternating(6);
    for (std::uint64_t x = 0; x < 8; ++x)
      for (std::uint64_t y = 0; y < 8; ++y) {
        auto xa = p.decode(Side::X, x), ya = p.decode(Side::Y, y);
        auto i = search_violation(f, p, xa, ya);
        auto joint = Assignment::join(xa, ya);
        EXPECT_FALSE(eval_clause(f.clause(i), joint));
        for (std::size_t j = 0; j < i; ++j) EXPECT_TRUE(eval_clause(f.clause(j), joint));
      }
  }
}

TEST(Partition, CodesAndParsing) {
  auto p = parse_partition("x:1,3-4", 5);
  EXPECT_EQ(p.xvars(), (std::vector<Var>{1, 3, 4}));
  EXPECT_EQ(p.yvars(), (std::vector<Var>{2, 5}));
  EXPECT_EQ(p.code_bit(1), 2);  // first variable most significant
  for (std::uint64_t c = 0; c < 8; ++c) EXPECT_EQ(p.x_code(p.decode(Side::X, c)), c);
  EXPECT_EQ(parse_partition("alternating", 4), VariablePartition::alternating(4));
  EXPECT_EQ(parse_partition("x:1 y:2", 2), test::complete2_partition());
  EXPECT_THROW(parse_partition("x:1 y:1", 2), InvalidArgument);
  EXPECT_THROW(parse_partition("x:9", 2), InvalidArgument);
  EXPECT_THROW(VariablePartition(2, {1}, {}), InvalidArgument);
}

TEST(Partition, CodesRequireSmallSides) {
  auto p = VariablePartition::alternating(140);
  EXPECT_EQ(p.n1(), 70);
  EXPECT_THROW(p.decode(Side::X, 0), CapExceeded);
}

TEST(SidePart, MatchesClauseFalsification) {
  auto p = VariablePartition::alternating(6);
  auto c = Clause::from_dimacs({1, -3, 4, -6});
  auto sx = side_part(c, p, Side::X), sy = side_part(c, p, Side::Y);
  for (std::uint64_t x = 0; x < 8; ++x)
    for (std::uint64_t y = 0; y < 8; ++y) {
      auto joint = Assignment::join(p.decode(Side::X, x), p.decode(Side::Y, y));
      EXPECT_EQ(!eval_clause(c, joint), sx.falsified_by(x) && sy.falsified_by(y));
    }
}
