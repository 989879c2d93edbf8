#include <gtest/gtest.h>

#include <random>

#include "pcw/protocol.hpp"
#include "pcw/random_lab.hpp"
#include "support.hpp"

using namespace pcw;

namespace {

const VariablePartition kPart = test::complete2_partition();

Assignment side(Side s, std::uint64_t code) { return kPart.decode(s, code); }

// Independent good-history oracle: a history is good iff no joint input
// that runs into it has line value 1.
std::vector<History> good_oracle(const ProtocolTree& t, const SemanticLine& line) {
  std::vector<bool> bad(std::size_t{1} << t.depth(), false);
  for (std::uint64_t x = 0; x < line.x_count(); ++x)
    for (std::uint64_t y = 0; y < line.y_count(); ++y)
      if (line.at(x, y)) bad[run_protocol_codes(t, x, y).history.bits()] = true;
  std::vector<History> out;
  for (std::uint64_t b = 0; b < bad.size(); ++b)
    if (!bad[b]) out.emplace_back(b, t.depth());
  return out;
}

LinearInequality random_inequality(std::mt19937_64& rng, int n, int w) {
  std::uniform_int_distribution<std::int64_t> c(-w, w);
  LinearInequality e(std::vector<std::int64_t>(n), c(rng));
  for (auto& a : e.coeffs) a = c(rng);
  return e;
}

}  // namespace

TEST(History, AddressingAndText) {
  auto h = History::parse("101");
  EXPECT_EQ(h.length(), 3);
  EXPECT_TRUE(h.bit(0));
  EXPECT_FALSE(h.bit(1));
  EXPECT_EQ(h.prefix(2).to_string(), "10");
  EXPECT_EQ(h.child(false).to_string(), "1010");
  EXPECT_EQ((History::parse("1") + History::parse("01")), h);
  EXPECT_TRUE(History::parse("10").is_prefix_of(h));
  EXPECT_FALSE(History::parse("11").is_prefix_of(h));
  EXPECT_EQ(History().to_string(), "");
  EXPECT_THROW(History::parse("012"), InvalidArgument);
}

TEST(ClauseProtocol, Examples) {
  auto c = Clause::from_dimacs({1, 2});
  auto t = clause_protocol(c, kPart);
  EXPECT_EQ(t.depth(), 2);
  auto r00 = run_protocol(t, kPart, side(Side::X, 0), side(Side::Y, 0));
  EXPECT_EQ(r00.history.to_string(), "00");
  EXPECT_FALSE(r00.output);
  auto r10 = run_protocol(t, kPart, side(Side::X, 1), side(Side::Y, 0));
  EXPECT_EQ(r10.history.to_string(), "10");
  EXPECT_TRUE(r10.output);
  auto r01 = run_protocol(t, kPart, side(Side::X, 0), side(Side::Y, 1));
  EXPECT_EQ(r01.history.to_string(), "01");
  EXPECT_TRUE(r01.output);
  EXPECT_THROW(run_protocol(t, kPart, side(Side::Y, 0), side(Side::Y, 0)), InvalidArgument);
}

TEST(ClauseProtocol, ComputesClauseAndHasOneGoodHistory) {
  auto part = VariablePartition::alternating(6);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto f = sample_f({1, 6, 1 + int(seed % 4), seed});
    const auto& c = f.clause(0);
    auto t = clause_protocol(c, part);
    auto line = SemanticLine::from_clause(c, part);
    EXPECT_TRUE(protocol_computes(t, line));
    // "00" is the only good history with a nonempty rectangle; a clause
    // living on one side adds vacuous ones.
    auto good = good_histories(t, line, part);
    ASSERT_FALSE(good.empty());
    EXPECT_EQ(good[0].to_string(), "00");
    for (std::size_t i = 1; i < good.size(); ++i) EXPECT_TRUE(materialize_rectangle(t, good[i], part).empty());
    if (side_part(c, part, Side::X).width > 0 && side_part(c, part, Side::Y).width > 0) EXPECT_EQ(good.size(), 1u);
  }
}

TEST(ConstantProtocols, RunAndGoodHistories) {
  auto t0 = ProtocolTree::constant(false), t1 = ProtocolTree::constant(true);
  auto r0 = run_protocol(t0, kPart, side(Side::X, 1), side(Side::Y, 0));
  EXPECT_EQ(r0.history.length(), 0);
  EXPECT_FALSE(r0.output);
  EXPECT_TRUE(run_protocol(t1, kPart, side(Side::X, 0), side(Side::Y, 1)).output);
  auto g0 = good_histories(t0, SemanticLine::constant(1, 1, false), kPart);
  ASSERT_EQ(g0.size(), 1u);
  EXPECT_EQ(g0[0].length(), 0);
  EXPECT_TRUE(good_histories(t1, SemanticLine::constant(1, 1, true), kPart).empty());
}

TEST(InequalityProtocol, Examples) {
  LinearInequality e({1, 1}, 1);
  auto t = inequality_protocol(e, kPart);
  EXPECT_EQ(t.depth(), 2);
  auto r00 = run_protocol_codes(t, 0, 0);
  EXPECT_EQ(r00.history.to_string(), "00");
  EXPECT_FALSE(r00.output);
  auto r10 = run_protocol_codes(t, 1, 0);
  EXPECT_TRUE(r10.history.bit(0));
  EXPECT_TRUE(r10.output);
  auto c = inequality_protocol(LinearInequality({0, 0}, 1), kPart);
  EXPECT_EQ(c.depth(), 0);
  EXPECT_FALSE(c.output(History()));
  EXPECT_THROW(inequality_protocol(LinearInequality({1 << 20, 1}, 1), kPart, {12, 8}), CapExceeded);
}

TEST(InequalityProtocol, OffsetBinaryMessage) {
  // Alice holds z1, z3 with coefficients -2, 3: sums in [-2, 3], offset range 5 -> 3 bits.
  auto part = VariablePartition::alternating(4);
  LinearInequality e({-2, 1, 3, 0}, 1);
  EXPECT_EQ(alice_message_width(e, part), 3);
  auto t = inequality_protocol(e, part);
  EXPECT_EQ(t.depth(), 4);
  // x = (z1, z3) = (1, 1): sum 1, offset 3 -> "011".
  EXPECT_EQ(run_protocol_codes(t, 0b11, 0).history.prefix(3).to_string(), "011");
}

TEST(InequalityProtocol, MatchesTruthAndRefereeExhaustively) {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 150; ++rep) {
    int n = 1 + rep % 8;
    auto part = VariablePartition::alternating(n);
    auto e = random_inequality(rng, n, 8);
    auto t = inequality_protocol(e, part);
    auto line = SemanticLine::from_inequality(e, part);
    for (std::uint64_t x = 0; x < line.x_count(); ++x)
      for (std::uint64_t y = 0; y < line.y_count(); ++y) {
        auto xa = part.decode(Side::X, x), ya = part.decode(Side::Y, y);
        auto [round, out] = real_protocol_eval(e, part, xa, ya);
        EXPECT_EQ(out, line.at(x, y));
        EXPECT_EQ(run_protocol_codes(t, x, y).output, out);
        EXPECT_EQ(round.referee_bit, round.alice_value >= round.bob_value);
      }
  }
}

TEST(RealProtocol, Examples) {
  LinearInequality e({1, -1}, 0);
  auto [r1, o1] = real_protocol_eval(e, kPart, side(Side::X, 1), side(Side::Y, 0));
  EXPECT_EQ(r1.alice_value, 1);
  EXPECT_EQ(r1.bob_value, 0);
  EXPECT_TRUE(o1);
  auto [r2, o2] = real_protocol_eval(e, kPart, side(Side::X, 0), side(Side::Y, 1));
  EXPECT_EQ(r2.alice_value, 0);
  EXPECT_EQ(r2.bob_value, 1);
  EXPECT_FALSE(o2);
  auto [r3, o3] = real_protocol_eval(LinearInequality({0, 0}, 1), kPart, side(Side::X, 1), side(Side::Y, 1));
  EXPECT_EQ(r3.alice_value, 0);
  EXPECT_EQ(r3.bob_value, 1);
  EXPECT_FALSE(o3);
}

TEST(Rectangles, Examples) {
  auto t = clause_protocol(Clause::from_dimacs({1, 2}), kPart);
  auto r = materialize_rectangle(t, History::parse("00"), kPart);
  EXPECT_EQ(r.xset.count(), 1u);
  EXPECT_TRUE(r.xset[0]);
  EXPECT_EQ(r.yset.count(), 1u);
  EXPECT_TRUE(r.yset[0]);
  auto full = materialize_rectangle(t, History(), kPart);
  EXPECT_TRUE(full.xset.all() && full.yset.all());

  // Alice's clause part is empty, hence always falsified: she always sends 0.
  auto yonly = clause_protocol(Clause::from_dimacs({2}), kPart);
  EXPECT_TRUE(materialize_rectangle(yonly, History::parse("0"), kPart).xset.all());
  EXPECT_TRUE(materialize_rectangle(yonly, History::parse("1"), kPart).xset.none());

  EXPECT_THROW(materialize_rectangle(t, History(), VariablePartition::alternating(30)), CapExceeded);
}

TEST(Rectangles, PartitionTheInputSpaceAndMatchRuns) {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 40; ++rep) {
    int n = 2 + rep % 6;
    auto part = VariablePartition::alternating(n);
    auto e = random_inequality(rng, n, 4);
    auto t = inequality_protocol(e, part);
    std::vector<std::vector<int>> hits(std::size_t{1} << part.n1(), std::vector<int>(std::size_t{1} << part.n2()));
    for (std::uint64_t b = 0; b < (1ULL << t.depth()); ++b) {
      History h(b, t.depth());
      auto r = materialize_rectangle(t, h, part);
      for (std::uint64_t x = 0; x < r.xset.size(); ++x)
        for (std::uint64_t y = 0; y < r.yset.size(); ++y)
          if (r.contains(x, y)) {
            ++hits[x][y];
            EXPECT_EQ(run_protocol_codes(t, x, y).history, h);
          }
    }
    for (const auto& row : hits)
      for (int c : row) EXPECT_EQ(c, 1);
    // prefixes: (x, y) in R(h') iff the run passes through h'
    for (int len = 0; len <= t.depth(); ++len) {
      History pre(rng() & ((1ULL << len) - 1), len);
      auto r = materialize_rectangle(t, pre, part);
      for (std::uint64_t x = 0; x < r.xset.size(); ++x)
        for (std::uint64_t y = 0; y < r.yset.size(); ++y)
          EXPECT_EQ(r.contains(x, y), pre.is_prefix_of(run_protocol_codes(t, x, y).history));
    }
  }
}

TEST(GoodHistories, MatchDoubleLoopOracle) {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 60; ++rep) {
    int n = 2 + rep % 6;
    auto part = VariablePartition::alternating(n);
    auto t = inequality_protocol(random_inequality(rng, n, 3), part);
    // an unrelated line, so that empty and mixed rectangles both occur
    auto line = SemanticLine::from_inequality(random_inequality(rng, n, 3), part);
    EXPECT_EQ(good_histories(t, line, part), good_oracle(t, line));
  }
}

TEST(GoodHistories, EmptyRectanglesAreGood) {
  // Alice's partial sum 2 z1 takes values {0, 2}; offsets 1 and 3 are never sent.
  auto part = VariablePartition(2, {1}, {2});
  auto t = inequality_protocol(LinearInequality({2, 1}, 5), part);
  auto line = SemanticLine::constant(1, 1, true);
  auto good = good_histories(t, line, part);
  EXPECT_FALSE(good.empty());
  for (const auto& h : good) EXPECT_TRUE(materialize_rectangle(t, h, part).empty());
}
