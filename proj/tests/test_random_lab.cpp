#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "pcw/csp_sat.hpp"
#include "pcw/random_lab.hpp"
#include "support.hpp"

using namespace pcw;

TEST(SplitSeed, StableAndSeparating) {
  EXPECT_EQ(split_seed(1, "sample", 3), split_seed(1, "sample", 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t m : {0, 1, 2})
    for (const char* tag : {"sample", "f", "x", "partition"})
      for (std::uint64_t i = 0; i < 4; ++i) seen.insert(split_seed(m, tag, i));
  EXPECT_EQ(seen.size(), 3u * 4 * 4);
}

TEST(Rational, Parsing) {
  EXPECT_EQ(parse_rational("1/4"), Rational(1, 4));
  EXPECT_EQ(parse_rational("2/4"), Rational(1, 2));
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
  EXPECT_THROW(parse_rational("a/b"), InvalidArgument);
}

TEST(SampleF, ShapeAndDeterminism) {
  auto f = sample_f({3, 4, 2, 42});
  EXPECT_EQ(f.num_clauses(), 3u);
  EXPECT_EQ(f.num_vars(), 4);
  for (const auto& c : f.clauses()) {
    ASSERT_EQ(c.width(), 2);
    EXPECT_LT(c.literals[0].var, c.literals[1].var);
  }
  EXPECT_EQ(f, sample_f({3, 4, 2, 42}));
  EXPECT_NE(f, sample_f({3, 4, 2, 43}));
  EXPECT_THROW(sample_f({3, 2, 3, 1}), InvalidArgument);
  EXPECT_THROW(sample_f({0, 2, 1, 1}), InvalidArgument);
}

TEST(SampleF, FairSigns) {
  int positive = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) positive += !sample_f({1, 1, 1, s}).clause(0).literals[0].negated;
  EXPECT_GE(positive, 450);
  EXPECT_LE(positive, 550);
}

TEST(SampleF, UniformVariables) {
  std::vector<int> hits(11, 0);
  for (std::uint64_t s = 0; s < 2000; ++s) {
    auto f = sample_f({1, 10, 3, s});
    for (const auto& l : f.clause(0).literals) ++hits[l.var];
  }
  for (int v = 1; v <= 10; ++v) {
    EXPECT_GT(hits[v], 500);  // expectation 600
    EXPECT_LT(hits[v], 700);
  }
}

TEST(SampleTensor, Shape) {
  auto t = sample_tensor({2, 3, 2, 7});
  EXPECT_EQ(t.formula.num_vars(), 6);
  EXPECT_EQ(t.partition.xvars(), (std::vector<Var>{1, 2, 3}));
  EXPECT_EQ(t.partition.yvars(), (std::vector<Var>{4, 5, 6}));
  for (const auto& c : t.formula.clauses()) {
    ASSERT_EQ(c.width(), 4);
    int xs = 0;
    for (const auto& l : c.literals) xs += l.var <= 3;
    EXPECT_EQ(xs, 2);
  }
  EXPECT_EQ(t.formula, sample_tensor({2, 3, 2, 7}).formula);
}

TEST(UnsatRate, Examples) {
  EXPECT_EQ(unsat_rate({1, 4, 2, 5}, false, 20).rate, 0.0);
  auto r = unsat_rate({64, 2, 1, 5}, true, 20);
  EXPECT_GE(r.rate, 0.9);
  EXPECT_EQ(r.seeds.size(), 20u);
  EXPECT_EQ(r.seeds[3], split_seed(5, "sample", 3));
  EXPECT_THROW(unsat_rate({10, 20, 2, 5}, true, 1), CapExceeded);
}

TEST(Expansion, Boundaries) {
  CnfFormula one(4, {Clause::from_dimacs({1, -2, 3})});
  auto r1 = expansion_report(one, {Rational(1, 3), 1});
  ASSERT_EQ(r1.rows.size(), 1u);
  EXPECT_EQ(r1.rows[0].min_vars, 3);
  EXPECT_TRUE(r1.pass);

  CnfFormula twins(4, {Clause::from_dimacs({1, 2, 3}), Clause::from_dimacs({-1, 2, -3})});
  auto r2 = expansion_report(twins, {Rational(1, 2), 2});
  ASSERT_EQ(r2.rows.size(), 2u);
  EXPECT_EQ(r2.rows[1].min_vars, 3);
  EXPECT_EQ(r2.rows[1].threshold, Rational(3));
  EXPECT_TRUE(r2.rows[1].pass);
  EXPECT_TRUE(r2.rows[1].exact);

  auto r3 = expansion_report(twins, {Rational(1, 4), 2});
  EXPECT_FALSE(r3.rows[1].pass);
  EXPECT_EQ(r3.rows[1].witness, (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(expansion_report(twins, {Rational(0), 1}), InvalidArgument);
  EXPECT_THROW(expansion_report(twins, {Rational(1, 2), 3}), InvalidArgument);
}

TEST(Expansion, ExactAgreesWithCoveringSample) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto f = sample_f({10, 12, 3, seed});
    ExpansionOptions ex{Rational(1, 2), 2, SampleMode::Exact};
    ExpansionOptions sm{Rational(1, 2), 2, SampleMode::Sampled, 0, 20'000, seed};
    auto a = expansion_report(f, ex), b = expansion_report(f, sm);
    for (int s = 0; s < 2; ++s) {
      EXPECT_TRUE(a.rows[s].exact);
      EXPECT_FALSE(b.rows[s].exact);
      EXPECT_EQ(a.rows[s].min_vars, b.rows[s].min_vars);
    }
  }
}

TEST(Expansion, DefaultRegimeAndDeterminism) {
  auto f = sample_f({200, 300, 3, 4});
  auto r = expansion_report(f, {Rational(1, 2), std::nullopt, SampleMode::Auto, 20'000'000, 1000, 8});
  EXPECT_EQ(r.regime_s_max, int(std::floor(300 / (std::exp(1.0) * 9))));
  EXPECT_EQ(r.s_max, r.regime_s_max);
  auto again = expansion_report(f, {Rational(1, 2), std::nullopt, SampleMode::Auto, 20'000'000, 1000, 8});
  ASSERT_EQ(r.rows.size(), again.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].min_vars, again.rows[i].min_vars);
    EXPECT_EQ(r.rows[i].witness, again.rows[i].witness);
  }
}

TEST(Profiles, Examples) {
  auto contra = CnfFormula(1, {Clause::from_dimacs({1}), Clause::from_dimacs({-1})});
  auto a = profile_distinctness(contra);
  EXPECT_TRUE(a.exact);
  EXPECT_TRUE(a.distinct);
  EXPECT_EQ(a.rows, 2u);

  auto b = profile_distinctness(CnfFormula(2, {Clause::from_dimacs({1, 2})}));
  EXPECT_FALSE(b.distinct);
  EXPECT_EQ(b.collisions, 2u);
  ASSERT_TRUE(b.witness);

  auto s = profile_distinctness(CnfFormula(2, {Clause::from_dimacs({1, 2})}), {SampleMode::Sampled, 20, 200, 1});
  EXPECT_FALSE(s.exact);
  EXPECT_EQ(s.pairs, 200u);
  EXPECT_GT(s.collisions, 0u);
  EXPECT_THROW(profile_distinctness(sample_f({3, 30, 2, 1}), {SampleMode::Exact}), CapExceeded);
}

TEST(Profiles, YSideAgreesWithRejectingInjectivity) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    int n = 6 + seed % 7;
    auto f = sample_f({int(2 + seed % 3 * n), n, 3, seed});
    auto part = VariablePartition::alternating(n);
    auto g = build_constraint_graph(f, part);
    EXPECT_EQ(side_profile_distinctness(f, part, Side::Y).distinct, rejecting_map_injective(g, f, part))
        << "seed " << seed;
  }
}

TEST(Heavy, EntropyAndBound) {
  EXPECT_NEAR(binary_entropy(0.25), 0.8113, 1e-4);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_NEAR(heavy_bound(2048, 16, Rational(1, 4)), 2048 * std::pow(2.0, -(1 - binary_entropy(0.25)) * 16 + 1), 1e-9);
  for (int d = 1; d < 40; ++d)
    for (auto eps : {Rational(1, 8), Rational(1, 4), Rational(2, 5)})
      EXPECT_GT(heavy_bound(1000, d, eps), heavy_bound(1000, d + 1, eps));
}

TEST(Heavy, ClassificationExamples) {
  auto c = Clause::from_dimacs({1, 2, 3, 4});
  VariablePartition half(4, {1, 2}, {3, 4});
  EXPECT_FALSE(is_heavy(c, half, Side::X, 4, Rational(1, 4)));
  EXPECT_FALSE(is_heavy(c, half, Side::Y, 4, Rational(1, 4)));
  VariablePartition all(4, {1, 2, 3, 4}, {});
  EXPECT_TRUE(is_heavy(c, all, Side::X, 4, Rational(1, 4)));
  VariablePartition three(4, {1, 2, 3}, {4});
  EXPECT_FALSE(is_heavy(c, three, Side::X, 4, Rational(1, 4)));  // 3 is not > 3
}

TEST(Heavy, CountsMatchIndependentRecount) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto f = sample_f({150, 40, 8, seed});
    auto part = parse_partition(seed % 2 ? "alternating" : "x:1-25", 40);
    const Rational eps(1, 4);
    auto counts = count_heavy(f, part, eps);
    std::uint64_t zx = 0, zy = 0;
    std::vector<std::uint64_t> incx(41, 0), incy(41, 0);
    for (const auto& c : f.clauses()) {
      int nx = 0;
      for (const auto& l : c.literals) nx += part.side_of(l.var) == Side::X;
      int ny = c.width() - nx;
      // heavy: more than (3/4) * 8 = 6 variables on the side
      if (nx > 6) {
        ++zx;
        for (const auto& l : c.literals) ++incx[l.var];
      }
      if (ny > 6) {
        ++zy;
        for (const auto& l : c.literals) ++incy[l.var];
      }
    }
    EXPECT_EQ(counts.z_x, zx);
    EXPECT_EQ(counts.z_y, zy);
    EXPECT_EQ(counts.w_x, *std::max_element(incx.begin(), incx.end()));
    EXPECT_EQ(counts.w_y, *std::max_element(incy.begin(), incy.end()));
  }
}

TEST(Heavy, PartitionSearchIsDeterministicAndConsistent) {
  auto f = sample_f({600, 60, 10, 2});
  PartitionOptions opts;
  opts.seed = 5;
  opts.max_trials = 50;
  auto a = heavy_partition_search(f, opts), b = heavy_partition_search(f, opts);
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(a.trials, b.trials);
  auto recount = count_heavy(f, a.partition, opts.epsilon);
  EXPECT_EQ(recount.z_x, a.counts.z_x);
  EXPECT_EQ(recount.z_y, a.counts.z_y);
  EXPECT_DOUBLE_EQ(a.m_prime, heavy_bound(600, 10, opts.epsilon));
  EXPECT_NEAR(a.balance_slack, 2 * std::sqrt(60 * std::log(60.0)), 1e-9);
  if (a.accepted) {
    EXPECT_LE(double(a.counts.z_x), a.m_prime);
    EXPECT_LE(double(a.counts.z_y), a.m_prime);
    EXPECT_LE(double(a.counts.w_max()), a.w_bound);
    EXPECT_LE(std::abs(a.partition.n1() - 30), a.balance_slack);
  }
}

TEST(HeavySat, Fractions) {
  VariablePartition part(8, {1, 2, 3, 4, 5, 6}, {7, 8});
  const Rational eps(1, 4);
  CnfFormula none(8, {Clause::from_dimacs({1, 7, 8})});
  auto r0 = heavy_sat_fraction(none, part, Side::X, {eps});
  EXPECT_EQ(r0.heavy_clauses, 0u);
  EXPECT_EQ(r0.fraction, 1.0);

  CnfFormula one(8, {Clause::from_dimacs({1, -2, 3})});
  auto r1 = heavy_sat_fraction(one, part, Side::X, {eps});
  EXPECT_EQ(r1.heavy_clauses, 1u);
  EXPECT_TRUE(r1.exact);
  EXPECT_DOUBLE_EQ(r1.fraction, 1 - 1.0 / 8);

  CnfFormula two(8, {Clause::from_dimacs({1, -2, 3}), Clause::from_dimacs({-4, 5, 6})});
  auto r2 = heavy_sat_fraction(two, part, Side::X, {eps});
  EXPECT_DOUBLE_EQ(r2.fraction, (1 - 1.0 / 8) * (1 - 1.0 / 8));

  HeavySatOptions sampled{eps, SampleMode::Sampled, 20, 40'000, 3};
  auto r3 = heavy_sat_fraction(two, part, Side::X, sampled);
  EXPECT_FALSE(r3.exact);
  EXPECT_NEAR(r3.fraction, 49.0 / 64, 0.01);
}
