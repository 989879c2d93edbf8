#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "pcw/cnf.hpp"

namespace pcw {

using Rational = boost::rational<std::int64_t>;

// "p/q" or an integer.
Rational parse_rational(std::string_view s);

// Sub-seed for (purpose tag, index) under a master seed: a stable mix of the
// three, independent of platform and call order.
std::uint64_t split_seed(std::uint64_t master, std::string_view tag, std::uint64_t index = 0);

struct DistributionParams {
  int m = 1;
  int n = 1;  // variables per side for tensor samples
  int d = 1;
  std::uint64_t seed = 0;
};

// m clauses, each over d distinct uniform variables with independent fair
// signs, literals sorted by variable.
CnfFormula sample_f(const DistributionParams& p);

struct TensorSample {
  CnfFormula formula;
  VariablePartition partition;  // X = 1..n, Y = n+1..2n
};

// Clause i is C_i^1 (over X) OR C_i^2 (over Y), independent draws.
TensorSample sample_tensor(const DistributionParams& p);

struct UnsatRateReport {
  bool tensor = false;
  std::vector<std::uint64_t> seeds;
  std::vector<bool> unsat;
  std::size_t unsat_count = 0;
  double rate = 0;
};

// Sample k uses split_seed(p.seed, "sample", k).
UnsatRateReport unsat_rate(const DistributionParams& p, bool tensor, std::size_t samples,
                           const BruteForceOptions& opts = {});

enum class SampleMode { Auto, Exact, Sampled };

struct ExpansionOptions {
  Rational epsilon{1, 2};
  std::optional<int> s_max;  // default floor(n / (e d^2)), at least 1
  SampleMode mode = SampleMode::Auto;
  std::uint64_t exact_budget = 20'000'000;  // subsets per size in exact mode
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
};

struct ExpansionRow {
  int s = 0;
  int min_vars = 0;
  Rational threshold;  // (1 - eps) d s
  bool exact = true;
  std::uint64_t subsets = 0;  // enumerated or sampled
  std::vector<std::size_t> witness;  // a subset attaining min_vars (0-based clauses)
  bool pass = false;
};

struct ExpansionReport {
  Rational epsilon;
  int d = 0;
  int s_max = 0;
  int regime_s_max = 0;  // floor(n / (e d^2))
  std::vector<ExpansionRow> rows;
  bool pass = true;
};

// d is the formula's width. Size s uses split_seed(seed, "expansion", s).
ExpansionReport expansion_report(const CnfFormula& f, const ExpansionOptions& opts = {});

struct ProfileOptions {
  SampleMode mode = SampleMode::Auto;
  int exact_max_vars = 20;
  std::uint64_t pairs = 10'000;
  std::uint64_t seed = 0;
};

struct ProfileReport {
  bool exact = true;
  bool distinct = true;
  std::uint64_t rows = 0;        // exact: rows compared
  std::uint64_t pairs = 0;       // sampled: pairs compared
  std::uint64_t collisions = 0;  // exact: rows equal to an earlier row; sampled: equal pairs
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;  // two codes with equal profiles
};

// Profile of an assignment = the clauses it leaves unsatisfied. Codes put
// variable 1 in the most significant position.
ProfileReport profile_distinctness(const CnfFormula& f, const ProfileOptions& opts = {});

// Same over one side's assignments: clause i is in the profile of a side code
// when the code falsifies the clause's part on that side. On the Y side this
// is exactly the injectivity of y -> V(y).
ProfileReport side_profile_distinctness(const CnfFormula& f, const VariablePartition& part, Side side,
                                        const ProfileOptions& opts = {});

// Base-2 binary entropy.
double binary_entropy(double p);
// m * 2^{-(1 - H2(eps)) d + 1}
double heavy_bound(int m, int d, Rational epsilon);

// More than (1 - eps) d of the clause's variables lie on `side`.
bool is_heavy(const Clause& c, const VariablePartition& part, Side side, int d, Rational epsilon);

struct HeavyCounts {
  std::uint64_t z_x = 0, z_y = 0;
  std::uint64_t w_x = 0, w_y = 0;  // max over variables of heavy clauses containing it
  std::uint64_t w_max() const { return std::max(w_x, w_y); }
};
HeavyCounts count_heavy(const CnfFormula& f, const VariablePartition& part, Rational epsilon);

struct PartitionOptions {
  Rational epsilon{1, 4};
  std::uint64_t max_trials = 1000;
  std::uint64_t seed = 0;
  std::optional<double> balance_slack;  // default 2 sqrt(n ln n)
};

struct PartitionReport {
  Rational epsilon;
  VariablePartition partition;
  HeavyCounts counts;
  double m_prime = 0;
  double w_bound = 0;  // m' d / n
  double balance_slack = 0;
  bool accepted = false;
  std::uint64_t trials = 0;
};

// Fair-coin partitions, trial t from split_seed(seed, "partition", t); the
// first meeting all bounds is accepted, otherwise the one with the smallest
// max(z_x, z_y) is returned.
PartitionReport heavy_partition_search(const CnfFormula& f, const PartitionOptions& opts = {});

struct HeavySatOptions {
  Rational epsilon{1, 4};
  SampleMode mode = SampleMode::Auto;
  int exact_max_vars = 20;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
};

struct HeavySatReport {
  Side side = Side::X;
  std::uint64_t heavy_clauses = 0;
  bool exact = true;
  std::uint64_t assignments = 0;  // enumerated or sampled
  std::uint64_t satisfying = 0;
  double fraction = 1;
  // Local-lemma reference: q = n / (100 m' d), bound e^{-n/(50 d)}, and
  // whether q (1-q)^{|Gamma(E_i)|} >= Pr(E_i) holds for every heavy clause.
  double q = 0;
  std::uint64_t gamma_max = 0;
  bool lll_condition = false;
  double lll_bound = 0;
};

HeavySatReport heavy_sat_fraction(const CnfFormula& f, const VariablePartition& part, Side side,
                                  const HeavySatOptions& opts = {});

}  // namespace pcw
