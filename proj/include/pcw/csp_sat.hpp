#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pcw/cnf.hpp"
#include "pcw/semantic.hpp"

namespace pcw {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Bipartite constraint topology: constraint i reads the variables vars(i)
// (ascending) over the alphabet {0, ..., sigma-1}. Truth tables are laid out
// block by block in constraint order; inside block i an assignment alpha to
// vars(i) sits at its base-sigma value, first variable most significant.
class ConstraintGraph {
 public:
  ConstraintGraph() = default;
  ConstraintGraph(std::vector<Var> variables, std::vector<std::vector<Var>> constraint_vars, int sigma = 2);

  std::size_t num_constraints() const { return vars_.size(); }
  const std::vector<Var>& variables() const { return variables_; }
  const std::vector<Var>& vars(std::size_t i) const { return vars_.at(i); }
  int sigma() const { return sigma_; }
  int degree() const;

  std::size_t block_size(std::size_t i) const { return offsets_.at(i + 1) - offsets_.at(i); }
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  // N = sum_i sigma^|vars(i)|
  std::size_t num_bits() const { return offsets_.back(); }

  std::size_t position(std::size_t constraint, std::uint64_t alpha) const;
  std::pair<std::size_t, std::uint64_t> locate(std::size_t pos) const;

  friend bool operator==(const ConstraintGraph&, const ConstraintGraph&) = default;

 private:
  std::vector<Var> variables_;
  std::vector<std::vector<Var>> vars_;
  int sigma_ = 2;
  std::vector<std::size_t> offsets_{0};
};

struct CspSatInstance {
  Bits bits;

  bool operator[](std::size_t pos) const { return bits[pos]; }
  friend bool operator==(const CspSatInstance&, const CspSatInstance&) = default;
};

// vars(i) = X-side variables of clause i; alphabet {0,1}.
ConstraintGraph build_constraint_graph(const CnfFormula& f, const VariablePartition& part);

// The alpha (over vars(i)) that x restricts to.
std::uint64_t restrict_code(const ConstraintGraph& g, std::size_t i, const VariablePartition& part, std::uint64_t x);
// The unique alpha falsifying the X-part of clause i.
std::uint64_t falsifying_alpha(const ConstraintGraph& g, std::size_t i, const Clause& c);

// U(x): one 1 per block, at x restricted to vars(i).
CspSatInstance accepting_instance(const ConstraintGraph& g, const VariablePartition& part, const Assignment& x);
CspSatInstance accepting_instance(const ConstraintGraph& g, const VariablePartition& part, std::uint64_t x);

// V(y): bit (i, alpha) is 0 iff clause i is falsified by alpha joined with y.
CspSatInstance rejecting_instance(const ConstraintGraph& g, const CnfFormula& f, const VariablePartition& part,
                                  const Assignment& y);
CspSatInstance rejecting_instance(const ConstraintGraph& g, const CnfFormula& f, const VariablePartition& part,
                                  std::uint64_t y);

struct CspEvalOptions {
  int max_vars = 20;
};

// Satisfiability of the CSP encoded by `inst`, by backtracking.
bool csp_sat_eval(const ConstraintGraph& g, const CspSatInstance& inst, const CspEvalOptions& opts = {});

enum class AbMode { Auto, Exact, Sampled };

struct AbOptions {
  AbMode mode = AbMode::Auto;
  std::uint64_t exact_budget = 50'000'000;  // index sets enumerated in exact mode
  std::uint64_t trials = 10'000;            // index sets drawn in sampled mode
  std::uint64_t seed = 0;
};

struct AbQuery {
  std::size_t r = 0;
  bool b = false;
  std::uint64_t value = 0;
  bool exact = true;  // false: a lower bound from sampling
  std::uint64_t trials = 0;
};

// A_b(r, U) = max over |I| = r of |{u in U : u_i = b for all i in I}|.
// Auto mode is exact for r <= 3 within budget, sampled otherwise.
AbQuery ab_count(const std::vector<CspSatInstance>& instances, std::size_t r, bool b, const AbOptions& opts = {});

// min{ (|U| - 2s A_1(1,U)) / ((2s)^{r+1} A_1(r,U)),  |V| / ((2r)^{s+1} A_0(s,V)) }, clamped at 0:
// the symmetric-approximation lower bound on monotone circuits separating U from V.
struct ApproximationInputs {
  BigInt u_size, v_size;
  BigInt a1_one, a1_r, a0_s;
  std::uint64_t r = 1, s = 1;
};
BigRational symmetric_approximation_bound(const ApproximationInputs& in);

// Injectivity diagnostics for the maps x -> U(x) and y -> V(y).
bool accepting_map_injective(const ConstraintGraph& g, const VariablePartition& part);
bool rejecting_map_injective(const ConstraintGraph& g, const CnfFormula& f, const VariablePartition& part);

// Instance text:
//   csp-sat <m> <n_xside> <sigma>
//   blocks <size_1> ... <size_m>
//   one line of 0/1 characters per block
std::string instance_to_text(const ConstraintGraph& g, const CspSatInstance& inst);

struct ParsedInstance {
  std::size_t num_constraints = 0;
  std::size_t n_xside = 0;
  int sigma = 2;
  std::vector<std::size_t> block_sizes;
  CspSatInstance instance;
};
ParsedInstance parse_instance(std::string_view text);

}  // namespace pcw
