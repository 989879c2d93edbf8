#pragma once

#include <cstdint>
#include <vector>

#include "pcw/circuit.hpp"
#include "pcw/cnf.hpp"
#include "pcw/random_lab.hpp"

namespace pcw::test {

// (x1 v y1)(x1 v -y1)(-x1 v y1)(-x1 v -y1) with x1 = var 1, y1 = var 2.
inline CnfFormula complete2() {
  return CnfFormula(2, {Clause::from_dimacs({1, 2}), Clause::from_dimacs({1, -2}), Clause::from_dimacs({-1, 2}),
                        Clause::from_dimacs({-1, -2})});
}
inline VariablePartition complete2_partition() { return VariablePartition(2, {1}, {2}); }

// Independent oracle: plain enumeration of all 2^n assignments.
inline bool exhaustive_sat(const CnfFormula& f) {
  const int n = f.num_vars();
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
    bool all = true;
    for (const auto& c : f.clauses()) {
      bool sat = false;
      for (const auto& l : c.literals) sat |= (((a >> (l.var - 1)) & 1U) != 0) != l.negated;
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// Seeded unsatisfiable F(m, n, d) samples: draw seeds from split_seed(master,
// "unsat-pool", k) until `count` unsatisfiable formulas are found.
inline std::vector<CnfFormula> unsat_samples(int m, int n, int d, std::size_t count, std::uint64_t master) {
  std::vector<CnfFormula> out;
  for (std::uint64_t k = 0; out.size() < count; ++k) {
    auto f = sample_f({m, n, d, split_seed(master, "unsat-pool", k)});
    if (!brute_force_sat(f)) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace pcw::test
