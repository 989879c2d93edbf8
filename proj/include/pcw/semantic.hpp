#pragma once

#include <cstdint>

#include <boost/dynamic_bitset.hpp>

#include "pcw/cnf.hpp"

namespace pcw {

using Bits = boost::dynamic_bitset<std::uint64_t>;

// Largest joint input space a truth table may cover: 2^24 entries.
inline constexpr int kMaxJointVars = 24;

// A boolean function of the joint input (x, y), stored as a truth table over
// Alice's and Bob's side codes. Entry (x, y) lives at (x << n2) | y.
class SemanticLine {
 public:
  SemanticLine() = default;
  // The constant-0 function.
  SemanticLine(int n1, int n2);

  static SemanticLine constant(int n1, int n2, bool value);
  static SemanticLine from_clause(const Clause& c, const VariablePartition& part);
  static SemanticLine from_inequality(const LinearInequality& ineq, const VariablePartition& part);

  template <class F>
  static SemanticLine from_function(int n1, int n2, F&& f) {
    SemanticLine l(n1, n2);
    for (std::uint64_t x = 0; x < l.x_count(); ++x)
      for (std::uint64_t y = 0; y < l.y_count(); ++y)
        if (f(x, y)) l.set(x, y, true);
    return l;
  }

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::uint64_t x_count() const { return std::uint64_t{1} << n1_; }
  std::uint64_t y_count() const { return std::uint64_t{1} << n2_; }

  bool at(std::uint64_t x, std::uint64_t y) const { return table_[(x << n2_) | y]; }
  void set(std::uint64_t x, std::uint64_t y, bool v) { table_[(x << n2_) | y] = v; }

  bool is_constant(bool v) const { return v ? table_.all() : table_.none(); }
  const Bits& table() const { return table_; }

  friend bool operator==(const SemanticLine&, const SemanticLine&) = default;

 private:
  int n1_ = 0, n2_ = 0;
  Bits table_;
};

// f, g |= h: every joint input where f and g hold also satisfies h.
bool check_semantic_step(const SemanticLine& f, const SemanticLine& g, const SemanticLine& h);

}  // namespace pcw
