#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcw/inequality.hpp"

namespace pcw {

// Variables are 1-based throughout, as in DIMACS.
using Var = int;

struct Literal {
  Var var = 0;
  bool negated = false;

  Literal operator~() const { return {var, !negated}; }
  int to_dimacs() const { return negated ? -var : var; }
  static Literal from_dimacs(int lit) { return {lit < 0 ? -lit : lit, lit < 0}; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

class Assignment;

struct Clause {
  std::vector<Literal> literals;

  Clause() = default;
  explicit Clause(std::vector<Literal> lits) : literals(std::move(lits)) {}
  static Clause from_dimacs(std::initializer_list<int> lits);

  int width() const { return static_cast<int>(literals.size()); }
  bool contains_var(Var v) const;
  std::string to_string() const;

  friend bool operator==(const Clause&, const Clause&) = default;
};

// Partial 0/1 assignment over the universe [n]; defined exactly on its scope.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int universe) : values_(static_cast<std::size_t>(universe) + 1, -1) {}

  // Total assignment from bits[0..n-1] for variables 1..n.
  static Assignment total(const std::vector<bool>& bits);

  int universe() const { return values_.empty() ? 0 : static_cast<int>(values_.size()) - 1; }
  void set(Var v, bool value);
  void unset(Var v);
  bool has(Var v) const { return v >= 1 && v <= universe() && values_[v] >= 0; }
  bool value(Var v) const;
  std::vector<Var> scope() const;
  std::size_t scope_size() const;

  // Union of two assignments with disjoint scopes over the same universe.
  static Assignment join(const Assignment& a, const Assignment& b);

  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::int8_t> values_;
};

class CnfFormula {
 public:
  CnfFormula() = default;
  // Validates literal ranges, distinct variables per clause and width >= 1.
  CnfFormula(int num_vars, std::vector<Clause> clauses);

  int num_vars() const { return n_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(std::size_t i) const { return clauses_.at(i); }
  int width() const;
  double density() const { return n_ == 0 ? 0.0 : double(clauses_.size()) / n_; }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  int n_ = 0;
  std::vector<Clause> clauses_;
};

enum class Side { X, Y };

// Split of [n] into Alice's (X) and Bob's (Y) variables, each kept ascending.
// A side assignment is also addressed by an integer code: the first variable
// of the side is the most significant bit, so numeric order is lexicographic.
// Codes exist only for sides of at most 63 variables.
class VariablePartition {
 public:
  VariablePartition() = default;
  VariablePartition(int n, std::vector<Var> xvars, std::vector<Var> yvars);

  // Odd-indexed variables to X, even to Y.
  static VariablePartition alternating(int n);

  int num_vars() const { return n_; }
  const std::vector<Var>& xvars() const { return xvars_; }
  const std::vector<Var>& yvars() const { return yvars_; }
  const std::vector<Var>& vars(Side s) const { return s == Side::X ? xvars_ : yvars_; }
  int n1() const { return static_cast<int>(xvars_.size()); }
  int n2() const { return static_cast<int>(yvars_.size()); }
  int size(Side s) const { return s == Side::X ? n1() : n2(); }

  Side side_of(Var v) const;
  // Bit position of v inside its side's code.
  int code_bit(Var v) const;

  std::uint64_t code(Side s, const Assignment& a) const;
  std::uint64_t x_code(const Assignment& a) const { return code(Side::X, a); }
  std::uint64_t y_code(const Assignment& a) const { return code(Side::Y, a); }
  Assignment decode(Side s, std::uint64_t code) const;

  // Throws InvalidArgument unless a's scope is exactly the side's variables.
  void require_scope(Side s, const Assignment& a) const;
  // Throws CapExceeded if the side is too large for 64-bit codes (> 63).
  void require_codes(Side s) const;

  std::string to_string() const;

  friend bool operator==(const VariablePartition&, const VariablePartition&) = default;

 private:
  int n_ = 0;
  std::vector<Var> xvars_, yvars_;
  std::vector<int> bit_;  // indexed by var
};

// The part of a clause living on one side, in that side's code space:
// the part is falsified by code c iff (c & mask) == falsifying.
struct SidePart {
  std::uint64_t mask = 0;
  std::uint64_t falsifying = 0;
  int width = 0;

  bool falsified_by(std::uint64_t code) const { return (code & mask) == falsifying; }
};

SidePart side_part(const Clause& c, const VariablePartition& part, Side s);

// DIMACS CNF. Comment lines start with 'c'; the clause count is checked
// strictly. Errors carry the offending line number.
CnfFormula parse_dimacs(std::string_view text);
CnfFormula read_dimacs_file(const std::string& path);
// Whole file as text; throws IoError.
std::string read_text_file(const std::string& path);

// "alternating", or "x:<list> [y:<list>]" where a list is comma-separated
// 1-based variables and a-b ranges; a missing side is the complement.
VariablePartition parse_partition(std::string_view spec, int n);
std::string to_dimacs(const CnfFormula& f);

bool eval_clause(const Clause& c, const Assignment& a);

// sum_{C+} z_i + sum_{C-} (1 - z_i) >= 1, normalised to coefficients in
// {-1, 0, 1} with constant 1 - |C-|.
LinearInequality clause_to_inequality(const Clause& c, int n);

struct BruteForceOptions {
  int max_vars = 24;
};

// Backtracking with unit propagation, lowest variable first, 0 before 1.
// Unconstrained variables of a satisfying assignment are set to 0.
std::optional<Assignment> brute_force_sat(const CnfFormula& f, const BruteForceOptions& opts = {});

// Smallest (0-based) index of a clause falsified by x joined with y.
std::size_t search_violation(const CnfFormula& f, const VariablePartition& p, const Assignment& x,
                             const Assignment& y);

}  // namespace pcw
