#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pcw/cnf.hpp"
#include "pcw/error.hpp"
#include "pcw/inequality.hpp"
#include "pcw/protocol.hpp"
#include "pcw/semantic.hpp"

namespace pcw {

// Justifications. Line and row references are 0-based in memory and 1-based
// in the text format.
struct Hypothesis {
  std::size_t row = 0;
};

struct BooleanAxiom {
  enum class Kind { Lower, Upper };  // x_j >= 0  |  -x_j >= -1
  Var var = 0;
  Kind kind = Kind::Lower;
};

struct AddRule {
  std::size_t first = 0, second = 0;
};

struct DivRule {
  std::size_t premise = 0;
  std::int64_t divisor = 1;
};

using Justification = std::variant<Hypothesis, BooleanAxiom, AddRule, DivRule>;

struct ProofLine {
  LinearInequality ineq;
  Justification why;
};

struct CpProof {
  std::vector<LinearInequality> system;  // A z >= b
  std::vector<ProofLine> lines;

  std::size_t length() const { return lines.size(); }
  int num_vars() const;
};

// The encoded clauses of f as the input system.
std::vector<LinearInequality> system_of(const CnfFormula& f);

// Text format, one step per line:
//   <idx>: <c_1> ... <c_n> >= <b> ; hyp <i> | bool <var> lo|hi | add <j> <k> | div <j> <d>
// Blank lines and lines starting with '#' are skipped; idx must count 1, 2, ...
CpProof parse_cp_proof(std::string_view text, std::vector<LinearInequality> system);
std::string to_text(const CpProof& p);

struct LineVerdict {
  bool valid = false;
  std::string reason;  // empty when valid
};

struct CpCheckReport {
  std::vector<LineVerdict> lines;
  bool all_valid = true;
  // All lines valid and some line reads 0 >= b with b >= 1.
  bool refutation = false;
  std::optional<std::size_t> refutation_line;
  std::int64_t weight = 0;
};

CpCheckReport check_cp_proof(const CpProof& p);

// Max weight over system rows and proof lines.
std::int64_t proof_weight(const CpProof& p);
// n^3, the default low-weight bound.
std::int64_t default_weight_bound(int n);
inline bool is_low_weight(const CpProof& p, std::int64_t bound) { return proof_weight(p) <= bound; }

// One inequality protocol per line. Requires a valid proof within the weight
// bound; the protocol depth cap is enforced by inequality_protocol.
std::vector<ProtocolTree> cp_lines_to_protocols(const CpProof& p, const VariablePartition& part,
                                                std::int64_t weight_bound, const ProtocolCaps& caps = {});

// ---------------------------------------------------------------------------
// Resolution refutations from DPLL search.

struct ResolutionLine {
  Clause clause;
  std::optional<std::size_t> axiom;  // clause index for the first m lines
  std::size_t left = 0, right = 0;   // premises of a resolvent
  Var pivot = 0;                     // left contains pivot, right contains its negation
};

struct ResolutionRefutation {
  std::vector<ResolutionLine> lines;
  std::size_t length() const { return lines.size(); }
};

class SatisfiableFormula : public PreconditionError {
 public:
  explicit SatisfiableFormula(Assignment witness)
      : PreconditionError("formula is satisfiable"), witness_(std::move(witness)) {}
  const Assignment& witness() const { return witness_; }

 private:
  Assignment witness_;
};

struct ResolutionOptions {
  int max_vars = 24;
  // Branch on the highest-numbered free variable first (otherwise lowest).
  bool descending = true;
};

// Tree-like DPLL with unit propagation realised as branching on the unit's
// variable (falsifying value first). Lines start with all clauses of f in
// order; resolvents follow in post-order, deduplicated by content; the last
// line is the empty clause. Throws SatisfiableFormula with a witness.
ResolutionRefutation resolution_refutation_from_dpll(const CnfFormula& f, const ResolutionOptions& opts = {});

// Independent validity check: axioms match f, every resolvent clashes its
// premises on exactly its pivot, last line empty.
bool check_resolution_refutation(const ResolutionRefutation& r, const CnfFormula& f, std::string* why = nullptr);

}  // namespace pcw
