#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pcw/cnf.hpp"
#include "pcw/cp_proof.hpp"
#include "pcw/csp_sat.hpp"
#include "pcw/protocol.hpp"
#include "pcw/semantic.hpp"

namespace pcw {

enum class GateKind : std::uint8_t { Input, Const0, Const1, And, Or };

// Input gates read truth-table bit (constraint, alpha); And/Or read two
// earlier gates a and b. Indices are 0-based in memory.
struct Gate {
  GateKind kind = GateKind::Const0;
  std::size_t constraint = 0;
  std::uint64_t alpha = 0;
  int alpha_width = 0;
  std::size_t a = 0, b = 0;

  static Gate input(std::size_t constraint, std::uint64_t alpha, int width) {
    return {GateKind::Input, constraint, alpha, width, 0, 0};
  }
  static Gate constant(bool v) { return {v ? GateKind::Const1 : GateKind::Const0, 0, 0, 0, 0, 0}; }
  static Gate and_of(std::size_t a, std::size_t b) { return {GateKind::And, 0, 0, 0, a, b}; }
  static Gate or_of(std::size_t a, std::size_t b) { return {GateKind::Or, 0, 0, 0, a, b}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct GateHash {
  std::size_t operator()(const Gate& g) const;
};

// Topologically ordered gates: every And/Or refers to strictly earlier gates.
class MonotoneCircuit {
 public:
  MonotoneCircuit() : MonotoneCircuit({Gate::constant(false)}, 0) {}
  MonotoneCircuit(std::vector<Gate> gates, std::size_t output);

  std::size_t size() const { return gates_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(std::size_t i) const { return gates_.at(i); }
  std::size_t output() const { return output_; }

  // Throws InvalidArgument if an input gate does not address the layout.
  void check_layout(const ConstraintGraph& g) const;

  friend bool operator==(const MonotoneCircuit&, const MonotoneCircuit&) = default;

 private:
  std::vector<Gate> gates_;
  std::size_t output_ = 0;
};

// Appends gates, sharing structurally identical ones.
class CircuitBuilder {
 public:
  std::size_t add(const Gate& g);
  std::size_t input(std::size_t constraint, std::uint64_t alpha, int width) {
    return add(Gate::input(constraint, alpha, width));
  }
  std::size_t constant(bool v) { return add(Gate::constant(v)); }
  std::size_t and_of(std::size_t a, std::size_t b) { return add(Gate::and_of(a, b)); }
  std::size_t or_of(std::size_t a, std::size_t b) { return add(Gate::or_of(a, b)); }

  std::size_t size() const { return gates_.size(); }
  MonotoneCircuit build(std::size_t output) const { return MonotoneCircuit(gates_, output); }

 private:
  std::vector<Gate> gates_;
  std::unordered_map<Gate, std::size_t, GateHash> index_;
};

// Text format (1-based gate and constraint indices, '#' comments):
//   g<i> = in <constraint> <alpha bits, first variable first, or ->
//   g<i> = and g<j> g<k>  |  or g<j> g<k>  |  const0  |  const1
//   output g<i>
std::string to_text(const MonotoneCircuit& c);
MonotoneCircuit parse_circuit(std::string_view text);

// Value of every gate on one instance.
std::vector<bool> eval_gates(const MonotoneCircuit& c, const ConstraintGraph& g, const CspSatInstance& inst);
bool eval_circuit(const MonotoneCircuit& c, const ConstraintGraph& g, const CspSatInstance& inst);

// ---------------------------------------------------------------------------
// Semantic refutations with protocols (CC_k refutations).

struct Derivation {
  std::optional<std::size_t> axiom;  // clause index
  std::size_t first = 0, second = 0;

  static Derivation from_axiom(std::size_t i) { return {i, 0, 0}; }
  static Derivation from(std::size_t j, std::size_t k) { return {std::nullopt, j, k}; }
};

struct RefutationLine {
  SemanticLine line;
  ProtocolTree protocol;
  Derivation why;
};

struct CcRefutation {
  std::vector<RefutationLine> lines;

  std::size_t length() const { return lines.size(); }
  // Largest protocol depth.
  int k() const;
};

// Clause lines with their 2-bit protocols; the final empty clause gets the
// depth-0 constant protocol.
CcRefutation cc_refutation_from_resolution(const ResolutionRefutation& r, const CnfFormula& f,
                                           const VariablePartition& part);

// The m clause lines first, then one line per proof step up to the first
// 0 >= b line (which becomes constant 0 with a depth-0 protocol). Hypothesis
// steps derive from their clause line, boolean axioms from line 1 (they are
// constant 1), divisions from their single premise.
CcRefutation cc_refutation_from_cp(const CpProof& p, const CnfFormula& f, const VariablePartition& part,
                                   std::int64_t weight_bound, const ProtocolCaps& caps = {});

// Structural check of a CC refutation; empty string when it is one.
std::string check_cc_refutation(const CcRefutation& r, const CnfFormula& f, const VariablePartition& part);

// ---------------------------------------------------------------------------
// Compiler

struct CompiledLineCircuit {
  std::size_t line = 0;
  History history;
  std::size_t gate = 0;
};

// A node of the stacked tree built for (line, history): `prefix` is a prefix
// of h1 h2 of length <= k1 + k2.
struct StackedNodeRecord {
  std::size_t line = 0;
  History history;
  History prefix;
  std::size_t gate = 0;
};

struct CompileOptions {
  ProtocolCaps caps;
  bool record_stacked = false;
};

struct CompileResult {
  MonotoneCircuit circuit;
  std::vector<CompiledLineCircuit> line_circuits;
  std::vector<StackedNodeRecord> stacked;
  std::size_t length = 0;
  int k = 0;
  double nominal_bound = 0;       // 2^k * length
  double conservative_bound = 0;  // length * 2^{3k}
};

// Throws PreconditionError if `r` is not a CC refutation of f under part, or
// if a stacked leaf finds neither premise history usable on a nonempty
// rectangle.
CompileResult compile_cc_refutation(const CcRefutation& r, const CnfFormula& f, const VariablePartition& part,
                                    const CompileOptions& opts = {});

// Correctness of compiled subcircuits, checked by enumeration: a gate is
// correct on a rectangle A x B (both nonempty) when it accepts U(x) for all
// x in A and rejects V(y) for all y in B.
struct ClaimCheck {
  std::size_t checked = 0;  // nonempty regions examined
  std::size_t violations = 0;
  std::optional<std::size_t> first_violation;  // index into the checked records
};

// C^L_h on R_L(h), for every compiled (line, history).
ClaimCheck check_line_circuits(const CompileResult& res, const CcRefutation& r, const CnfFormula& f,
                               const VariablePartition& part, const ProtocolCaps& caps = {});
// Every recorded stacked node on R_L(h) & R_L1(h1 prefix) & R_L2(h2 prefix).
ClaimCheck check_stacked_nodes(const CompileResult& res, const CcRefutation& r, const CnfFormula& f,
                               const VariablePartition& part, const ProtocolCaps& caps = {});

// ---------------------------------------------------------------------------
// Separation and extraction

struct SeparationCaps {
  int max_side_vars = 20;
};

struct SeparationReport {
  bool pass = false;
  std::optional<std::uint64_t> witness_x;  // accepting input rejected by the circuit
  std::optional<std::uint64_t> witness_y;  // rejecting input accepted by the circuit
  std::uint64_t accepting_checked = 0;
  std::uint64_t rejecting_checked = 0;
};

// Circuit is 1 on U(x) for every x and 0 on V(y) for every y. Stops at the
// first counterexample (smallest code).
SeparationReport verify_separation(const MonotoneCircuit& c, const CnfFormula& f, const VariablePartition& part,
                                   const SeparationCaps& caps = {});

struct ExtractOptions {
  ProtocolCaps caps;
  // Refuse circuits that do not separate (the construction needs it).
  bool require_separation = true;
};

struct ExtractedRefutation {
  std::vector<SemanticLine> lines;     // one per gate, in gate order
  std::vector<ProtocolTree> protocols;  // 2-bit protocol per line
  std::vector<std::optional<std::pair<std::size_t, std::uint64_t>>> leaf_provenance;  // (clause, alpha)
  std::vector<bool> entailed;  // per line: by its clause (inputs), its children (And/Or), trivially (constants)
  bool separation = false;
  bool leaves_entailed = true;
  bool internal_entailed = true;
  bool protocols_compute = true;
  bool root_constant_zero = false;

  bool valid() const { return leaves_entailed && internal_entailed && protocols_compute && root_constant_zero; }
};

// Line of gate g is 0 at (x, y) exactly when g accepts U(x) and rejects V(y).
ExtractedRefutation extract_cc2_refutation(const MonotoneCircuit& c, const CnfFormula& f,
                                           const VariablePartition& part, const ExtractOptions& opts = {});

}  // namespace pcw
