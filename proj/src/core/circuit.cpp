#include "pcw/circuit.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "pcw/error.hpp"
#include "text_util.hpp"

namespace pcw {

std::size_t GateHash::operator()(const Gate& g) const {
  std::size_t h = static_cast<std::size_t>(g.kind);
  auto mix = [&h](std::uint64_t v) { h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  mix(g.constraint);
  mix(g.alpha);
  mix(static_cast<std::uint64_t>(g.alpha_width));
  mix(g.a);
  mix(g.b);
  return h;
}

MonotoneCircuit::MonotoneCircuit(std::vector<Gate> gates, std::size_t output)
    : gates_(std::move(gates)), output_(output) {
  if (gates_.empty()) throw InvalidArgument("circuit without gates");
  if (output_ >= gates_.size()) throw InvalidArgument("output gate out of range");
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    switch (g.kind) {
      case GateKind::And:
      case GateKind::Or:
        if (g.a >= i || g.b >= i)
          throw InvalidArgument("gate " + std::to_string(i + 1) + " reads a gate that is not earlier");
        break;
      case GateKind::Input:
        if (g.alpha_width < 0 || g.alpha_width > 62 || (g.alpha >> g.alpha_width) != 0)
          throw InvalidArgument("gate " + std::to_string(i + 1) + " has a malformed alpha");
        break;
      default:
        break;
    }
  }
}

void MonotoneCircuit::check_layout(const ConstraintGraph& g) const {
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& gate = gates_[i];
    if (gate.kind != GateKind::Input) continue;
    if (gate.constraint >= g.num_constraints())
      throw InvalidArgument("gate " + std::to_string(i + 1) + " reads constraint " +
                            std::to_string(gate.constraint + 1) + " of " + std::to_string(g.num_constraints()));
    if (static_cast<std::size_t>(gate.alpha_width) != g.vars(gate.constraint).size())
      throw InvalidArgument("gate " + std::to_string(i + 1) + " alpha width differs from constraint arity");
  }
}

std::size_t CircuitBuilder::add(const Gate& g) {
  auto it = index_.find(g);
  if (it != index_.end()) return it->second;
  if ((g.kind == GateKind::And || g.kind == GateKind::Or) && (g.a >= gates_.size() || g.b >= gates_.size()))
    throw InvalidArgument("gate reads an unbuilt gate");
  gates_.push_back(g);
  index_.emplace(g, gates_.size() - 1);
  return gates_.size() - 1;
}

// ---------------------------------------------------------------------------
// Text format

std::string to_text(const MonotoneCircuit& c) {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gate(i);
    os << 'g' << i + 1 << " = ";
    switch (g.kind) {
      case GateKind::Input:
        os << "in " << g.constraint + 1 << ' ';
        if (g.alpha_width == 0) os << '-';
        for (int b = g.alpha_width - 1; b >= 0; --b) os << ((g.alpha >> b) & 1U);
        break;
      case GateKind::Const0: os << "const0"; break;
      case GateKind::Const1: os << "const1"; break;
      case GateKind::And: os << "and g" << g.a + 1 << " g" << g.b + 1; break;
      case GateKind::Or: os << "or g" << g.a + 1 << " g" << g.b + 1; break;
    }
    os << '\n';
  }
  os << "output g" << c.output() + 1 << '\n';
  return os.str();
}

namespace {

std::size_t parse_index(std::string_view s, int line, bool gate_ref) {
  if (gate_ref) {
    if (s.empty() || s[0] != 'g') throw ParseError("expected gate reference g<i>, got '" + std::string(s) + "'", line);
    s.remove_prefix(1);
  }
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v == 0)
    throw ParseError("invalid index '" + std::string(s) + "'", line);
  return v - 1;
}

}  // namespace

MonotoneCircuit parse_circuit(std::string_view text) {
  std::vector<Gate> gates;
  std::optional<std::size_t> output;
  int last_line = 0;
  detail::for_each_content_line(text, [&](int ln, std::string_view line) {
    last_line = ln;
    auto t = detail::split_ws(line);
    if (output) throw ParseError("content after the output line", ln);
    if (t[0] == "output") {
      if (t.size() != 2) throw ParseError("expected 'output g<i>'", ln);
      output = parse_index(t[1], ln, true);
      if (*output >= gates.size()) throw ParseError("output refers to an undefined gate", ln);
      return;
    }
    if (t.size() < 3 || t[1] != "=") throw ParseError("expected 'g<i> = ...'", ln);
    if (parse_index(t[0], ln, true) != gates.size())
      throw ParseError("gates must be numbered g1, g2, ... in order", ln);
    const auto kind = t[2];
    auto arity = [&](std::size_t n) {
      if (t.size() != 3 + n) throw ParseError("wrong operand count for '" + std::string(kind) + "'", ln);
    };
    if (kind == "const0" || kind == "const1") {
      arity(0);
      gates.push_back(Gate::constant(kind == "const1"));
    } else if (kind == "and" || kind == "or") {
      arity(2);
      std::size_t a = parse_index(t[3], ln, true), b = parse_index(t[4], ln, true);
      if (a >= gates.size() || b >= gates.size()) throw ParseError("operand must be an earlier gate", ln);
      gates.push_back(kind == "and" ? Gate::and_of(a, b) : Gate::or_of(a, b));
    } else if (kind == "in") {
      arity(2);
      std::size_t constraint = parse_index(t[3], ln, false);
      std::string_view bits = t[4] == "-" ? std::string_view{} : t[4];
      if (bits.size() > 62) throw ParseError("alpha too wide", ln);
      std::uint64_t alpha = 0;
      for (char ch : bits) {
        if (ch != '0' && ch != '1') throw ParseError("alpha must be 0/1 characters or '-'", ln);
        alpha = (alpha << 1) | static_cast<std::uint64_t>(ch == '1');
      }
      gates.push_back(Gate::input(constraint, alpha, static_cast<int>(bits.size())));
    } else {
      throw ParseError("unknown gate kind '" + std::string(kind) + "'", ln);
    }
  });
  if (!output) throw ParseError("missing 'output g<i>' line", last_line + 1);
  return MonotoneCircuit(std::move(gates), *output);
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<bool> eval_gates(const MonotoneCircuit& c, const ConstraintGraph& g, const CspSatInstance& inst) {
  if (inst.bits.size() != g.num_bits()) throw InvalidArgument("instance length differs from the graph layout");
  std::vector<bool> v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& gate = c.gate(i);
    switch (gate.kind) {
      case GateKind::Input:
        if (gate.constraint >= g.num_constraints() ||
            static_cast<std::size_t>(gate.alpha_width) != g.vars(gate.constraint).size())
          throw InvalidArgument("input gate g" + std::to_string(i + 1) + " does not match its constraint's arity");
        v[i] = inst.bits[g.position(gate.constraint, gate.alpha)];
        break;
      case GateKind::Const0: v[i] = false; break;
      case GateKind::Const1: v[i] = true; break;
      case GateKind::And: v[i] = v[gate.a] && v[gate.b]; break;
      case GateKind::Or: v[i] = v[gate.a] || v[gate.b]; break;
    }
  }
  return v;
}

bool eval_circuit(const MonotoneCircuit& c, const ConstraintGraph& g, const CspSatInstance& inst) {
  return eval_gates(c, g, inst)[c.output()];
}

// ---------------------------------------------------------------------------
// CC refutations

int CcRefutation::k() const {
  int k = 0;
  for (const auto& l : lines) k = std::max(k, l.protocol.depth());
  return k;
}

CcRefutation cc_refutation_from_resolution(const ResolutionRefutation& r, const CnfFormula& f,
                                           const VariablePartition& part) {
  if (r.lines.empty() || r.lines.back().clause.width() != 0)
    throw PreconditionError("resolution refutation must end with the empty clause");
  CcRefutation cc;
  cc.lines.reserve(r.length());
  for (std::size_t i = 0; i < r.length(); ++i) {
    const auto& rl = r.lines[i];
    RefutationLine line;
    line.line = SemanticLine::from_clause(rl.clause, part);
    line.protocol = i + 1 == r.length() ? ProtocolTree::constant(false) : clause_protocol(rl.clause, part);
    line.why = rl.axiom ? Derivation::from_axiom(*rl.axiom) : Derivation::from(rl.left, rl.right);
    cc.lines.push_back(std::move(line));
  }
  if (auto why = check_cc_refutation(cc, f, part); !why.empty()) throw PreconditionError(why);
  return cc;
}

CcRefutation cc_refutation_from_cp(const CpProof& p, const CnfFormula& f, const VariablePartition& part,
                                   std::int64_t weight_bound, const ProtocolCaps& caps) {
  CpCheckReport rep = check_cp_proof(p);
  if (!rep.refutation) throw PreconditionError("cutting planes proof is not a valid refutation");
  std::vector<ProtocolTree> protos = cp_lines_to_protocols(p, part, weight_bound, caps);

  const std::size_t m = f.num_clauses();
  CcRefutation cc;
  for (std::size_t i = 0; i < m; ++i)
    cc.lines.push_back({SemanticLine::from_clause(f.clause(i), part), clause_protocol(f.clause(i), part),
                        Derivation::from_axiom(i)});
  const std::size_t last = *rep.refutation_line;
  for (std::size_t j = 0; j <= last; ++j) {
    const ProofLine& pl = p.lines[j];
    Derivation why = std::visit(
        [m](const auto& rule) -> Derivation {
          using T = std::decay_t<decltype(rule)>;
          if constexpr (std::is_same_v<T, Hypothesis>) return Derivation::from(rule.row, rule.row);
          else if constexpr (std::is_same_v<T, BooleanAxiom>) return Derivation::from(0, 0);
          else if constexpr (std::is_same_v<T, AddRule>) return Derivation::from(m + rule.first, m + rule.second);
          else return Derivation::from(m + rule.premise, m + rule.premise);
        },
        pl.why);
    if (j == last) {
      cc.lines.push_back({SemanticLine(part.n1(), part.n2()), ProtocolTree::constant(false), why});
    } else {
      cc.lines.push_back({SemanticLine::from_inequality(pl.ineq, part), protos[j], why});
    }
  }
  if (auto why = check_cc_refutation(cc, f, part); !why.empty()) throw PreconditionError(why);
  return cc;
}

std::string check_cc_refutation(const CcRefutation& r, const CnfFormula& f, const VariablePartition& part) {
  const std::size_t m = f.num_clauses();
  if (f.num_vars() != part.num_vars()) return "formula and partition differ in variable count";
  if (r.length() <= m) return "refutation has no derived lines";
  auto at = [](std::size_t i) { return "line " + std::to_string(i + 1) + ": "; };
  for (std::size_t i = 0; i < r.length(); ++i) {
    const RefutationLine& l = r.lines[i];
    if (l.line.n1() != part.n1() || l.line.n2() != part.n2()) return at(i) + "table dimensions differ from partition";
    if (i < m) {
      if (!l.why.axiom || *l.why.axiom != i) return at(i) + "the first m lines must be the clauses in order";
      if (!(l.line == SemanticLine::from_clause(f.clause(i), part))) return at(i) + "table differs from its clause";
    } else {
      if (l.why.axiom) return at(i) + "axiom outside the clause prefix";
      if (l.why.first >= i || l.why.second >= i) return at(i) + "premise is not an earlier line";
      if (!check_semantic_step(r.lines[l.why.first].line, r.lines[l.why.second].line, l.line))
        return at(i) + "not entailed by lines " + std::to_string(l.why.first + 1) + " and " +
               std::to_string(l.why.second + 1);
    }
    if (!protocol_computes(l.protocol, l.line)) return at(i) + "protocol does not compute the line";
  }
  if (!r.lines.back().line.is_constant(false)) return "last line is not constant 0";
  if (r.lines.back().protocol.depth() != 0) return "last line must carry the depth-0 protocol";
  return {};
}

// ---------------------------------------------------------------------------
// Compiler

namespace {

// Rectangles of every node of a protocol tree, heap order (address - 1).
std::vector<Rectangle> all_rectangles(const ProtocolTree& t, int n1, int n2) {
  const std::size_t nodes = (std::size_t{2} << t.depth()) - 1;
  std::vector<Rectangle> rect(nodes);
  rect[0] = Rectangle::full(n1, n2);
  for (std::size_t addr = 1; addr < (std::size_t{1} << t.depth()); ++addr) {
    const int len = std::bit_width(addr) - 1;
    const ProtocolNode& node = t.node(History(addr ^ (std::size_t{1} << len), len));
    const Rectangle& parent = rect[addr - 1];
    for (int b = 0; b < 2; ++b) {
      Rectangle child = parent;
      Bits& set = node.owner == Player::Alice ? child.xset : child.yset;
      for (auto c = set.find_first(); c != Bits::npos; c = set.find_next(c))
        if (node.predicate(c) != (b == 1)) set.reset(c);
      rect[2 * addr + b - 1] = std::move(child);
    }
  }
  return rect;
}

struct LineState {
  std::vector<Rectangle> rect;
  std::vector<bool> good;                 // per leaf
  std::vector<std::size_t> gate;          // per good leaf
  int depth = 0;

  const Rectangle& node_rect(const History& h) const { return rect[((std::size_t{1} << h.length()) | h.bits()) - 1]; }
  const Rectangle& leaf_rect(std::uint64_t leaf) const { return rect[((std::size_t{1} << depth) | leaf) - 1]; }
};

}  // namespace

CompileResult compile_cc_refutation(const CcRefutation& r, const CnfFormula& f, const VariablePartition& part,
                                    const CompileOptions& opts) {
  if (part.n1() > opts.caps.max_side_vars || part.n2() > opts.caps.max_side_vars)
    throw CapExceeded("compiler materialises rectangles; needs n1, n2 <= " + std::to_string(opts.caps.max_side_vars));
  for (std::size_t i = 0; i < r.length(); ++i)
    if (r.lines[i].protocol.depth() > opts.caps.max_depth)
      throw CapExceeded("line " + std::to_string(i + 1) + " protocol depth exceeds cap");
  if (auto why = check_cc_refutation(r, f, part); !why.empty()) throw PreconditionError(why);

  const ConstraintGraph g = build_constraint_graph(f, part);
  const int n1 = part.n1(), n2 = part.n2();
  CircuitBuilder cb;
  CompileResult out;
  std::vector<LineState> st(r.length());

  // A leaf whose rectangle misses one side is handled by a constant: with no
  // x to accept, Const0 is correct on every y; with no y, Const1 on every x.
  auto degenerate = [&](const Rectangle& t) -> std::optional<std::size_t> {
    if (t.xset.none()) return cb.constant(false);
    if (t.yset.none()) return cb.constant(true);
    return std::nullopt;
  };

  for (std::size_t li = 0; li < r.length(); ++li) {
    const RefutationLine& L = r.lines[li];
    LineState& s = st[li];
    s.depth = L.protocol.depth();
    s.rect = all_rectangles(L.protocol, n1, n2);
    const std::size_t leaves = std::size_t{1} << s.depth;
    s.good.assign(leaves, false);
    s.gate.assign(leaves, 0);
    for (std::uint64_t h = 0; h < leaves; ++h) s.good[h] = is_zero_monochromatic(s.leaf_rect(h), L.line);

    for (std::uint64_t h = 0; h < leaves; ++h) {
      if (!s.good[h]) continue;
      const History hist(h, s.depth);
      const Rectangle& rh = s.leaf_rect(h);
      std::size_t gate;
      if (L.why.axiom) {
        const std::size_t i = *L.why.axiom;
        if (auto d = degenerate(rh)) {
          gate = *d;
        } else {
          // Every x here falsifies the X-part of C_i, every y its Y-part.
          gate = cb.input(i, falsifying_alpha(g, i, f.clause(i)), static_cast<int>(g.vars(i).size()));
        }
      } else {
        const LineState& s1 = st[L.why.first];
        const LineState& s2 = st[L.why.second];
        const ProtocolTree& p1 = r.lines[L.why.first].protocol;
        const ProtocolTree& p2 = r.lines[L.why.second].protocol;
        const int k1 = s1.depth, k2 = s2.depth;

        std::function<std::size_t(const History&)> build = [&](const History& p) -> std::size_t {
          std::size_t result;
          if (p.length() == k1 + k2) {
            const std::uint64_t h1 = p.bits() >> k2;
            const std::uint64_t h2 = p.bits() & ((std::uint64_t{1} << k2) - 1);
            if (s1.good[h1]) {
              result = s1.gate[h1];
            } else if (s2.good[h2]) {
              result = s2.gate[h2];
            } else {
              Rectangle t = rh & s1.leaf_rect(h1) & s2.leaf_rect(h2);
              auto d = degenerate(t);
              if (!d)
                throw PreconditionError("line " + std::to_string(li + 1) + ", history " + hist.to_string() +
                                        ": neither premise is 0 on stacked leaf " + p.to_string() +
                                        " (unsound step)");
              result = *d;
            }
          } else {
            const ProtocolNode& node =
                p.length() < k1 ? p1.node(p) : p2.node(History(p.bits() & ((std::uint64_t{1} << (p.length() - k1)) - 1),
                                                               p.length() - k1));
            const std::size_t a = build(p.child(false));
            const std::size_t b = build(p.child(true));
            result = node.owner == Player::Alice ? cb.or_of(a, b) : cb.and_of(a, b);
          }
          if (opts.record_stacked) out.stacked.push_back({li, hist, p, result});
          return result;
        };
        gate = build(History());
      }
      s.gate[h] = gate;
      out.line_circuits.push_back({li, hist, gate});
    }
  }

  const LineState& last = st.back();
  out.circuit = cb.build(last.gate[0]);
  out.length = r.length();
  out.k = r.k();
  const double l = static_cast<double>(out.length);
  out.nominal_bound = std::ldexp(l, out.k);
  out.conservative_bound = std::ldexp(l, 3 * out.k);
  return out;
}

// ---------------------------------------------------------------------------
// Claim diagnostics

namespace {

struct GateTables {
  std::vector<std::vector<bool>> on_u;  // [x][gate]
  std::vector<std::vector<bool>> on_v;  // [y][gate]
};

GateTables tabulate(const MonotoneCircuit& c, const CnfFormula& f, const VariablePartition& part) {
  const ConstraintGraph g = build_constraint_graph(f, part);
  GateTables t;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << part.n1()); ++x)
    t.on_u.push_back(eval_gates(c, g, accepting_instance(g, part, x)));
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << part.n2()); ++y)
    t.on_v.push_back(eval_gates(c, g, rejecting_instance(g, f, part, y)));
  return t;
}

bool correct_on(const GateTables& t, std::size_t gate, const Rectangle& r) {
  for (auto x = r.xset.find_first(); x != Bits::npos; x = r.xset.find_next(x))
    if (!t.on_u[x][gate]) return false;
  for (auto y = r.yset.find_first(); y != Bits::npos; y = r.yset.find_next(y))
    if (t.on_v[y][gate]) return false;
  return true;
}

void tally(ClaimCheck& cc, const GateTables& t, std::size_t gate, const Rectangle& r, std::size_t index) {
  if (r.empty()) return;
  ++cc.checked;
  if (!correct_on(t, gate, r)) {
    ++cc.violations;
    if (!cc.first_violation) cc.first_violation = index;
  }
}

void require_side_caps(const VariablePartition& part, const ProtocolCaps& caps) {
  if (part.n1() > caps.max_side_vars || part.n2() > caps.max_side_vars)
    throw CapExceeded("claim check enumerates rectangles; needs n1, n2 <= " + std::to_string(caps.max_side_vars));
}

}  // namespace

ClaimCheck check_line_circuits(const CompileResult& res, const CcRefutation& r, const CnfFormula& f,
                               const VariablePartition& part, const ProtocolCaps& caps) {
  require_side_caps(part, caps);
  const GateTables t = tabulate(res.circuit, f, part);
  ClaimCheck cc;
  for (std::size_t i = 0; i < res.line_circuits.size(); ++i) {
    const auto& lc = res.line_circuits[i];
    tally(cc, t, lc.gate, materialize_rectangle(r.lines.at(lc.line).protocol, lc.history, part, caps), i);
  }
  return cc;
}

ClaimCheck check_stacked_nodes(const CompileResult& res, const CcRefutation& r, const CnfFormula& f,
                               const VariablePartition& part, const ProtocolCaps& caps) {
  require_side_caps(part, caps);
  const GateTables t = tabulate(res.circuit, f, part);
  ClaimCheck cc;
  for (std::size_t i = 0; i < res.stacked.size(); ++i) {
    const auto& s = res.stacked[i];
    const RefutationLine& L = r.lines.at(s.line);
    const ProtocolTree& p1 = r.lines.at(L.why.first).protocol;
    const ProtocolTree& p2 = r.lines.at(L.why.second).protocol;
    const int l1 = std::min(s.prefix.length(), p1.depth());
    const History h1 = s.prefix.prefix(l1);
    const int l2 = s.prefix.length() - l1;
    const History h2(s.prefix.bits() & ((std::uint64_t{1} << l2) - 1), l2);
    const Rectangle region = materialize_rectangle(L.protocol, s.history, part, caps) &
                             materialize_rectangle(p1, h1, part, caps) & materialize_rectangle(p2, h2, part, caps);
    tally(cc, t, s.gate, region, i);
  }
  return cc;
}

// ---------------------------------------------------------------------------
// Separation

SeparationReport verify_separation(const MonotoneCircuit& c, const CnfFormula& f, const VariablePartition& part,
                                   const SeparationCaps& caps) {
  if (part.n1() > caps.max_side_vars || part.n2() > caps.max_side_vars)
    throw CapExceeded("separation check enumerates 2^n1 + 2^n2 instances; needs n1, n2 <= " +
                      std::to_string(caps.max_side_vars));
  const ConstraintGraph g = build_constraint_graph(f, part);
  c.check_layout(g);
  SeparationReport rep;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << part.n1()); ++x) {
    ++rep.accepting_checked;
    if (!eval_circuit(c, g, accepting_instance(g, part, x))) {
      rep.witness_x = x;
      return rep;
    }
  }
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << part.n2()); ++y) {
    ++rep.rejecting_checked;
    if (eval_circuit(c, g, rejecting_instance(g, f, part, y))) {
      rep.witness_y = y;
      return rep;
    }
  }
  rep.pass = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Extraction

ExtractedRefutation extract_cc2_refutation(const MonotoneCircuit& c, const CnfFormula& f,
                                           const VariablePartition& part, const ExtractOptions& opts) {
  const int n1 = part.n1(), n2 = part.n2();
  if (n1 > opts.caps.max_side_vars || n2 > opts.caps.max_side_vars)
    throw CapExceeded("extraction tabulates every gate; needs n1, n2 <= " + std::to_string(opts.caps.max_side_vars));
  const ConstraintGraph g = build_constraint_graph(f, part);
  c.check_layout(g);

  const std::uint64_t nx = std::uint64_t{1} << n1, ny = std::uint64_t{1} << n2;
  // accepts[i][x] = gate i on U(x); rejects[i][y] = gate i is 0 on V(y).
  std::vector<std::shared_ptr<Bits>> accepts(c.size()), rejects(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    accepts[i] = std::make_shared<Bits>(nx);
    rejects[i] = std::make_shared<Bits>(ny);
  }
  for (std::uint64_t x = 0; x < nx; ++x) {
    auto v = eval_gates(c, g, accepting_instance(g, part, x));
    for (std::size_t i = 0; i < c.size(); ++i) (*accepts[i])[x] = v[i];
  }
  for (std::uint64_t y = 0; y < ny; ++y) {
    auto v = eval_gates(c, g, rejecting_instance(g, f, part, y));
    for (std::size_t i = 0; i < c.size(); ++i) (*rejects[i])[y] = !v[i];
  }

  ExtractedRefutation ex;
  ex.separation = accepts[c.output()]->all() && rejects[c.output()]->all();
  if (!ex.separation && opts.require_separation)
    throw PreconditionError("circuit does not separate accepting from rejecting instances");

  ex.lines.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& gate = c.gate(i);
    SemanticLine line(n1, n2);
    std::optional<std::pair<std::size_t, std::uint64_t>> prov;
    bool entailed = true;
    switch (gate.kind) {
      case GateKind::Input: {
        // 0 iff x agrees with alpha on vars(j) and C_j(x, y) = 0.
        const Clause& cl = f.clause(gate.constraint);
        const SidePart xs = side_part(cl, part, Side::X), ys = side_part(cl, part, Side::Y);
        line = SemanticLine::from_function(n1, n2, [&](std::uint64_t x, std::uint64_t y) {
          return !(restrict_code(g, gate.constraint, part, x) == gate.alpha && xs.falsified_by(x) &&
                   ys.falsified_by(y));
        });
        prov = std::pair(gate.constraint, gate.alpha);
        const SemanticLine axiom = SemanticLine::from_clause(cl, part);
        entailed = check_semantic_step(axiom, axiom, line);
        break;
      }
      case GateKind::Const0:
      case GateKind::Const1:
        line = SemanticLine::constant(n1, n2, true);
        break;
      case GateKind::Or: {
        const Bits &A1 = *accepts[gate.a], &A2 = *accepts[gate.b], &B1 = *rejects[gate.a], &B2 = *rejects[gate.b];
        line = SemanticLine::from_function(n1, n2, [&](std::uint64_t x, std::uint64_t y) {
          return !((A1[x] || A2[x]) && B1[y] && B2[y]);
        });
        entailed = check_semantic_step(ex.lines[gate.a], ex.lines[gate.b], line);
        break;
      }
      case GateKind::And: {
        const Bits &A1 = *accepts[gate.a], &A2 = *accepts[gate.b], &B1 = *rejects[gate.a], &B2 = *rejects[gate.b];
        line = SemanticLine::from_function(n1, n2, [&](std::uint64_t x, std::uint64_t y) {
          return !(A1[x] && A2[x] && (B1[y] || B2[y]));
        });
        entailed = check_semantic_step(ex.lines[gate.a], ex.lines[gate.b], line);
        break;
      }
    }
    // Alice reports whether the gate accepts U(x), Bob whether it rejects V(y).
    auto a = accepts[i];
    auto b = rejects[i];
    ProtocolNode bob{Player::Bob, [b](std::uint64_t y) { return (*b)[y]; }};
    ProtocolTree proto(2, {{Player::Alice, [a](std::uint64_t x) { return (*a)[x]; }}, bob, bob},
                       {true, true, true, false});
    const bool computes = protocol_computes(proto, line);

    ex.protocols_compute = ex.protocols_compute && computes;
    if (gate.kind == GateKind::Input) ex.leaves_entailed = ex.leaves_entailed && entailed;
    if (gate.kind == GateKind::And || gate.kind == GateKind::Or)
      ex.internal_entailed = ex.internal_entailed && entailed;
    ex.entailed.push_back(entailed);
    ex.leaf_provenance.push_back(prov);
    ex.protocols.push_back(std::move(proto));
    ex.lines.push_back(std::move(line));
  }
  ex.root_constant_zero = ex.lines[c.output()].is_constant(false);
  return ex;
}

}  // namespace pcw
