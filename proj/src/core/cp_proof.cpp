#include "pcw/cp_proof.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "text_util.hpp"

namespace pcw {

int CpProof::num_vars() const {
  if (!system.empty()) return system.front().num_vars();
  if (!lines.empty()) return lines.front().ineq.num_vars();
  return 0;
}

std::vector<LinearInequality> system_of(const CnfFormula& f) {
  std::vector<LinearInequality> rows;
  rows.reserve(f.num_clauses());
  for (const auto& c : f.clauses()) rows.push_back(clause_to_inequality(c, f.num_vars()));
  return rows;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

using detail::split_ws;

std::int64_t to_i64(std::string_view s, int line, const char* what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(std::string("invalid ") + what + " '" + std::string(s) + "'", line);
  return v;
}

std::size_t to_ref(std::string_view s, int line, const char* what) {
  std::int64_t v = to_i64(s, line, what);
  if (v < 1) throw ParseError(std::string(what) + " must be >= 1", line);
  return static_cast<std::size_t>(v - 1);
}

}  // namespace

CpProof parse_cp_proof(std::string_view text, std::vector<LinearInequality> system) {
  CpProof p;
  p.system = std::move(system);
  const int n = p.system.empty() ? -1 : p.system.front().num_vars();
  int expected_n = n;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;

    auto colon = line.find(':');
    auto semi = line.find(';');
    if (colon == std::string_view::npos || semi == std::string_view::npos || semi < colon)
      throw ParseError("expected '<idx>: <coeffs> >= <b> ; <justification>'", line_no);

    auto idx_toks = split_ws(line.substr(0, colon));
    if (idx_toks.size() != 1) throw ParseError("malformed line index", line_no);
    std::size_t idx = to_ref(idx_toks.front(), line_no, "line index");
    if (idx != p.lines.size())
      throw ParseError("line index " + std::to_string(idx + 1) + " out of sequence, expected " +
                           std::to_string(p.lines.size() + 1),
                       line_no);

    auto ineq_toks = split_ws(line.substr(colon + 1, semi - colon - 1));
    if (ineq_toks.size() < 2 || ineq_toks[ineq_toks.size() - 2] != ">=")
      throw ParseError("expected '<c_1> ... <c_n> >= <b>'", line_no);
    LinearInequality ineq;
    for (std::size_t i = 0; i + 2 < ineq_toks.size(); ++i) ineq.coeffs.push_back(to_i64(ineq_toks[i], line_no, "coefficient"));
    ineq.constant = to_i64(ineq_toks.back(), line_no, "constant");
    if (expected_n < 0) expected_n = ineq.num_vars();
    if (ineq.num_vars() != expected_n)
      throw ParseError("expected " + std::to_string(expected_n) + " coefficients, found " +
                           std::to_string(ineq.num_vars()),
                       line_no);

    auto j = split_ws(line.substr(semi + 1));
    if (j.empty()) throw ParseError("missing justification", line_no);
    Justification why;
    if (j[0] == "hyp" && j.size() == 2) {
      why = Hypothesis{to_ref(j[1], line_no, "row")};
    } else if (j[0] == "bool" && j.size() == 3 && (j[2] == "lo" || j[2] == "hi")) {
      auto v = to_i64(j[1], line_no, "variable");
      why = BooleanAxiom{static_cast<Var>(v), j[2] == "lo" ? BooleanAxiom::Kind::Lower : BooleanAxiom::Kind::Upper};
    } else if (j[0] == "add" && j.size() == 3) {
      why = AddRule{to_ref(j[1], line_no, "reference"), to_ref(j[2], line_no, "reference")};
    } else if (j[0] == "div" && j.size() == 3) {
      why = DivRule{to_ref(j[1], line_no, "reference"), to_i64(j[2], line_no, "divisor")};
    } else {
      throw ParseError("unknown justification '" + std::string(line.substr(semi + 1)) + "'", line_no);
    }
    p.lines.push_back({std::move(ineq), why});
  }
  return p;
}

std::string to_text(const CpProof& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& l = p.lines[i];
    os << i + 1 << ":";
    for (auto a : l.ineq.coeffs) os << ' ' << a;
    os << " >= " << l.ineq.constant << " ; ";
    std::visit(
        [&](const auto& j) {
          using T = std::decay_t<decltype(j)>;
          if constexpr (std::is_same_v<T, Hypothesis>) {
            os << "hyp " << j.row + 1;
          } else if constexpr (std::is_same_v<T, BooleanAxiom>) {
            os << "bool " << j.var << (j.kind == BooleanAxiom::Kind::Lower ? " lo" : " hi");
          } else if constexpr (std::is_same_v<T, AddRule>) {
            os << "add " << j.first + 1 << ' ' << j.second + 1;
          } else {
            os << "div " << j.premise + 1 << ' ' << j.divisor;
          }
        },
        l.why);
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Checking

namespace {

std::int64_t ceil_div(std::int64_t c, std::int64_t d) {
  // d > 0
  std::int64_t q = c / d;
  if (c % d != 0 && c > 0) ++q;
  return q;
}

std::string check_line(const CpProof& p, std::size_t i) {
  const auto& line = p.lines[i];
  const int n = line.ineq.num_vars();
  auto ref_ok = [&](std::size_t r) { return r < i; };

  return std::visit(
      [&](const auto& j) -> std::string {
        using T = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<T, Hypothesis>) {
          if (j.row >= p.system.size()) return "hypothesis row " + std::to_string(j.row + 1) + " does not exist";
          if (p.system[j.row] != line.ineq) return "does not match system row " + std::to_string(j.row + 1);
          return {};
        } else if constexpr (std::is_same_v<T, BooleanAxiom>) {
          if (j.var < 1 || j.var > n) return "boolean axiom variable out of range";
          LinearInequality expect(std::vector<std::int64_t>(static_cast<std::size_t>(n), 0), 0);
          if (j.kind == BooleanAxiom::Kind::Lower) {
            expect.coeffs[j.var - 1] = 1;
          } else {
            expect.coeffs[j.var - 1] = -1;
            expect.constant = -1;
          }
          if (expect != line.ineq) return "not the stated boolean axiom";
          return {};
        } else if constexpr (std::is_same_v<T, AddRule>) {
          if (!ref_ok(j.first) || !ref_ok(j.second)) return "reference to a later or missing line";
          const auto& a = p.lines[j.first].ineq;
          const auto& b = p.lines[j.second].ineq;
          if (a.num_vars() != n || b.num_vars() != n) return "arity mismatch";
          LinearInequality sum(std::vector<std::int64_t>(static_cast<std::size_t>(n)), 0);
          for (int k = 0; k < n; ++k)
            if (__builtin_add_overflow(a.coeffs[k], b.coeffs[k], &sum.coeffs[k])) return "coefficient overflow";
          if (__builtin_add_overflow(a.constant, b.constant, &sum.constant)) return "constant overflow";
          if (sum != line.ineq) return "not the sum of lines " + std::to_string(j.first + 1) + " and " + std::to_string(j.second + 1);
          return {};
        } else {
          if (!ref_ok(j.premise)) return "reference to a later or missing line";
          if (j.divisor <= 0) return "divisor must be a positive integer";
          const auto& a = p.lines[j.premise].ineq;
          if (a.num_vars() != n) return "arity mismatch";
          for (int k = 0; k < n; ++k) {
            if (a.coeffs[k] % j.divisor != 0)
              return "divisor " + std::to_string(j.divisor) + " does not divide coefficient " + std::to_string(k + 1);
            if (a.coeffs[k] / j.divisor != line.ineq.coeffs[k]) return "quotient coefficients mismatch";
          }
          if (ceil_div(a.constant, j.divisor) != line.ineq.constant)
            return "constant must be ceil(" + std::to_string(a.constant) + "/" + std::to_string(j.divisor) +
                   ") = " + std::to_string(ceil_div(a.constant, j.divisor));
          return {};
        }
      },
      line.why);
}

}  // namespace

CpCheckReport check_cp_proof(const CpProof& p) {
  CpCheckReport r;
  const int n = p.num_vars();
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    LineVerdict v;
    if (p.lines[i].ineq.num_vars() != n) {
      v.reason = "line has " + std::to_string(p.lines[i].ineq.num_vars()) + " coefficients, expected " + std::to_string(n);
    } else {
      v.reason = check_line(p, i);
    }
    v.valid = v.reason.empty();
    r.all_valid = r.all_valid && v.valid;
    if (!r.refutation_line && p.lines[i].ineq.is_contradiction()) r.refutation_line = i;
    r.lines.push_back(std::move(v));
  }
  r.refutation = r.all_valid && r.refutation_line.has_value();
  r.weight = proof_weight(p);
  return r;
}

std::int64_t proof_weight(const CpProof& p) {
  std::int64_t w = 0;
  for (const auto& row : p.system) w = std::max(w, row.weight());
  for (const auto& l : p.lines) w = std::max(w, l.ineq.weight());
  return w;
}

std::int64_t default_weight_bound(int n) {
  std::int64_t b = static_cast<std::int64_t>(n) * n * n;
  return std::max<std::int64_t>(b, 1);
}

std::vector<ProtocolTree> cp_lines_to_protocols(const CpProof& p, const VariablePartition& part,
                                                std::int64_t weight_bound, const ProtocolCaps& caps) {
  if (p.num_vars() != part.num_vars()) throw InvalidArgument("proof arity differs from partition");
  auto report = check_cp_proof(p);
  if (!report.all_valid) throw PreconditionError("proof has invalid lines");
  if (report.weight > weight_bound)
    throw CapExceeded("proof weight " + std::to_string(report.weight) + " exceeds bound " + std::to_string(weight_bound));
  std::vector<ProtocolTree> out;
  out.reserve(p.lines.size());
  for (const auto& l : p.lines) out.push_back(inequality_protocol(l.ineq, part, caps));
  return out;
}

// ---------------------------------------------------------------------------
// Resolution

namespace {

using ClauseKey = std::vector<int>;

ClauseKey key_of(const Clause& c) {
  ClauseKey k;
  for (const auto& l : c.literals) k.push_back(l.to_dimacs());
  std::sort(k.begin(), k.end());
  return k;
}

Clause resolve(const Clause& pos, const Clause& neg, Var pivot) {
  std::map<Var, bool> lits;  // var -> negated, ascending
  for (const auto* c : {&pos, &neg})
    for (const auto& l : c->literals)
      if (l.var != pivot) lits.emplace(l.var, l.negated);
  Clause r;
  for (auto [v, neg_] : lits) r.literals.push_back({v, neg_});
  return r;
}

class DpllRefuter {
 public:
  DpllRefuter(const CnfFormula& f, const ResolutionOptions& opts)
      : f_(f), opts_(opts), value_(static_cast<std::size_t>(f.num_vars()) + 1, -1) {
    for (std::size_t i = 0; i < f.num_clauses(); ++i) {
      out_.lines.push_back({f.clause(i), i, 0, 0, 0});
      memo_.emplace(key_of(f.clause(i)), i);
    }
  }

  ResolutionRefutation run() {
    std::size_t last = refute();
    if (!out_.lines[last].clause.literals.empty())
      throw Error("internal: DPLL refutation did not end in the empty clause");
    // The empty clause closes the proof.
    if (last != out_.lines.size() - 1) out_.lines.push_back(out_.lines[last]);
    return std::move(out_);
  }

 private:
  bool falsified(const Clause& c) const {
    return std::all_of(c.literals.begin(), c.literals.end(),
                       [&](const Literal& l) { return value_[l.var] >= 0 && (value_[l.var] == 1) == l.negated; });
  }

  std::size_t refute() {
    for (std::size_t i = 0; i < f_.num_clauses(); ++i)
      if (falsified(f_.clause(i))) return i;

    Var v = 0;
    int first = 0;
    for (const auto& c : f_.clauses()) {
      int free = 0;
      bool sat = false;
      Literal unit;
      for (const auto& l : c.literals) {
        if (value_[l.var] < 0) {
          ++free;
          unit = l;
        } else if ((value_[l.var] == 1) != l.negated) {
          sat = true;
        }
      }
      if (!sat && free == 1) {
        v = unit.var;
        first = unit.negated ? 1 : 0;
        break;
      }
    }
    if (v == 0) {
      if (opts_.descending) {
        for (Var u = f_.num_vars(); u >= 1 && v == 0; --u)
          if (value_[u] < 0) v = u;
      } else {
        for (Var u = 1; u <= f_.num_vars() && v == 0; ++u)
          if (value_[u] < 0) v = u;
      }
      if (v == 0) throw Error("internal: DPLL reached a satisfying assignment");
    }

    std::size_t branch[2];
    for (int b : {first, 1 - first}) {
      value_[v] = b;
      branch[b] = refute();
      value_[v] = -1;
    }
    // branch[0] is falsified under v = 0, so it contains v positively if at all.
    for (int b : {first, 1 - first})
      if (!out_.lines[branch[b]].clause.contains_var(v)) return branch[b];

    Clause r = resolve(out_.lines[branch[0]].clause, out_.lines[branch[1]].clause, v);
    auto k = key_of(r);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    out_.lines.push_back({std::move(r), std::nullopt, branch[0], branch[1], v});
    memo_.emplace(std::move(k), out_.lines.size() - 1);
    return out_.lines.size() - 1;
  }

  const CnfFormula& f_;
  ResolutionOptions opts_;
  std::vector<int> value_;
  ResolutionRefutation out_;
  std::map<ClauseKey, std::size_t> memo_;
};

}  // namespace

ResolutionRefutation resolution_refutation_from_dpll(const CnfFormula& f, const ResolutionOptions& opts) {
  if (auto w = brute_force_sat(f, {opts.max_vars})) throw SatisfiableFormula(*w);
  return DpllRefuter(f, opts).run();
}

bool check_resolution_refutation(const ResolutionRefutation& r, const CnfFormula& f, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (r.lines.size() < f.num_clauses()) return fail("fewer lines than clauses");
  for (std::size_t i = 0; i < f.num_clauses(); ++i)
    if (r.lines[i].axiom != i || r.lines[i].clause != f.clause(i))
      return fail("line " + std::to_string(i + 1) + " is not clause " + std::to_string(i + 1));
  for (std::size_t i = f.num_clauses(); i < r.lines.size(); ++i) {
    const auto& l = r.lines[i];
    const std::string at = "line " + std::to_string(i + 1) + ": ";
    if (l.axiom) {
      if (*l.axiom >= f.num_clauses() || l.clause != f.clause(*l.axiom)) return fail(at + "bad axiom");
      continue;
    }
    if (l.left >= i || l.right >= i) return fail(at + "premise not earlier");
    const auto& a = r.lines[l.left].clause;
    const auto& b = r.lines[l.right].clause;
    int clashes = 0;
    bool pivot_ok = false;
    for (const auto& la : a.literals)
      for (const auto& lb : b.literals)
        if (la.var == lb.var && la.negated != lb.negated) {
          ++clashes;
          pivot_ok = la.var == l.pivot && !la.negated;
        }
    if (clashes != 1 || !pivot_ok) return fail(at + "premises must clash on exactly the pivot");
    if (key_of(resolve(a, b, l.pivot)) != key_of(l.clause)) return fail(at + "not the resolvent");
  }
  if (!r.lines.back().clause.literals.empty()) return fail("last line is not the empty clause");
  return true;
}

}  // namespace pcw
