#include "pcw/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pcw/error.hpp"

namespace pcw {

// ---------------------------------------------------------------------------
// LinearInequality

std::int64_t LinearInequality::weight() const {
  std::int64_t w = constant < 0 ? -constant : constant;
  for (auto a : coeffs) w = std::max(w, a < 0 ? -a : a);
  return w;
}

bool LinearInequality::all_zero_coeffs() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](auto a) { return a == 0; });
}

bool LinearInequality::satisfied_by(const std::vector<std::int64_t>& point) const {
  std::int64_t lhs = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) lhs += coeffs[i] * point.at(i);
  return lhs >= constant;
}

std::string LinearInequality::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs.size(); ++i) os << coeffs[i] << ' ';
  os << ">= " << constant;
  return os.str();
}

// ---------------------------------------------------------------------------
// Clause, Assignment, CnfFormula

Clause Clause::from_dimacs(std::initializer_list<int> lits) {
  Clause c;
  for (int l : lits) c.literals.push_back(Literal::from_dimacs(l));
  return c;
}

bool Clause::contains_var(Var v) const {
  return std::any_of(literals.begin(), literals.end(), [v](const Literal& l) { return l.var == v; });
}

std::string Clause::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i) s += " v ";
    if (literals[i].negated) s += '-';
    s += 'z' + std::to_string(literals[i].var);
  }
  return s + ")";
}

Assignment Assignment::total(const std::vector<bool>& bits) {
  Assignment a(static_cast<int>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) a.set(static_cast<Var>(i + 1), bits[i]);
  return a;
}

void Assignment::set(Var v, bool value) {
  if (v < 1 || v > universe())
    throw InvalidArgument("variable " + std::to_string(v) + " outside universe");
  values_[v] = value ? 1 : 0;
}

void Assignment::unset(Var v) {
  if (v >= 1 && v <= universe()) values_[v] = -1;
}

bool Assignment::value(Var v) const {
  if (!has(v)) throw InvalidArgument("variable " + std::to_string(v) + " outside assignment scope");
  return values_[v] == 1;
}

std::vector<Var> Assignment::scope() const {
  std::vector<Var> s;
  for (Var v = 1; v <= universe(); ++v)
    if (values_[v] >= 0) s.push_back(v);
  return s;
}

std::size_t Assignment::scope_size() const {
  return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](auto b) { return b >= 0; }));
}

Assignment Assignment::join(const Assignment& a, const Assignment& b) {
  if (a.universe() != b.universe()) throw InvalidArgument("joined assignments differ in universe");
  Assignment r = a;
  for (Var v = 1; v <= b.universe(); ++v) {
    if (!b.has(v)) continue;
    if (r.has(v)) throw InvalidArgument("joined assignments overlap on variable " + std::to_string(v));
    r.set(v, b.value(v));
  }
  return r;
}

std::string Assignment::to_string() const {
  std::string s;
  for (Var v = 1; v <= universe(); ++v) {
    if (!has(v)) continue;
    if (!s.empty()) s += ' ';
    s += 'z' + std::to_string(v) + '=' + (value(v) ? '1' : '0');
  }
  return s;
}

CnfFormula::CnfFormula(int num_vars, std::vector<Clause> clauses) : n_(num_vars), clauses_(std::move(clauses)) {
  if (n_ < 0) throw InvalidArgument("negative variable count");
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    const auto& c = clauses_[i];
    if (c.literals.empty()) throw InvalidArgument("clause " + std::to_string(i + 1) + " is empty");
    for (std::size_t j = 0; j < c.literals.size(); ++j) {
      Var v = c.literals[j].var;
      if (v < 1 || v > n_)
        throw InvalidArgument("clause " + std::to_string(i + 1) + ": literal out of range");
      for (std::size_t k = 0; k < j; ++k)
        if (c.literals[k].var == v)
          throw InvalidArgument("clause " + std::to_string(i + 1) + ": repeated variable " + std::to_string(v));
    }
  }
}

int CnfFormula::width() const {
  int d = 0;
  for (const auto& c : clauses_) d = std::max(d, c.width());
  return d;
}

// ---------------------------------------------------------------------------
// VariablePartition

VariablePartition::VariablePartition(int n, std::vector<Var> xvars, std::vector<Var> yvars)
    : n_(n), xvars_(std::move(xvars)), yvars_(std::move(yvars)), bit_(static_cast<std::size_t>(n) + 1, -1) {
  std::sort(xvars_.begin(), xvars_.end());
  std::sort(yvars_.begin(), yvars_.end());
  std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
  auto place = [&](const std::vector<Var>& side) {
    for (std::size_t j = 0; j < side.size(); ++j) {
      Var v = side[j];
      if (v < 1 || v > n) throw InvalidArgument("partition variable " + std::to_string(v) + " out of range");
      if (seen[v]++) throw InvalidArgument("variable " + std::to_string(v) + " assigned to both sides");
      bit_[v] = static_cast<int>(side.size() - 1 - j);
    }
  };
  place(xvars_);
  place(yvars_);
  for (Var v = 1; v <= n; ++v)
    if (!seen[v]) throw InvalidArgument("variable " + std::to_string(v) + " missing from partition");
}

VariablePartition VariablePartition::alternating(int n) {
  std::vector<Var> x, y;
  for (Var v = 1; v <= n; ++v) (v % 2 ? x : y).push_back(v);
  return {n, std::move(x), std::move(y)};
}

Side VariablePartition::side_of(Var v) const {
  if (v < 1 || v > n_) throw InvalidArgument("variable " + std::to_string(v) + " outside partition");
  return std::binary_search(xvars_.begin(), xvars_.end(), v) ? Side::X : Side::Y;
}

int VariablePartition::code_bit(Var v) const {
  if (v < 1 || v > n_) throw InvalidArgument("variable " + std::to_string(v) + " outside partition");
  return bit_[v];
}

void VariablePartition::require_scope(Side s, const Assignment& a) const {
  const auto& vs = vars(s);
  if (a.universe() < n_ || a.scope_size() != vs.size())
    throw InvalidArgument(std::string("assignment scope does not match ") + (s == Side::X ? "X" : "Y") + " side");
  for (Var v : vs)
    if (!a.has(v))
      throw InvalidArgument(std::string("assignment scope does not match ") + (s == Side::X ? "X" : "Y") + " side");
}

void VariablePartition::require_codes(Side s) const {
  if (size(s) > 63) throw CapExceeded("side codes need at most 63 variables per side");
}

std::uint64_t VariablePartition::code(Side s, const Assignment& a) const {
  require_codes(s);
  require_scope(s, a);
  std::uint64_t c = 0;
  for (Var v : vars(s))
    if (a.value(v)) c |= std::uint64_t{1} << bit_[v];
  return c;
}

Assignment VariablePartition::decode(Side s, std::uint64_t code) const {
  require_codes(s);
  Assignment a(n_);
  for (Var v : vars(s)) a.set(v, (code >> bit_[v]) & 1U);
  return a;
}

std::string VariablePartition::to_string() const {
  auto list = [](const std::vector<Var>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + std::to_string(vs[i]);
    return s;
  };
  return "x:" + list(xvars_) + " y:" + list(yvars_);
}

SidePart side_part(const Clause& c, const VariablePartition& part, Side s) {
  part.require_codes(s);
  SidePart sp;
  for (const auto& l : c.literals) {
    if (part.side_of(l.var) != s) continue;
    std::uint64_t bit = std::uint64_t{1} << part.code_bit(l.var);
    sp.mask |= bit;
    // A positive literal is falsified by 0, a negated one by 1.
    if (l.negated) sp.falsifying |= bit;
    ++sp.width;
  }
  return sp;
}

// ---------------------------------------------------------------------------
// DIMACS

namespace {

struct Token {
  std::string_view text;
  int line;
};

bool parse_int(std::string_view s, long long& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text) {
  int line_no = 0;
  bool have_header = false;
  long long n = 0, m = 0;
  int header_line = 0;
  std::vector<Token> body;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;

    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    line.remove_prefix(first);
    if (line[0] == 'c') continue;

    std::vector<std::string_view> toks;
    for (std::size_t i = 0; i < line.size();) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      if (j > i) toks.push_back(line.substr(i, j - i));
      i = j;
    }

    if (line[0] == 'p') {
      if (have_header) throw ParseError("duplicate header", line_no);
      if (toks.size() != 4 || toks[0] != "p" || toks[1] != "cnf" || !parse_int(toks[2], n) ||
          !parse_int(toks[3], m) || n < 0 || m < 0)
        throw ParseError("malformed header, expected 'p cnf <n> <m>'", line_no);
      have_header = true;
      header_line = line_no;
      continue;
    }
    if (!have_header) throw ParseError("clause data before 'p cnf' header", line_no);
    for (auto t : toks) body.push_back({t, line_no});
    if (end == text.size()) break;
  }
  if (!have_header) throw ParseError("missing 'p cnf' header", line_no);
  if (n > (1 << 24)) throw ParseError("variable count too large", header_line);

  std::vector<Clause> clauses;
  Clause current;
  int clause_line = 0;
  for (const auto& t : body) {
    long long lit = 0;
    if (!parse_int(t.text, lit)) throw ParseError("invalid literal '" + std::string(t.text) + "'", t.line);
    if (current.literals.empty()) clause_line = t.line;
    if (lit == 0) {
      if (current.literals.empty()) throw ParseError("empty clause", t.line);
      if (static_cast<long long>(clauses.size()) == m)
        throw ParseError("clause count mismatch: more than " + std::to_string(m) + " clauses", clause_line);
      clauses.push_back(std::move(current));
      current = Clause{};
      continue;
    }
    long long v = lit < 0 ? -lit : lit;
    if (v > n) throw ParseError("literal " + std::to_string(lit) + " out of range", t.line);
    if (current.contains_var(static_cast<Var>(v)))
      throw ParseError("repeated variable " + std::to_string(v) + " in clause", t.line);
    current.literals.push_back(Literal::from_dimacs(static_cast<int>(lit)));
  }
  if (!current.literals.empty()) throw ParseError("unterminated clause", clause_line);
  if (static_cast<long long>(clauses.size()) != m)
    throw ParseError("clause count mismatch: header declares " + std::to_string(m) + ", found " +
                         std::to_string(clauses.size()),
                     header_line);
  return CnfFormula(static_cast<int>(n), std::move(clauses));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CnfFormula read_dimacs_file(const std::string& path) { return parse_dimacs(read_text_file(path)); }

namespace {

std::vector<Var> parse_var_list(std::string_view list, int n) {
  std::vector<Var> out;
  std::size_t pos = 0;
  while (pos <= list.size() && !list.empty()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string_view::npos) comma = list.size();
    std::string_view item = list.substr(pos, comma - pos);
    auto num = [&](std::string_view s) {
      long long v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size() || v < 1 || v > n)
        throw InvalidArgument("bad variable '" + std::string(s) + "' in partition (variables are 1.." +
                              std::to_string(n) + ")");
      return static_cast<Var>(v);
    };
    std::size_t dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(num(item));
    } else {
      Var a = num(item.substr(0, dash)), b = num(item.substr(dash + 1));
      if (a > b) throw InvalidArgument("empty range '" + std::string(item) + "' in partition");
      for (Var v = a; v <= b; ++v) out.push_back(v);
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace

VariablePartition parse_partition(std::string_view spec, int n) {
  auto b = spec.find_first_not_of(" \t");
  auto e = spec.find_last_not_of(" \t");
  spec = b == std::string_view::npos ? std::string_view{} : spec.substr(b, e - b + 1);
  if (spec == "alternating") return VariablePartition::alternating(n);
  std::optional<std::vector<Var>> xs, ys;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t end = spec.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = spec.size();
    std::string_view tok = spec.substr(pos, end - pos);
    pos = spec.find_first_not_of(" \t", end);
    if (pos == std::string_view::npos) pos = spec.size();
    if (tok.size() < 2 || tok[1] != ':' || (tok[0] != 'x' && tok[0] != 'y'))
      throw InvalidArgument("partition spec must be 'alternating' or 'x:<vars> [y:<vars>]', got '" +
                            std::string(tok) + "'");
    auto& slot = tok[0] == 'x' ? xs : ys;
    if (slot) throw InvalidArgument("partition side listed twice");
    slot = parse_var_list(tok.substr(2), n);
  }
  if (!xs && !ys) throw InvalidArgument("empty partition spec");
  auto complement = [n](const std::vector<Var>& side) {
    std::vector<Var> rest;
    for (Var v = 1; v <= n; ++v)
      if (std::find(side.begin(), side.end(), v) == side.end()) rest.push_back(v);
    return rest;
  };
  if (!ys) ys = complement(*xs);
  if (!xs) xs = complement(*ys);
  return VariablePartition(n, std::move(*xs), std::move(*ys));
}

std::string to_dimacs(const CnfFormula& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars()) + " " + std::to_string(f.num_clauses()) + "\n";
  for (const auto& c : f.clauses()) {
    for (const auto& l : c.literals) {
      out += std::to_string(l.to_dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Semantics

bool eval_clause(const Clause& c, const Assignment& a) {
  for (const auto& l : c.literals) {
    if (!a.has(l.var))
      throw InvalidArgument("clause variable " + std::to_string(l.var) + " outside assignment scope");
  }
  for (const auto& l : c.literals)
    if (a.value(l.var) != l.negated) return true;
  return false;
}

LinearInequality clause_to_inequality(const Clause& c, int n) {
  LinearInequality ineq(std::vector<std::int64_t>(static_cast<std::size_t>(n), 0), 1);
  for (const auto& l : c.literals) {
    if (l.var < 1 || l.var > n) throw InvalidArgument("clause variable outside [n]");
    if (l.negated) {
      ineq.coeffs[l.var - 1] = -1;
      ineq.constant -= 1;
    } else {
      ineq.coeffs[l.var - 1] = 1;
    }
  }
  return ineq;
}

namespace {

class Backtracker {
 public:
  explicit Backtracker(const CnfFormula& f) : f_(f), value_(static_cast<std::size_t>(f.num_vars()) + 1, -1) {}

  bool solve() { return search(); }
  const std::vector<int>& values() const { return value_; }

 private:
  enum class State { Satisfied, Falsified, Unit, Open };

  State status(const Clause& c, Literal& unit) const {
    int unassigned = 0;
    for (const auto& l : c.literals) {
      int v = value_[l.var];
      if (v < 0) {
        ++unassigned;
        unit = l;
      } else if ((v == 1) != l.negated) {
        return State::Satisfied;
      }
    }
    if (unassigned == 0) return State::Falsified;
    return unassigned == 1 ? State::Unit : State::Open;
  }

  // Returns false on conflict; assigned variables are appended to trail.
  bool propagate(std::vector<Var>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : f_.clauses()) {
        Literal unit;
        switch (status(c, unit)) {
          case State::Falsified:
            return false;
          case State::Unit:
            value_[unit.var] = unit.negated ? 0 : 1;
            trail.push_back(unit.var);
            changed = true;
            break;
          default:
            break;
        }
      }
    }
    return true;
  }

  bool search() {
    std::vector<Var> trail;
    if (!propagate(trail)) {
      undo(trail);
      return false;
    }
    Var next = 0;
    for (Var v = 1; v <= f_.num_vars(); ++v)
      if (value_[v] < 0) {
        next = v;
        break;
      }
    bool all_sat = true;
    for (const auto& c : f_.clauses()) {
      Literal unit;
      if (status(c, unit) != State::Satisfied) {
        all_sat = false;
        break;
      }
    }
    if (all_sat) {
      for (Var v = 1; v <= f_.num_vars(); ++v)
        if (value_[v] < 0) value_[v] = 0;
      return true;
    }
    // Not all satisfied and no conflict, so some clause still has a free variable.
    if (next == 0) {
      undo(trail);
      return false;
    }
    for (int b : {0, 1}) {
      value_[next] = b;
      if (search()) return true;
    }
    value_[next] = -1;
    undo(trail);
    return false;
  }

  void undo(const std::vector<Var>& trail) {
    for (Var v : trail) value_[v] = -1;
  }

  const CnfFormula& f_;
  std::vector<int> value_;
};

}  // namespace

std::optional<Assignment> brute_force_sat(const CnfFormula& f, const BruteForceOptions& opts) {
  if (f.num_vars() > opts.max_vars)
    throw CapExceeded("brute-force cap: " + std::to_string(f.num_vars()) + " variables > " +
                      std::to_string(opts.max_vars));
  Backtracker bt(f);
  if (!bt.solve()) return std::nullopt;
  Assignment a(f.num_vars());
  for (Var v = 1; v <= f.num_vars(); ++v) a.set(v, bt.values()[v] == 1);
  return a;
}

std::size_t search_violation(const CnfFormula& f, const VariablePartition& p, const Assignment& x,
                             const Assignment& y) {
  p.require_scope(Side::X, x);
  p.require_scope(Side::Y, y);
  Assignment joint = Assignment::join(x, y);
  for (std::size_t i = 0; i < f.num_clauses(); ++i)
    if (!eval_clause(f.clause(i), joint)) return i;
  throw PreconditionError("no violated clause: the formula is satisfied at this point");
}

}  // namespace pcw
