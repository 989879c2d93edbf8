#include "pcw/csp_sat.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "pcw/error.hpp"

namespace pcw {

ConstraintGraph::ConstraintGraph(std::vector<Var> variables, std::vector<std::vector<Var>> constraint_vars, int sigma)
    : variables_(std::move(variables)), vars_(std::move(constraint_vars)), sigma_(sigma) {
  if (sigma_ < 1) throw InvalidArgument("alphabet must be nonempty");
  std::sort(variables_.begin(), variables_.end());
  for (auto& vs : vars_) {
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) throw InvalidArgument("repeated variable in constraint");
    for (Var v : vs)
      if (!std::binary_search(variables_.begin(), variables_.end(), v))
        throw InvalidArgument("constraint reads variable " + std::to_string(v) + " outside the graph");
    std::size_t size = 1;
    for (std::size_t k = 0; k < vs.size(); ++k) {
      if (size > (std::size_t{1} << 40) / static_cast<std::size_t>(sigma_))
        throw CapExceeded("truth table block too large");
      size *= static_cast<std::size_t>(sigma_);
    }
    offsets_.push_back(offsets_.back() + size);
  }
}

int ConstraintGraph::degree() const {
  std::size_t d = 0;
  for (const auto& vs : vars_) d = std::max(d, vs.size());
  return static_cast<int>(d);
}

std::size_t ConstraintGraph::position(std::size_t constraint, std::uint64_t alpha) const {
  if (constraint >= vars_.size()) throw InvalidArgument("constraint index out of range");
  if (alpha >= block_size(constraint)) throw InvalidArgument("alpha out of range for constraint");
  return offsets_[constraint] + alpha;
}

std::pair<std::size_t, std::uint64_t> ConstraintGraph::locate(std::size_t pos) const {
  if (pos >= num_bits()) throw InvalidArgument("position out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), pos);
  std::size_t i = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return {i, pos - offsets_[i]};
}

ConstraintGraph build_constraint_graph(const CnfFormula& f, const VariablePartition& part) {
  if (f.num_vars() != part.num_vars()) throw InvalidArgument("formula and partition differ in variable count");
  std::vector<std::vector<Var>> cv;
  cv.reserve(f.num_clauses());
  for (const auto& c : f.clauses()) {
    std::vector<Var> vs;
    for (const auto& l : c.literals)
      if (part.side_of(l.var) == Side::X) vs.push_back(l.var);
    cv.push_back(std::move(vs));
  }
  return ConstraintGraph(part.xvars(), std::move(cv), 2);
}

std::uint64_t restrict_code(const ConstraintGraph& g, std::size_t i, const VariablePartition& part, std::uint64_t x) {
  std::uint64_t alpha = 0;
  for (Var v : g.vars(i)) alpha = (alpha << 1) | ((x >> part.code_bit(v)) & 1U);
  return alpha;
}

std::uint64_t falsifying_alpha(const ConstraintGraph& g, std::size_t i, const Clause& c) {
  std::uint64_t alpha = 0;
  for (Var v : g.vars(i)) {
    auto it = std::find_if(c.literals.begin(), c.literals.end(), [v](const Literal& l) { return l.var == v; });
    if (it == c.literals.end()) throw InvalidArgument("constraint variable not in clause");
    alpha = (alpha << 1) | static_cast<std::uint64_t>(it->negated);
  }
  return alpha;
}

namespace {

void require_binary(const ConstraintGraph& g) {
  if (g.sigma() != 2) throw InvalidArgument("instance construction needs the alphabet {0,1}");
}

}  // namespace

CspSatInstance accepting_instance(const ConstraintGraph& g, const VariablePartition& part, std::uint64_t x) {
  require_binary(g);
  if (g.variables() != part.xvars()) throw InvalidArgument("graph variables differ from the X side");
  CspSatInstance inst{Bits(g.num_bits())};
  for (std::size_t i = 0; i < g.num_constraints(); ++i) inst.bits.set(g.position(i, restrict_code(g, i, part, x)));
  return inst;
}

CspSatInstance accepting_instance(const ConstraintGraph& g, const VariablePartition& part, const Assignment& x) {
  return accepting_instance(g, part, part.x_code(x));
}

CspSatInstance rejecting_instance(const ConstraintGraph& g, const CnfFormula& f, const VariablePartition& part,
                                  std::uint64_t y) {
  require_binary(g);
  if (g.num_constraints() != f.num_clauses()) throw InvalidArgument("graph and formula differ in constraint count");
  CspSatInstance inst{Bits(g.num_bits())};
  inst.bits.set();
  for (std::size_t i = 0; i < g.num_constraints(); ++i) {
    const Clause& c = f.clause(i);
    if (side_part(c, part, Side::Y).falsified_by(y)) inst.bits.reset(g.position(i, falsifying_alpha(g, i, c)));
  }
  return inst;
}

CspSatInstance rejecting_instance(const ConstraintGraph& g, const CnfFormula& f, const VariablePartition& part,
                                  const Assignment& y) {
  return rejecting_instance(g, f, part, part.y_code(y));
}

// ---------------------------------------------------------------------------

namespace {

class CspSearch {
 public:
  CspSearch(const ConstraintGraph& g, const CspSatInstance& inst) : g_(g), inst_(inst) {
    for (std::size_t i = 0; i < g.num_constraints(); ++i)
      for (Var v : g.vars(i)) used_.push_back(v);
    std::sort(used_.begin(), used_.end());
    used_.erase(std::unique(used_.begin(), used_.end()), used_.end());
    value_.assign(used_.size(), 0);
    // A constraint is checked once its last variable (in search order) is set.
    checks_.resize(used_.size() + 1);
    for (std::size_t i = 0; i < g.num_constraints(); ++i) {
      std::size_t level = 0;
      for (Var v : g.vars(i)) level = std::max(level, index_of(v) + 1);
      checks_[level].push_back(i);
    }
  }

  std::size_t num_used() const { return used_.size(); }

  bool run() {
    if (!holds(0)) return false;
    return search(0);
  }

 private:
  std::size_t index_of(Var v) const {
    return static_cast<std::size_t>(std::lower_bound(used_.begin(), used_.end(), v) - used_.begin());
  }

  bool holds(std::size_t level) const {
    for (std::size_t i : checks_[level]) {
      std::uint64_t alpha = 0;
      for (Var v : g_.vars(i)) alpha = alpha * static_cast<std::uint64_t>(g_.sigma()) + value_[index_of(v)];
      if (!inst_.bits[g_.offset(i) + alpha]) return false;
    }
    return true;
  }

  bool search(std::size_t k) {
    if (k == used_.size()) return true;
    for (int a = 0; a < g_.sigma(); ++a) {
      value_[k] = static_cast<std::uint64_t>(a);
      if (holds(k + 1) && search(k + 1)) return true;
    }
    return false;
  }

  const ConstraintGraph& g_;
  const CspSatInstance& inst_;
  std::vector<Var> used_;
  std::vector<std::uint64_t> value_;
  std::vector<std::vector<std::size_t>> checks_;
};

}  // namespace

bool csp_sat_eval(const ConstraintGraph& g, const CspSatInstance& inst, const CspEvalOptions& opts) {
  if (inst.bits.size() != g.num_bits()) throw InvalidArgument("instance length differs from the graph layout");
  if (static_cast<int>(g.variables().size()) > opts.max_vars)
    throw CapExceeded("CSP evaluation cap: " + std::to_string(g.variables().size()) + " variables > " +
                      std::to_string(opts.max_vars));
  return CspSearch(g, inst).run();
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k, std::uint64_t saturate) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > saturate) return saturate + 1;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

AbQuery ab_count(const std::vector<CspSatInstance>& instances, std::size_t r, bool b, const AbOptions& opts) {
  AbQuery q{r, b, 0, true, 0};
  if (r == 0 || instances.empty()) {
    q.value = instances.size();
    return q;
  }
  const std::size_t n = instances.front().bits.size();
  for (const auto& u : instances)
    if (u.bits.size() != n) throw InvalidArgument("instances differ in length");
  if (r > n) return q;

  // Column i: which instances have value b at position i.
  std::vector<Bits> cols(n, Bits(instances.size()));
  for (std::size_t k = 0; k < instances.size(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (instances[k].bits[i] == b) cols[i].set(k);

  const std::uint64_t sets = choose(n, r, opts.exact_budget);
  bool exact = opts.mode == AbMode::Exact || (opts.mode == AbMode::Auto && r <= 3 && sets <= opts.exact_budget);
  if (opts.mode == AbMode::Exact && sets > opts.exact_budget)
    throw CapExceeded("exact A_b would enumerate more than " + std::to_string(opts.exact_budget) + " index sets");

  if (exact) {
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    std::vector<Bits> acc(r + 1, Bits(instances.size()));
    acc[0].set();
    // Enumerate r-subsets in lexicographic order, maintaining prefix intersections.
    std::size_t from = 0;
    while (true) {
      for (std::size_t k = from; k < r; ++k) acc[k + 1] = acc[k] & cols[idx[k]];
      q.value = std::max<std::uint64_t>(q.value, acc[r].count());
      std::size_t k = r;
      while (k > 0 && idx[k - 1] == n - r + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < r; ++j) idx[j] = idx[j - 1] + 1;
      from = k - 1;
    }
    return q;
  }

  q.exact = false;
  q.trials = opts.trials;
  boost::random::mt19937_64 rng(opts.seed);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::uint64_t t = 0; t < opts.trials; ++t) {
    Bits acc(instances.size());
    acc.set();
    for (std::size_t k = 0; k < r; ++k) {
      boost::random::uniform_int_distribution<std::size_t> pick(k, n - 1);
      std::swap(perm[k], perm[pick(rng)]);
      acc &= cols[perm[k]];
    }
    q.value = std::max<std::uint64_t>(q.value, acc.count());
  }
  return q;
}

BigRational symmetric_approximation_bound(const ApproximationInputs& in) {
  if (in.r < 1 || in.s < 1) throw InvalidArgument("r and s must be positive");
  if (in.u_size < 0 || in.v_size < 0 || in.a1_one < 0 || in.a1_r < 0 || in.a0_s < 0)
    throw InvalidArgument("counts must be nonnegative");
  if (in.a1_r == 0 || in.a0_s == 0) throw InvalidArgument("zero denominator: A_1(r,U) and A_0(s,V) must be nonzero");
  const BigInt two_s = 2 * BigInt(in.s);
  const BigInt two_r = 2 * BigInt(in.r);
  BigRational first(in.u_size - two_s * in.a1_one, boost::multiprecision::pow(two_s, static_cast<unsigned>(in.r + 1)) * in.a1_r);
  BigRational second(in.v_size, boost::multiprecision::pow(two_r, static_cast<unsigned>(in.s + 1)) * in.a0_s);
  BigRational m = first < second ? first : second;
  return m < 0 ? BigRational(0) : m;
}

namespace {

bool all_distinct(std::uint64_t count, const std::function<Bits(std::uint64_t)>& make) {
  std::unordered_set<Bits> seen;
  for (std::uint64_t c = 0; c < count; ++c)
    if (!seen.insert(make(c)).second) return false;
  return true;
}

}  // namespace

bool accepting_map_injective(const ConstraintGraph& g, const VariablePartition& part) {
  if (part.n1() > 24) throw CapExceeded("injectivity check enumerates 2^n1 inputs");
  return all_distinct(std::uint64_t{1} << part.n1(),
                      [&](std::uint64_t x) { return accepting_instance(g, part, x).bits; });
}

bool rejecting_map_injective(const ConstraintGraph& g, const CnfFormula& f, const VariablePartition& part) {
  if (part.n2() > 24) throw CapExceeded("injectivity check enumerates 2^n2 inputs");
  return all_distinct(std::uint64_t{1} << part.n2(),
                      [&](std::uint64_t y) { return rejecting_instance(g, f, part, y).bits; });
}

// ---------------------------------------------------------------------------

std::string instance_to_text(const ConstraintGraph& g, const CspSatInstance& inst) {
  if (inst.bits.size() != g.num_bits()) throw InvalidArgument("instance length differs from the graph layout");
  std::ostringstream os;
  os << "csp-sat " << g.num_constraints() << ' ' << g.variables().size() << ' ' << g.sigma() << "\nblocks";
  for (std::size_t i = 0; i < g.num_constraints(); ++i) os << ' ' << g.block_size(i);
  os << '\n';
  for (std::size_t i = 0; i < g.num_constraints(); ++i) {
    for (std::size_t a = 0; a < g.block_size(i); ++a) os << (inst.bits[g.offset(i) + a] ? '1' : '0');
    os << '\n';
  }
  return os.str();
}

ParsedInstance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  ParsedInstance p;
  std::string word;
  int line = 1;
  if (!(in >> word) || word != "csp-sat" || !(in >> p.num_constraints >> p.n_xside >> p.sigma))
    throw ParseError("expected 'csp-sat <m> <n_xside> <sigma>'", line);
  ++line;
  if (!(in >> word) || word != "blocks") throw ParseError("expected 'blocks' line", line);
  std::size_t total = 0;
  for (std::size_t i = 0; i < p.num_constraints; ++i) {
    std::size_t s = 0;
    if (!(in >> s) || s == 0) throw ParseError("bad block size", line);
    p.block_sizes.push_back(s);
    total += s;
  }
  p.instance.bits.resize(total);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < p.num_constraints; ++i) {
    ++line;
    std::string row;
    if (!(in >> row) || row.size() != p.block_sizes[i]) throw ParseError("block length mismatch", line);
    for (char ch : row) {
      if (ch != '0' && ch != '1') throw ParseError("block must be 0/1 characters", line);
      p.instance.bits[pos++] = ch == '1';
    }
  }
  if (in >> word) throw ParseError("trailing data after last block", line + 1);
  return p;
}

}  // namespace pcw
