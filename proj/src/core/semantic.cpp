#include "pcw/semantic.hpp"

#include "pcw/error.hpp"

namespace pcw {

SemanticLine::SemanticLine(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 0 || n2 < 0) throw InvalidArgument("negative side size");
  if (n1 + n2 > kMaxJointVars)
    throw CapExceeded("truth table over " + std::to_string(n1 + n2) + " joint variables exceeds cap " +
                      std::to_string(kMaxJointVars));
  table_.resize(std::size_t{1} << (n1 + n2));
}

SemanticLine SemanticLine::constant(int n1, int n2, bool value) {
  SemanticLine l(n1, n2);
  if (value) l.table_.set();
  return l;
}

SemanticLine SemanticLine::from_clause(const Clause& c, const VariablePartition& part) {
  SidePart xs = side_part(c, part, Side::X);
  SidePart ys = side_part(c, part, Side::Y);
  return from_function(part.n1(), part.n2(), [&](std::uint64_t x, std::uint64_t y) {
    return !(xs.falsified_by(x) && ys.falsified_by(y));
  });
}

SemanticLine SemanticLine::from_inequality(const LinearInequality& ineq, const VariablePartition& part) {
  if (ineq.num_vars() != part.num_vars()) throw InvalidArgument("inequality arity differs from partition");
  // Partial sums per side code, then compare.
  auto sums = [&](Side s) {
    const auto& vs = part.vars(s);
    std::vector<std::int64_t> out(std::size_t{1} << vs.size(), 0);
    for (std::uint64_t c = 0; c < out.size(); ++c)
      for (Var v : vs)
        if ((c >> part.code_bit(v)) & 1U) out[c] += ineq.coeffs[v - 1];
    return out;
  };
  auto xs = sums(Side::X);
  auto ys = sums(Side::Y);
  return from_function(part.n1(), part.n2(),
                       [&](std::uint64_t x, std::uint64_t y) { return xs[x] + ys[y] >= ineq.constant; });
}

bool check_semantic_step(const SemanticLine& f, const SemanticLine& g, const SemanticLine& h) {
  if (f.n1() != g.n1() || f.n2() != g.n2() || f.n1() != h.n1() || f.n2() != h.n2())
    throw InvalidArgument("semantic lines differ in dimension");
  return (f.table() & g.table()).is_subset_of(h.table());
}

}  // namespace pcw
