#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pcw/cp_proof.hpp"

namespace pcw::test {

// x1 >= 1, -x1 >= 0, sum: 0 >= 1.
inline CpProof contradiction_proof() {
  return parse_cp_proof("1: 1 >= 1 ; hyp 1\n2: -1 >= 0 ; hyp 2\n3: 0 >= 1 ; add 1 2\n",
                        {LinearInequality({1}, 1), LinearInequality({-1}, 0)});
}

// 2x1 + 2x2 >= 3 divided by 2: x1 + x2 >= ceil(3/2) = 2.
inline CpProof division_proof() {
  return parse_cp_proof("1: 2 2 >= 3 ; hyp 1\n2: 1 1 >= 2 ; div 1 2\n", {LinearInequality({2, 2}, 3)});
}

struct Mutation {
  std::string what;
  CpProof proof;
};

// Every single-field change of a proof: each coefficient and constant by +-1,
// the rounding direction of each inexact division, each divisor by +-1 and
// each reference by +-1 (dangling and forward references included). A swap
// of an addition's premises is not produced since it leaves the sum intact.
inline std::vector<Mutation> single_field_mutations(const CpProof& p) {
  std::vector<Mutation> out;
  auto push = [&](std::string what, auto&& edit) {
    Mutation m{std::move(what), p};
    edit(m.proof);
    out.push_back(std::move(m));
  };
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const std::string at = "line " + std::to_string(i + 1) + ": ";
    for (std::size_t k = 0; k < p.lines[i].ineq.coeffs.size(); ++k)
      for (int delta : {1, -1})
        push(at + "coefficient " + std::to_string(k + 1) + (delta > 0 ? " +1" : " -1"),
             [&](CpProof& q) { q.lines[i].ineq.coeffs[k] += delta; });
    for (int delta : {1, -1})
      push(at + (delta > 0 ? "constant +1" : "constant -1"), [&](CpProof& q) { q.lines[i].ineq.constant += delta; });

    std::visit(
        [&](const auto& j) {
          using T = std::decay_t<decltype(j)>;
          if constexpr (std::is_same_v<T, Hypothesis>) {
            push(at + "hypothesis row +1", [&](CpProof& q) { std::get<Hypothesis>(q.lines[i].why).row += 1; });
            if (j.row > 0)
              push(at + "hypothesis row -1", [&](CpProof& q) { std::get<Hypothesis>(q.lines[i].why).row -= 1; });
          } else if constexpr (std::is_same_v<T, BooleanAxiom>) {
            push(at + "axiom variable +1", [&](CpProof& q) { std::get<BooleanAxiom>(q.lines[i].why).var += 1; });
            push(at + "axiom kind flipped", [&](CpProof& q) {
              auto& b = std::get<BooleanAxiom>(q.lines[i].why);
              b.kind = b.kind == BooleanAxiom::Kind::Lower ? BooleanAxiom::Kind::Upper : BooleanAxiom::Kind::Lower;
            });
          } else if constexpr (std::is_same_v<T, AddRule>) {
            push(at + "first premise +1", [&](CpProof& q) { std::get<AddRule>(q.lines[i].why).first += 1; });
            if (j.first > 0)
              push(at + "first premise -1", [&](CpProof& q) { std::get<AddRule>(q.lines[i].why).first -= 1; });
            push(at + "second premise +1", [&](CpProof& q) { std::get<AddRule>(q.lines[i].why).second += 1; });
            if (j.second > 0)
              push(at + "second premise -1", [&](CpProof& q) { std::get<AddRule>(q.lines[i].why).second -= 1; });
          } else {
            push(at + "divisor +1", [&](CpProof& q) { std::get<DivRule>(q.lines[i].why).divisor += 1; });
            push(at + "divisor -1", [&](CpProof& q) { std::get<DivRule>(q.lines[i].why).divisor -= 1; });
            push(at + "premise +1", [&](CpProof& q) { std::get<DivRule>(q.lines[i].why).premise += 1; });
            const auto& prem = p.lines[j.premise].ineq;
            if (j.premise < i && prem.constant % j.divisor != 0)
              push(at + "rounded down", [&](CpProof& q) {
                auto c = prem.constant;
                q.lines[i].ineq.constant = c >= 0 ? c / j.divisor : -((-c + j.divisor - 1) / j.divisor);
              });
          }
        },
        p.lines[i].why);
  }
  return out;
}

}  // namespace pcw::test
